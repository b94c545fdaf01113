/**
 * Copyright 2026 The partialdir Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "partialdir/core/bytes.hpp"

namespace partialdir {

/// Index of a directory authority in [0, n). Ordered by index.
struct AuthorityId {
    std::uint32_t index = 0;

    auto operator<=>(const AuthorityId &) const = default;
};

std::string to_string(AuthorityId id);

/// Relay flags a vote can assert. Stored as a bit mask.
enum class RelayFlag : std::uint32_t {
    Authority = 1u << 0,
    BadExit = 1u << 1,
    Exit = 1u << 2,
    Fast = 1u << 3,
    Guard = 1u << 4,
    HSDir = 1u << 5,
    MiddleOnly = 1u << 6,
    NoEdConsensus = 1u << 7,
    Running = 1u << 8,
    Stable = 1u << 9,
    StaleDesc = 1u << 10,
    Sybil = 1u << 11,
    V2Dir = 1u << 12,
    Valid = 1u << 13,
};

inline constexpr std::array kAllRelayFlags = {
    RelayFlag::Authority, RelayFlag::BadExit,    RelayFlag::Exit,          RelayFlag::Fast,
    RelayFlag::Guard,     RelayFlag::HSDir,      RelayFlag::MiddleOnly,    RelayFlag::NoEdConsensus,
    RelayFlag::Running,   RelayFlag::Stable,     RelayFlag::StaleDesc,     RelayFlag::Sybil,
    RelayFlag::V2Dir,     RelayFlag::Valid,
};

const char *flag_name(RelayFlag flag);

class RelayFlags {
  public:
    constexpr RelayFlags() = default;
    constexpr explicit RelayFlags(std::uint32_t mask) : mask_(mask) {}

    constexpr bool has(RelayFlag f) const { return (mask_ & static_cast<std::uint32_t>(f)) != 0; }
    constexpr void set(RelayFlag f, bool on = true) {
        if (on)
            mask_ |= static_cast<std::uint32_t>(f);
        else
            mask_ &= ~static_cast<std::uint32_t>(f);
    }
    constexpr std::uint32_t mask() const { return mask_; }

    auto operator<=>(const RelayFlags &) const = default;

  private:
    std::uint32_t mask_ = 0;
};

/// Relay software version, compared component-wise.
struct Version {
    std::uint16_t major = 0;
    std::uint16_t minor = 0;
    std::uint16_t micro = 0;
    std::uint16_t patch = 0;

    auto operator<=>(const Version &) const = default;
};

std::string to_string(const Version &v);

struct RelayDescriptor {
    Bytes fingerprint;
    std::string nickname;
    RelayFlags flags;
    Version version;
    std::uint32_t protocols = 0;
    std::string exit_policy_summary;
    std::optional<std::uint64_t> bandwidth; // Kbit/s
    bool measured = false;

    bool operator==(const RelayDescriptor &) const = default;
};

/// One authority's vote.
struct StatusDocument {
    AuthorityId author;
    std::vector<RelayDescriptor> relays;
    std::uint64_t epoch = 0;

    bool operator==(const StatusDocument &) const = default;

    /// Sorted by fingerprint, no duplicates, no empty fingerprints.
    bool is_canonical() const;
    /// Sorts relays by fingerprint. Throws std::invalid_argument on a
    /// duplicate or empty fingerprint.
    void canonicalize();
};

inline constexpr std::size_t kDigestBytes = 32;

struct Digest {
    std::array<std::uint8_t, kDigestBytes> bytes{};

    auto operator<=>(const Digest &) const = default;

    ByteView view() const { return {bytes.data(), bytes.size()}; }
    std::string hex() const { return to_hex(view()); }
    std::string short_hex() const { return hex().substr(0, 10); }
};

struct Signature {
    AuthorityId signer;
    Bytes bytes;

    bool operator==(const Signature &) const = default;
};

/// The merged output document. `signatures` cover the canonical encoding
/// of (epoch, relays) only.
struct ConsensusDocument {
    std::uint64_t epoch = 0;
    std::vector<RelayDescriptor> relays;
    std::vector<Signature> signatures;

    bool operator==(const ConsensusDocument &) const = default;
};

/// Committee parameters shared by every protocol module.
struct Committee {
    std::uint32_t n = 0;
    std::uint32_t f = 0;
    std::uint64_t epoch = 0;

    /// Vote and signature quorum. Equal to 2f+1 when n = 3f+1; for larger n,
    /// 2f+1 members no longer guarantee that two quorums share a correct one.
    std::uint32_t quorum() const { return n - f; }
    std::uint32_t ready_threshold() const { return n - f; }
    std::uint32_t proof_size() const { return f + 1; }
};

} // namespace partialdir

template <> struct std::hash<partialdir::AuthorityId> {
    std::size_t operator()(partialdir::AuthorityId id) const noexcept { return std::hash<std::uint32_t>{}(id.index); }
};

template <> struct std::hash<partialdir::Digest> {
    std::size_t operator()(const partialdir::Digest &d) const noexcept {
        std::size_t h = 0;
        for (int i = 0; i < 8; ++i)
            h = (h << 8) | d.bytes[i];
        return h;
    }
};
