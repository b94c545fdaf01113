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
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "partialdir/core/bytes.hpp"
#include "partialdir/core/types.hpp"

namespace partialdir {

/// Domain-separation tags. Every signature binds one of these and the epoch.
enum class SigContext : std::uint8_t {
    Doc = 1,
    ProposalSlot = 2,
    AbsentSlot = 3,
    AgreeVote = 4,
    NewView = 5,
    Consensus = 6,
};

inline constexpr std::array kAllSigContexts = {
    SigContext::Doc,       SigContext::ProposalSlot, SigContext::AbsentSlot,
    SigContext::AgreeVote, SigContext::NewView,      SigContext::Consensus,
};

const char *context_name(SigContext ctx);

class KeyError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct SecretKey {
    Bytes bytes;
};

struct PublicKey {
    Bytes bytes;
    bool operator==(const PublicKey &) const = default;
};

struct KeyPair {
    SecretKey secret;
    PublicKey public_key;
};

/// The message actually passed to the scheme: tag, epoch, then payload.
Bytes signing_message(SigContext ctx, std::uint64_t epoch, ByteView payload);

class SignatureScheme {
  public:
    virtual ~SignatureScheme() = default;

    virtual std::string_view name() const = 0;
    virtual KeyPair derive_keypair(ByteView seed) const = 0;
    /// Throws KeyError on malformed key material.
    virtual Bytes sign_raw(const SecretKey &key, ByteView message) const = 0;
    /// Throws KeyError on malformed key material; a bad signature is false.
    virtual bool verify_raw(const PublicKey &key, ByteView message, ByteView sig) const = 0;
};

/// Ed25519 via libsodium. Used wherever forgery must actually be infeasible.
class Ed25519Scheme final : public SignatureScheme {
  public:
    std::string_view name() const override { return "ed25519"; }
    KeyPair derive_keypair(ByteView seed) const override;
    Bytes sign_raw(const SecretKey &key, ByteView message) const override;
    bool verify_raw(const PublicKey &key, ByteView message, ByteView sig) const override;
};

/// HMAC-SHA256 test double: the "public" key equals the secret, so anyone
/// holding the key ring can forge. Only for fast tests with honest nodes.
class MacScheme final : public SignatureScheme {
  public:
    std::string_view name() const override { return "hmac-sha256"; }
    KeyPair derive_keypair(ByteView seed) const override;
    Bytes sign_raw(const SecretKey &key, ByteView message) const override;
    bool verify_raw(const PublicKey &key, ByteView message, ByteView sig) const override;
};

enum class SchemeKind { Ed25519, Mac };

std::shared_ptr<const SignatureScheme> make_scheme(SchemeKind kind);

Signature sign(const SignatureScheme &scheme, const SecretKey &key, AuthorityId signer, SigContext ctx,
               std::uint64_t epoch, ByteView payload);
bool verify(const SignatureScheme &scheme, const PublicKey &key, SigContext ctx, std::uint64_t epoch,
            ByteView payload, const Signature &sig);

/// Memo of verification outcomes keyed by (signer key, message, signature).
/// Not thread-safe; share it only among the nodes of one simulation run.
class VerifyCache {
  public:
    std::optional<bool> lookup(const std::string &key) const;
    void store(std::string key, bool ok);
    std::size_t hits() const { return hits_; }
    std::size_t size() const { return entries_.size(); }

  private:
    std::unordered_map<std::string, bool> entries_;
    mutable std::size_t hits_ = 0;
};

/// Public keys of the whole committee plus, optionally, this node's secret.
class KeyRing {
  public:
    KeyRing(std::shared_ptr<const SignatureScheme> scheme, std::vector<PublicKey> publics);

    KeyRing with_secret(AuthorityId self, SecretKey secret) const;
    KeyRing with_cache(std::shared_ptr<VerifyCache> cache) const;

    std::uint32_t size() const { return static_cast<std::uint32_t>(publics_.size()); }
    bool can_sign() const { return secret_.has_value(); }
    AuthorityId self() const { return self_; }
    const SignatureScheme &scheme() const { return *scheme_; }
    const PublicKey &public_key(AuthorityId id) const { return publics_.at(id.index); }

    /// Throws std::logic_error when no secret is held.
    Signature sign(SigContext ctx, std::uint64_t epoch, ByteView payload) const;
    /// False for unknown signers as well as bad signatures.
    bool verify(SigContext ctx, std::uint64_t epoch, ByteView payload, const Signature &sig) const;

  private:
    std::shared_ptr<const SignatureScheme> scheme_;
    std::vector<PublicKey> publics_;
    std::optional<SecretKey> secret_;
    AuthorityId self_;
    std::shared_ptr<VerifyCache> cache_;
};

/// Deterministic key material for an n-member committee.
std::vector<KeyPair> derive_committee_keys(const SignatureScheme &scheme, std::uint32_t n, std::uint64_t seed);

/// Convenience: one key ring per member (each holding its own secret),
/// optionally sharing a verification cache.
std::vector<KeyRing> make_committee(std::shared_ptr<const SignatureScheme> scheme, std::uint32_t n,
                                    std::uint64_t seed, std::shared_ptr<VerifyCache> cache = nullptr);

} // namespace partialdir
