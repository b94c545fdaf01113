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

#include <optional>
#include <variant>
#include <vector>

#include "partialdir/dissemination/types.hpp"

namespace partialdir::agreement {

using dissemination::DigestVector;

enum class VotePhase : std::uint8_t { Prepare = 1, Commit = 2 };

/// A quorum (n - f) of distinct prepare-vote signatures over (view, h).
struct PrepareQC {
    std::uint64_t view = 0;
    Digest h;
    std::vector<Signature> sigs;

    bool operator==(const PrepareQC &) const = default;
};

/// A lock travels with the vector it certifies so a new leader can re-propose it.
struct LockedValue {
    PrepareQC qc;
    DigestVector value;

    bool operator==(const LockedValue &) const = default;
};

struct Propose {
    std::uint64_t view = 0;
    DigestVector value;
    std::optional<PrepareQC> justify;

    bool operator==(const Propose &) const = default;
};

struct Vote {
    VotePhase phase = VotePhase::Prepare;
    std::uint64_t view = 0;
    Digest h;
    Signature sig;

    bool operator==(const Vote &) const = default;
};

struct NewView {
    std::uint64_t view = 0;
    std::optional<LockedValue> locked;
    Signature sig;

    bool operator==(const NewView &) const = default;
};

using AgreementMessage = std::variant<Propose, Vote, NewView>;

std::uint64_t message_view(const AgreementMessage &msg);

AuthorityId leader_of(std::uint64_t view, std::uint32_t n);

Bytes vote_payload(VotePhase phase, std::uint64_t view, const Digest &h);
Bytes newview_payload(std::uint64_t view, const std::optional<LockedValue> &locked);

Vote make_vote(const KeyRing &keys, const Committee &committee, VotePhase phase, std::uint64_t view, const Digest &h);
NewView make_newview(const KeyRing &keys, const Committee &committee, std::uint64_t view,
                     std::optional<LockedValue> locked);

bool verify_vote(const Vote &vote, const Committee &committee, const KeyRing &keys);
bool verify_qc(const PrepareQC &qc, const Committee &committee, const KeyRing &keys);
/// The QC must certify exactly the entries of `value`, and `value` must be
/// externally valid.
bool verify_locked(const LockedValue &locked, const Committee &committee, const KeyRing &keys);
bool verify_newview(const NewView &nv, AuthorityId sender, const Committee &committee, const KeyRing &keys);

/// Sender is the view's leader, the vector is externally valid, and the
/// justify QC (if any) verifies and names this vector.
bool validate_proposal(const Propose &msg, AuthorityId sender, const Committee &committee, const KeyRing &keys);

void write_qc(ByteWriter &w, const PrepareQC &qc);
PrepareQC read_qc(ByteReader &r);
void write_propose(ByteWriter &w, const Propose &p);
Propose read_propose(ByteReader &r, std::uint64_t view);
void write_vote(ByteWriter &w, const Vote &v);
Vote read_vote(ByteReader &r, VotePhase phase, std::uint64_t view);
void write_newview(ByteWriter &w, const NewView &nv);
NewView read_newview(ByteReader &r, std::uint64_t view);

} // namespace partialdir::agreement
