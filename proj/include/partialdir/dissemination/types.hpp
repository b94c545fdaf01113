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

#include "partialdir/core/crypto.hpp"
#include "partialdir/core/encoding.hpp"
#include "partialdir/core/types.hpp"

namespace partialdir::dissemination {

/// DOCUMENT: the author's vote, its digest, and the author's signature over
/// (DOC, epoch, author || digest).
struct DocumentMessage {
    DocumentHandle doc;
    Digest h;
    Signature sig;
};

struct PresentSlot {
    Digest h;
    Signature sender_sig;   // slot owner, DOC context
    Signature proposer_sig; // proposer, PROPOSAL-SLOT context

    bool operator==(const PresentSlot &) const = default;
};

struct AbsentSlot {
    Signature proposer_sig; // proposer, ABSENT-SLOT context

    bool operator==(const AbsentSlot &) const = default;
};

using ProposalSlot = std::variant<AbsentSlot, PresentSlot>;

/// Two distinct digests both signed by the slot owner. h1 < h2.
struct EquivocationProof {
    AuthorityId owner;
    Digest h1;
    Signature sig1;
    Digest h2;
    Signature sig2;

    bool operator==(const EquivocationProof &) const = default;
};

struct Proposal {
    AuthorityId proposer;
    std::uint64_t view = 0;
    std::vector<ProposalSlot> slots;
    /// Equivocations the proposer observed directly, forwarded to the leader.
    std::vector<EquivocationProof> evidence;

    bool operator==(const Proposal &) const = default;
    std::size_t present_count() const;
};

/// f+1 distinct PROPOSAL-SLOT signatures over (j, h).
struct InclusionProof {
    std::vector<Signature> sigs;
    bool operator==(const InclusionProof &) const = default;
};

/// f+1 distinct ABSENT-SLOT signatures over j.
struct ExclusionProof {
    std::vector<Signature> sigs;
    bool operator==(const ExclusionProof &) const = default;
};

using SlotProof = std::variant<InclusionProof, EquivocationProof, ExclusionProof>;

/// The proof-carrying digest vector (H, pi) handed to agreement.
struct DigestVector {
    std::vector<std::optional<Digest>> entries;
    std::vector<SlotProof> proofs;
    std::uint64_t view = 0;

    bool operator==(const DigestVector &) const = default;
    std::size_t present_count() const;
};

Bytes slot_payload(std::uint32_t slot, const Digest &h);
Bytes absent_payload(std::uint32_t slot);

/// Checks the author signature and that h matches the document contents.
bool verify_document_message(const DocumentMessage &msg, const Committee &committee, const KeyRing &keys);
bool verify_equivocation(const EquivocationProof &proof, const Committee &committee, const KeyRing &keys);
/// Slot count, signer identities, every slot signature, attached evidence,
/// and the n - f present-slot floor.
bool verify_proposal(const Proposal &proposal, const Committee &committee, const KeyRing &keys);
/// External validity of (H, pi).
bool verify_vector(const DigestVector &vector, const Committee &committee, const KeyRing &keys);

/// Identity of a vector for voting: hash over the entries only, so that two
/// proof sets for the same entries do not split votes.
Digest vector_digest(const DigestVector &vector);

void write_vector(ByteWriter &w, const DigestVector &vector);
DigestVector read_vector(ByteReader &r);
void write_equivocation(ByteWriter &w, const EquivocationProof &proof);
EquivocationProof read_equivocation(ByteReader &r);
void write_digest(ByteWriter &w, const Digest &d);
Digest read_digest(ByteReader &r);

/// Builds an equivocation proof with the digests in canonical order.
EquivocationProof make_equivocation(AuthorityId owner, const Digest &a, const Signature &sig_a, const Digest &b,
                                    const Signature &sig_b);

} // namespace partialdir::dissemination
