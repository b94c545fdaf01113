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

#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "partialdir/dissemination/types.hpp"

namespace partialdir::dissemination {

/// Documents this node holds, keyed by digest.
class DocumentStore {
  public:
    /// Returns false if a document with the same digest is already held.
    bool add(DocumentHandle doc);
    DocumentHandle find(const Digest &h) const;
    /// Only returns a document whose author is `slot`.
    DocumentHandle find(std::uint32_t slot, const Digest &h) const;
    bool contains(std::uint32_t slot, const Digest &h) const { return find(slot, h) != nullptr; }
    /// The first document stored for `slot`, if any.
    DocumentHandle find_any(std::uint32_t slot) const;
    std::size_t size() const { return docs_.size(); }

  private:
    std::unordered_map<Digest, DocumentHandle> docs_;
    std::map<std::uint32_t, DocumentHandle> first_by_author_;
};

/// received == n, or the document timeout has passed with at least n - f.
bool proposal_gate(std::uint32_t received, double clock_s, std::uint32_t n, std::uint32_t f, double delta_s);

enum class DocumentVerdict { Stored, Duplicate, Equivocation, Invalid };

/// Per-node document exchange and proposal construction. A deterministic
/// state machine; callers deliver events serially.
class Dissemination {
  public:
    Dissemination(Committee committee, KeyRing keys);

    /// Stores the node's own document and returns the DOCUMENT to broadcast.
    DocumentMessage start_epoch(DocumentHandle own);
    DocumentVerdict on_document(const DocumentMessage &msg);

    /// Senders with exactly one valid document. A sender caught equivocating
    /// no longer counts, since its slot can only be proposed as absent.
    std::uint32_t received_count() const;
    bool proposal_gate(double clock_s, double delta_s) const;

    /// Throws std::logic_error when fewer than n - f documents are held.
    Proposal build_proposal(std::uint64_t view);

    const DocumentStore &store() const { return store_; }
    DocumentStore &store() { return store_; }
    const std::vector<EquivocationProof> &evidence() const { return evidence_; }
    std::optional<Digest> digest_from(AuthorityId sender) const;
    const Committee &committee() const { return committee_; }
    const KeyRing &keys() const { return keys_; }

  private:
    struct Receipt {
        Digest h;
        Signature sig;
    };

    const Signature &proposer_sig(std::uint32_t slot, const std::optional<Digest> &h);

    Committee committee_;
    KeyRing keys_;
    DocumentStore store_;
    std::vector<std::vector<Receipt>> receipts_;
    std::vector<EquivocationProof> evidence_;
    std::map<std::pair<std::uint32_t, std::optional<Digest>>, Signature> sig_cache_;
};

/// Leader-side digest-vector assembly. Per slot: f+1 matching present
/// entries give an inclusion; else any equivocation gives bottom with the
/// owner's two signatures; else f+1 absent marks give an exclusion; else
/// the slot is undecided. Ready (non-empty result) only when no slot is
/// undecided and at least n - f entries are digests. Proposals are assumed
/// verified; a repeated proposer is ignored after its first proposal.
std::optional<DigestVector> leader_assemble(std::span<const Proposal> proposals,
                                            std::span<const EquivocationProof> evidence, const Committee &committee,
                                            std::uint64_t view);

/// Verified proposals for one view at the leader.
class ProposalPool {
  public:
    enum class AddResult { Accepted, Duplicate, Invalid, WrongView };

    ProposalPool(Committee committee, KeyRing keys, std::uint64_t view);

    AddResult add(Proposal proposal);
    /// Evidence the leader itself holds; must already be verified.
    void add_evidence(const EquivocationProof &proof);
    std::size_t size() const { return proposals_.size(); }
    std::uint64_t view() const { return view_; }
    std::optional<DigestVector> assemble() const;

  private:
    Committee committee_;
    KeyRing keys_;
    std::uint64_t view_;
    std::vector<Proposal> proposals_;
    std::vector<EquivocationProof> evidence_;
};

} // namespace partialdir::dissemination
