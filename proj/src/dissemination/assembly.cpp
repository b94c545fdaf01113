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

#include <algorithm>
#include <map>
#include <set>

#include "partialdir/dissemination/dissemination.hpp"

namespace partialdir::dissemination {

namespace {

struct SlotTally {
    // digest -> (proposer sig, owner sig) in proposer order
    std::map<Digest, std::vector<std::pair<Signature, Signature>>> present;
    std::vector<Signature> absent;
};

} // namespace

std::optional<DigestVector> leader_assemble(std::span<const Proposal> proposals,
                                            std::span<const EquivocationProof> evidence, const Committee &committee,
                                            std::uint64_t view) {
    const auto n = committee.n;
    const auto need = committee.proof_size();

    std::vector<const Proposal *> ordered;
    std::set<AuthorityId> proposers;
    for (const auto &p : proposals)
        if (p.slots.size() == n && proposers.insert(p.proposer).second)
            ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(), [](auto *a, auto *b) { return a->proposer < b->proposer; });

    std::vector<SlotTally> tally(n);
    std::vector<std::optional<EquivocationProof>> equivocation(n);
    auto note = [&](const EquivocationProof &e) {
        if (e.owner.index < n && !equivocation[e.owner.index])
            equivocation[e.owner.index] = e;
    };
    for (const auto &e : evidence)
        note(e);
    for (const auto *p : ordered) {
        for (const auto &e : p->evidence)
            note(e);
        for (std::uint32_t j = 0; j < n; ++j) {
            if (const auto *s = std::get_if<PresentSlot>(&p->slots[j]))
                tally[j].present[s->h].emplace_back(s->proposer_sig, s->sender_sig);
            else
                tally[j].absent.push_back(std::get<AbsentSlot>(p->slots[j]).proposer_sig);
        }
    }

    DigestVector out;
    out.view = view;
    for (std::uint32_t j = 0; j < n; ++j) {
        const auto &t = tally[j];
        const std::vector<std::pair<Signature, Signature>> *best = nullptr;
        const Digest *best_h = nullptr;
        for (const auto &[h, sigs] : t.present) {
            if (sigs.size() >= need && (!best || sigs.size() > best->size())) {
                best = &sigs;
                best_h = &h;
            }
        }
        if (best) {
            InclusionProof inc;
            for (std::size_t k = 0; k < need; ++k)
                inc.sigs.push_back((*best)[k].first);
            out.entries.emplace_back(*best_h);
            out.proofs.emplace_back(std::move(inc));
            continue;
        }
        if (!equivocation[j] && t.present.size() >= 2) {
            auto first = t.present.begin();
            auto second = std::next(first);
            equivocation[j] = make_equivocation(AuthorityId{j}, first->first, first->second.front().second,
                                                second->first, second->second.front().second);
        }
        if (equivocation[j]) {
            out.entries.emplace_back(std::nullopt);
            out.proofs.emplace_back(*equivocation[j]);
            continue;
        }
        if (t.absent.size() >= need) {
            ExclusionProof ex;
            ex.sigs.assign(t.absent.begin(), t.absent.begin() + static_cast<std::ptrdiff_t>(need));
            out.entries.emplace_back(std::nullopt);
            out.proofs.emplace_back(std::move(ex));
            continue;
        }
        return std::nullopt;
    }
    if (out.present_count() < committee.ready_threshold())
        return std::nullopt;
    return out;
}

ProposalPool::ProposalPool(Committee committee, KeyRing keys, std::uint64_t view)
    : committee_(committee), keys_(std::move(keys)), view_(view) {}

ProposalPool::AddResult ProposalPool::add(Proposal proposal) {
    if (proposal.view != view_)
        return AddResult::WrongView;
    for (const auto &p : proposals_)
        if (p.proposer == proposal.proposer)
            return AddResult::Duplicate;
    if (!verify_proposal(proposal, committee_, keys_))
        return AddResult::Invalid;
    proposals_.push_back(std::move(proposal));
    return AddResult::Accepted;
}

void ProposalPool::add_evidence(const EquivocationProof &proof) {
    for (const auto &e : evidence_)
        if (e.owner == proof.owner)
            return;
    evidence_.push_back(proof);
}

std::optional<DigestVector> ProposalPool::assemble() const {
    return leader_assemble(proposals_, evidence_, committee_, view_);
}

} // namespace partialdir::dissemination
