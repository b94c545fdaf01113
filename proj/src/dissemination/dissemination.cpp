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

#include "partialdir/dissemination/dissemination.hpp"

#include <algorithm>
#include <stdexcept>

namespace partialdir::dissemination {

bool DocumentStore::add(DocumentHandle doc) {
    if (!doc)
        throw std::invalid_argument("null document");
    const auto h = doc->digest();
    first_by_author_.emplace(doc->author().index, doc);
    return docs_.emplace(h, std::move(doc)).second;
}

DocumentHandle DocumentStore::find_any(std::uint32_t slot) const {
    auto it = first_by_author_.find(slot);
    return it == first_by_author_.end() ? nullptr : it->second;
}

DocumentHandle DocumentStore::find(const Digest &h) const {
    auto it = docs_.find(h);
    return it == docs_.end() ? nullptr : it->second;
}

DocumentHandle DocumentStore::find(std::uint32_t slot, const Digest &h) const {
    auto doc = find(h);
    if (doc && doc->author().index == slot)
        return doc;
    return nullptr;
}

bool proposal_gate(std::uint32_t received, double clock_s, std::uint32_t n, std::uint32_t f, double delta_s) {
    return received == n || (clock_s >= delta_s && received >= n - f);
}

Dissemination::Dissemination(Committee committee, KeyRing keys)
    : committee_(committee), keys_(std::move(keys)), receipts_(committee.n) {
    if (committee_.n == 0 || 3 * committee_.f >= committee_.n)
        throw std::invalid_argument("committee needs n > 3f");
}

DocumentMessage Dissemination::start_epoch(DocumentHandle own) {
    if (!own || own->author() != keys_.self())
        throw std::invalid_argument("own document must be authored by this node");
    if (own->doc().epoch != committee_.epoch)
        throw std::invalid_argument("own document is for a different epoch");
    DocumentMessage msg{own, own->digest(),
                        keys_.sign(SigContext::Doc, committee_.epoch, slot_payload(own->author().index, own->digest()))};
    on_document(msg);
    return msg;
}

DocumentVerdict Dissemination::on_document(const DocumentMessage &msg) {
    if (!verify_document_message(msg, committee_, keys_))
        return DocumentVerdict::Invalid;
    const auto sender = msg.doc->author().index;
    auto &seen = receipts_[sender];
    for (const auto &r : seen)
        if (r.h == msg.h)
            return DocumentVerdict::Duplicate;
    store_.add(msg.doc);
    seen.push_back(Receipt{msg.h, msg.sig});
    if (seen.size() == 2) {
        evidence_.push_back(make_equivocation(AuthorityId{sender}, seen[0].h, seen[0].sig, seen[1].h, seen[1].sig));
        return DocumentVerdict::Equivocation;
    }
    return seen.size() > 2 ? DocumentVerdict::Equivocation : DocumentVerdict::Stored;
}

std::uint32_t Dissemination::received_count() const {
    return static_cast<std::uint32_t>(
        std::count_if(receipts_.begin(), receipts_.end(), [](const auto &r) { return r.size() == 1; }));
}

bool Dissemination::proposal_gate(double clock_s, double delta_s) const {
    return dissemination::proposal_gate(received_count(), clock_s, committee_.n, committee_.f, delta_s);
}

std::optional<Digest> Dissemination::digest_from(AuthorityId sender) const {
    const auto &r = receipts_.at(sender.index);
    if (r.size() != 1)
        return std::nullopt;
    return r.front().h;
}

const Signature &Dissemination::proposer_sig(std::uint32_t slot, const std::optional<Digest> &h) {
    auto key = std::make_pair(slot, h);
    auto it = sig_cache_.find(key);
    if (it == sig_cache_.end()) {
        auto sig = h ? keys_.sign(SigContext::ProposalSlot, committee_.epoch, slot_payload(slot, *h))
                     : keys_.sign(SigContext::AbsentSlot, committee_.epoch, absent_payload(slot));
        it = sig_cache_.emplace(key, std::move(sig)).first;
    }
    return it->second;
}

Proposal Dissemination::build_proposal(std::uint64_t view) {
    if (received_count() < committee_.ready_threshold())
        throw std::logic_error("proposal gate not satisfied: fewer than n - f documents");
    Proposal p;
    p.proposer = keys_.self();
    p.view = view;
    p.slots.reserve(committee_.n);
    for (std::uint32_t j = 0; j < committee_.n; ++j) {
        const auto &r = receipts_[j];
        if (r.size() == 1)
            p.slots.emplace_back(PresentSlot{r.front().h, r.front().sig, proposer_sig(j, r.front().h)});
        else
            p.slots.emplace_back(AbsentSlot{proposer_sig(j, std::nullopt)});
    }
    p.evidence = evidence_;
    return p;
}

} // namespace partialdir::dissemination
