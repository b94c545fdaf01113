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

#include "partialdir/aggregation/fetch.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace partialdir::aggregation {

std::vector<MissingDoc> missing(const DigestVector &decided, const DocumentStore &store) {
    std::vector<MissingDoc> out;
    for (std::uint32_t j = 0; j < decided.entries.size(); ++j) {
        const auto &e = decided.entries[j];
        if (e && !store.contains(j, *e))
            out.push_back(MissingDoc{j, *e});
    }
    return out;
}

FetchResponse answer_fetch(const FetchRequest &req, const DocumentStore &store) {
    if (req.h)
        return FetchResponse{req.slot, store.find(req.slot, *req.h)};
    return FetchResponse{req.slot, store.find_any(req.slot)};
}

std::vector<DocumentHandle> slot_vector(const DigestVector &decided, const DocumentStore &store) {
    std::vector<DocumentHandle> out(decided.entries.size());
    for (std::uint32_t j = 0; j < decided.entries.size(); ++j) {
        const auto &e = decided.entries[j];
        if (!e)
            continue;
        out[j] = store.find(j, *e);
        if (!out[j])
            throw std::logic_error(fmt::format("document for slot {} not held", j));
    }
    return out;
}

FetchRound::FetchRound(AuthorityId self, const DigestVector &decided, const DocumentStore &store) : self_(self) {
    const auto n = static_cast<std::uint32_t>(decided.entries.size());
    for (const auto &m : missing(decided, store)) {
        Pending p;
        p.h = m.h;
        auto push = [&](AuthorityId id) {
            if (id != self_ && id.index < n && std::find(p.order.begin(), p.order.end(), id) == p.order.end())
                p.order.push_back(id);
        };
        push(AuthorityId{m.slot});
        if (m.slot < decided.proofs.size())
            if (const auto *inc = std::get_if<dissemination::InclusionProof>(&decided.proofs[m.slot]))
                for (const auto &s : inc->sigs)
                    push(s.signer);
        for (std::uint32_t i = 0; i < n; ++i)
            push(AuthorityId{i});
        outstanding_.emplace(m.slot, std::move(p));
    }
}

std::optional<FetchRound::Request> FetchRound::advance(std::uint32_t slot) {
    auto &p = outstanding_.at(slot);
    if (p.next == p.order.size())
        throw FetchExhausted(fmt::format("no peer supplied the document for slot {}", slot));
    p.current = p.order[p.next++];
    ++p.attempt;
    ++sent_;
    return Request{p.current, FetchRequest{slot, p.h}, p.attempt};
}

std::vector<FetchRound::Request> FetchRound::start() {
    std::vector<Request> out;
    for (auto &[slot, p] : outstanding_)
        if (p.attempt == 0)
            out.push_back(*advance(slot));
    return out;
}

std::vector<FetchRound::Request> FetchRound::on_response(AuthorityId from, const FetchResponse &resp,
                                                         DocumentStore &store) {
    auto it = outstanding_.find(resp.slot);
    if (it == outstanding_.end())
        return {};
    auto &p = it->second;
    if (resp.doc && resp.doc->digest() == p.h && resp.doc->author().index == resp.slot) {
        store.add(resp.doc);
        outstanding_.erase(it);
        return {};
    }
    if (resp.doc)
        faulty_.insert(from);
    // A late bad answer from an earlier peer does not cancel the current try.
    if (from != p.current)
        return {};
    return {*advance(resp.slot)};
}

std::vector<FetchRound::Request> FetchRound::on_timeout(std::uint32_t slot, std::uint32_t attempt) {
    auto it = outstanding_.find(slot);
    if (it == outstanding_.end() || it->second.attempt != attempt)
        return {};
    return {*advance(slot)};
}

} // namespace partialdir::aggregation
