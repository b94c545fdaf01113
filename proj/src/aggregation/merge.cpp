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

#include "partialdir/aggregation/merge.hpp"

#include <algorithm>
#include <stdexcept>

namespace partialdir::aggregation {

std::uint32_t inclusion_threshold(std::uint32_t n) { return n / 2 + 1; }

RelayDescriptor merge_relay(std::span<const RelayDescriptor *const> votes) {
    if (votes.empty())
        throw std::invalid_argument("merge_relay needs at least one vote");
    RelayDescriptor out;
    out.fingerprint = votes.front()->fingerprint;
    out.nickname = votes.back()->nickname;

    const auto total = votes.size();
    for (auto flag : kAllRelayFlags) {
        std::size_t set = 0;
        for (const auto *v : votes)
            set += v->flags.has(flag) ? 1 : 0;
        out.flags.set(flag, 2 * set > total);
    }

    std::vector<std::uint64_t> measured;
    for (const auto *v : votes) {
        out.version = std::max(out.version, v->version);
        out.protocols = std::max(out.protocols, v->protocols);
        out.exit_policy_summary = std::max(out.exit_policy_summary, v->exit_policy_summary);
        if (v->measured && v->bandwidth)
            measured.push_back(*v->bandwidth);
    }
    if (!measured.empty()) {
        const auto mid = measured.begin() + static_cast<std::ptrdiff_t>((measured.size() - 1) / 2);
        std::nth_element(measured.begin(), mid, measured.end());
        out.bandwidth = *mid;
        out.measured = true;
    }
    return out;
}

ConsensusDocument aggregate(std::span<const StatusDocument *const> slots, std::uint32_t threshold,
                            std::uint64_t epoch) {
    for (const auto *doc : slots)
        if (doc && !doc->is_canonical())
            throw std::invalid_argument("aggregate needs canonical votes");

    ConsensusDocument out;
    out.epoch = epoch;
    std::vector<std::size_t> pos(slots.size(), 0);
    std::vector<const RelayDescriptor *> votes;
    votes.reserve(slots.size());
    for (;;) {
        const Bytes *next = nullptr;
        for (std::size_t j = 0; j < slots.size(); ++j) {
            if (!slots[j] || pos[j] == slots[j]->relays.size())
                continue;
            const auto &fp = slots[j]->relays[pos[j]].fingerprint;
            if (!next || fp < *next)
                next = &fp;
        }
        if (!next)
            break;
        const Bytes fp = *next;
        votes.clear();
        for (std::size_t j = 0; j < slots.size(); ++j) {
            if (slots[j] && pos[j] < slots[j]->relays.size() && slots[j]->relays[pos[j]].fingerprint == fp)
                votes.push_back(&slots[j]->relays[pos[j]++]);
        }
        if (votes.size() >= threshold)
            out.relays.push_back(merge_relay(votes));
    }
    return out;
}

} // namespace partialdir::aggregation
