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

#include "partialdir/netsim/trace.hpp"

#include <algorithm>
#include <json.hpp>

namespace partialdir::netsim {

void account_messages(const std::vector<MessageRecord> &records, Metrics &m) {
    m.per_class = {};
    m.bytes_sent_total = 0;
    m.messages_total = records.size();
    std::uint32_t fetch_depth = 0;
    std::uint32_t sig_depth = 0;
    for (const auto &r : records) {
        auto &c = m.per_class[static_cast<std::size_t>(wire::class_of(r.tag))];
        ++c.messages;
        c.bytes += r.bytes;
        c.max_depth = std::max(c.max_depth, r.depth);
        m.bytes_sent_total += r.bytes;
        if (r.tag == wire::Tag::FetchRequest || r.tag == wire::Tag::FetchResponse)
            fetch_depth = std::max(fetch_depth, r.depth);
        if (r.tag == wire::Tag::ConsensusSig || r.tag == wire::Tag::SigFetchRequest)
            sig_depth = std::max(sig_depth, r.depth);
    }
    auto above = [](std::uint32_t x, std::uint32_t base) { return x > base ? x - base : 0u; };
    const auto d = m.per_class[0].max_depth;
    const auto a = std::max(m.per_class[1].max_depth, d);
    const auto g = m.per_class[2].max_depth;
    m.dissemination_rounds = d;
    m.agreement_rounds = above(m.per_class[1].max_depth, d);
    m.aggregation_rounds = above(g, a);
    m.fetch_rounds = above(fetch_depth, a);
    m.signature_rounds = above(sig_depth, std::max(a, fetch_depth));
}

std::string metrics_json(const Metrics &m) {
    nlohmann::ordered_json j;
    j["decided"] = m.decided;
    j["latency_s"] = m.latency_s;
    j["decide_s"] = m.decide_s;
    j["decided_view"] = m.decided_view;
    j["rounds"] = {{"dissemination", m.dissemination_rounds},
                   {"agreement", m.agreement_rounds},
                   {"aggregation", m.aggregation_rounds},
                   {"fetch", m.fetch_rounds},
                   {"signature", m.signature_rounds}};
    j["bytes_sent_total"] = m.bytes_sent_total;
    j["messages_total"] = m.messages_total;
    auto &per = j["bytes_per_msg_class"];
    for (std::size_t k = 0; k < m.per_class.size(); ++k)
        per[wire::class_name(static_cast<wire::MsgClass>(k))] = m.per_class[k].bytes;
    j["dropped_invalid"] = m.dropped_invalid;
    j["end_s"] = m.end_s;
    j["horizon_reached"] = m.horizon_reached;
    return j.dump();
}

std::string render_trace(const RunResult &r) {
    std::string out;
    for (const auto &e : r.trace.events) {
        out += e;
        out += '\n';
    }
    out += "summary ";
    out += metrics_json(r.metrics);
    out += '\n';
    return out;
}

} // namespace partialdir::netsim
