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


#include "partialdir/harness/runner.hpp"

#include <algorithm>

#include "partialdir/icps/directory_node.hpp"
#include "partialdir/legacy/legacy_node.hpp"

namespace partialdir::harness {

double legacy_round_latency(const std::vector<netsim::MessageRecord> &records, double round_s,
                            std::uint32_t rounds) {
    const double round_ms = round_s * 1000.0;
    std::vector<double> busy(rounds, 0.0);
    for (const auto &r : records) {
        if (!r.delivered)
            continue;
        const auto k = static_cast<std::uint32_t>(r.send_ms / round_ms);
        if (k >= rounds || r.delivery_ms >= (k + 1) * round_ms)
            continue;
        busy[k] = std::max(busy[k], r.delivery_ms - k * round_ms);
    }
    double total = 0;
    for (double b : busy)
        total += b;
    return total / 1000.0;
}

namespace {

void fill_icps(const netsim::Scenario &s, netsim::RunResult &r) {
    auto &m = r.metrics;
    bool all = true;
    double last_finalize = 0;
    double last_decide = 0;
    std::uint64_t view = 0;
    for (std::uint32_t i = 0; i < s.n; ++i) {
        const auto &o = r.nodes[i];
        if (o.byzantine)
            continue;
        if (!o.finalize_ms) {
            all = false;
            continue;
        }
        last_finalize = std::max(last_finalize, *o.finalize_ms);
        if (o.decide_ms)
            last_decide = std::max(last_decide, *o.decide_ms);
        if (o.decided_view)
            view = std::max(view, *o.decided_view);
    }
    m.decided = all;
    m.latency_s = all ? last_finalize / 1000.0 : m.end_s;
    m.decide_s = last_decide / 1000.0;
    m.decided_view = view;
}

void fill_legacy(const netsim::Scenario &s, netsim::RunResult &r) {
    auto &m = r.metrics;
    std::uint32_t ok = 0;
    for (const auto &o : r.nodes)
        if (!o.byzantine && o.finalize_ms)
            ++ok;
    m.decided = ok >= s.legacy_quorum;
    m.latency_s = m.decided
                      ? legacy_round_latency(r.trace.messages, s.legacy_round_s, legacy::LegacyConfig::kRounds)
                      : s.legacy_rerun_delay_s + legacy::LegacyConfig::kRounds * s.legacy_round_s;
    m.decide_s = m.decided ? legacy::LegacyConfig::kRounds * s.legacy_round_s : 0;
}

} // namespace

netsim::RunResult run_scenario(const netsim::Scenario &s, std::shared_ptr<VerifyCache> cache) {
    netsim::validate(s);
    if (s.protocol == netsim::Protocol::Legacy) {
        netsim::Simulator sim(s, legacy::make_legacy_nodes(s, std::move(cache)));
        auto r = sim.run();
        fill_legacy(s, r);
        return r;
    }
    netsim::Simulator sim(s, icps::make_icps_nodes(s, std::move(cache)));
    auto r = sim.run();
    fill_icps(s, r);
    return r;
}

} // namespace partialdir::harness
