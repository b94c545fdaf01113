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


#include "partialdir/harness/experiments.hpp"

#include <stdexcept>

namespace partialdir::harness {

namespace {

bool succeeds_at(const MinBandwidthQuery &q, double mbps, const std::shared_ptr<VerifyCache> &cache) {
    auto s = q.base;
    s.protocol = q.protocol;
    s.relays = q.relays;
    s.record_events = false;
    if (s.node_bandwidth_mbps.size() != s.n)
        s.set_uniform_bandwidth(s.node_bandwidth_mbps.empty() ? 250.0 : s.node_bandwidth_mbps.front());
    for (std::uint32_t i = 0; i < q.limited && i < s.n; ++i)
        s.node_bandwidth_mbps[i] = mbps;
    return run_scenario(s, cache).metrics.decided;
}

} // namespace

MinBandwidthResult min_bandwidth(const MinBandwidthQuery &q, std::shared_ptr<VerifyCache> cache) {
    if (q.relays == 0)
        throw std::invalid_argument("min_bandwidth needs at least one relay");
    if (!(q.lo_mbps > 0) || !(q.hi_mbps > q.lo_mbps) || !(q.resolution_mbps > 0))
        throw std::invalid_argument("min_bandwidth needs 0 < lo < hi and a positive resolution");
    MinBandwidthResult r;
    ++r.probes;
    if (!succeeds_at(q, q.hi_mbps, cache)) {
        r.above_max = true;
        return r;
    }
    ++r.probes;
    if (succeeds_at(q, q.lo_mbps, cache)) {
        r.below_min = true;
        r.mbps = q.lo_mbps;
        return r;
    }
    double lo = q.lo_mbps; // fails
    double hi = q.hi_mbps; // succeeds
    while (hi - lo > q.resolution_mbps) {
        const double mid = (lo + hi) / 2;
        ++r.probes;
        if (succeeds_at(q, mid, cache))
            hi = mid;
        else
            lo = mid;
    }
    r.mbps = hi;
    return r;
}

std::vector<SweepRow> sweep(const netsim::Scenario &base, const std::vector<std::uint32_t> &relays,
                            const std::vector<double> &mbps, const std::vector<netsim::Protocol> &protocols,
                            std::shared_ptr<VerifyCache> cache) {
    std::vector<SweepRow> rows;
    for (auto r : relays) {
        for (double bw : mbps) {
            for (auto p : protocols) {
                auto s = base;
                s.relays = r;
                s.protocol = p;
                s.record_events = false;
                s.set_uniform_bandwidth(bw);
                rows.push_back(SweepRow{r, bw, p, run_scenario(s, cache).metrics});
            }
        }
    }
    return rows;
}

netsim::Scenario attack_scenario(netsim::Scenario base, std::uint32_t relays, std::uint32_t targets,
                                 double throttled_mbps, double minutes) {
    base.relays = relays;
    base.attacks.clear();
    for (std::uint32_t i = 0; i < targets && i < base.n; ++i)
        base.attacks.push_back(netsim::AttackWindow{i, 0.0, minutes * 60.0, throttled_mbps});
    return base;
}

AttackDemoResult attack_demo(const netsim::Scenario &attacked, std::shared_ptr<VerifyCache> cache) {
    AttackDemoResult out;
    out.scenario = attacked;
    for (const auto &a : attacked.attacks)
        out.window_end_s = std::max(out.window_end_s, a.end_s);
    auto s = attacked;
    s.record_events = false;
    s.protocol = netsim::Protocol::Legacy;
    out.legacy = run_scenario(s, cache).metrics;
    s.protocol = netsim::Protocol::Icps;
    out.icps = run_scenario(s, cache).metrics;
    if (out.icps.decided)
        out.icps_after_window_s = out.icps.latency_s - out.window_end_s;
    return out;
}

} // namespace partialdir::harness
