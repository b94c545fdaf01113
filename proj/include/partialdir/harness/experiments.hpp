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
#include <vector>

#include "partialdir/harness/runner.hpp"

namespace partialdir::harness {

struct MinBandwidthQuery {
    netsim::Scenario base;
    std::uint32_t relays = 1000;
    netsim::Protocol protocol = netsim::Protocol::Legacy;
    /// Nodes 0..limited-1 get the probed bandwidth; the rest keep theirs.
    std::uint32_t limited = 5;
    double lo_mbps = 0.25;
    double hi_mbps = 250;
    double resolution_mbps = 0.25;
};

struct MinBandwidthResult {
    /// Smallest probed bandwidth that succeeded, within the resolution.
    std::optional<double> mbps;
    bool below_min = false;
    bool above_max = false;
    std::uint32_t probes = 0;
};

/// Binary search for the least bandwidth of the limited nodes at which the
/// protocol decides. Assumes success is monotone in bandwidth.
MinBandwidthResult min_bandwidth(const MinBandwidthQuery &q, std::shared_ptr<VerifyCache> cache = nullptr);

struct SweepRow {
    std::uint32_t relays = 0;
    double mbps = 0;
    netsim::Protocol protocol = netsim::Protocol::Icps;
    netsim::Metrics metrics;
};

/// Every (relays, bandwidth, protocol) combination with all nodes at the
/// given bandwidth, in grid order.
std::vector<SweepRow> sweep(const netsim::Scenario &base, const std::vector<std::uint32_t> &relays,
                            const std::vector<double> &mbps, const std::vector<netsim::Protocol> &protocols,
                            std::shared_ptr<VerifyCache> cache = nullptr);

struct AttackDemoResult {
    netsim::Scenario scenario;
    netsim::Metrics legacy;
    netsim::Metrics icps;
    double window_end_s = 0;
    /// icps latency minus the window end, when icps decided.
    std::optional<double> icps_after_window_s;
};

/// The attacked scenario: nodes 0..targets-1 at `throttled_mbps` over
/// [0, minutes), everything else from `base`.
netsim::Scenario attack_scenario(netsim::Scenario base, std::uint32_t relays = 8000, std::uint32_t targets = 5,
                                 double throttled_mbps = 0.5, double minutes = 5);

AttackDemoResult attack_demo(const netsim::Scenario &attacked, std::shared_ptr<VerifyCache> cache = nullptr);

} // namespace partialdir::harness
