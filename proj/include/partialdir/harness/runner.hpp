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

#include <memory>

#include "partialdir/netsim/simulator.hpp"

namespace partialdir::harness {

/// Runs one scenario with the protocol it names and fills the outcome
/// fields of the metrics (decided, latency, decision view).
///
/// icps: decided when every correct node finalized; latency is the time
/// the last one did. legacy: decided when at least `legacy_quorum` nodes
/// ended round 4 with a quorum of matching signatures; latency is the sum
/// over rounds of the time from round start to the last in-round delivery,
/// or the rerun delay plus four full rounds on failure.
netsim::RunResult run_scenario(const netsim::Scenario &s, std::shared_ptr<VerifyCache> cache = nullptr);

/// Sum of per-round network time for a legacy run.
double legacy_round_latency(const std::vector<netsim::MessageRecord> &records, double round_s,
                            std::uint32_t rounds);

} // namespace partialdir::harness
