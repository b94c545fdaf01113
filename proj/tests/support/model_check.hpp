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

#include <cstddef>
#include <cstdint>

namespace partialdir::testing {

struct ModelCheckConfig {
    /// Timeouts are only fired while a node is below this view.
    std::uint64_t max_view = 1;
    /// Schedules are the FIFO order of sends plus at most this many
    /// deviations: delivering any message other than the oldest, or firing
    /// a timeout while messages are still in flight.
    std::uint32_t delay_bound = 2;
    /// Exploration stops after this many distinct states.
    std::size_t state_cap = 1000000;
    /// Node 0 (view-0 leader) is Byzantine and may send any of its
    /// conflicting messages to anyone, in any order, or never.
    bool byzantine_leader = true;
};

struct ModelCheckResult {
    std::size_t states = 0;
    std::size_t transitions = 0;
    /// States in which at least one correct node had decided.
    std::size_t decided_states = 0;
    std::size_t violations = 0;
    /// True when every state reachable within the bounds was visited.
    bool exhaustive = false;
};

/// Explores every schedule within the delay bound of the three correct
/// agreement engines of an n = 4, f = 1 committee, for each strategy of the
/// Byzantine view-0 leader, and counts states where two correct nodes
/// decided different vectors.
ModelCheckResult model_check_agreement(const ModelCheckConfig &config = {});

} // namespace partialdir::testing
