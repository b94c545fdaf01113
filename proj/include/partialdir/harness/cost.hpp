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

#include <cstdint>

namespace partialdir::harness {

struct CostModel {
    double unit_cost_dollars_per_mbps_hour = 0.00074;
    double authority_link_mbps = 250;
    double required_mbps = 10;
    std::uint32_t instances_per_month = 720;

    /// Flood needed to squeeze one authority below the required bandwidth.
    double default_flood_mbps() const { return authority_link_mbps - required_mbps; }
};

struct AttackCost {
    double per_instance = 0;
    double per_month = 0;
};

/// Throws std::invalid_argument on negative inputs.
void validate(const CostModel &model);
AttackCost attack_cost(double flood_mbps_per_target, std::uint32_t targets, double minutes,
                       const CostModel &model = {});

} // namespace partialdir::harness
