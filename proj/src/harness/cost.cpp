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


#include "partialdir/harness/cost.hpp"

#include <stdexcept>

namespace partialdir::harness {

void validate(const CostModel &model) {
    if (model.unit_cost_dollars_per_mbps_hour < 0 || model.authority_link_mbps < 0 || model.required_mbps < 0)
        throw std::invalid_argument("cost model fields must be non-negative");
}

AttackCost attack_cost(double flood_mbps_per_target, std::uint32_t targets, double minutes, const CostModel &model) {
    validate(model);
    if (flood_mbps_per_target < 0 || minutes < 0)
        throw std::invalid_argument("flood and duration must be non-negative");
    AttackCost c;
    c.per_instance = flood_mbps_per_target * targets * (minutes / 60.0) * model.unit_cost_dollars_per_mbps_hour;
    c.per_month = c.per_instance * model.instances_per_month;
    return c;
}

} // namespace partialdir::harness
