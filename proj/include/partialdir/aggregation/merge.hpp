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

#include <span>
#include <vector>

#include "partialdir/core/encoding.hpp"
#include "partialdir/core/types.hpp"

namespace partialdir::aggregation {

/// Strict majority of the configured committee: floor(n/2) + 1.
std::uint32_t inclusion_threshold(std::uint32_t n);

/// Merges per-slot votes into one consensus document. `slots[j]` is the
/// vote of authority j or null for a bottom slot; each vote must be
/// canonical. A relay is kept when at least `threshold` votes list it, and
/// its properties are decided among those votes only:
///   nickname     from the vote with the largest authority index
///   each flag    set iff strictly more votes set it than leave it unset
///   version      maximum
///   protocols    maximum
///   exit policy  lexicographic maximum
///   bandwidth    lower median of measured values, absent if none measured
ConsensusDocument aggregate(std::span<const StatusDocument *const> slots, std::uint32_t threshold,
                            std::uint64_t epoch);

/// Merges the votes listing one relay, ordered by ascending authority.
RelayDescriptor merge_relay(std::span<const RelayDescriptor *const> votes);

} // namespace partialdir::aggregation
