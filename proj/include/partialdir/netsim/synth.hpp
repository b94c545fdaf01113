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

#include <vector>

#include "partialdir/core/encoding.hpp"
#include "partialdir/netsim/scenario.hpp"

namespace partialdir::netsim {

/// SplitMix64 step; the generator behind every synthetic value.
std::uint64_t splitmix64(std::uint64_t &state);

struct SynthParams {
    std::uint32_t n = 9;
    std::uint32_t relays = 1000;
    std::uint32_t per_relay_bytes = 500;
    double presence = 0.9;
    std::uint64_t seed = 1;
    std::uint64_t epoch = 1;

    static SynthParams from(const Scenario &s);
    auto operator<=>(const SynthParams &) const = default;
};

/// One canonical vote per authority over a shared relay universe. Each
/// authority lists a relay with probability `presence` and perturbs its
/// flags and bandwidth measurement, so votes overlap heavily but differ.
std::vector<DocumentHandle> synth_documents(const SynthParams &p);

/// Memoised synth_documents; safe to call from one thread at a time.
const std::vector<DocumentHandle> &synth_documents_cached(const SynthParams &p);

/// A second, different vote for the same author (used by equivocators).
DocumentHandle equivocal_twin(const SealedDocument &doc, const EncodingParams &params);

} // namespace partialdir::netsim
