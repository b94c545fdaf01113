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

#include "partialdir/netsim/synth.hpp"

#include <fmt/format.h>
#include <map>

namespace partialdir::netsim {

std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

double unit(std::uint64_t &state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t s = a ^ (b * 0x9e3779b97f4a7c15ull) ^ (c * 0xc2b2ae3d27d4eb4full);
    return splitmix64(s);
}

constexpr const char *kPolicies[] = {"reject 1-65535", "accept 80,443", "accept 20-23,43,53,79-81,88,110,143,443",
                                     "accept 1-65535", "reject 25,119,135-139,445,563"};

RelayDescriptor base_relay(std::uint64_t seed, std::uint32_t r) {
    std::uint64_t st = mix(seed, 0x72656c6179ull, r);
    RelayDescriptor d;
    d.fingerprint.resize(20);
    for (std::size_t k = 0; k < d.fingerprint.size(); k += 8) {
        const auto v = splitmix64(st);
        for (std::size_t b = 0; b < 8 && k + b < d.fingerprint.size(); ++b)
            d.fingerprint[k + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    d.nickname = fmt::format("relay{}", r);
    std::uint32_t mask = 0;
    for (auto flag : kAllRelayFlags)
        if (unit(st) < 0.5)
            mask |= static_cast<std::uint32_t>(flag);
    d.flags = RelayFlags(mask | static_cast<std::uint32_t>(RelayFlag::Running) |
                         static_cast<std::uint32_t>(RelayFlag::Valid));
    d.version = Version{0, 4, static_cast<std::uint16_t>(7 + splitmix64(st) % 3),
                        static_cast<std::uint16_t>(splitmix64(st) % 12)};
    d.protocols = static_cast<std::uint32_t>(splitmix64(st) % 64);
    d.exit_policy_summary = kPolicies[splitmix64(st) % std::size(kPolicies)];
    d.bandwidth = 100 + splitmix64(st) % 50000;
    return d;
}

} // namespace

SynthParams SynthParams::from(const Scenario &s) {
    return SynthParams{s.n, s.relays, s.per_relay_bytes, s.relay_presence, s.seed, s.epoch};
}

std::vector<DocumentHandle> synth_documents(const SynthParams &p) {
    std::vector<RelayDescriptor> universe;
    universe.reserve(p.relays);
    for (std::uint32_t r = 0; r < p.relays; ++r)
        universe.push_back(base_relay(p.seed, r));

    EncodingParams enc{p.per_relay_bytes};
    std::vector<DocumentHandle> out;
    for (std::uint32_t i = 0; i < p.n; ++i) {
        StatusDocument doc;
        doc.author = AuthorityId{i};
        doc.epoch = p.epoch;
        doc.relays.reserve(p.relays);
        for (std::uint32_t r = 0; r < p.relays; ++r) {
            std::uint64_t st = mix(p.seed, i + 1, r);
            if (unit(st) >= p.presence)
                continue;
            auto d = universe[r];
            for (auto flag : {RelayFlag::Fast, RelayFlag::Guard, RelayFlag::Stable, RelayFlag::HSDir})
                if (unit(st) < 0.1)
                    d.flags.set(flag, !d.flags.has(flag));
            if (unit(st) < 0.5) {
                d.measured = true;
                d.bandwidth = *d.bandwidth * (80 + splitmix64(st) % 41) / 100;
            }
            if (unit(st) < 0.05)
                d.version.patch = static_cast<std::uint16_t>(d.version.patch + 1);
            doc.relays.push_back(std::move(d));
        }
        doc.canonicalize();
        out.push_back(SealedDocument::seal(std::move(doc), enc));
    }
    return out;
}

const std::vector<DocumentHandle> &synth_documents_cached(const SynthParams &p) {
    static std::map<SynthParams, std::vector<DocumentHandle>> cache;
    auto it = cache.find(p);
    if (it == cache.end()) {
        if (cache.size() > 64)
            cache.clear();
        it = cache.emplace(p, synth_documents(p)).first;
    }
    return it->second;
}

DocumentHandle equivocal_twin(const SealedDocument &doc, const EncodingParams &params) {
    StatusDocument twin = doc.doc();
    if (twin.relays.empty()) {
        RelayDescriptor extra;
        extra.fingerprint = Bytes(20, 0xee);
        extra.nickname = "twin";
        twin.relays.push_back(std::move(extra));
    } else {
        auto &r = twin.relays.front();
        r.flags.set(RelayFlag::BadExit, !r.flags.has(RelayFlag::BadExit));
    }
    return SealedDocument::seal(std::move(twin), params);
}

} // namespace partialdir::netsim
