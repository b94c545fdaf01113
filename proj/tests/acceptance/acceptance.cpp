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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/model_check.hpp"
#include "../support/oracle_merge.hpp"
#include "../support/random_runs.hpp"
#include "partialdir/aggregation/merge.hpp"
#include "partialdir/harness/cost.hpp"
#include "partialdir/harness/experiments.hpp"

namespace {

using namespace partialdir;

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome cost_reproduction() {
    const auto c = harness::attack_cost(harness::CostModel{}.default_flood_mbps(), 5, 5);
    const auto instance = fmt::format("{:.3f}", c.per_instance);
    const auto month = fmt::format("{:.2f}", c.per_month);
    const bool cents = std::llround(c.per_month * 100) == 5328 && std::llround(c.per_instance * 1000) == 74;
    return {instance == "0.074" && month == "53.28" && cents,
            fmt::format("per_instance ${} per_month ${}", instance, month)};
}

Outcome attack_reproduction() {
    const auto s = harness::attack_scenario(netsim::Scenario{}, 8000, 5, 0.5, 5);
    const auto r = harness::attack_demo(s);
    const bool ok = !r.legacy.decided && r.icps.decided && r.icps_after_window_s && *r.icps_after_window_s <= 60.0;
    return {ok, fmt::format("legacy decided={} icps decided={} at {:.3f} s ({:+.3f} s after window close, view {})",
                            r.legacy.decided, r.icps.decided, r.icps.latency_s, r.icps_after_window_s.value_or(-1),
                            r.icps.decided_view)};
}

struct RandomRuns {
    std::size_t runs = 0;
    std::size_t disagreements = 0;
    std::size_t undersized = 0;
    std::size_t gst0_runs = 0;
    std::size_t own_missing = 0;
    std::size_t not_live = 0;
    std::string first_problem;
};

RandomRuns random_runs(std::size_t count) {
    RandomRuns out;
    std::mt19937_64 rng(20260101);
    for (std::size_t k = 0; k < count; ++k) {
        auto s = testing::random_scenario(rng);
        const auto r = harness::run_scenario(s, std::make_shared<VerifyCache>());
        const auto c = testing::check_run(s, r);
        ++out.runs;
        out.gst0_runs += s.gst_s == 0 ? 1 : 0;
        out.disagreements += (c.vectors_agree && c.bodies_agree) ? 0 : 1;
        out.undersized += c.vector_size_ok ? 0 : 1;
        out.own_missing += c.own_included ? 0 : 1;
        out.not_live += c.live ? 0 : 1;
        if (!c.ok() && out.first_problem.empty())
            out.first_problem = fmt::format("run {} seed {}: {}", k, s.seed, c.problems.front());
    }
    return out;
}

Outcome aggregation_oracle() {
    std::mt19937_64 rng(4242);
    std::size_t mismatches = 0;
    constexpr std::size_t kInstances = 1000;
    for (std::size_t k = 0; k < kInstances; ++k) {
        const auto n = 1 + static_cast<std::uint32_t>(rng() % 9);
        const auto pool = 1 + static_cast<std::uint32_t>(rng() % 50);
        std::vector<StatusDocument> docs;
        for (std::uint32_t j = 0; j < n; ++j)
            docs.push_back(testing::random_document(rng, j, pool));
        std::vector<const StatusDocument *> slots;
        for (std::uint32_t j = 0; j < n; ++j)
            slots.push_back(rng() % 5 == 0 ? nullptr : &docs[j]);
        const auto t = aggregation::inclusion_threshold(n);
        const auto got = aggregation::aggregate(slots, t, 1);
        const auto want = testing::oracle_merge(slots, t, 1);
        if (encode_consensus_body(got) != encode_consensus_body(want))
            ++mismatches;
    }
    return {mismatches == 0, fmt::format("{} instances, {} mismatches", kInstances, mismatches)};
}

Outcome round_accounting() {
    netsim::Scenario s;
    s.record_events = false;
    const auto m = harness::run_scenario(s).metrics;
    const bool ok = m.decided && m.decided_view == 0 && m.dissemination_rounds == 2 && m.agreement_rounds == 3 &&
                    m.aggregation_rounds <= 2 && m.fetch_rounds == 0;
    return {ok, fmt::format("dissemination {} agreement {} aggregation {} (fetch {}, signature {})",
                            m.dissemination_rounds, m.agreement_rounds, m.aggregation_rounds, m.fetch_rounds,
                            m.signature_rounds)};
}

Outcome complexity_trend() {
    auto bytes_for = [](std::uint32_t n, std::uint32_t f) {
        netsim::Scenario s;
        s.n = n;
        s.f = f;
        s.relays = 2000;
        s.legacy_quorum = n / 2 + 1;
        s.set_uniform_bandwidth(250);
        s.record_events = false;
        return harness::run_scenario(s).metrics.bytes_sent_total;
    };
    const auto b4 = bytes_for(4, 1);
    const auto b8 = bytes_for(8, 2);
    const double ratio = static_cast<double>(b8) / static_cast<double>(b4);

    std::vector<double> thresholds;
    bool monotone = true;
    std::string list;
    for (std::uint32_t relays : {1000u, 2000u, 4000u, 8000u}) {
        harness::MinBandwidthQuery q;
        q.relays = relays;
        q.protocol = netsim::Protocol::Legacy;
        q.lo_mbps = 0.01;
        q.hi_mbps = 250;
        q.resolution_mbps = 0.02;
        const auto r = harness::min_bandwidth(q);
        const double v = r.mbps && !r.below_min ? *r.mbps : std::nan("");
        if (!thresholds.empty() && !(v > thresholds.back()))
            monotone = false;
        if (std::isnan(v))
            monotone = false;
        thresholds.push_back(v);
        list += fmt::format("{}{}:{:.2f}", list.empty() ? "" : " ", relays, v);
    }
    const bool ok = ratio >= 3.5 && ratio <= 5.0 && monotone;
    return {ok, fmt::format("bytes n=8/n=4 = {:.3f}; legacy min Mbit/s by relays {}", ratio, list)};
}

int report(int number, const std::string &title, const Outcome &o, double seconds) {
    fmt::print("{} criterion {}: {} -- {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", number, title, o.detail, seconds);
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

template <class F> int timed(int number, const std::string &title, F &&fn) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = fn();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report(number, title, o, s);
}

} // namespace

int main(int argc, char **argv) {
    std::size_t runs = 1000;
    if (argc > 1)
        runs = std::stoul(argv[1]);

    int failures = 0;
    failures += timed(1, "attack cost", cost_reproduction);
    failures += timed(2, "attack reproduction", attack_reproduction);

    const auto t0 = std::chrono::steady_clock::now();
    const auto rr = random_runs(runs);
    testing::ModelCheckConfig mcc;
    mcc.delay_bound = 3;
    const auto mc = testing::model_check_agreement(mcc);
    const double rs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto tail = rr.first_problem.empty() ? std::string{} : "; first: " + rr.first_problem;

    failures += report(3, "safety",
                       {rr.disagreements == 0 && mc.violations == 0 && mc.exhaustive && mc.decided_states > 0,
                        fmt::format("{} runs, {} disagreements; model check n=4 f=1 delay bound {}: {} states, {} violations, {}{}",
                                    rr.runs, rr.disagreements, mcc.delay_bound, mc.states, mc.violations,
                                    mc.exhaustive ? "exhaustive" : "state cap hit", tail)},
                       rs);
    failures += report(4, "validity",
                       {rr.undersized == 0 && rr.own_missing == 0,
                        fmt::format("{} undersized decisions; {} of {} GST=0 runs missing a correct document",
                                    rr.undersized, rr.own_missing, rr.gst0_runs)},
                       0);
    failures += report(5, "liveness after GST",
                       {rr.not_live == 0, fmt::format("{} of {} runs left a correct node unfinalized", rr.not_live,
                                                      rr.runs)},
                       0);
    failures += timed(6, "aggregation oracle equivalence", aggregation_oracle);
    failures += timed(7, "round accounting", round_accounting);
    failures += timed(8, "complexity trend", complexity_trend);
    fmt::print("{} of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
