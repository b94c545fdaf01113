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


#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "partialdir/harness/cli.hpp"
#include "partialdir/harness/cost.hpp"
#include "partialdir/harness/experiments.hpp"
#include "partialdir/harness/runner.hpp"

namespace partialdir::harness {
namespace {

using netsim::Protocol;

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "partialdir");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string scenario_path(const std::string &name) { return std::string(PARTIALDIR_SCENARIO_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path &p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

TEST(AttackCost, Examples) {
    const auto c = attack_cost(240, 5, 5);
    EXPECT_NEAR(c.per_instance, 0.074, 5e-4);
    EXPECT_NEAR(c.per_month, 53.28, 5e-3);
    EXPECT_DOUBLE_EQ(CostModel{}.default_flood_mbps(), 240);
    for (double flood : {0.0, 1.0, 240.0, 1e4})
        for (double minutes : {0.0, 5.0, 600.0}) {
            const auto z = attack_cost(flood, 0, minutes);
            EXPECT_EQ(z.per_instance, 0.0);
            EXPECT_EQ(z.per_month, 0.0);
        }
}

TEST(AttackCost, LinearInEveryInput) {
    const auto base = attack_cost(100, 2, 10);
    EXPECT_NEAR(attack_cost(200, 2, 10).per_instance, 2 * base.per_instance, 1e-12);
    EXPECT_NEAR(attack_cost(100, 4, 10).per_instance, 2 * base.per_instance, 1e-12);
    EXPECT_NEAR(attack_cost(100, 2, 20).per_instance, 2 * base.per_instance, 1e-12);
    CostModel m;
    m.instances_per_month = 1;
    EXPECT_DOUBLE_EQ(attack_cost(100, 2, 10, m).per_month, base.per_instance);
}

TEST(AttackCost, RejectsNegativeInputs) {
    EXPECT_THROW(attack_cost(-1, 1, 1), std::invalid_argument);
    EXPECT_THROW(attack_cost(1, 1, -1), std::invalid_argument);
    CostModel m;
    m.unit_cost_dollars_per_mbps_hour = -0.1;
    EXPECT_THROW(attack_cost(1, 1, 1, m), std::invalid_argument);
}

TEST(Cli, CostPrintsPaperFigures) {
    const auto r = cli({"cost", "--flood", "240", "--targets", "5", "--minutes", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.074"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("53.28"), std::string::npos) << r.out;
}

TEST(Cli, RunIsDeterministic) {
    const auto dir = std::filesystem::temp_directory_path() / "partialdir_cli_test";
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.trace";
    const auto b = dir / "b.trace";
    const auto happy = scenario_path("happy.scenario");
    ASSERT_EQ(cli({"run", happy, "--seed", "1", "--out", a.string()}).code, 0);
    ASSERT_EQ(cli({"run", happy, "--seed", "1", "--out", b.string()}).code, 0);
    const auto ta = slurp(a);
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, slurp(b));
    EXPECT_NE(ta.find("\"decided\":true"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Cli, InvalidInputExitsNonzeroNamingTheField) {
    const auto happy = scenario_path("happy.scenario");
    auto r = cli({"run", happy, "--set", "delta_s=-3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("delta_s"), std::string::npos) << r.err;
    r = cli({"run", happy, "--set", "byzantine=1:sleepy"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("byzantine"), std::string::npos) << r.err;
    r = cli({"run", scenario_path("does-not-exist.scenario")});
    EXPECT_NE(r.code, 0);
    r = cli({"cost", "--minutes", "-1"});
    EXPECT_NE(r.code, 0);
    r = cli({"frobnicate"});
    EXPECT_NE(r.code, 0);
}

TEST(Cli, AttackDemoReportsBothProtocols) {
    const auto r = cli({"attack-demo", "--relays", "2000", "--throttle", "0.2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("legacy {\"decided\":false"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("icps {\"decided\":true"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("after the attack window closed"), std::string::npos) << r.out;
}

TEST(Runner, LegacyRoundLatency) {
    auto rec = [](double send, double deliver, bool delivered = true) {
        netsim::MessageRecord m;
        m.send_ms = send;
        m.delivery_ms = deliver;
        m.delivered = delivered;
        return m;
    };
    const std::vector<netsim::MessageRecord> records{
        rec(0, 1000),
        rec(100, 2500),
        rec(149000, 151000),    // lands in the next round: ignored
        rec(150500, 151000),    // round 2, 1 s in
        rec(300000, 300000),    // round 3, instant
        rec(460000, 470000, false),
        rec(700000, 700500),    // after the last round
    };
    EXPECT_DOUBLE_EQ(legacy_round_latency(records, 150, 4), 3.5);
    EXPECT_DOUBLE_EQ(legacy_round_latency({}, 150, 4), 0.0);
}

TEST(Runner, IcpsAtOneThousandRelaysSurvivesHalfAMegabit) {
    netsim::Scenario s;
    s.relays = 1000;
    s.set_uniform_bandwidth(0.5);
    s.record_events = false;
    EXPECT_TRUE(run_scenario(s).metrics.decided);
}

// Absolute thresholds depend on the topology; past the desk-scale
// legacy threshold at a uniform 0.5 Mbit/s, only icps finishes.
TEST(Runner, LegacyFailsWhereIcpsSucceedsAtEqualBandwidth) {
    netsim::Scenario base;
    base.record_events = false;
    const auto rows = sweep(base, {6000, 8000}, {0.5}, {Protocol::Icps, Protocol::Legacy});
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        ASSERT_EQ(rows[i].protocol, Protocol::Icps);
        EXPECT_TRUE(rows[i].metrics.decided) << rows[i].relays << " relays";
        EXPECT_FALSE(rows[i + 1].metrics.decided) << rows[i].relays << " relays";
        EXPECT_GT(rows[i].metrics.latency_s, 150.0) << "documents alone take minutes at this bandwidth";
    }
}

// Legacy success is monotone over a relays x bandwidth grid: never lost by
// adding bandwidth, never gained by adding relays.
TEST(Sweep, LegacyMonotone) {
    netsim::Scenario base;
    base.record_events = false;
    const std::vector<std::uint32_t> relays{250, 500, 1000, 2000, 4000};
    const std::vector<double> mbps{0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
    const auto rows = sweep(base, relays, mbps, {Protocol::Legacy});
    ASSERT_EQ(rows.size(), relays.size() * mbps.size());
    auto ok = [&](std::size_t r, std::size_t b) { return rows[r * mbps.size() + b].metrics.decided; };
    std::size_t successes = 0;
    for (std::size_t r = 0; r < relays.size(); ++r) {
        for (std::size_t b = 0; b < mbps.size(); ++b) {
            successes += ok(r, b);
            if (b > 0 && ok(r, b - 1)) {
                EXPECT_TRUE(ok(r, b)) << relays[r] << " relays, " << mbps[b] << " Mbit/s";
            }
            if (r > 0 && !ok(r - 1, b)) {
                EXPECT_FALSE(ok(r, b)) << relays[r] << " relays, " << mbps[b] << " Mbit/s";
            }
        }
    }
    EXPECT_GT(successes, 0u);
    EXPECT_LT(successes, rows.size());
}

TEST(MinBandwidth, LegacyGrowsWithRelays) {
    MinBandwidthQuery q;
    q.lo_mbps = 0.01;
    q.hi_mbps = 10;
    q.resolution_mbps = 0.02;
    std::optional<double> prev;
    for (std::uint32_t relays : {500u, 1000u, 2000u}) {
        q.relays = relays;
        const auto r = min_bandwidth(q);
        ASSERT_TRUE(r.mbps) << relays;
        EXPECT_FALSE(r.below_min);
        EXPECT_FALSE(r.above_max);
        if (prev) {
            EXPECT_GT(*r.mbps, *prev) << relays;
        }
        prev = r.mbps;
    }
}

TEST(MinBandwidth, DeterministicAndBoundsReported) {
    MinBandwidthQuery q;
    q.relays = 500;
    q.lo_mbps = 0.01;
    q.hi_mbps = 10;
    q.resolution_mbps = 0.05;
    const auto a = min_bandwidth(q);
    const auto b = min_bandwidth(q);
    EXPECT_EQ(a.mbps, b.mbps);
    EXPECT_EQ(a.probes, b.probes);

    q.lo_mbps = 50;
    q.hi_mbps = 250;
    const auto easy = min_bandwidth(q);
    EXPECT_TRUE(easy.below_min);
    EXPECT_EQ(easy.mbps, 50.0);

    q.lo_mbps = 0.001;
    q.hi_mbps = 0.002;
    const auto hard = min_bandwidth(q);
    EXPECT_TRUE(hard.above_max);
    EXPECT_FALSE(hard.mbps);

    q.relays = 0;
    EXPECT_THROW(min_bandwidth(q), std::invalid_argument);
}

} // namespace
} // namespace partialdir::harness
