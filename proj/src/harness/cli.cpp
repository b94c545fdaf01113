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


#include "partialdir/harness/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "partialdir/harness/cost.hpp"
#include "partialdir/harness/experiments.hpp"

namespace partialdir::harness {

namespace {

constexpr int kInvalidInput = 2;

struct BaseOptions {
    std::string scenario_path;
    std::vector<std::string> settings;
    std::optional<std::uint64_t> seed;
};

void add_base_options(CLI::App *cmd, BaseOptions &o, bool scenario_positional) {
    if (scenario_positional)
        cmd->add_option("scenario", o.scenario_path, "scenario file")->required();
    else
        cmd->add_option("--scenario", o.scenario_path, "base scenario file");
    cmd->add_option("--set", o.settings, "override one field, key=value (repeatable)");
    cmd->add_option("--seed", o.seed, "override the scenario seed");
}

netsim::Scenario base_scenario(const BaseOptions &o) {
    netsim::Scenario s = o.scenario_path.empty() ? netsim::Scenario{} : netsim::load_scenario(o.scenario_path);
    for (const auto &kv : o.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw netsim::ScenarioError(kv, "override must look like key=value");
        auto trim = [](std::string x) {
            const auto b = x.find_first_not_of(" \t");
            const auto e = x.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : x.substr(b, e - b + 1);
        };
        netsim::apply_setting(s, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (o.seed)
        s.seed = *o.seed;
    netsim::validate(s);
    return s;
}

std::vector<netsim::Protocol> parse_protocols(const std::string &name) {
    if (name == "icps")
        return {netsim::Protocol::Icps};
    if (name == "legacy")
        return {netsim::Protocol::Legacy};
    if (name == "both")
        return {netsim::Protocol::Legacy, netsim::Protocol::Icps};
    throw netsim::ScenarioError("protocol", fmt::format("unknown protocol '{}'", name));
}

std::string metrics_table(const netsim::Metrics &m) {
    std::string t;
    t += fmt::format("{:<20}{}\n", "decided", m.decided ? "true" : "false");
    t += fmt::format("{:<20}{:.3f}\n", "latency_s", m.latency_s);
    t += fmt::format("{:<20}{}\n", "decided_view", m.decided_view);
    t += fmt::format("{:<20}{} / {} / {} (fetch {}, signature {})\n", "rounds d/a/g", m.dissemination_rounds,
                     m.agreement_rounds, m.aggregation_rounds, m.fetch_rounds, m.signature_rounds);
    t += fmt::format("{:<20}{}\n", "messages_total", m.messages_total);
    t += fmt::format("{:<20}{}\n", "bytes_sent_total", m.bytes_sent_total);
    for (std::size_t k = 0; k < m.per_class.size(); ++k)
        t += fmt::format("{:<20}{}\n", fmt::format("bytes {}", wire::class_name(static_cast<wire::MsgClass>(k))),
                         m.per_class[k].bytes);
    t += fmt::format("{:<20}{}\n", "dropped_invalid", m.dropped_invalid);
    t += fmt::format("{:<20}{:.3f}{}\n", "end_s", m.end_s, m.horizon_reached ? " (horizon)" : "");
    return t;
}

std::string fmt_mbps(const MinBandwidthResult &r) {
    if (r.above_max)
        return "above-max";
    if (r.below_min)
        return fmt::format("<={:.2f}", *r.mbps);
    return fmt::format("{:.2f}", *r.mbps);
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Directory protocol simulator: interactive consistency and the legacy baseline"};
    app.name("partialdir");
    app.require_subcommand(1);

    BaseOptions run_base;
    std::string run_out;
    bool run_summary_only = false;
    auto *run = app.add_subcommand("run", "run one scenario and emit its trace and metrics");
    add_base_options(run, run_base, true);
    run->add_option("--out", run_out, "write the trace to this file instead of stdout");
    run->add_flag("--summary-only", run_summary_only, "emit only the summary record");

    BaseOptions sweep_base;
    std::vector<std::uint32_t> sweep_relays{1000, 2000, 4000, 8000};
    std::vector<double> sweep_mbps{50, 20, 10, 1, 0.5};
    std::string sweep_protocol = "both";
    bool sweep_json = false;
    auto *sw = app.add_subcommand("sweep", "grid over relays x bandwidth");
    add_base_options(sw, sweep_base, false);
    sw->add_option("--relays", sweep_relays, "relay counts")->delimiter(',');
    sw->add_option("--bandwidth", sweep_mbps, "bandwidths in Mbit/s")->delimiter(',');
    sw->add_option("--protocol", sweep_protocol, "icps, legacy or both");
    sw->add_flag("--json", sweep_json, "one JSON record per row instead of a table");

    BaseOptions demo_base;
    std::uint32_t demo_relays = 8000;
    std::uint32_t demo_targets = 5;
    double demo_mbps = 0.5;
    double demo_minutes = 5;
    auto *demo = app.add_subcommand("attack-demo", "throttle a majority of authorities, run both protocols");
    add_base_options(demo, demo_base, false);
    demo->add_option("--relays", demo_relays, "relay count");
    demo->add_option("--targets", demo_targets, "number of throttled authorities");
    demo->add_option("--throttle", demo_mbps, "bandwidth under attack, Mbit/s");
    demo->add_option("--minutes", demo_minutes, "attack duration");

    CostModel model;
    std::optional<double> cost_flood;
    std::uint32_t cost_targets = 5;
    double cost_minutes = 5;
    auto *cost = app.add_subcommand("cost", "price of a bandwidth attack");
    cost->add_option("--flood", cost_flood, "flood per target, Mbit/s (default link - required)");
    cost->add_option("--targets", cost_targets, "authorities attacked");
    cost->add_option("--minutes", cost_minutes, "attack duration per instance");
    cost->add_option("--unit-cost", model.unit_cost_dollars_per_mbps_hour, "dollars per Mbit/s-hour");
    cost->add_option("--link", model.authority_link_mbps, "authority link, Mbit/s");
    cost->add_option("--required", model.required_mbps, "bandwidth the protocol needs, Mbit/s");
    cost->add_option("--instances", model.instances_per_month, "protocol instances per month");

    BaseOptions minbw_base;
    std::vector<std::uint32_t> minbw_relays{1000, 2000, 4000, 8000};
    std::string minbw_protocol = "legacy";
    MinBandwidthQuery minbw_q;
    auto *minbw = app.add_subcommand("min-bandwidth", "least bandwidth of the limited authorities that succeeds");
    add_base_options(minbw, minbw_base, false);
    minbw->add_option("--relays", minbw_relays, "relay counts")->delimiter(',');
    minbw->add_option("--protocol", minbw_protocol, "icps, legacy or both");
    minbw->add_option("--limited", minbw_q.limited, "authorities with limited bandwidth");
    minbw->add_option("--lo", minbw_q.lo_mbps, "lower search bound, Mbit/s");
    minbw->add_option("--hi", minbw_q.hi_mbps, "upper search bound, Mbit/s");
    minbw->add_option("--resolution", minbw_q.resolution_mbps, "search resolution, Mbit/s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) {
            const auto s = base_scenario(run_base);
            const auto r = run_scenario(s);
            const std::string text =
                run_summary_only ? "summary " + netsim::metrics_json(r.metrics) + "\n" : netsim::render_trace(r);
            if (run_out.empty()) {
                out << text;
            } else {
                std::ofstream f(run_out, std::ios::binary);
                if (!f)
                    throw std::runtime_error(fmt::format("cannot write {}", run_out));
                f << text;
                out << metrics_table(r.metrics);
            }
        } else if (*sw) {
            const auto rows = sweep(base_scenario(sweep_base), sweep_relays, sweep_mbps, parse_protocols(sweep_protocol));
            if (!sweep_json)
                out << fmt::format("{:<8}{:>8}{:>10}{:>9}{:>12}{:>14}\n", "proto", "relays", "mbps", "decided",
                                   "latency_s", "bytes");
            for (const auto &row : rows) {
                if (sweep_json) {
                    nlohmann::ordered_json j;
                    j["protocol"] = netsim::protocol_name(row.protocol);
                    j["relays"] = row.relays;
                    j["mbps"] = row.mbps;
                    j["metrics"] = nlohmann::ordered_json::parse(netsim::metrics_json(row.metrics));
                    out << j.dump() << '\n';
                } else {
                    out << fmt::format("{:<8}{:>8}{:>10.2f}{:>9}{:>12.3f}{:>14}\n", netsim::protocol_name(row.protocol),
                                       row.relays, row.mbps, row.metrics.decided ? "yes" : "no", row.metrics.latency_s,
                                       row.metrics.bytes_sent_total);
                }
            }
        } else if (*demo) {
            const auto s = attack_scenario(base_scenario(demo_base), demo_relays, demo_targets, demo_mbps, demo_minutes);
            const auto r = attack_demo(s);
            out << fmt::format("attack: {} of {} authorities at {} Mbit/s for [0, {:.0f}) s, {} relays\n", demo_targets,
                               s.n, demo_mbps, r.window_end_s, demo_relays);
            out << fmt::format("{:<8}{:>9}{:>12}{:>10}\n", "proto", "decided", "latency_s", "view");
            out << fmt::format("{:<8}{:>9}{:>12.3f}{:>10}\n", "legacy", r.legacy.decided ? "yes" : "no",
                               r.legacy.latency_s, "-");
            out << fmt::format("{:<8}{:>9}{:>12.3f}{:>10}\n", "icps", r.icps.decided ? "yes" : "no", r.icps.latency_s,
                               r.icps.decided_view);
            if (r.icps_after_window_s)
                out << fmt::format("icps decided {:.3f} s after the attack window closed\n", *r.icps_after_window_s);
            out << "legacy " << netsim::metrics_json(r.legacy) << '\n';
            out << "icps " << netsim::metrics_json(r.icps) << '\n';
        } else if (*cost) {
            const auto c = attack_cost(cost_flood.value_or(model.default_flood_mbps()), cost_targets, cost_minutes, model);
            out << fmt::format("per_instance ${:.3f}\n", c.per_instance);
            out << fmt::format("per_month ${:.2f}\n", c.per_month);
        } else if (*minbw) {
            out << fmt::format("{:<8}{:>8}{:>12}{:>8}\n", "proto", "relays", "min_mbps", "probes");
            for (auto p : parse_protocols(minbw_protocol)) {
                for (auto relays : minbw_relays) {
                    auto q = minbw_q;
                    q.base = base_scenario(minbw_base);
                    q.protocol = p;
                    q.relays = relays;
                    const auto r = min_bandwidth(q);
                    out << fmt::format("{:<8}{:>8}{:>12}{:>8}\n", netsim::protocol_name(p), relays, fmt_mbps(r),
                                       r.probes);
                }
            }
        }
    } catch (const netsim::ScenarioError &e) {
        err << fmt::format("error: invalid scenario field '{}': {}\n", e.field(), e.what());
        return kInvalidInput;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::runtime_error &e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    return 0;
}

} // namespace partialdir::harness
