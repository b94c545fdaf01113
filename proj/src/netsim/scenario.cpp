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

#include "partialdir/netsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace partialdir::netsim {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(const std::string &s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

template <class T> T parse_int(const std::string &field, const std::string &text) {
    T v{};
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
        throw ScenarioError(field, fmt::format("expected an integer, got '{}'", text));
    return v;
}

double parse_double(const std::string &field, const std::string &text) {
    double v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || !std::isfinite(v))
        throw ScenarioError(field, fmt::format("expected a number, got '{}'", text));
    return v;
}

bool parse_bool(const std::string &field, const std::string &text) {
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ScenarioError(field, fmt::format("expected true or false, got '{}'", text));
}

Behavior parse_behavior(const std::string &field, const std::string &text) {
    for (auto b : {Behavior::Honest, Behavior::Silent, Behavior::Equivocate, Behavior::BogusPropose,
                   Behavior::WrongFetch})
        if (text == behavior_name(b))
            return b;
    throw ScenarioError(field, fmt::format("unknown behavior '{}'", text));
}

// "3" or "0-4"
std::pair<std::uint32_t, std::uint32_t> parse_node_range(const std::string &field, const std::string &text) {
    const auto dash = text.find('-');
    if (dash == std::string::npos) {
        const auto v = parse_int<std::uint32_t>(field, text);
        return {v, v};
    }
    const auto a = parse_int<std::uint32_t>(field, text.substr(0, dash));
    const auto b = parse_int<std::uint32_t>(field, text.substr(dash + 1));
    if (b < a)
        throw ScenarioError(field, fmt::format("empty node range '{}'", text));
    return {a, b};
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

} // namespace

const char *protocol_name(Protocol p) { return p == Protocol::Icps ? "icps" : "legacy"; }

const char *behavior_name(Behavior b) {
    switch (b) {
    case Behavior::Honest: return "honest";
    case Behavior::Silent: return "silent";
    case Behavior::Equivocate: return "equivocate";
    case Behavior::BogusPropose: return "bogus_propose";
    case Behavior::WrongFetch: return "wrong_fetch";
    }
    return "?";
}

ScenarioError::ScenarioError(const std::string &field, const std::string &message)
    : std::invalid_argument(fmt::format("scenario field '{}': {}", field, message)), field_(field) {}

double Scenario::latency_ms(std::uint32_t from, std::uint32_t to) const {
    if (!latency_matrix.empty())
        return latency_matrix.at(from).at(to);
    return link_latency_ms;
}

Behavior Scenario::behavior(std::uint32_t node) const {
    auto it = byzantine.find(node);
    return it == byzantine.end() ? Behavior::Honest : it->second;
}

void Scenario::set_uniform_bandwidth(double mbps) { node_bandwidth_mbps.assign(n, mbps); }

void apply_setting(Scenario &s, const std::string &key, const std::string &value) {
    const auto w = words(value);
    auto one = [&]() -> const std::string & {
        if (w.size() != 1)
            throw ScenarioError(key, fmt::format("expected a single value, got '{}'", value));
        return w.front();
    };
    if (key == "protocol") {
        if (one() == "icps")
            s.protocol = Protocol::Icps;
        else if (one() == "legacy")
            s.protocol = Protocol::Legacy;
        else
            throw ScenarioError(key, fmt::format("unknown protocol '{}'", value));
    } else if (key == "n") {
        s.n = parse_int<std::uint32_t>(key, one());
    } else if (key == "f") {
        s.f = parse_int<std::uint32_t>(key, one());
    } else if (key == "relays") {
        s.relays = parse_int<std::uint32_t>(key, one());
    } else if (key == "per_relay_bytes") {
        s.per_relay_bytes = parse_int<std::uint32_t>(key, one());
    } else if (key == "relay_presence") {
        s.relay_presence = parse_double(key, one());
    } else if (key == "link_latency_ms") {
        s.link_latency_ms = parse_double(key, one());
    } else if (key == "link_latency_row") {
        std::vector<double> row;
        for (const auto &x : w)
            row.push_back(parse_double(key, x));
        s.latency_matrix.push_back(std::move(row));
    } else if (key == "node_bandwidth_mbps") {
        if (w.empty())
            throw ScenarioError(key, "missing value");
        s.node_bandwidth_mbps.clear();
        for (const auto &x : w)
            s.node_bandwidth_mbps.push_back(parse_double(key, x));
    } else if (key == "attack") {
        if (w.size() != 4)
            throw ScenarioError(key, "expected 'node start_s end_s mbps'");
        const auto [a, b] = parse_node_range(key, w[0]);
        for (auto node = a; node <= b; ++node)
            s.attacks.push_back(AttackWindow{node, parse_double(key, w[1]), parse_double(key, w[2]),
                                             parse_double(key, w[3])});
    } else if (key == "gst_s") {
        s.gst_s = parse_double(key, one());
    } else if (key == "delta_s") {
        s.delta_s = parse_double(key, one());
    } else if (key == "view_timeout_s") {
        s.view_timeout_s = parse_double(key, one());
    } else if (key == "leader_grace_s") {
        s.leader_grace_s = parse_double(key, one());
    } else if (key == "byzantine") {
        for (const auto &item : w) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ScenarioError(key, fmt::format("expected 'node:behavior', got '{}'", item));
            const auto [a, b] = parse_node_range(key, item.substr(0, colon));
            const auto behavior = parse_behavior(key, item.substr(colon + 1));
            for (auto node = a; node <= b; ++node) {
                if (behavior == Behavior::Honest)
                    s.byzantine.erase(node);
                else
                    s.byzantine[node] = behavior;
            }
        }
    } else if (key == "seed") {
        s.seed = parse_int<std::uint64_t>(key, one());
    } else if (key == "epoch") {
        s.epoch = parse_int<std::uint64_t>(key, one());
    } else if (key == "horizon_s") {
        s.horizon_s = parse_double(key, one());
    } else if (key == "pre_gst_max_delay_s") {
        s.pre_gst_max_delay_s = parse_double(key, one());
    } else if (key == "hold") {
        if (w.size() != 2)
            throw ScenarioError(key, "expected 'from to'");
        s.holds.push_back(Hold{parse_int<std::uint32_t>(key, w[0]), parse_int<std::uint32_t>(key, w[1])});
    } else if (key == "scheme") {
        if (one() == "ed25519")
            s.scheme = SchemeKind::Ed25519;
        else if (one() == "mac")
            s.scheme = SchemeKind::Mac;
        else
            throw ScenarioError(key, fmt::format("unknown signature scheme '{}'", value));
    } else if (key == "fetch_timeout_s") {
        s.fetch_timeout_s = parse_double(key, one());
    } else if (key == "legacy_round_s") {
        s.legacy_round_s = parse_double(key, one());
    } else if (key == "legacy_quorum") {
        s.legacy_quorum = parse_int<std::uint32_t>(key, one());
    } else if (key == "legacy_rerun_delay_s") {
        s.legacy_rerun_delay_s = parse_double(key, one());
    } else if (key == "record_events") {
        s.record_events = parse_bool(key, one());
    } else {
        throw ScenarioError(key, "unknown field");
    }
}

namespace {

void normalise_bandwidth(Scenario &s) {
    auto &bw = s.node_bandwidth_mbps;
    if (bw.size() == s.n || bw.empty())
        return;
    if (std::all_of(bw.begin(), bw.end(), [&](double x) { return x == bw.front(); }))
        bw.assign(s.n, bw.front());
}

} // namespace

Scenario parse_scenario(const std::string &text) {
    Scenario s;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto t = trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(fmt::format("line {}", lineno), "expected 'key = value'");
        apply_setting(s, trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    }
    normalise_bandwidth(s);
    validate(s);
    return s;
}

Scenario load_scenario(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error(fmt::format("cannot open scenario file {}", path));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void validate(const Scenario &s) {
    if (s.n == 0)
        throw ScenarioError("n", "must be at least 1");
    if (s.protocol == Protocol::Icps && 3 * s.f >= s.n)
        throw ScenarioError("f", fmt::format("icps needs f < n/3 (n={}, f={})", s.n, s.f));
    if (s.protocol == Protocol::Icps && s.byzantine.size() > s.f)
        throw ScenarioError("byzantine", fmt::format("{} byzantine nodes exceed f={}", s.byzantine.size(), s.f));
    for (const auto &[node, b] : s.byzantine)
        if (node >= s.n)
            throw ScenarioError("byzantine", fmt::format("node {} outside [0, {})", node, s.n));
    if (s.relay_presence <= 0 || s.relay_presence > 1)
        throw ScenarioError("relay_presence", "must be in (0, 1]");
    if (s.link_latency_ms < 0)
        throw ScenarioError("link_latency_ms", "must be non-negative");
    if (!s.latency_matrix.empty()) {
        if (s.latency_matrix.size() != s.n)
            throw ScenarioError("link_latency_row", fmt::format("need {} rows, got {}", s.n, s.latency_matrix.size()));
        for (const auto &row : s.latency_matrix) {
            if (row.size() != s.n)
                throw ScenarioError("link_latency_row", fmt::format("each row needs {} entries", s.n));
            for (double x : row)
                if (x < 0)
                    throw ScenarioError("link_latency_row", "latencies must be non-negative");
        }
    }
    if (s.node_bandwidth_mbps.size() != s.n)
        throw ScenarioError("node_bandwidth_mbps",
                            fmt::format("need 1 or {} values, got {}", s.n, s.node_bandwidth_mbps.size()));
    for (double bw : s.node_bandwidth_mbps)
        if (bw <= 0)
            throw ScenarioError("node_bandwidth_mbps", "must be positive");
    for (const auto &a : s.attacks) {
        if (a.node >= s.n)
            throw ScenarioError("attack", fmt::format("node {} outside [0, {})", a.node, s.n));
        if (a.start_s < 0 || a.end_s < a.start_s)
            throw ScenarioError("attack", "window must satisfy 0 <= start <= end");
        if (a.mbps < 0)
            throw ScenarioError("attack", "throttled bandwidth must be non-negative");
    }
    if (s.gst_s < 0)
        throw ScenarioError("gst_s", "must be non-negative");
    if (s.delta_s <= 0)
        throw ScenarioError("delta_s", "must be positive");
    if (s.view_timeout_s <= 0)
        throw ScenarioError("view_timeout_s", "must be positive");
    if (s.leader_grace_s < 0)
        throw ScenarioError("leader_grace_s", "must be non-negative");
    if (s.horizon_s <= 0)
        throw ScenarioError("horizon_s", "must be positive");
    if (s.pre_gst_max_delay_s < 0)
        throw ScenarioError("pre_gst_max_delay_s", "must be non-negative");
    for (const auto &h : s.holds)
        if (h.from >= s.n || h.to >= s.n || h.from == h.to)
            throw ScenarioError("hold", "endpoints must be distinct nodes in [0, n)");
    if (s.fetch_timeout_s < 0)
        throw ScenarioError("fetch_timeout_s", "must be non-negative");
    if (s.legacy_round_s <= 0)
        throw ScenarioError("legacy_round_s", "must be positive");
    if (s.legacy_quorum == 0 || s.legacy_quorum > s.n)
        throw ScenarioError("legacy_quorum", "must be in [1, n]");
    if (s.legacy_rerun_delay_s < 0)
        throw ScenarioError("legacy_rerun_delay_s", "must be non-negative");
}

std::string format_scenario(const Scenario &s) {
    std::string out;
    auto put = [&](std::string_view key, const std::string &value) { out += fmt::format("{} = {}\n", key, value); };
    put("protocol", protocol_name(s.protocol));
    put("n", fmt::format("{}", s.n));
    put("f", fmt::format("{}", s.f));
    put("relays", fmt::format("{}", s.relays));
    put("per_relay_bytes", fmt::format("{}", s.per_relay_bytes));
    put("relay_presence", fmt_num(s.relay_presence));
    put("link_latency_ms", fmt_num(s.link_latency_ms));
    for (const auto &row : s.latency_matrix) {
        std::string r;
        for (double x : row)
            r += (r.empty() ? "" : " ") + fmt_num(x);
        put("link_latency_row", r);
    }
    std::string bw;
    for (double x : s.node_bandwidth_mbps)
        bw += (bw.empty() ? "" : " ") + fmt_num(x);
    put("node_bandwidth_mbps", bw);
    for (const auto &a : s.attacks)
        put("attack", fmt::format("{} {} {} {}", a.node, fmt_num(a.start_s), fmt_num(a.end_s), fmt_num(a.mbps)));
    put("gst_s", fmt_num(s.gst_s));
    put("delta_s", fmt_num(s.delta_s));
    put("view_timeout_s", fmt_num(s.view_timeout_s));
    put("leader_grace_s", fmt_num(s.leader_grace_s));
    for (const auto &[node, b] : s.byzantine)
        put("byzantine", fmt::format("{}:{}", node, behavior_name(b)));
    put("seed", fmt::format("{}", s.seed));
    put("epoch", fmt::format("{}", s.epoch));
    put("horizon_s", fmt_num(s.horizon_s));
    put("pre_gst_max_delay_s", fmt_num(s.pre_gst_max_delay_s));
    for (const auto &h : s.holds)
        put("hold", fmt::format("{} {}", h.from, h.to));
    put("scheme", s.scheme == SchemeKind::Ed25519 ? "ed25519" : "mac");
    put("fetch_timeout_s", fmt_num(s.fetch_timeout_s));
    put("legacy_round_s", fmt_num(s.legacy_round_s));
    put("legacy_quorum", fmt::format("{}", s.legacy_quorum));
    put("legacy_rerun_delay_s", fmt_num(s.legacy_rerun_delay_s));
    put("record_events", s.record_events ? "true" : "false");
    return out;
}

} // namespace partialdir::netsim
