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

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "partialdir/core/crypto.hpp"

// Scenario files are "key = value" lines; '#' starts a comment. The schema
// and defaults are documented in docs/scenario.md.

namespace partialdir::netsim {

enum class Protocol { Icps, Legacy };
enum class Behavior { Honest, Silent, Equivocate, BogusPropose, WrongFetch };

const char *protocol_name(Protocol p);
const char *behavior_name(Behavior b);

struct AttackWindow {
    std::uint32_t node = 0;
    double start_s = 0;
    double end_s = 0;
    double mbps = 0;

    bool operator==(const AttackWindow &) const = default;
};

/// Messages from `from` to `to` sent before GST are held until GST.
struct Hold {
    std::uint32_t from = 0;
    std::uint32_t to = 0;

    bool operator==(const Hold &) const = default;
};

struct Scenario {
    Protocol protocol = Protocol::Icps;
    std::uint32_t n = 9;
    std::uint32_t f = 2;
    std::uint32_t relays = 1000;
    std::uint32_t per_relay_bytes = 500;
    /// Chance that a given authority lists a given relay.
    double relay_presence = 0.9;
    double link_latency_ms = 50;
    /// Optional n x n override of link_latency_ms.
    std::vector<std::vector<double>> latency_matrix;
    /// One entry per node.
    std::vector<double> node_bandwidth_mbps = std::vector<double>(9, 250.0);
    std::vector<AttackWindow> attacks;
    double gst_s = 0;
    double delta_s = 30;
    double view_timeout_s = 10;
    double leader_grace_s = 1;
    std::map<std::uint32_t, Behavior> byzantine;
    std::uint64_t seed = 1;
    std::uint64_t epoch = 1;
    double horizon_s = 3600;
    double pre_gst_max_delay_s = 5;
    std::vector<Hold> holds;
    SchemeKind scheme = SchemeKind::Ed25519;
    /// 0 means "use delta_s".
    double fetch_timeout_s = 0;
    double legacy_round_s = 150;
    std::uint32_t legacy_quorum = 5;
    double legacy_rerun_delay_s = 1800;
    bool record_events = true;

    bool operator==(const Scenario &) const = default;

    double latency_ms(std::uint32_t from, std::uint32_t to) const;
    double fetch_timeout() const { return fetch_timeout_s > 0 ? fetch_timeout_s : delta_s; }
    bool is_byzantine(std::uint32_t node) const { return byzantine.count(node) != 0; }
    Behavior behavior(std::uint32_t node) const;
    /// Sets every node to the same bandwidth (resizing to n).
    void set_uniform_bandwidth(double mbps);
};

class ScenarioError : public std::invalid_argument {
  public:
    ScenarioError(const std::string &field, const std::string &message);
    const std::string &field() const { return field_; }

  private:
    std::string field_;
};

/// Throws ScenarioError naming the offending field. The result is validated.
Scenario parse_scenario(const std::string &text);
Scenario load_scenario(const std::string &path);
/// Every field, one per line, in a form parse_scenario reads back.
std::string format_scenario(const Scenario &s);
void validate(const Scenario &s);

/// Applies one "key = value" override on top of an existing scenario.
void apply_setting(Scenario &s, const std::string &key, const std::string &value);

} // namespace partialdir::netsim
