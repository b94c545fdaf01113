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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "partialdir/wire/frames.hpp"

namespace partialdir::netsim {

/// One network send. Times are simulated milliseconds from epoch start.
struct MessageRecord {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    wire::Tag tag = wire::Tag::Document;
    std::uint64_t bytes = 0;
    double send_ms = 0;
    /// Bits still queued on the sender's uplink when this send started.
    double queued_bits = 0;
    double completion_ms = 0;
    double latency_ms = 0;
    double delivery_ms = 0;
    /// 1 + the deepest message the sender had received before sending.
    std::uint32_t depth = 1;
    bool delivered = false;
};

/// What one node ended with. Filled in by the node program.
struct NodeOutcome {
    bool byzantine = false;
    std::optional<double> decide_ms;
    std::optional<std::uint64_t> decided_view;
    std::optional<dissemination::DigestVector> decided_vector;
    std::optional<double> finalize_ms;
    /// Signed body of the finalized consensus (signatures excluded).
    Bytes finalized_body;
    /// Body plus the signature set this node finalized with.
    Bytes finalized_bytes;
    std::size_t signature_count = 0;
    std::size_t divergences = 0;
    std::size_t faulty_peers = 0;
    /// Legacy: votes held when the vote-fetch round ended.
    std::size_t votes_held = 0;
    std::optional<double> fetch_done_ms;
};

struct ClassStats {
    std::uint64_t messages = 0;
    std::uint64_t bytes = 0;
    std::uint32_t max_depth = 0;
};

struct Metrics {
    bool decided = false;
    double latency_s = 0;
    /// Time the last correct node reached its agreement decision.
    double decide_s = 0;
    std::uint64_t decided_view = 0;
    /// Message rounds per sub-protocol, from causal depth.
    std::uint32_t dissemination_rounds = 0;
    std::uint32_t agreement_rounds = 0;
    std::uint32_t aggregation_rounds = 0;
    std::uint32_t fetch_rounds = 0;
    std::uint32_t signature_rounds = 0;
    std::uint64_t bytes_sent_total = 0;
    std::uint64_t messages_total = 0;
    std::array<ClassStats, 3> per_class{};
    std::uint64_t dropped_invalid = 0;
    double end_s = 0;
    bool horizon_reached = false;
};

struct Trace {
    std::vector<std::string> events;
    std::vector<MessageRecord> messages;
};

struct RunResult {
    Metrics metrics;
    std::vector<NodeOutcome> nodes;
    Trace trace;
};

/// Fills the round and per-class fields of `m` from the message log.
void account_messages(const std::vector<MessageRecord> &records, Metrics &m);

/// Machine-readable single-line JSON summary.
std::string metrics_json(const Metrics &m);
/// Trace events followed by the summary line.
std::string render_trace(const RunResult &r);

} // namespace partialdir::netsim
