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

#include <memory>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "partialdir/netsim/scenario.hpp"
#include "partialdir/netsim/trace.hpp"

namespace partialdir::netsim {

/// Seconds to push `bytes` through a `bandwidth_mbps` pipe plus one-way latency.
double transmission_time(std::uint64_t bytes, double bandwidth_mbps, double latency_ms);

/// What a node program may do. Only valid during a callback.
class NodeContext {
  public:
    virtual ~NodeContext() = default;

    virtual AuthorityId self() const = 0;
    virtual std::uint32_t n() const = 0;
    /// Simulated seconds since epoch start.
    virtual double now_s() const = 0;
    virtual void send(AuthorityId to, wire::Payload payload) = 0;
    /// To every node except the sender.
    virtual void broadcast(const wire::Payload &payload) = 0;
    /// `token` is handed back to on_timer.
    virtual void set_timer(double delay_s, std::uint64_t token) = 0;
    virtual void log(const std::string &event) = 0;
    virtual void count_invalid(std::size_t count = 1) = 0;
};

class NodeProgram {
  public:
    virtual ~NodeProgram() = default;

    virtual void start(NodeContext &ctx) = 0;
    virtual void on_message(NodeContext &ctx, const wire::Message &msg) = 0;
    virtual void on_timer(NodeContext &ctx, std::uint64_t token) = 0;
    /// The run ends once every correct node reports finished.
    virtual bool finished() const = 0;
    virtual NodeOutcome outcome() const = 0;
};

/// Single-threaded discrete-event network. Each node has one uplink shared
/// by all its in-flight sends (processor sharing); a send's bits leave at
/// the node's current bandwidth divided by the number of active sends. The
/// message then arrives after the link latency, plus, for sends before GST,
/// a seeded random delay and any configured hold, capped so that it is
/// delivered by max(GST, completion) + delta.
class Simulator {
  public:
    Simulator(Scenario scenario, std::vector<std::unique_ptr<NodeProgram>> programs);
    ~Simulator();

    RunResult run();

    /// Uplink bandwidth of `node` at simulated time `t_ms`.
    double bandwidth_mbps(std::uint32_t node, double t_ms) const;

  private:
    class Context;
    struct Event;
    struct Transfer;
    struct Egress;

    void push(Event ev);
    void send(std::uint32_t from, std::uint32_t to, wire::Payload payload);
    void advance(std::uint32_t node);
    void reschedule(std::uint32_t node);
    void complete_transfers(std::uint32_t node);
    void deliver(std::size_t record);
    void log(std::string line);
    bool all_correct_finished() const;

    Scenario scenario_;
    std::vector<std::unique_ptr<NodeProgram>> programs_;
    std::unique_ptr<Context> ctx_;
    std::vector<Egress> egress_;
    std::vector<std::uint32_t> depth_;
    std::vector<Event> heap_;
    std::uint64_t seq_ = 0;
    double now_ms_ = 0;
    std::mt19937_64 rng_;
    std::vector<MessageRecord> records_;
    std::vector<std::shared_ptr<const wire::Message>> in_flight_;
    std::vector<double> extra_ms_;
    std::vector<std::string> events_;
    std::set<std::pair<std::uint32_t, std::uint32_t>> holds_;
    std::uint64_t invalid_ = 0;
};

} // namespace partialdir::netsim
