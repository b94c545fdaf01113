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

#include "partialdir/netsim/simulator.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>
#include <stdexcept>

namespace partialdir::netsim {

namespace {

constexpr double kBitsPerMsPerMbps = 1000.0;
constexpr double kCompletionSlackBits = 1e-3;

} // namespace

double transmission_time(std::uint64_t bytes, double bandwidth_mbps, double latency_ms) {
    if (bandwidth_mbps <= 0)
        throw std::invalid_argument("transmission_time needs positive bandwidth");
    return latency_ms / 1000.0 + static_cast<double>(bytes) * 8.0 / (bandwidth_mbps * 1e6);
}

enum class EventKind : std::uint8_t { Start, Deliver, Timer, EgressDone, Recalc };

struct Simulator::Event {
    double t = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Start;
    std::uint32_t node = 0;
    std::uint64_t arg = 0;
};

struct Simulator::Transfer {
    std::size_t record = 0;
    double remaining_bits = 0;
};

struct Simulator::Egress {
    std::vector<Transfer> active;
    double last_ms = 0;
    std::uint64_t generation = 0;
};

class Simulator::Context final : public NodeContext {
  public:
    explicit Context(Simulator &sim) : sim_(sim) {}

    std::uint32_t node = 0;

    AuthorityId self() const override { return AuthorityId{node}; }
    std::uint32_t n() const override { return sim_.scenario_.n; }
    double now_s() const override { return sim_.now_ms_ / 1000.0; }
    void send(AuthorityId to, wire::Payload payload) override { sim_.send(node, to.index, std::move(payload)); }
    void broadcast(const wire::Payload &payload) override {
        for (std::uint32_t j = 0; j < sim_.scenario_.n; ++j)
            if (j != node)
                sim_.send(node, j, payload);
    }
    void set_timer(double delay_s, std::uint64_t token) override {
        if (!(delay_s >= 0))
            throw std::invalid_argument("timer delay must be non-negative");
        sim_.push(Event{sim_.now_ms_ + delay_s * 1000.0, 0, EventKind::Timer, node, token});
    }
    void log(const std::string &event) override {
        if (sim_.scenario_.record_events)
            sim_.log(fmt::format("node {} {}", node, event));
    }
    void count_invalid(std::size_t count) override { sim_.invalid_ += count; }

  private:
    Simulator &sim_;
};

namespace {

bool later(const auto &a, const auto &b) { return a.t != b.t ? a.t > b.t : a.seq > b.seq; }

} // namespace

Simulator::Simulator(Scenario scenario, std::vector<std::unique_ptr<NodeProgram>> programs)
    : scenario_(std::move(scenario)), programs_(std::move(programs)), rng_(scenario_.seed) {
    validate(scenario_);
    if (programs_.size() != scenario_.n)
        throw std::invalid_argument(fmt::format("need {} node programs, got {}", scenario_.n, programs_.size()));
    ctx_ = std::make_unique<Context>(*this);
    egress_.resize(scenario_.n);
    depth_.assign(scenario_.n, 0);
    for (const auto &h : scenario_.holds)
        holds_.emplace(h.from, h.to);
}

Simulator::~Simulator() = default;

double Simulator::bandwidth_mbps(std::uint32_t node, double t_ms) const {
    double bw = scenario_.node_bandwidth_mbps.at(node);
    const double t_s = t_ms / 1000.0;
    for (const auto &a : scenario_.attacks)
        if (a.node == node && a.start_s <= t_s && t_s < a.end_s)
            bw = std::min(bw, a.mbps);
    return bw;
}

void Simulator::push(Event ev) {
    ev.seq = seq_++;
    heap_.push_back(ev);
    std::push_heap(heap_.begin(), heap_.end(), [](const Event &a, const Event &b) { return later(a, b); });
}

void Simulator::log(std::string line) { events_.push_back(fmt::format("{:.3f} {}", now_ms_ / 1000.0, line)); }

void Simulator::send(std::uint32_t from, std::uint32_t to, wire::Payload payload) {
    if (to >= scenario_.n || to == from)
        throw std::logic_error(fmt::format("node {} cannot send to {}", from, to));
    auto msg = std::make_shared<wire::Message>();
    msg->epoch = scenario_.epoch;
    msg->view = wire::payload_view(payload);
    msg->sender = AuthorityId{from};
    msg->payload = std::move(payload);

    advance(from);
    auto &eg = egress_[from];
    MessageRecord rec;
    rec.from = from;
    rec.to = to;
    rec.tag = wire::tag_of(msg->payload);
    rec.bytes = wire::frame_size(*msg);
    rec.send_ms = now_ms_;
    for (const auto &t : eg.active)
        rec.queued_bits += t.remaining_bits;
    rec.latency_ms = scenario_.latency_ms(from, to);
    rec.depth = depth_[from] + 1;
    // One draw per send, in send order, keeps runs reproducible.
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    extra_ms_.push_back(now_ms_ < scenario_.gst_s * 1000.0 ? u * scenario_.pre_gst_max_delay_s * 1000.0 : 0.0);
    if (scenario_.record_events)
        log(fmt::format("send {}->{} {} {}B depth={}", from, to, wire::tag_name(rec.tag), rec.bytes, rec.depth));

    records_.push_back(rec);
    in_flight_.push_back(std::move(msg));
    eg.active.push_back(Transfer{records_.size() - 1, static_cast<double>(rec.bytes) * 8.0});
    reschedule(from);
}

void Simulator::advance(std::uint32_t node) {
    auto &eg = egress_[node];
    const double dt = now_ms_ - eg.last_ms;
    if (!eg.active.empty() && dt > 0) {
        const double rate = bandwidth_mbps(node, eg.last_ms) * kBitsPerMsPerMbps;
        const double share = rate * dt / static_cast<double>(eg.active.size());
        for (auto &t : eg.active)
            t.remaining_bits -= share;
    }
    eg.last_ms = now_ms_;
}

void Simulator::reschedule(std::uint32_t node) {
    auto &eg = egress_[node];
    ++eg.generation;
    if (eg.active.empty())
        return;
    const double rate = bandwidth_mbps(node, now_ms_) * kBitsPerMsPerMbps;
    if (rate <= 0)
        return; // parked until the next bandwidth change
    double least = std::numeric_limits<double>::infinity();
    for (const auto &t : eg.active)
        least = std::min(least, t.remaining_bits);
    const double dt = std::max(least, 0.0) * static_cast<double>(eg.active.size()) / rate;
    push(Event{now_ms_ + dt, 0, EventKind::EgressDone, node, eg.generation});
}

void Simulator::complete_transfers(std::uint32_t node) {
    advance(node);
    auto &eg = egress_[node];
    double least = std::numeric_limits<double>::infinity();
    for (const auto &t : eg.active)
        least = std::min(least, t.remaining_bits);
    // The event was scheduled for the smallest transfer, so it finishes now
    // even if rounding left a sliver of bits.
    const double cutoff = std::max(least, 0.0) + kCompletionSlackBits;
    const double gst_ms = scenario_.gst_s * 1000.0;
    const double delta_ms = scenario_.delta_s * 1000.0;
    std::vector<Transfer> keep;
    for (const auto &t : eg.active) {
        if (t.remaining_bits > cutoff) {
            keep.push_back(t);
            continue;
        }
        auto &rec = records_[t.record];
        const double extra = extra_ms_[t.record];
        rec.completion_ms = now_ms_;
        double at = now_ms_ + rec.latency_ms + extra;
        if (rec.send_ms < gst_ms && holds_.count({rec.from, rec.to}))
            at = std::max(at, gst_ms + rec.latency_ms);
        const double bound = std::max(now_ms_ + rec.latency_ms, std::max(gst_ms, now_ms_) + delta_ms);
        rec.delivery_ms = std::min(at, bound);
        push(Event{rec.delivery_ms, 0, EventKind::Deliver, rec.to, t.record});
    }
    eg.active = std::move(keep);
    reschedule(node);
}

void Simulator::deliver(std::size_t record) {
    auto &rec = records_[record];
    rec.delivered = true;
    depth_[rec.to] = std::max(depth_[rec.to], rec.depth);
    auto msg = std::move(in_flight_[record]);
    if (scenario_.record_events)
        log(fmt::format("deliver {}->{} {}", rec.from, rec.to, wire::tag_name(rec.tag)));
    ctx_->node = rec.to;
    programs_[rec.to]->on_message(*ctx_, *msg);
}

bool Simulator::all_correct_finished() const {
    for (std::uint32_t i = 0; i < scenario_.n; ++i)
        if (!scenario_.is_byzantine(i) && !programs_[i]->finished())
            return false;
    return true;
}

RunResult Simulator::run() {
    const double horizon_ms = scenario_.horizon_s * 1000.0;
    for (std::uint32_t i = 0; i < scenario_.n; ++i)
        push(Event{0, 0, EventKind::Start, i, 0});
    for (const auto &a : scenario_.attacks) {
        push(Event{a.start_s * 1000.0, 0, EventKind::Recalc, a.node, 0});
        push(Event{a.end_s * 1000.0, 0, EventKind::Recalc, a.node, 0});
    }

    RunResult result;
    while (!heap_.empty()) {
        std::pop_heap(heap_.begin(), heap_.end(), [](const Event &a, const Event &b) { return later(a, b); });
        const Event ev = heap_.back();
        heap_.pop_back();
        if (ev.t > horizon_ms) {
            result.metrics.horizon_reached = true;
            now_ms_ = horizon_ms;
            break;
        }
        now_ms_ = ev.t;
        bool callback = false;
        switch (ev.kind) {
        case EventKind::Start:
            ctx_->node = ev.node;
            programs_[ev.node]->start(*ctx_);
            callback = true;
            break;
        case EventKind::Deliver:
            deliver(ev.arg);
            callback = true;
            break;
        case EventKind::Timer:
            ctx_->node = ev.node;
            programs_[ev.node]->on_timer(*ctx_, ev.arg);
            callback = true;
            break;
        case EventKind::EgressDone:
            if (ev.arg == egress_[ev.node].generation)
                complete_transfers(ev.node);
            break;
        case EventKind::Recalc:
            advance(ev.node);
            reschedule(ev.node);
            break;
        }
        if (callback && all_correct_finished())
            break;
    }

    result.metrics.end_s = now_ms_ / 1000.0;
    result.metrics.dropped_invalid = invalid_;
    account_messages(records_, result.metrics);
    for (std::uint32_t i = 0; i < scenario_.n; ++i) {
        auto o = programs_[i]->outcome();
        o.byzantine = scenario_.is_byzantine(i);
        result.nodes.push_back(std::move(o));
    }
    result.trace.events = std::move(events_);
    result.trace.messages = std::move(records_);
    return result;
}

} // namespace partialdir::netsim
