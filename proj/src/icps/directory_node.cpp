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

#include "partialdir/icps/directory_node.hpp"

#include <fmt/format.h>

#include "partialdir/aggregation/merge.hpp"
#include "partialdir/icps/byzantine.hpp"
#include "partialdir/netsim/synth.hpp"

namespace partialdir::icps {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

enum TimerKind : std::uint64_t { kDeltaTimer = 1, kViewTimer = 2, kGraceTimer = 3, kFetchTimer = 4 };

std::uint64_t token(TimerKind kind, std::uint64_t a, std::uint32_t b = 0) {
    return (static_cast<std::uint64_t>(kind) << 56) | ((a & 0xffffffull) << 32) | b;
}

TimerKind token_kind(std::uint64_t t) { return static_cast<TimerKind>(t >> 56); }
std::uint64_t token_a(std::uint64_t t) { return (t >> 32) & 0xffffffull; }
std::uint32_t token_b(std::uint64_t t) { return static_cast<std::uint32_t>(t); }

} // namespace

DirectoryNode::DirectoryNode(NodeConfig config)
    : config_(std::move(config)), diss_(config_.committee, config_.keys),
      agree_(config_.committee, config_.keys, agreement::AgreementConfig{config_.view_timeout_s, config_.leader_grace_s}) {
    if (!config_.own_doc)
        throw std::invalid_argument("directory node needs its own document");
}

bool DirectoryNode::gate_open() const {
    const auto &c = config_.committee;
    return dissemination::proposal_gate(diss_.received_count(), delta_passed_ ? config_.delta_s : 0.0, c.n, c.f,
                                        config_.delta_s);
}

void DirectoryNode::start(netsim::NodeContext &ctx) {
    auto msg = diss_.start_epoch(config_.own_doc);
    if (config_.behavior == netsim::Behavior::Equivocate) {
        auto twin = netsim::equivocal_twin(*config_.own_doc, config_.encoding);
        dissemination::DocumentMessage other{
            twin, twin->digest(),
            config_.keys.sign(SigContext::Doc, config_.committee.epoch,
                              dissemination::slot_payload(ctx.self().index, twin->digest()))};
        auto [first, second] = peer_halves(ctx.self(), ctx.n());
        for (auto p : first)
            ctx.send(p, msg);
        for (auto p : second)
            ctx.send(p, other);
        ctx.log(fmt::format("equivocate {} / {}", msg.h.short_hex(), other.h.short_hex()));
    } else {
        ctx.broadcast(msg);
    }
    ctx.set_timer(config_.delta_s, token(kDeltaTimer, 0));
    check_gate(ctx);
}

void DirectoryNode::check_gate(netsim::NodeContext &ctx) {
    if (!agree_.started() && (diss_.received_count() == config_.committee.n || delta_passed_)) {
        step(ctx, agreement::Start{});
        return; // entering view 0 sends the proposal
    }
    send_proposal(ctx);
}

void DirectoryNode::send_proposal(netsim::NodeContext &ctx) {
    if (!agree_.started() || !gate_open())
        return;
    const auto view = agree_.view();
    if (proposed_view_ && *proposed_view_ == view)
        return;
    proposed_view_ = view;
    auto p = diss_.build_proposal(view);
    const auto leader = agreement::leader_of(view, config_.committee.n);
    if (leader == ctx.self())
        on_proposal(ctx, p, ctx.self());
    else
        ctx.send(leader, std::move(p));
}

void DirectoryNode::on_proposal(netsim::NodeContext &ctx, const dissemination::Proposal &p, AuthorityId sender) {
    if (p.proposer != sender) {
        ctx.count_invalid();
        return;
    }
    if (agreement::leader_of(p.view, config_.committee.n) != ctx.self() || p.view < agree_.view())
        return;
    auto it = pools_.try_emplace(p.view, config_.committee, config_.keys, p.view).first;
    if (it->second.add(p) == dissemination::ProposalPool::AddResult::Invalid)
        ctx.count_invalid();
    try_ready(ctx);
}

void DirectoryNode::try_ready(netsim::NodeContext &ctx) {
    const auto view = agree_.view();
    if (!agree_.started() || !agree_.is_leader() || ready_sent_[view])
        return;
    auto it = pools_.find(view);
    if (it == pools_.end())
        return;
    for (const auto &e : diss_.evidence())
        it->second.add_evidence(e);
    auto vec = it->second.assemble();
    if (!vec)
        return;
    ready_sent_[view] = true;
    ctx.log(fmt::format("ready view={} present={}", view, vec->present_count()));
    step(ctx, agreement::LocalReady{std::move(*vec)});
}

void DirectoryNode::step(netsim::NodeContext &ctx, const agreement::Event &ev) {
    const auto invalid_before = agree_.invalid_count();
    auto out = agree_.step(ev);
    if (agree_.invalid_count() > invalid_before)
        ctx.count_invalid(agree_.invalid_count() - invalid_before);
    for (auto &m : out.messages) {
        if (auto *p = std::get_if<agreement::Propose>(&m.msg);
            p && config_.behavior == netsim::Behavior::BogusPropose) {
            auto bad = *p;
            if (break_vector(bad.value)) {
                ctx.log(fmt::format("bogus propose view={}", bad.view));
                ctx.broadcast(std::move(bad));
                continue;
            }
        }
        std::visit([&](const auto &x) { ctx.broadcast(x); }, m.msg);
    }
    for (const auto &t : out.timers) {
        const auto kind = t.kind == agreement::TimerKind::View ? kViewTimer : kGraceTimer;
        ctx.set_timer(t.delay_s, token(kind, t.view));
    }
    if (out.decision && !outcome_.decide_ms) {
        outcome_.decide_ms = ctx.now_s() * 1000.0;
        outcome_.decided_view = agree_.decided_view();
        outcome_.decided_vector = out.decision;
        ctx.log(fmt::format("decide view={} h={} present={}", *agree_.decided_view(),
                            dissemination::vector_digest(*out.decision).short_hex(), out.decision->present_count()));
        start_aggregation(ctx);
    }
    if (!out.entered_views.empty()) {
        const auto view = agree_.view();
        pools_.erase(pools_.begin(), pools_.lower_bound(view));
        send_proposal(ctx);
        try_ready(ctx);
    }
}

void DirectoryNode::start_aggregation(netsim::NodeContext &ctx) {
    fetch_.emplace(ctx.self(), *outcome_.decided_vector, diss_.store());
    send_fetches(ctx, fetch_->start());
    if (fetch_->complete())
        finish_fetch(ctx);
}

void DirectoryNode::send_fetches(netsim::NodeContext &ctx, const std::vector<aggregation::FetchRound::Request> &reqs) {
    for (const auto &r : reqs) {
        ctx.send(r.peer, r.req);
        ctx.set_timer(config_.fetch_timeout_s, token(kFetchTimer, r.req.slot, r.attempt));
    }
}

void DirectoryNode::finish_fetch(netsim::NodeContext &ctx) {
    if (collector_)
        return;
    outcome_.fetch_done_ms = ctx.now_s() * 1000.0;
    outcome_.faulty_peers = fetch_->faulty().size();
    const auto slots = aggregation::slot_vector(*outcome_.decided_vector, diss_.store());
    std::vector<const StatusDocument *> docs;
    for (const auto &s : slots)
        docs.push_back(s ? &s->doc() : nullptr);
    auto doc = aggregation::aggregate(docs, aggregation::inclusion_threshold(config_.committee.n),
                                      config_.committee.epoch);
    const auto relays = doc.relays.size();
    collector_.emplace(config_.committee, config_.keys, std::move(doc), config_.encoding);
    ctx.log(fmt::format("aggregate relays={} body={}", relays, collector_->body_digest().short_hex()));
    ctx.broadcast(collector_->own());
    auto early = std::move(early_sigs_);
    early_sigs_.clear();
    for (const auto &cs : early)
        on_consensus_sig(ctx, cs);
}

void DirectoryNode::on_consensus_sig(netsim::NodeContext &ctx, const aggregation::ConsensusSig &cs) {
    if (!collector_) {
        early_sigs_.push_back(cs);
        return;
    }
    const bool was = collector_->finalized();
    if (collector_->add(cs) == aggregation::SignatureCollector::Verdict::Invalid)
        ctx.count_invalid();
    if (!was && collector_->finalized()) {
        const auto &doc = *collector_->finalized_document();
        outcome_.finalize_ms = ctx.now_s() * 1000.0;
        outcome_.finalized_body = encode_consensus_body(doc, config_.encoding);
        outcome_.finalized_bytes = encode_finalized_consensus(doc, config_.encoding);
        ctx.log(fmt::format("finalize relays={} sigs={}", doc.relays.size(), doc.signatures.size()));
    }
}

void DirectoryNode::on_message(netsim::NodeContext &ctx, const wire::Message &msg) {
    if (msg.epoch != config_.committee.epoch) {
        ctx.count_invalid();
        return;
    }
    std::visit(overloaded{
                   [&](const dissemination::DocumentMessage &m) {
                       if (m.doc && m.doc->author() != msg.sender) {
                           ctx.count_invalid();
                           return;
                       }
                       if (diss_.on_document(m) == dissemination::DocumentVerdict::Invalid)
                           ctx.count_invalid();
                       check_gate(ctx);
                   },
                   [&](const dissemination::Proposal &p) { on_proposal(ctx, p, msg.sender); },
                   [&](const agreement::Propose &p) { step(ctx, agreement::Inbound{msg.sender, p}); },
                   [&](const agreement::Vote &v) { step(ctx, agreement::Inbound{msg.sender, v}); },
                   [&](const agreement::NewView &nv) { step(ctx, agreement::Inbound{msg.sender, nv}); },
                   [&](const aggregation::FetchRequest &req) {
                       if (config_.behavior == netsim::Behavior::WrongFetch) {
                           ctx.send(msg.sender, aggregation::FetchResponse{
                                                    req.slot, wrong_document(req, diss_.store(), *config_.own_doc,
                                                                             config_.encoding)});
                           return;
                       }
                       ctx.send(msg.sender, aggregation::answer_fetch(req, diss_.store()));
                   },
                   [&](const aggregation::FetchResponse &resp) {
                       if (!fetch_ || collector_)
                           return;
                       send_fetches(ctx, fetch_->on_response(msg.sender, resp, diss_.store()));
                       if (fetch_->complete())
                           finish_fetch(ctx);
                   },
                   [&](const aggregation::ConsensusSig &cs) {
                       if (cs.sig.signer != msg.sender) {
                           ctx.count_invalid();
                           return;
                       }
                       on_consensus_sig(ctx, cs);
                   },
                   [&](const wire::SigFetchRequest &) {},
               },
               msg.payload);
}

void DirectoryNode::on_timer(netsim::NodeContext &ctx, std::uint64_t t) {
    switch (token_kind(t)) {
    case kDeltaTimer:
        delta_passed_ = true;
        check_gate(ctx);
        break;
    case kViewTimer: step(ctx, agreement::ViewTimeout{token_a(t)}); break;
    case kGraceTimer: step(ctx, agreement::GraceTimeout{token_a(t)}); break;
    case kFetchTimer:
        if (fetch_ && !collector_) {
            send_fetches(ctx, fetch_->on_timeout(static_cast<std::uint32_t>(token_a(t)), token_b(t)));
            if (fetch_->complete())
                finish_fetch(ctx);
        }
        break;
    }
}

bool DirectoryNode::finished() const { return collector_ && collector_->finalized(); }

netsim::NodeOutcome DirectoryNode::outcome() const {
    auto o = outcome_;
    if (collector_) {
        o.signature_count = collector_->signature_count();
        o.divergences = collector_->divergence_count();
    }
    return o;
}

std::vector<std::unique_ptr<netsim::NodeProgram>> make_icps_nodes(const netsim::Scenario &s,
                                                                   std::shared_ptr<VerifyCache> cache) {
    const auto &docs = netsim::synth_documents_cached(netsim::SynthParams::from(s));
    auto keys = make_committee(make_scheme(s.scheme), s.n, s.seed, std::move(cache));
    const Committee committee{s.n, s.f, s.epoch};
    std::vector<std::unique_ptr<netsim::NodeProgram>> nodes;
    for (std::uint32_t i = 0; i < s.n; ++i) {
        const auto behavior = s.behavior(i);
        if (behavior == netsim::Behavior::Silent) {
            nodes.push_back(std::make_unique<SilentNode>());
            continue;
        }
        NodeConfig cfg{committee,        keys[i],          docs[i],           EncodingParams{s.per_relay_bytes},
                       s.delta_s,        s.view_timeout_s, s.leader_grace_s, s.fetch_timeout(),
                       behavior};
        nodes.push_back(std::make_unique<DirectoryNode>(std::move(cfg)));
    }
    return nodes;
}

} // namespace partialdir::icps
