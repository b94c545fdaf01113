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


#include "partialdir/legacy/legacy_node.hpp"

#include <fmt/format.h>
#include <stdexcept>

#include "partialdir/aggregation/merge.hpp"
#include "partialdir/icps/byzantine.hpp"
#include "partialdir/netsim/synth.hpp"

namespace partialdir::legacy {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

void validate(const LegacyConfig &config, std::uint32_t n) {
    if (!(config.round_s > 0))
        throw std::invalid_argument("legacy round length must be positive");
    if (config.quorum == 0 || config.quorum > n)
        throw std::invalid_argument(fmt::format("legacy quorum {} outside [1, {}]", config.quorum, n));
    if (config.rerun_delay_s < 0)
        throw std::invalid_argument("legacy rerun delay must be non-negative");
}

LegacyConfig legacy_config(const netsim::Scenario &s) {
    LegacyConfig c;
    c.round_s = s.legacy_round_s;
    c.quorum = s.legacy_quorum;
    c.rerun_delay_s = s.legacy_rerun_delay_s;
    return c;
}

LegacyNode::LegacyNode(Committee committee, KeyRing keys, DocumentHandle own_vote, EncodingParams encoding,
                       LegacyConfig config)
    : committee_(committee), keys_(std::move(keys)), own_(std::move(own_vote)), encoding_(encoding),
      config_(config) {
    validate(config_, committee_.n);
    if (!own_ || own_->author() != keys_.self())
        throw std::invalid_argument("legacy node needs its own vote");
}

std::uint32_t LegacyNode::round_at(double now_s) const {
    const auto r = static_cast<std::uint32_t>(now_s / config_.round_s) + 1;
    return std::min(r, LegacyConfig::kRounds + 1);
}

void LegacyNode::start(netsim::NodeContext &ctx) {
    const auto self = ctx.self();
    own_msg_ = dissemination::DocumentMessage{
        own_, own_->digest(),
        keys_.sign(SigContext::Doc, committee_.epoch, dissemination::slot_payload(self.index, own_->digest()))};
    votes_[self.index] = own_;
    ctx.broadcast(own_msg_);
    for (std::uint32_t k = 1; k <= LegacyConfig::kRounds; ++k)
        ctx.set_timer(config_.round_s * k, k);
}

void LegacyNode::on_vote(netsim::NodeContext &ctx, const dissemination::DocumentMessage &m, AuthorityId sender) {
    if (round_at(ctx.now_s()) > 2)
        return; // vote collection is over
    if (!m.doc || m.doc->author() != sender || !verify_document_message(m, committee_, keys_)) {
        ctx.count_invalid();
        return;
    }
    votes_.try_emplace(sender.index, m.doc);
}

void LegacyNode::on_message(netsim::NodeContext &ctx, const wire::Message &msg) {
    if (msg.epoch != committee_.epoch || done_) {
        if (!done_)
            ctx.count_invalid();
        return;
    }
    const auto round = round_at(ctx.now_s());
    std::visit(overloaded{
                   [&](const dissemination::DocumentMessage &m) { on_vote(ctx, m, msg.sender); },
                   [&](const aggregation::FetchRequest &req) {
                       if (round > 2)
                           return;
                       auto it = votes_.find(req.slot);
                       if (it == votes_.end() || (req.h && it->second->digest() != *req.h))
                           ctx.send(msg.sender, aggregation::FetchResponse{req.slot, nullptr});
                       else
                           ctx.send(msg.sender, aggregation::FetchResponse{req.slot, it->second});
                   },
                   [&](const aggregation::FetchResponse &resp) {
                       if (round > 2 || !resp.doc)
                           return;
                       if (resp.doc->author().index != resp.slot) {
                           ctx.count_invalid();
                           return;
                       }
                       votes_.try_emplace(resp.slot, resp.doc);
                   },
                   [&](const aggregation::ConsensusSig &cs) {
                       if (round < 3 || !collector_)
                           return;
                       if (collector_->add(cs) == aggregation::SignatureCollector::Verdict::Invalid)
                           ctx.count_invalid();
                   },
                   [&](const wire::SigFetchRequest &) {
                       if (!collector_)
                           return;
                       for (const auto &sig : collector_->signatures())
                           if (sig.signer != msg.sender)
                               ctx.send(msg.sender, aggregation::ConsensusSig{collector_->body_digest(), sig});
                   },
                   [&](const auto &) { ctx.count_invalid(); },
               },
               msg.payload);
}

void LegacyNode::sign_round(netsim::NodeContext &ctx) {
    votes_at_cutoff_ = votes_.size();
    if (votes_.size() < config_.quorum) {
        failed_ = true;
        ctx.log(fmt::format("legacy not enough votes: {} < {}", votes_.size(), config_.quorum));
        return;
    }
    std::vector<const StatusDocument *> slots(committee_.n, nullptr);
    for (const auto &[slot, doc] : votes_)
        slots[slot] = &doc->doc();
    auto doc = aggregation::aggregate(slots, aggregation::inclusion_threshold(committee_.n), committee_.epoch);
    body_ = encode_consensus_body(doc, encoding_);
    collector_.emplace(committee_, keys_, std::move(doc), encoding_);
    ctx.log(fmt::format("legacy sign votes={} body={}", votes_.size(), collector_->body_digest().short_hex()));
    ctx.broadcast(collector_->own());
}

void LegacyNode::finish(netsim::NodeContext &ctx) {
    done_ = true;
    finish_ms_ = ctx.now_s() * 1000.0;
    succeeded_ = collector_ && collector_->signature_count() >= config_.quorum;
    ctx.log(fmt::format("legacy end sigs={} ok={}", collector_ ? collector_->signature_count() : 0, succeeded_));
}

void LegacyNode::on_timer(netsim::NodeContext &ctx, std::uint64_t token) {
    if (done_)
        return;
    switch (token) {
    case 1:
        for (std::uint32_t j = 0; j < committee_.n; ++j) {
            if (votes_.count(j))
                continue;
            for (std::uint32_t p = 0; p < committee_.n; ++p)
                if (p != ctx.self().index)
                    ctx.send(AuthorityId{p}, aggregation::FetchRequest{j, std::nullopt});
        }
        break;
    case 2: sign_round(ctx); break;
    case 3:
        if (!failed_)
            ctx.broadcast(wire::SigFetchRequest{});
        break;
    case 4: finish(ctx); break;
    default: break;
    }
}

netsim::NodeOutcome LegacyNode::outcome() const {
    netsim::NodeOutcome o;
    o.votes_held = votes_at_cutoff_;
    if (collector_) {
        o.signature_count = collector_->signature_count();
        o.divergences = collector_->divergence_count();
        o.finalized_body = body_;
    }
    if (succeeded_)
        o.finalize_ms = finish_ms_;
    return o;
}

std::vector<std::unique_ptr<netsim::NodeProgram>> make_legacy_nodes(const netsim::Scenario &s,
                                                                     std::shared_ptr<VerifyCache> cache) {
    const auto &docs = netsim::synth_documents_cached(netsim::SynthParams::from(s));
    auto keys = make_committee(make_scheme(s.scheme), s.n, s.seed, std::move(cache));
    const Committee committee{s.n, s.f, s.epoch};
    const auto config = legacy_config(s);
    std::vector<std::unique_ptr<netsim::NodeProgram>> nodes;
    for (std::uint32_t i = 0; i < s.n; ++i) {
        // Only silence is modelled for the baseline; other behaviors vote honestly.
        if (s.behavior(i) == netsim::Behavior::Silent)
            nodes.push_back(std::make_unique<icps::SilentNode>());
        else
            nodes.push_back(std::make_unique<LegacyNode>(committee, keys[i], docs[i],
                                                         EncodingParams{s.per_relay_bytes}, config));
    }
    return nodes;
}

} // namespace partialdir::legacy
