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

#include "partialdir/agreement/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace partialdir::agreement {

namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kMaxBackoffExponent = 30;

} // namespace

Agreement::Agreement(Committee committee, KeyRing keys, AgreementConfig config)
    : committee_(committee), keys_(std::move(keys)), config_(config) {
    if (!keys_.can_sign())
        throw std::invalid_argument("agreement engine needs this node's secret key");
    if (config_.view_timeout_s <= 0)
        throw std::invalid_argument("view timeout must be positive");
}

std::optional<std::uint64_t> Agreement::lock_view() const {
    if (!lock_)
        return std::nullopt;
    return lock_->qc.view;
}

StepOutput Agreement::step(const Event &event) {
    StepOutput out;
    std::visit(overloaded{
                   [&](const Start &) {
                       if (started_)
                           return;
                       started_ = true;
                       enter_view(0, out);
                   },
                   [&](const Inbound &in) {
                       if (!started_) {
                           pending_.emplace_back(in.from, in.msg);
                           return;
                       }
                       process(in.from, in.msg, out);
                   },
                   [&](const ViewTimeout &t) {
                       if (started_ && t.view == view_)
                           enter_view(view_ + 1, out);
                   },
                   [&](const GraceTimeout &t) {
                       if (!started_ || t.view != view_)
                           return;
                       views_[view_].grace_expired = true;
                       try_lead(out);
                   },
                   [&](const LocalReady &r) {
                       ready_ = r.vector;
                       try_lead(out);
                   },
               },
               event);
    return out;
}

void Agreement::broadcast(AgreementMessage msg, StepOutput &out) { out.messages.push_back(Outbound{std::move(msg)}); }

void Agreement::enter_view(std::uint64_t view, StepOutput &out) {
    if (view != view_)
        ready_.reset();
    view_ = view;
    views_.erase(views_.begin(), views_.lower_bound(view_));
    out.entered_views.push_back(view_);
    if (view_ > 0) {
        views_[view_].newviews[keys_.self()] = lock_;
        broadcast(make_newview(keys_, committee_, view_, lock_), out);
    }
    const double backoff = std::ldexp(1.0, static_cast<int>(std::min(view_, kMaxBackoffExponent)));
    out.timers.push_back(TimerRequest{TimerKind::View, view_, config_.view_timeout_s * backoff});
    drain(out);
    try_lead(out);
}

void Agreement::drain(StepOutput &out) {
    for (;;) {
        auto it = std::find_if(pending_.begin(), pending_.end(), [&](const auto &p) {
            return std::holds_alternative<NewView>(p.second) || message_view(p.second) <= view_;
        });
        if (it == pending_.end())
            return;
        auto [from, msg] = std::move(*it);
        pending_.erase(it);
        process(from, msg, out);
    }
}

void Agreement::process(AuthorityId from, const AgreementMessage &msg, StepOutput &out) {
    if (from.index >= committee_.n) {
        ++invalid_;
        return;
    }
    if (const auto *nv = std::get_if<NewView>(&msg)) {
        on_newview(from, *nv, out);
        return;
    }
    const auto v = message_view(msg);
    if (v < view_)
        return;
    if (v > view_) {
        pending_.emplace_back(from, msg);
        return;
    }
    if (const auto *p = std::get_if<Propose>(&msg))
        on_propose(from, *p, out);
    else
        on_vote(from, std::get<Vote>(msg), out);
}

void Agreement::adopt_lock(const PrepareQC &qc, const DigestVector &value) {
    if (!lock_ || qc.view >= lock_->qc.view)
        lock_ = LockedValue{qc, value};
}

void Agreement::on_propose(AuthorityId from, const Propose &p, StepOutput &out) {
    auto &vd = views_[view_];
    if (vd.proposal)
        return;
    if (!validate_proposal(p, from, committee_, keys_)) {
        ++invalid_;
        return;
    }
    vd.proposal = p.value;
    vd.proposal_h = dissemination::vector_digest(p.value);
    if (p.justify && (!lock_ || p.justify->view > lock_->qc.view))
        adopt_lock(*p.justify, p.value);

    const bool may_vote = !lock_ || lock_->qc.h == vd.proposal_h || (p.justify && p.justify->view >= lock_->qc.view);
    if (may_vote && !vd.voted) {
        vd.voted = true;
        auto vote = make_vote(keys_, committee_, VotePhase::Prepare, view_, vd.proposal_h);
        broadcast(vote, out);
        on_vote(keys_.self(), vote, out);
    }
    try_commit(out);
    try_decide(out);
}

void Agreement::on_vote(AuthorityId from, const Vote &v, StepOutput &out) {
    if (v.sig.signer != from || !verify_vote(v, committee_, keys_)) {
        ++invalid_;
        return;
    }
    auto &vd = views_[view_];
    auto &book = v.phase == VotePhase::Prepare ? vd.prepares : vd.commits;
    if (!book[v.h].emplace(from, v.sig).second)
        return;
    if (v.phase == VotePhase::Prepare)
        try_commit(out);
    else
        try_decide(out);
}

void Agreement::try_commit(StepOutput &out) {
    auto &vd = views_[view_];
    if (vd.committed || !vd.proposal)
        return;
    auto it = vd.prepares.find(vd.proposal_h);
    if (it == vd.prepares.end() || it->second.size() < committee_.quorum())
        return;
    PrepareQC qc{view_, vd.proposal_h, {}};
    for (const auto &[signer, sig] : it->second) {
        qc.sigs.push_back(sig);
        if (qc.sigs.size() == committee_.quorum())
            break;
    }
    adopt_lock(qc, *vd.proposal);
    vd.committed = true;
    auto vote = make_vote(keys_, committee_, VotePhase::Commit, view_, vd.proposal_h);
    broadcast(vote, out);
    on_vote(keys_.self(), vote, out);
}

void Agreement::try_decide(StepOutput &out) {
    if (decided_)
        return;
    auto &vd = views_[view_];
    if (!vd.proposal)
        return;
    auto it = vd.commits.find(vd.proposal_h);
    if (it == vd.commits.end() || it->second.size() < committee_.quorum())
        return;
    decided_ = vd.proposal;
    decided_view_ = view_;
    out.decision = decided_;
}

void Agreement::on_newview(AuthorityId from, const NewView &nv, StepOutput &out) {
    if (nv.view == 0 || nv.view < view_)
        return;
    if (!verify_newview(nv, from, committee_, keys_)) {
        ++invalid_;
        return;
    }
    views_[nv.view].newviews.emplace(from, nv.locked);
    auto &high = newview_high_[from];
    high = std::max(high, nv.view);
    maybe_jump(out);
    if (nv.view == view_)
        try_lead(out);
}

void Agreement::maybe_jump(StepOutput &out) {
    std::vector<std::uint64_t> ahead;
    for (const auto &[who, v] : newview_high_)
        if (v > view_)
            ahead.push_back(v);
    if (ahead.size() < committee_.f + 1)
        return;
    // f+1 members are at or beyond the target, so at least one correct one.
    std::sort(ahead.rbegin(), ahead.rend());
    enter_view(ahead[committee_.f], out);
}

void Agreement::try_lead(StepOutput &out) {
    if (!started_ || !is_leader())
        return;
    auto &vd = views_[view_];
    if (vd.proposed)
        return;
    std::optional<Propose> p;
    if (view_ == 0) {
        if (ready_)
            p = Propose{view_, *ready_, std::nullopt};
    } else {
        const auto count = vd.newviews.size();
        if (count < committee_.quorum())
            return;
        if (count < committee_.n && !vd.grace_expired) {
            if (!vd.grace_armed) {
                vd.grace_armed = true;
                out.timers.push_back(TimerRequest{TimerKind::Grace, view_, config_.leader_grace_s});
            }
            return;
        }
        const LockedValue *best = nullptr;
        for (const auto &[who, locked] : vd.newviews)
            if (locked && (!best || locked->qc.view > best->qc.view))
                best = &*locked;
        if (best)
            p = Propose{view_, best->value, best->qc};
        else if (ready_)
            p = Propose{view_, *ready_, std::nullopt};
    }
    if (!p)
        return;
    vd.proposed = true;
    broadcast(*p, out);
    on_propose(keys_.self(), *p, out);
}

std::string Agreement::snapshot() const {
    ByteWriter w;
    auto put_h = [&](const Digest &h) { w.raw(h.view()); };
    w.u8(started_ ? 1 : 0);
    w.u64(view_);
    w.u8(lock_ ? 1 : 0);
    if (lock_) {
        w.u64(lock_->qc.view);
        put_h(lock_->qc.h);
    }
    w.u8(decided_ ? 1 : 0);
    if (decided_) {
        put_h(dissemination::vector_digest(*decided_));
        w.u64(*decided_view_);
    }
    w.u8(ready_ ? 1 : 0);
    if (ready_)
        put_h(dissemination::vector_digest(*ready_));
    auto put_book = [&](const std::map<Digest, std::map<AuthorityId, Signature>> &book) {
        w.u32(static_cast<std::uint32_t>(book.size()));
        for (const auto &[h, sigs] : book) {
            put_h(h);
            w.u32(static_cast<std::uint32_t>(sigs.size()));
            for (const auto &[who, s] : sigs)
                w.u32(who.index);
        }
    };
    w.u32(static_cast<std::uint32_t>(views_.size()));
    for (const auto &[v, vd] : views_) {
        w.u64(v);
        w.u8(vd.proposal ? 1 : 0);
        if (vd.proposal)
            put_h(vd.proposal_h);
        w.u8(static_cast<std::uint8_t>(vd.voted | vd.committed << 1 | vd.proposed << 2 | vd.grace_armed << 3 |
                                       vd.grace_expired << 4));
        put_book(vd.prepares);
        put_book(vd.commits);
        w.u32(static_cast<std::uint32_t>(vd.newviews.size()));
        for (const auto &[who, locked] : vd.newviews) {
            w.u32(who.index);
            w.u64(locked ? locked->qc.view + 1 : 0);
            if (locked)
                put_h(locked->qc.h);
        }
    }
    w.u32(static_cast<std::uint32_t>(pending_.size()));
    for (const auto &[from, msg] : pending_) {
        w.u32(from.index);
        w.u8(static_cast<std::uint8_t>(msg.index()));
        w.u64(message_view(msg));
        if (const auto *v = std::get_if<Vote>(&msg)) {
            w.u8(static_cast<std::uint8_t>(v->phase));
            put_h(v->h);
        } else if (const auto *p = std::get_if<Propose>(&msg)) {
            put_h(dissemination::vector_digest(p->value));
        }
    }
    for (const auto &[who, v] : newview_high_) {
        w.u32(who.index);
        w.u64(v);
    }
    const auto &bytes = w.data();
    return std::string(bytes.begin(), bytes.end());
}

} // namespace partialdir::agreement
