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


#include <deque>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "model_check.hpp"
#include "partialdir/agreement/agreement.hpp"

namespace partialdir::agreement {
namespace {

using testing::Cluster;
using testing::make_cluster;
using testing::ready_vector;

struct Packet {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    AgreementMessage msg;
    std::uint32_t depth = 1;
};

/// Hand-driven network of engines. Messages are delivered in send order
/// unless a test picks otherwise; leaders of later views get a fresh Ready
/// vector when they enter them.
struct Net {
    const Cluster &c;
    std::vector<std::optional<Agreement>> engines;
    std::deque<Packet> queue;
    std::vector<std::pair<std::uint32_t, TimerRequest>> timers;
    std::vector<std::uint32_t> decide_depth;
    std::vector<std::optional<std::uint64_t>> lock_seen;
    bool lock_regressed = false;

    Net(const Cluster &cluster, const std::set<std::uint32_t> &silent = {})
        : c(cluster), decide_depth(cluster.committee.n, 0), lock_seen(cluster.committee.n) {
        engines.resize(c.committee.n);
        for (std::uint32_t i = 0; i < c.committee.n; ++i)
            if (!silent.count(i))
                engines[i].emplace(c.committee, c.keys[i]);
    }

    void apply(std::uint32_t node, const StepOutput &out, std::uint32_t depth) {
        for (const auto &m : out.messages)
            for (std::uint32_t to = 0; to < c.committee.n; ++to)
                if (to != node && engines[to])
                    queue.push_back(Packet{node, to, m.msg, depth + 1});
        for (const auto &t : out.timers)
            timers.emplace_back(node, t);
        if (out.decision && !decide_depth[node])
            decide_depth[node] = depth;
        const auto lv = engines[node]->lock_view();
        if (lock_seen[node] && (!lv || *lv < *lock_seen[node]))
            lock_regressed = true;
        lock_seen[node] = lv;
        for (auto v : out.entered_views)
            if (leader_of(v, c.committee.n).index == node)
                apply(node, engines[node]->step(LocalReady{ready_vector(c, v)}), depth);
    }

    void start() {
        for (std::uint32_t i = 0; i < c.committee.n; ++i)
            if (engines[i])
                apply(i, engines[i]->step(Start{}), 0);
    }

    void deliver(std::size_t index) {
        Packet p = queue[index];
        queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(index));
        apply(p.to, engines[p.to]->step(Inbound{AuthorityId{p.from}, p.msg}), p.depth);
    }

    void drain() {
        while (!queue.empty())
            deliver(0);
    }

    /// Fires the view timer of every engine still in `view`.
    void time_out(std::uint64_t view) {
        for (std::uint32_t i = 0; i < c.committee.n; ++i)
            if (engines[i] && engines[i]->view() == view)
                apply(i, engines[i]->step(ViewTimeout{view}), 0);
    }

    void expire_grace(std::uint64_t view) {
        for (std::uint32_t i = 0; i < c.committee.n; ++i)
            if (engines[i])
                apply(i, engines[i]->step(GraceTimeout{view}), 0);
    }

    bool all_decided() const {
        for (const auto &e : engines)
            if (e && !e->decided())
                return false;
        return true;
    }

    bool agree() const {
        const DigestVector *first = nullptr;
        for (const auto &e : engines) {
            if (!e || !e->decided())
                continue;
            if (!first)
                first = &*e->decided();
            else if (!(*first == *e->decided()))
                return false;
        }
        return true;
    }
};

TEST(LeaderOf, RoundRobin) {
    EXPECT_EQ(leader_of(0, 9), AuthorityId{0});
    EXPECT_EQ(leader_of(9, 9), AuthorityId{0});
    EXPECT_EQ(leader_of(13, 9), AuthorityId{4});
}

TEST(ValidateProposal, Cases) {
    const auto c = make_cluster(4, 1);
    const auto v = ready_vector(c, 1);
    const Propose p{1, v, std::nullopt};
    EXPECT_TRUE(validate_proposal(p, AuthorityId{1}, c.committee, c.keys[0]));
    EXPECT_FALSE(validate_proposal(p, AuthorityId{2}, c.committee, c.keys[0]));

    auto forged = p;
    auto &inc = std::get<dissemination::InclusionProof>(forged.value.proofs[0]);
    inc.sigs[0].bytes[0] ^= 0x01;
    EXPECT_FALSE(validate_proposal(forged, AuthorityId{1}, c.committee, c.keys[0]));

    const auto h = dissemination::vector_digest(v);
    PrepareQC qc{0, h, {}};
    for (std::uint32_t i : {0u, 2u, 3u})
        qc.sigs.push_back(make_vote(c.keys[i], c.committee, VotePhase::Prepare, 0, h).sig);
    EXPECT_TRUE(validate_proposal(Propose{1, v, qc}, AuthorityId{1}, c.committee, c.keys[0]));
    auto short_qc = qc;
    short_qc.sigs.pop_back();
    EXPECT_FALSE(validate_proposal(Propose{1, v, short_qc}, AuthorityId{1}, c.committee, c.keys[0]));
    auto other = qc;
    other.h = dissemination::vector_digest(ready_vector(c, 0, {3}));
    EXPECT_FALSE(validate_proposal(Propose{1, v, other}, AuthorityId{1}, c.committee, c.keys[0]));
}

TEST(Agreement, HappyPathDecidesInViewZeroAfterThreeRounds) {
    const auto c = make_cluster(4, 1);
    Net net(c);
    net.start();
    net.drain();
    ASSERT_TRUE(net.all_decided());
    EXPECT_TRUE(net.agree());
    for (std::uint32_t i = 0; i < 4; ++i) {
        EXPECT_EQ(net.engines[i]->decided_view(), 0u);
        EXPECT_EQ(*net.engines[i]->decided(), ready_vector(c, 0));
        if (i != 0) {
            EXPECT_EQ(net.decide_depth[i], 3u) << "node " << i;
        }
    }
}

TEST(Agreement, SilentLeaderDecidesInViewOne) {
    const auto c = make_cluster(4, 1);
    Net net(c, {0});
    net.start();
    net.drain();
    EXPECT_FALSE(net.engines[1]->decided());
    net.time_out(0);
    net.drain();
    EXPECT_FALSE(net.all_decided()) << "the view-1 leader waits out its grace period for the fourth NewView";
    net.expire_grace(1);
    net.drain();
    ASSERT_TRUE(net.all_decided());
    EXPECT_TRUE(net.agree());
    for (std::uint32_t i = 1; i < 4; ++i)
        EXPECT_EQ(net.engines[i]->decided_view(), 1u);
}

TEST(Agreement, ViewTimersDouble) {
    const auto c = make_cluster(4, 1);
    Agreement e(c.committee, c.keys[1], AgreementConfig{10, 1});
    auto out = e.step(Start{});
    ASSERT_EQ(out.timers.size(), 1u);
    EXPECT_DOUBLE_EQ(out.timers[0].delay_s, 10);
    for (std::uint64_t v = 0; v < 3; ++v) {
        out = e.step(ViewTimeout{v});
        ASSERT_FALSE(out.timers.empty());
        EXPECT_EQ(out.timers[0].view, v + 1);
        EXPECT_DOUBLE_EQ(out.timers[0].delay_s, 10.0 * (2 << v));
    }
    EXPECT_TRUE(e.step(ViewTimeout{1}).messages.empty()) << "stale timeouts are ignored";
}

class LockRule : public ::testing::Test {
  protected:
    // Node 1, locked on `a` in view 2, then moved into view 3.
    void SetUp() override {
        engine.emplace(c.committee, c.keys[1]);
        engine->step(Start{});
        engine->step(ViewTimeout{0});
        engine->step(ViewTimeout{1});
        ASSERT_EQ(engine->view(), 2u);
        engine->step(Inbound{AuthorityId{2}, Propose{2, a, std::nullopt}});
        for (std::uint32_t i : {0u, 2u})
            engine->step(Inbound{AuthorityId{i}, make_vote(c.keys[i], c.committee, VotePhase::Prepare, 2, ha)});
        ASSERT_EQ(engine->lock_view(), 2u);
        engine->step(ViewTimeout{2});
        ASSERT_EQ(engine->view(), 3u);
    }

    PrepareQC qc_for(std::uint64_t view, const Digest &h) const {
        PrepareQC qc{view, h, {}};
        for (std::uint32_t i : {0u, 2u, 3u})
            qc.sigs.push_back(make_vote(c.keys[i], c.committee, VotePhase::Prepare, view, h).sig);
        return qc;
    }

    static bool has_prepare(const StepOutput &out) {
        for (const auto &m : out.messages)
            if (const auto *v = std::get_if<Vote>(&m.msg); v && v->phase == VotePhase::Prepare)
                return true;
        return false;
    }

    Cluster c = make_cluster(4, 1);
    DigestVector a = ready_vector(c, 2);
    DigestVector b = ready_vector(c, 3, {1});
    Digest ha = dissemination::vector_digest(a);
    Digest hb = dissemination::vector_digest(b);
    std::optional<Agreement> engine;
};

TEST_F(LockRule, NoVoteForConflictingProposalWithoutJustify) {
    EXPECT_FALSE(has_prepare(engine->step(Inbound{AuthorityId{3}, Propose{3, b, std::nullopt}})));
    EXPECT_EQ(engine->lock()->qc.h, ha);
}

TEST_F(LockRule, NoVoteWithOlderJustify) {
    EXPECT_FALSE(has_prepare(engine->step(Inbound{AuthorityId{3}, Propose{3, b, qc_for(1, hb)}})));
    EXPECT_EQ(engine->lock_view(), 2u);
}

TEST_F(LockRule, VotesForLockedValue) {
    auto relabeled = a;
    relabeled.view = 3;
    EXPECT_TRUE(has_prepare(engine->step(Inbound{AuthorityId{3}, Propose{3, relabeled, std::nullopt}})));
}

TEST_F(LockRule, VotesWithJustifyAtLockView) {
    EXPECT_TRUE(has_prepare(engine->step(Inbound{AuthorityId{3}, Propose{3, b, qc_for(2, hb)}})));
    EXPECT_EQ(engine->lock_view(), 2u);
}

TEST_F(LockRule, InvalidProposalCounted) {
    auto broken = b;
    std::get<dissemination::InclusionProof>(broken.proofs[0]).sigs.pop_back();
    const auto before = engine->invalid_count();
    EXPECT_FALSE(has_prepare(engine->step(Inbound{AuthorityId{3}, Propose{3, broken, std::nullopt}})));
    EXPECT_EQ(engine->invalid_count(), before + 1);
}

TEST(Agreement, NewLeaderReproposesHighestLock) {
    const auto c = make_cluster(4, 1);
    const auto a = ready_vector(c, 0);
    const auto ha = dissemination::vector_digest(a);
    Agreement leader(c.committee, c.keys[1]);
    leader.step(Start{});
    leader.step(ViewTimeout{0});
    leader.step(LocalReady{ready_vector(c, 1, {2})});
    PrepareQC qc{0, ha, {}};
    for (std::uint32_t i : {0u, 2u, 3u})
        qc.sigs.push_back(make_vote(c.keys[i], c.committee, VotePhase::Prepare, 0, ha).sig);
    leader.step(Inbound{AuthorityId{2}, make_newview(c.keys[2], c.committee, 1, LockedValue{qc, a})});
    auto out = leader.step(Inbound{AuthorityId{3}, make_newview(c.keys[3], c.committee, 1, std::nullopt)});
    EXPECT_TRUE(out.messages.empty()) << "2f+1 NewViews arm the grace timer";
    ASSERT_EQ(out.timers.size(), 1u);
    EXPECT_EQ(out.timers[0].kind, TimerKind::Grace);
    out = leader.step(GraceTimeout{1});
    ASSERT_FALSE(out.messages.empty());
    const auto *p = std::get_if<Propose>(&out.messages.front().msg);
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(dissemination::vector_digest(p->value), ha);
    ASSERT_TRUE(p->justify);
    EXPECT_EQ(p->justify->view, 0u);
}

TEST(Agreement, JumpsOnFPlusOneHigherNewViews) {
    const auto c = make_cluster(4, 1);
    Agreement e(c.committee, c.keys[0]);
    e.step(Start{});
    e.step(Inbound{AuthorityId{1}, make_newview(c.keys[1], c.committee, 5, std::nullopt)});
    EXPECT_EQ(e.view(), 0u) << "one member alone cannot move a correct node";
    e.step(Inbound{AuthorityId{2}, make_newview(c.keys[2], c.committee, 3, std::nullopt)});
    EXPECT_EQ(e.view(), 3u);
}

// With n = 9 and f = 2, a Byzantine leader can show one vector to three
// correct members and another to the other four. Two Byzantine prepare
// votes plus three correct ones make five, which must not be enough.
TEST(Agreement, SplitProposalCannotReachQuorumWhenNExceeds3fPlus1) {
    const auto c = make_cluster(9, 2);
    const auto a = ready_vector(c, 0);
    const auto ha = dissemination::vector_digest(a);
    Agreement e(c.committee, c.keys[2]);
    e.step(Start{});
    e.step(Inbound{AuthorityId{0}, Propose{0, a, std::nullopt}});
    for (std::uint32_t i : {0u, 1u, 3u, 4u})
        e.step(Inbound{AuthorityId{i}, make_vote(c.keys[i], c.committee, VotePhase::Prepare, 0, ha)});
    EXPECT_FALSE(e.lock()) << "five prepare votes";
    e.step(Inbound{AuthorityId{5}, make_vote(c.keys[5], c.committee, VotePhase::Prepare, 0, ha)});
    EXPECT_FALSE(e.lock()) << "six prepare votes";
    e.step(Inbound{AuthorityId{6}, make_vote(c.keys[6], c.committee, VotePhase::Prepare, 0, ha)});
    EXPECT_EQ(e.lock_view(), 0u);
}

TEST(Agreement, DropsForgedVotes) {
    const auto c = make_cluster(4, 1);
    Agreement e(c.committee, c.keys[0]);
    e.step(Start{});
    auto v = make_vote(c.keys[1], c.committee, VotePhase::Prepare, 0, Digest{});
    e.step(Inbound{AuthorityId{2}, v});
    EXPECT_EQ(e.invalid_count(), 1u) << "sender must match signer";
    v.sig.bytes[3] ^= 0x10;
    e.step(Inbound{AuthorityId{1}, v});
    EXPECT_EQ(e.invalid_count(), 2u);
}

// Random delivery orders and timeout interleavings over a 4- or 7-member
// committee with up to f silent members: decisions always agree, locks
// never move backwards, and once the network is drained with timeouts
// fired every correct engine decides. Decided engines keep running their
// view timers, as they do inside a directory node.
TEST(AgreementProperty, RandomSchedulesAgreeAndTerminate) {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 150; ++trial) {
        const std::uint32_t f = trial % 3 == 0 ? 2 : 1;
        const auto c = make_cluster(3 * f + 1, f, SchemeKind::Mac, 1, 500 + static_cast<std::uint64_t>(trial));
        std::set<std::uint32_t> silent;
        const auto silent_count = rng() % (f + 1);
        while (silent.size() < silent_count)
            silent.insert(static_cast<std::uint32_t>(rng() % c.committee.n));
        Net net(c, silent);
        net.start();
        for (int step = 0; step < 4000 && !net.all_decided(); ++step) {
            if (!net.queue.empty() && rng() % 10 != 0) {
                net.deliver(rng() % net.queue.size());
                continue;
            }
            if (net.timers.empty())
                break;
            const auto k = rng() % net.timers.size();
            const auto [node, t] = net.timers[k];
            net.timers.erase(net.timers.begin() + static_cast<std::ptrdiff_t>(k));
            const auto out = t.kind == TimerKind::View ? net.engines[node]->step(ViewTimeout{t.view})
                                                       : net.engines[node]->step(GraceTimeout{t.view});
            net.apply(node, out, 0);
        }
        // After "GST": deliver everything, then time out the laggards first,
        // as longer timers in higher views would.
        for (int round = 0; round < 40 && !net.all_decided(); ++round) {
            net.drain();
            if (net.all_decided())
                break;
            std::uint64_t top = 0;
            std::uint64_t low = UINT64_MAX;
            for (const auto &e : net.engines) {
                if (e) {
                    top = std::max(top, e->view());
                    low = std::min(low, e->view());
                }
            }
            net.expire_grace(top);
            net.drain();
            net.time_out(low);
        }
        ASSERT_TRUE(net.agree()) << "trial " << trial;
        ASSERT_FALSE(net.lock_regressed) << "trial " << trial;
        EXPECT_TRUE(net.all_decided()) << "trial " << trial;
        for (const auto &e : net.engines)
            if (e && e->decided()) {
                EXPECT_TRUE(dissemination::verify_vector(*e->decided(), c.committee, c.keys[0]));
            }
    }
}

TEST(ModelCheck, ExhaustiveWithinSmallBound) {
    testing::ModelCheckConfig config;
    config.delay_bound = 1;
    const auto r = testing::model_check_agreement(config);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_GT(r.decided_states, 0u);
}

TEST(ModelCheck, HonestLeader) {
    testing::ModelCheckConfig config;
    config.byzantine_leader = false;
    config.delay_bound = 2;
    const auto r = testing::model_check_agreement(config);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_GT(r.decided_states, 0u);
}

} // namespace
} // namespace partialdir::agreement
