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


#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracle_merge.hpp"
#include "partialdir/aggregation/collector.hpp"
#include "partialdir/aggregation/fetch.hpp"
#include "partialdir/aggregation/merge.hpp"
#include "partialdir/netsim/synth.hpp"

namespace partialdir::aggregation {
namespace {

using testing::make_relay;

std::vector<StatusDocument> empty_votes(std::uint32_t n) {
    std::vector<StatusDocument> docs(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        docs[j].author = AuthorityId{j};
        docs[j].epoch = 1;
    }
    return docs;
}

std::vector<const StatusDocument *> pointers(const std::vector<StatusDocument> &docs) {
    std::vector<const StatusDocument *> out;
    for (const auto &d : docs)
        out.push_back(&d);
    return out;
}

RelayDescriptor merged_single(const std::vector<RelayDescriptor> &votes) {
    std::vector<const RelayDescriptor *> ptrs;
    for (const auto &v : votes)
        ptrs.push_back(&v);
    return merge_relay(ptrs);
}

TEST(Merge, InclusionThreshold) {
    EXPECT_EQ(inclusion_threshold(9), 5u);
    EXPECT_EQ(inclusion_threshold(4), 3u);
    EXPECT_EQ(inclusion_threshold(1), 1u);

    auto docs = empty_votes(9);
    for (std::uint32_t j = 0; j < 5; ++j)
        docs[j].relays.push_back(make_relay(1));
    for (std::uint32_t j = 5; j < 9; ++j)
        docs[j].relays.push_back(make_relay(2));
    const auto out = aggregate(pointers(docs), inclusion_threshold(9), 1);
    ASSERT_EQ(out.relays.size(), 1u);
    EXPECT_EQ(out.relays[0].fingerprint, make_relay(1).fingerprint);
}

TEST(Merge, NicknameFromLargestAuthority) {
    auto docs = empty_votes(9);
    docs[3].relays.push_back(make_relay(1, "alpha"));
    docs[7].relays.push_back(make_relay(1, "beta"));
    const auto out = aggregate(pointers(docs), 2, 1);
    ASSERT_EQ(out.relays.size(), 1u);
    EXPECT_EQ(out.relays[0].nickname, "beta");
}

TEST(Merge, FlagTieIsUnset) {
    std::vector<RelayDescriptor> votes(6, make_relay(1));
    for (std::size_t k = 0; k < 3; ++k)
        votes[k].flags.set(RelayFlag::Fast);
    EXPECT_FALSE(merged_single(votes).flags.has(RelayFlag::Fast));
    votes[3].flags.set(RelayFlag::Fast);
    EXPECT_TRUE(merged_single(votes).flags.has(RelayFlag::Fast));
    EXPECT_TRUE(merged_single(votes).flags.has(RelayFlag::Running));
}

TEST(Merge, LowerMedianOfMeasuredBandwidth) {
    auto with_bw = [](std::initializer_list<std::uint64_t> values, bool measured) {
        std::vector<RelayDescriptor> votes;
        for (auto v : values) {
            auto r = make_relay(1);
            r.bandwidth = v;
            r.measured = measured;
            votes.push_back(r);
        }
        return votes;
    };
    EXPECT_EQ(merged_single(with_bw({250, 100, 200}, true)).bandwidth, 200u);
    EXPECT_EQ(merged_single(with_bw({200, 100}, true)).bandwidth, 100u);
    EXPECT_FALSE(merged_single(with_bw({200, 100}, false)).bandwidth);

    auto mixed = with_bw({900, 950}, false);
    auto measured = with_bw({10, 30, 20}, true);
    mixed.insert(mixed.end(), measured.begin(), measured.end());
    EXPECT_EQ(merged_single(mixed).bandwidth, 20u) << "unmeasured values are ignored";
}

TEST(Merge, MaximaForVersionProtocolsAndPolicy) {
    std::vector<RelayDescriptor> votes(3, make_relay(1));
    votes[0].version = Version{0, 4, 9, 0};
    votes[1].version = Version{0, 4, 8, 17};
    votes[2].version = Version{0, 3, 99, 99};
    votes[0].protocols = 2;
    votes[1].protocols = 7;
    votes[2].protocols = 5;
    votes[0].exit_policy_summary = "accept 80";
    votes[1].exit_policy_summary = "accept 443";
    votes[2].exit_policy_summary = "reject 1-65535";
    const auto m = merged_single(votes);
    EXPECT_EQ(m.version, (Version{0, 4, 9, 0}));
    EXPECT_EQ(m.protocols, 7u);
    EXPECT_EQ(m.exit_policy_summary, "reject 1-65535");
}

TEST(Merge, BottomSlotsContributeNothing) {
    auto docs = empty_votes(4);
    for (auto &d : docs)
        d.relays.push_back(make_relay(1));
    auto slots = pointers(docs);
    slots[1] = nullptr;
    slots[2] = nullptr;
    EXPECT_TRUE(aggregate(slots, 3, 1).relays.empty());
    slots[2] = &docs[2];
    EXPECT_EQ(aggregate(slots, 3, 1).relays.size(), 1u);
}

TEST(MergeProperty, MatchesOracleAndIgnoresInputOrder) {
    std::mt19937_64 rng(8080);
    for (int k = 0; k < 300; ++k) {
        const auto n = 1 + static_cast<std::uint32_t>(rng() % 9);
        const auto pool = 1 + static_cast<std::uint32_t>(rng() % 50);
        std::vector<StatusDocument> docs;
        for (std::uint32_t j = 0; j < n; ++j)
            docs.push_back(testing::random_document(rng, j, pool));
        auto slots = pointers(docs);
        for (auto &s : slots)
            if (rng() % 5 == 0)
                s = nullptr;
        const auto t = inclusion_threshold(n);
        const auto got = aggregate(slots, t, 3);
        ASSERT_EQ(encode_consensus_body(got), encode_consensus_body(testing::oracle_merge(slots, t, 3)))
            << "instance " << k;

        auto shuffled = docs;
        for (auto &d : shuffled) {
            std::shuffle(d.relays.begin(), d.relays.end(), rng);
            d.canonicalize();
        }
        auto shuffled_slots = pointers(shuffled);
        for (std::uint32_t j = 0; j < n; ++j)
            if (!slots[j])
                shuffled_slots[j] = nullptr;
        EXPECT_EQ(aggregate(shuffled_slots, t, 3), got);
    }
}

struct Scenario9 {
    std::vector<DocumentHandle> docs;
    DigestVector decided;

    Scenario9() {
        netsim::SynthParams p;
        p.relays = 20;
        p.per_relay_bytes = 100;
        docs = netsim::synth_documents(p);
        decided.entries.resize(9);
        decided.proofs.resize(9);
        for (std::uint32_t j = 0; j < 9; ++j)
            if (j != 4 && j != 6)
                decided.entries[j] = docs[j]->digest();
    }
};

TEST(Missing, SetDifference) {
    Scenario9 s;
    DocumentStore store;
    for (std::uint32_t j = 0; j < 9; ++j)
        store.add(s.docs[j]);
    EXPECT_TRUE(missing(s.decided, store).empty());

    DocumentStore partial;
    for (std::uint32_t j : {0u, 1u, 2u, 4u, 5u, 6u, 7u})
        partial.add(s.docs[j]);
    const auto m = missing(s.decided, partial);
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0], (MissingDoc{3, s.docs[3]->digest()}));
    EXPECT_EQ(m[1], (MissingDoc{8, s.docs[8]->digest()}));

    EXPECT_EQ(missing(s.decided, DocumentStore{}).size(), 7u) << "bottom slots never appear";
}

TEST(SlotVector, FollowsDecidedEntries) {
    Scenario9 s;
    DocumentStore store;
    for (std::uint32_t j = 0; j < 9; ++j)
        store.add(s.docs[j]);
    const auto slots = slot_vector(s.decided, store);
    for (std::uint32_t j = 0; j < 9; ++j)
        EXPECT_EQ(slots[j] != nullptr, s.decided.entries[j].has_value());
    DocumentStore empty;
    EXPECT_THROW(slot_vector(s.decided, empty), std::logic_error);
}

TEST(FetchRound, HonestOwnerAnswersFirst) {
    Scenario9 s;
    DocumentStore owner_store;
    owner_store.add(s.docs[3]);
    DocumentStore mine;
    for (std::uint32_t j = 0; j < 9; ++j)
        if (j != 3)
            mine.add(s.docs[j]);
    FetchRound round(AuthorityId{0}, s.decided, mine);
    const auto reqs = round.start();
    ASSERT_EQ(reqs.size(), 1u);
    EXPECT_EQ(reqs[0].peer, AuthorityId{3});
    EXPECT_EQ(reqs[0].req.slot, 3u);
    EXPECT_TRUE(round.on_response(AuthorityId{3}, answer_fetch(reqs[0].req, owner_store), mine).empty());
    EXPECT_TRUE(round.complete());
    EXPECT_EQ(round.requests_sent(), 1u);
    EXPECT_TRUE(mine.contains(3, s.docs[3]->digest()));
}

TEST(FetchRound, WrongDocumentsMoveToNextPeer) {
    Scenario9 s;
    DocumentStore mine;
    for (std::uint32_t j = 0; j < 9; ++j)
        if (j != 3)
            mine.add(s.docs[j]);
    s.decided.proofs[3] = dissemination::InclusionProof{
        {Signature{AuthorityId{5}, {}}, Signature{AuthorityId{1}, {}}, Signature{AuthorityId{7}, {}}}};
    FetchRound round(AuthorityId{0}, s.decided, mine);
    auto reqs = round.start();
    const auto wrong = netsim::equivocal_twin(*s.docs[3], EncodingParams{100});
    // Owner, then the inclusion signers in proof order.
    for (std::uint32_t peer : {3u, 5u}) {
        ASSERT_EQ(reqs.size(), 1u);
        EXPECT_EQ(reqs[0].peer, AuthorityId{peer});
        reqs = round.on_response(AuthorityId{peer}, FetchResponse{3, wrong}, mine);
    }
    EXPECT_FALSE(mine.contains(3, wrong->digest()));
    ASSERT_EQ(reqs.size(), 1u);
    EXPECT_EQ(reqs[0].peer, AuthorityId{1});
    // A timeout for an earlier attempt is stale.
    EXPECT_TRUE(round.on_timeout(3, reqs[0].attempt - 1).empty());
    reqs = round.on_timeout(3, reqs[0].attempt);
    ASSERT_EQ(reqs.size(), 1u);
    EXPECT_EQ(reqs[0].peer, AuthorityId{7});
    round.on_response(AuthorityId{7}, FetchResponse{3, s.docs[3]}, mine);
    EXPECT_TRUE(round.complete());
    EXPECT_EQ(round.faulty(), (std::set<AuthorityId>{AuthorityId{3}, AuthorityId{5}}));
}

TEST(FetchRound, NotFoundIsNotFaulty) {
    Scenario9 s;
    DocumentStore mine;
    for (std::uint32_t j = 0; j < 9; ++j)
        if (j != 8)
            mine.add(s.docs[j]);
    FetchRound round(AuthorityId{0}, s.decided, mine);
    auto reqs = round.start();
    reqs = round.on_response(reqs[0].peer, FetchResponse{8, nullptr}, mine);
    ASSERT_EQ(reqs.size(), 1u);
    EXPECT_TRUE(round.faulty().empty());
}

TEST(FetchRound, ExhaustionThrows) {
    Scenario9 s;
    DocumentStore mine;
    for (std::uint32_t j = 0; j < 9; ++j)
        if (j != 2)
            mine.add(s.docs[j]);
    FetchRound round(AuthorityId{0}, s.decided, mine);
    auto reqs = round.start();
    EXPECT_THROW(
        {
            for (int k = 0; k < 20; ++k)
                reqs = round.on_timeout(2, reqs.at(0).attempt);
        },
        FetchExhausted);
}

class Collector : public ::testing::Test {
  protected:
    Collector() : keys(make_committee(make_scheme(SchemeKind::Mac), 9, 4)) {
        doc.epoch = 1;
        doc.relays = {make_relay(1), make_relay(2)};
        other = doc;
        other.relays.pop_back();
    }

    SignatureCollector collector_for(std::uint32_t node, const ConsensusDocument &d) const {
        return SignatureCollector(committee, keys[node], d);
    }

    Committee committee{9, 2, 1};
    std::vector<KeyRing> keys;
    ConsensusDocument doc;
    ConsensusDocument other;
};

TEST_F(Collector, FinalizesAtQuorumAndKeepsCollecting) {
    auto c0 = collector_for(0, doc);
    EXPECT_EQ(c0.signature_count(), 1u);
    for (std::uint32_t i = 1; i < 9; ++i) {
        const auto c = collector_for(i, doc);
        EXPECT_EQ(c.body_digest(), c0.body_digest());
        EXPECT_EQ(c0.add(c.own()), SignatureCollector::Verdict::Accepted);
        EXPECT_EQ(c0.finalized(), i + 1 >= committee.quorum());
    }
    EXPECT_EQ(c0.signature_count(), 9u);
    ASSERT_TRUE(c0.finalized_document());
    EXPECT_EQ(c0.finalized_document()->signatures.size(), committee.quorum());
    EXPECT_EQ(c0.finalized_document()->relays, doc.relays);
    EXPECT_EQ(c0.add(collector_for(3, doc).own()), SignatureCollector::Verdict::Duplicate);
}

TEST_F(Collector, WithheldSignaturesLeaveExactlySeven) {
    auto c0 = collector_for(0, doc);
    for (std::uint32_t i = 1; i < 7; ++i)
        c0.add(collector_for(i, doc).own());
    EXPECT_TRUE(c0.finalized());
    EXPECT_EQ(c0.signature_count(), 7u);
}

TEST_F(Collector, DivergentAndInvalidSignatures) {
    auto c0 = collector_for(0, doc);
    EXPECT_EQ(c0.add(collector_for(1, other).own()), SignatureCollector::Verdict::Divergent);
    EXPECT_EQ(c0.divergence_count(), 1u);
    auto forged = collector_for(2, doc).own();
    forged.sig.signer = AuthorityId{3};
    EXPECT_EQ(c0.add(forged), SignatureCollector::Verdict::Invalid);
    EXPECT_EQ(c0.signature_count(), 1u);
}

} // namespace
} // namespace partialdir::aggregation
