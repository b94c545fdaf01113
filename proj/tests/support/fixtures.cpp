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


#include "fixtures.hpp"

#include <fmt/format.h>

namespace partialdir::testing {

using namespace dissemination;

RelayDescriptor make_relay(std::uint8_t id, std::string nickname) {
    RelayDescriptor r;
    r.fingerprint = Bytes{0xaa, id};
    r.nickname = std::move(nickname);
    r.flags.set(RelayFlag::Running);
    r.flags.set(RelayFlag::Valid);
    r.version = Version{0, 4, 8, 1};
    r.protocols = 3;
    r.exit_policy_summary = "reject 1-65535";
    return r;
}

DocumentHandle make_doc(std::uint32_t author, std::uint64_t epoch, std::vector<RelayDescriptor> relays,
                        const EncodingParams &params) {
    StatusDocument d;
    d.author = AuthorityId{author};
    d.epoch = epoch;
    d.relays = std::move(relays);
    d.canonicalize();
    return SealedDocument::seal(std::move(d), params);
}

namespace {

DocumentMessage sign_doc(const KeyRing &keys, const Committee &c, DocumentHandle doc) {
    const auto h = doc->digest();
    return DocumentMessage{doc, h, keys.sign(SigContext::Doc, c.epoch, slot_payload(doc->author().index, h))};
}

} // namespace

DocumentMessage Cluster::twin(std::uint32_t author) const {
    auto relays = docs[author]->doc().relays;
    relays.push_back(make_relay(static_cast<std::uint8_t>(200 + author), "twin"));
    return sign_doc(keys[author], committee, make_doc(author, committee.epoch, std::move(relays)));
}

Cluster make_cluster(std::uint32_t n, std::uint32_t f, SchemeKind scheme, std::uint64_t epoch, std::uint64_t seed) {
    Cluster c;
    c.committee = Committee{n, f, epoch};
    c.keys = make_committee(make_scheme(scheme), n, seed);
    for (std::uint32_t i = 0; i < n; ++i) {
        c.docs.push_back(make_doc(i, epoch,
                                  {make_relay(1, fmt::format("a{}", i)), make_relay(static_cast<std::uint8_t>(10 + i))}));
        c.msgs.push_back(sign_doc(c.keys[i], c.committee, c.docs[i]));
    }
    return c;
}

Proposal proposal_after(const Cluster &c, std::uint32_t proposer, const std::set<std::uint32_t> &received,
                        std::uint64_t view) {
    Dissemination d(c.committee, c.keys[proposer]);
    d.start_epoch(c.docs[proposer]);
    for (auto j : received)
        if (j != proposer)
            d.on_document(c.msgs[j]);
    return d.build_proposal(view);
}

DigestVector ready_vector(const Cluster &c, std::uint64_t view, const std::set<std::uint32_t> &withheld) {
    std::vector<Proposal> ps;
    for (std::uint32_t i = 0; i < c.committee.n; ++i) {
        std::set<std::uint32_t> got;
        for (std::uint32_t j = 0; j < c.committee.n; ++j)
            if (!withheld.count(j) || j == i)
                got.insert(j);
        ps.push_back(proposal_after(c, i, got, view));
    }
    auto v = leader_assemble(ps, {}, c.committee, view);
    if (!v)
        throw std::logic_error("fixture vector is not ready");
    return *v;
}

StatusDocument random_document(std::mt19937_64 &rng, std::uint32_t author, std::uint32_t pool, std::uint64_t epoch) {
    static const char *kNames[] = {"alpha", "beta", "gamma", "delta", "eps"};
    static const char *kPolicies[] = {"accept 80", "accept 443", "reject 1-65535", "accept 1-65535", ""};
    StatusDocument d;
    d.author = AuthorityId{author};
    d.epoch = epoch;
    std::bernoulli_distribution coin(0.5);
    for (std::uint32_t k = 0; k < pool; ++k) {
        if (!coin(rng))
            continue;
        RelayDescriptor r;
        r.fingerprint = Bytes{static_cast<std::uint8_t>(k >> 8), static_cast<std::uint8_t>(k)};
        r.nickname = kNames[rng() % std::size(kNames)];
        r.flags = RelayFlags(static_cast<std::uint32_t>(rng() & 0x3fff));
        r.version = Version{0, 4, static_cast<std::uint16_t>(rng() % 3), static_cast<std::uint16_t>(rng() % 4)};
        r.protocols = static_cast<std::uint32_t>(rng() % 5);
        r.exit_policy_summary = kPolicies[rng() % std::size(kPolicies)];
        switch (rng() % 3) {
        case 0: break;
        case 1: r.bandwidth = rng() % 1000; break;
        default:
            r.bandwidth = rng() % 1000;
            r.measured = true;
            break;
        }
        d.relays.push_back(std::move(r));
    }
    return d;
}

} // namespace partialdir::testing
