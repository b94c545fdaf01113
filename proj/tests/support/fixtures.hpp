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
#include <random>
#include <set>
#include <vector>

#include "partialdir/dissemination/dissemination.hpp"

// Fixtures shared by the unit and acceptance tests.

namespace partialdir::testing {

RelayDescriptor make_relay(std::uint8_t id, std::string nickname = "r");
DocumentHandle make_doc(std::uint32_t author, std::uint64_t epoch, std::vector<RelayDescriptor> relays,
                        const EncodingParams &params = {});

/// n members, every member's key ring, a small distinct vote per member,
/// and the signed DOCUMENT message of each vote.
struct Cluster {
    Committee committee;
    std::vector<KeyRing> keys;
    std::vector<DocumentHandle> docs;
    std::vector<dissemination::DocumentMessage> msgs;

    /// A different vote for `author`, signed by the author.
    dissemination::DocumentMessage twin(std::uint32_t author) const;
};

Cluster make_cluster(std::uint32_t n, std::uint32_t f, SchemeKind scheme = SchemeKind::Mac, std::uint64_t epoch = 1,
                     std::uint64_t seed = 7);

/// The proposal `proposer` builds for `view` after receiving the documents
/// of `received` (its own is always held).
dissemination::Proposal proposal_after(const Cluster &c, std::uint32_t proposer, const std::set<std::uint32_t> &received,
                                       std::uint64_t view = 0);

/// A Ready vector assembled from every member's proposal with all documents
/// received, except that the documents of `withheld` reach nobody but their
/// owner.
dissemination::DigestVector ready_vector(const Cluster &c, std::uint64_t view = 0,
                                         const std::set<std::uint32_t> &withheld = {});

/// Random canonical document over a pool of `pool` fingerprints.
StatusDocument random_document(std::mt19937_64 &rng, std::uint32_t author, std::uint32_t pool,
                               std::uint64_t epoch = 1);

} // namespace partialdir::testing
