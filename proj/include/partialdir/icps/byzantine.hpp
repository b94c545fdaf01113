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

#include "partialdir/netsim/simulator.hpp"

// Adversarial deviations used by DirectoryNode. Each one is a deterministic
// function of its inputs.

namespace partialdir::icps {

/// A program that never sends anything.
class SilentNode final : public netsim::NodeProgram {
  public:
    void start(netsim::NodeContext &) override {}
    void on_message(netsim::NodeContext &, const wire::Message &) override {}
    void on_timer(netsim::NodeContext &, std::uint64_t) override {}
    bool finished() const override { return true; }
    netsim::NodeOutcome outcome() const override { return {}; }
};

/// Peers other than `self`, split into two halves by index.
std::pair<std::vector<AuthorityId>, std::vector<AuthorityId>> peer_halves(AuthorityId self, std::uint32_t n);

/// Drops one signature from the first inclusion proof so the vector no
/// longer verifies. Returns false when there is nothing to break.
bool break_vector(dissemination::DigestVector &vector);

/// A document that is not the one requested: the twin of the stored
/// document when there is one, otherwise the node's own twin.
DocumentHandle wrong_document(const aggregation::FetchRequest &req, const dissemination::DocumentStore &store,
                              const SealedDocument &own, const EncodingParams &params);

} // namespace partialdir::icps
