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
#include <optional>
#include <vector>

#include "partialdir/aggregation/collector.hpp"
#include "partialdir/aggregation/fetch.hpp"
#include "partialdir/agreement/agreement.hpp"
#include "partialdir/dissemination/dissemination.hpp"
#include "partialdir/netsim/simulator.hpp"

namespace partialdir::icps {

struct NodeConfig {
    Committee committee;
    KeyRing keys;
    DocumentHandle own_doc;
    EncodingParams encoding;
    double delta_s = 30;
    double view_timeout_s = 10;
    double leader_grace_s = 1;
    double fetch_timeout_s = 30;
    netsim::Behavior behavior = netsim::Behavior::Honest;
};

/// One directory authority running the full protocol: documents and
/// proposals, agreement on the digest vector, then fetch, merge and sign.
///
/// Agreement starts once the proposal gate first opens or the document
/// timeout passes, whichever is earlier; proposals for a view go to its
/// leader as soon as the view is entered with the gate open, or when the
/// gate opens later in the view.
class DirectoryNode final : public netsim::NodeProgram {
  public:
    explicit DirectoryNode(NodeConfig config);

    void start(netsim::NodeContext &ctx) override;
    void on_message(netsim::NodeContext &ctx, const wire::Message &msg) override;
    void on_timer(netsim::NodeContext &ctx, std::uint64_t token) override;
    bool finished() const override;
    netsim::NodeOutcome outcome() const override;

    const agreement::Agreement &engine() const { return agree_; }
    const dissemination::Dissemination &dissemination() const { return diss_; }

  private:
    void check_gate(netsim::NodeContext &ctx);
    void send_proposal(netsim::NodeContext &ctx);
    void on_proposal(netsim::NodeContext &ctx, const dissemination::Proposal &p, AuthorityId sender);
    void try_ready(netsim::NodeContext &ctx);
    void step(netsim::NodeContext &ctx, const agreement::Event &ev);
    void start_aggregation(netsim::NodeContext &ctx);
    void send_fetches(netsim::NodeContext &ctx, const std::vector<aggregation::FetchRound::Request> &reqs);
    void finish_fetch(netsim::NodeContext &ctx);
    void on_consensus_sig(netsim::NodeContext &ctx, const aggregation::ConsensusSig &cs);
    bool gate_open() const;

    NodeConfig config_;
    dissemination::Dissemination diss_;
    agreement::Agreement agree_;
    bool delta_passed_ = false;
    std::optional<std::uint64_t> proposed_view_;
    std::map<std::uint64_t, dissemination::ProposalPool> pools_;
    std::map<std::uint64_t, bool> ready_sent_;
    std::optional<aggregation::FetchRound> fetch_;
    std::optional<aggregation::SignatureCollector> collector_;
    std::vector<aggregation::ConsensusSig> early_sigs_;
    netsim::NodeOutcome outcome_;
};

/// Builds the n programs of an icps run (Byzantine ones per the scenario).
std::vector<std::unique_ptr<netsim::NodeProgram>> make_icps_nodes(const netsim::Scenario &s,
                                                                   std::shared_ptr<VerifyCache> cache = nullptr);

} // namespace partialdir::icps
