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

#include <optional>

#include "partialdir/aggregation/collector.hpp"
#include "partialdir/dissemination/dissemination.hpp"
#include "partialdir/netsim/simulator.hpp"

// Round-deadline model of the deployed four-round directory protocol:
//   round 1  every authority broadcasts its vote
//   round 2  authorities missing votes ask every other authority for them
//   round 3  with at least `quorum` votes, aggregate, sign and broadcast
//   round 4  ask every authority for the signatures it holds
// Messages that arrive after the round they belong to are ignored.

namespace partialdir::legacy {

struct LegacyConfig {
    double round_s = 150;
    std::uint32_t quorum = 5;
    double rerun_delay_s = 1800;

    static constexpr std::uint32_t kRounds = 4;
};

/// Throws std::invalid_argument on a non-positive round length or a quorum
/// outside [1, n].
void validate(const LegacyConfig &config, std::uint32_t n);

LegacyConfig legacy_config(const netsim::Scenario &s);

class LegacyNode final : public netsim::NodeProgram {
  public:
    LegacyNode(Committee committee, KeyRing keys, DocumentHandle own_vote, EncodingParams encoding,
               LegacyConfig config);

    void start(netsim::NodeContext &ctx) override;
    void on_message(netsim::NodeContext &ctx, const wire::Message &msg) override;
    void on_timer(netsim::NodeContext &ctx, std::uint64_t token) override;
    bool finished() const override { return done_; }
    netsim::NodeOutcome outcome() const override;

    /// Round the node is in at `now_s`, 1-based; kRounds + 1 once over.
    std::uint32_t round_at(double now_s) const;
    std::size_t votes_held() const { return votes_.size(); }
    /// True when the node signed and ended round 4 with a quorum of
    /// matching signatures.
    bool succeeded() const { return succeeded_; }

  private:
    void on_vote(netsim::NodeContext &ctx, const dissemination::DocumentMessage &m, AuthorityId sender);
    void sign_round(netsim::NodeContext &ctx);
    void finish(netsim::NodeContext &ctx);

    Committee committee_;
    KeyRing keys_;
    DocumentHandle own_;
    EncodingParams encoding_;
    LegacyConfig config_;
    dissemination::DocumentMessage own_msg_;
    /// First valid vote per author.
    std::map<std::uint32_t, DocumentHandle> votes_;
    std::optional<aggregation::SignatureCollector> collector_;
    /// Body of the locally aggregated document, once signed.
    Bytes body_;
    std::size_t votes_at_cutoff_ = 0;
    bool failed_ = false;
    bool succeeded_ = false;
    bool done_ = false;
    std::optional<double> finish_ms_;
};

std::vector<std::unique_ptr<netsim::NodeProgram>> make_legacy_nodes(const netsim::Scenario &s,
                                                                     std::shared_ptr<VerifyCache> cache = nullptr);

} // namespace partialdir::legacy
