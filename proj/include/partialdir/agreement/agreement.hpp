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
#include <string>
#include <variant>
#include <vector>

#include "partialdir/agreement/messages.hpp"

namespace partialdir::agreement {

struct AgreementConfig {
    double view_timeout_s = 10.0;
    /// After a quorum of NewViews a leader waits this long for the rest before
    /// proposing, so that it sees the highest lock when the network is timely.
    double leader_grace_s = 1.0;
};

struct Start {};
struct Inbound {
    AuthorityId from;
    AgreementMessage msg;
};
struct ViewTimeout {
    std::uint64_t view = 0;
};
struct GraceTimeout {
    std::uint64_t view = 0;
};
/// The leader's dissemination layer has assembled a Ready vector.
struct LocalReady {
    DigestVector vector;
};

using Event = std::variant<Start, Inbound, ViewTimeout, GraceTimeout, LocalReady>;

enum class TimerKind { View, Grace };

struct TimerRequest {
    TimerKind kind = TimerKind::View;
    std::uint64_t view = 0;
    double delay_s = 0;
};

/// Sent to every other member; the engine handles its own copy internally.
struct Outbound {
    AgreementMessage msg;
};

struct StepOutput {
    std::vector<Outbound> messages;
    std::vector<TimerRequest> timers;
    std::optional<DigestVector> decision;
    /// Views entered during this step, in order.
    std::vector<std::uint64_t> entered_views;
};

/// Single-shot PBFT-style agreement on a digest vector. Prepare votes go to
/// every member, so each node forms its own PrepareQC, locks, and sends a
/// commit vote; a quorum (n - f) of commit votes decides. The engine is a value type so a
/// model checker can copy and branch it.
class Agreement {
  public:
    Agreement(Committee committee, KeyRing keys, AgreementConfig config = {});

    StepOutput step(const Event &event);

    bool started() const { return started_; }
    std::uint64_t view() const { return view_; }
    std::optional<std::uint64_t> lock_view() const;
    const std::optional<LockedValue> &lock() const { return lock_; }
    const std::optional<DigestVector> &decided() const { return decided_; }
    std::optional<std::uint64_t> decided_view() const { return decided_view_; }
    std::size_t invalid_count() const { return invalid_; }
    bool is_leader() const { return leader_of(view_, committee_.n) == keys_.self(); }
    const Committee &committee() const { return committee_; }

    /// Canonical digest of the protocol-relevant state, for visited-set
    /// deduplication. Equal engines give equal snapshots.
    std::string snapshot() const;

  private:
    struct ViewData {
        std::optional<DigestVector> proposal;
        Digest proposal_h;
        bool voted = false;
        bool committed = false;
        bool proposed = false;
        bool grace_armed = false;
        bool grace_expired = false;
        std::map<Digest, std::map<AuthorityId, Signature>> prepares;
        std::map<Digest, std::map<AuthorityId, Signature>> commits;
        std::map<AuthorityId, std::optional<LockedValue>> newviews;
    };

    void enter_view(std::uint64_t view, StepOutput &out);
    void process(AuthorityId from, const AgreementMessage &msg, StepOutput &out);
    void on_propose(AuthorityId from, const Propose &p, StepOutput &out);
    void on_vote(AuthorityId from, const Vote &v, StepOutput &out);
    void on_newview(AuthorityId from, const NewView &nv, StepOutput &out);
    void maybe_jump(StepOutput &out);
    void try_lead(StepOutput &out);
    void try_commit(StepOutput &out);
    void try_decide(StepOutput &out);
    void drain(StepOutput &out);
    void broadcast(AgreementMessage msg, StepOutput &out);
    void adopt_lock(const PrepareQC &qc, const DigestVector &value);

    Committee committee_;
    KeyRing keys_;
    AgreementConfig config_;

    bool started_ = false;
    std::uint64_t view_ = 0;
    std::optional<LockedValue> lock_;
    std::optional<DigestVector> decided_;
    std::optional<std::uint64_t> decided_view_;
    std::optional<DigestVector> ready_;
    std::map<std::uint64_t, ViewData> views_;
    std::vector<std::pair<AuthorityId, AgreementMessage>> pending_;
    std::map<AuthorityId, std::uint64_t> newview_high_;
    std::size_t invalid_ = 0;
};

} // namespace partialdir::agreement
