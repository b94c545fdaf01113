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
#include <set>
#include <stdexcept>
#include <vector>

#include "partialdir/dissemination/dissemination.hpp"

namespace partialdir::aggregation {

using dissemination::DigestVector;
using dissemination::DocumentStore;

/// Ask a peer for the vote of `slot`. The digest is optional so the legacy
/// model can ask for "whatever vote you hold from slot".
struct FetchRequest {
    std::uint32_t slot = 0;
    std::optional<Digest> h;
};

/// `doc` is null for NotFound.
struct FetchResponse {
    std::uint32_t slot = 0;
    DocumentHandle doc;
};

struct MissingDoc {
    std::uint32_t slot = 0;
    Digest h;

    auto operator<=>(const MissingDoc &) const = default;
};

/// Non-bottom slots of `decided` whose documents the store lacks, by slot.
std::vector<MissingDoc> missing(const DigestVector &decided, const DocumentStore &store);

/// Answer a fetch from the local store.
FetchResponse answer_fetch(const FetchRequest &req, const DocumentStore &store);

/// Slot j holds the document named by decided entry j, or null for bottom.
/// Throws std::logic_error when a named document is not in the store.
std::vector<DocumentHandle> slot_vector(const DigestVector &decided, const DocumentStore &store);

class FetchExhausted : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Retrieves missing documents one peer at a time per slot. Peers are tried
/// in the order: slot owner, inclusion-proof signers, everyone else by
/// index. A NotFound, a wrong document, or a timeout moves on to the next
/// peer. Running out of peers cannot happen with at most f faults, so it
/// throws FetchExhausted.
class FetchRound {
  public:
    struct Request {
        AuthorityId peer;
        FetchRequest req;
        /// Echoed back by the host's timer so stale timeouts are ignored.
        std::uint32_t attempt = 0;
    };

    FetchRound(AuthorityId self, const DigestVector &decided, const DocumentStore &store);

    std::vector<Request> start();
    std::vector<Request> on_response(AuthorityId from, const FetchResponse &resp, DocumentStore &store);
    std::vector<Request> on_timeout(std::uint32_t slot, std::uint32_t attempt);

    bool complete() const { return outstanding_.empty(); }
    const std::set<AuthorityId> &faulty() const { return faulty_; }
    std::size_t requests_sent() const { return sent_; }

  private:
    struct Pending {
        Digest h;
        std::vector<AuthorityId> order;
        std::size_t next = 0;
        std::uint32_t attempt = 0;
        AuthorityId current;
    };

    std::optional<Request> advance(std::uint32_t slot);

    AuthorityId self_;
    std::map<std::uint32_t, Pending> outstanding_;
    std::set<AuthorityId> faulty_;
    std::size_t sent_ = 0;
};

} // namespace partialdir::aggregation
