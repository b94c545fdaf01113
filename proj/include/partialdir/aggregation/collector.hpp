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

#include "partialdir/core/crypto.hpp"
#include "partialdir/core/encoding.hpp"

namespace partialdir::aggregation {

/// A CONSENSUS-context signature over the SHA-256 of the consensus body,
/// together with the digest the signer computed.
struct ConsensusSig {
    Digest body_digest;
    Signature sig;

    bool operator==(const ConsensusSig &) const = default;
};

ConsensusSig sign_consensus(const KeyRing &keys, const Committee &committee, const Digest &body_digest);
bool verify_consensus_sig(const ConsensusSig &cs, const Committee &committee, const KeyRing &keys);

/// Holds this node's aggregate and gathers signatures over it until a quorum (n - f) of
/// distinct authorities have signed the same bytes.
class SignatureCollector {
  public:
    enum class Verdict { Accepted, Duplicate, Invalid, Divergent };

    SignatureCollector(Committee committee, KeyRing keys, ConsensusDocument local, EncodingParams params = {});

    /// This node's own signature; already counted.
    const ConsensusSig &own() const { return own_; }
    const Digest &body_digest() const { return body_digest_; }

    Verdict add(const ConsensusSig &cs);

    bool finalized() const { return finalized_.has_value(); }
    /// The document with exactly the first quorum of signatures collected, in
    /// signer order.
    const std::optional<ConsensusDocument> &finalized_document() const { return finalized_; }
    std::size_t signature_count() const { return sigs_.size(); }
    std::size_t divergence_count() const { return divergent_; }
    /// All signatures held so far, including ones after finalization.
    std::vector<Signature> signatures() const;

  private:
    Committee committee_;
    KeyRing keys_;
    ConsensusDocument local_;
    Digest body_digest_;
    ConsensusSig own_;
    std::map<AuthorityId, Signature> sigs_;
    std::optional<ConsensusDocument> finalized_;
    std::size_t divergent_ = 0;
};

} // namespace partialdir::aggregation
