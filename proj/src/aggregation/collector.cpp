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

#include "partialdir/aggregation/collector.hpp"

namespace partialdir::aggregation {

ConsensusSig sign_consensus(const KeyRing &keys, const Committee &committee, const Digest &body_digest) {
    return ConsensusSig{body_digest, keys.sign(SigContext::Consensus, committee.epoch, body_digest.view())};
}

bool verify_consensus_sig(const ConsensusSig &cs, const Committee &committee, const KeyRing &keys) {
    if (cs.sig.signer.index >= committee.n)
        return false;
    return keys.verify(SigContext::Consensus, committee.epoch, cs.body_digest.view(), cs.sig);
}

SignatureCollector::SignatureCollector(Committee committee, KeyRing keys, ConsensusDocument local,
                                       EncodingParams params)
    : committee_(committee), keys_(std::move(keys)), local_(std::move(local)) {
    local_.signatures.clear();
    body_digest_ = consensus_digest(local_, params);
    own_ = sign_consensus(keys_, committee_, body_digest_);
    add(own_);
}

SignatureCollector::Verdict SignatureCollector::add(const ConsensusSig &cs) {
    if (!verify_consensus_sig(cs, committee_, keys_))
        return Verdict::Invalid;
    if (cs.body_digest != body_digest_) {
        ++divergent_;
        return Verdict::Divergent;
    }
    if (!sigs_.emplace(cs.sig.signer, cs.sig).second)
        return Verdict::Duplicate;
    if (!finalized_ && sigs_.size() >= committee_.quorum()) {
        auto doc = local_;
        for (const auto &[who, s] : sigs_)
            doc.signatures.push_back(s);
        finalized_ = std::move(doc);
    }
    return Verdict::Accepted;
}

std::vector<Signature> SignatureCollector::signatures() const {
    std::vector<Signature> out;
    for (const auto &[who, s] : sigs_)
        out.push_back(s);
    return out;
}

} // namespace partialdir::aggregation
