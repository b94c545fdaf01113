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

#include "partialdir/icps/byzantine.hpp"

#include "partialdir/netsim/synth.hpp"

namespace partialdir::icps {

std::pair<std::vector<AuthorityId>, std::vector<AuthorityId>> peer_halves(AuthorityId self, std::uint32_t n) {
    std::vector<AuthorityId> peers;
    for (std::uint32_t j = 0; j < n; ++j)
        if (j != self.index)
            peers.push_back(AuthorityId{j});
    const auto mid = peers.begin() + static_cast<std::ptrdiff_t>(peers.size() / 2);
    return {std::vector<AuthorityId>(peers.begin(), mid), std::vector<AuthorityId>(mid, peers.end())};
}

bool break_vector(dissemination::DigestVector &vector) {
    for (auto &proof : vector.proofs) {
        if (auto *inc = std::get_if<dissemination::InclusionProof>(&proof); inc && !inc->sigs.empty()) {
            inc->sigs.pop_back();
            return true;
        }
    }
    return false;
}

DocumentHandle wrong_document(const aggregation::FetchRequest &req, const dissemination::DocumentStore &store,
                              const SealedDocument &own, const EncodingParams &params) {
    DocumentHandle held = req.h ? store.find(req.slot, *req.h) : store.find_any(req.slot);
    return netsim::equivocal_twin(held ? *held : own, params);
}

} // namespace partialdir::icps
