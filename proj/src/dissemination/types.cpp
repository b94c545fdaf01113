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

#include "partialdir/dissemination/types.hpp"

#include <algorithm>
#include <set>

namespace partialdir::dissemination {

namespace {

enum : std::uint8_t { kInclusion = 0, kEquivocation = 1, kExclusion = 2 };

bool distinct_signers(const std::vector<Signature> &sigs) {
    std::set<AuthorityId> seen;
    for (const auto &s : sigs)
        if (!seen.insert(s.signer).second)
            return false;
    return true;
}

void write_sig_list(ByteWriter &w, const std::vector<Signature> &sigs) {
    w.u16(static_cast<std::uint16_t>(sigs.size()));
    for (const auto &s : sigs)
        write_signature(w, s);
}

std::vector<Signature> read_sig_list(ByteReader &r) {
    std::vector<Signature> sigs(r.u16());
    for (auto &s : sigs)
        s = read_signature(r);
    return sigs;
}

} // namespace

std::size_t Proposal::present_count() const {
    return static_cast<std::size_t>(
        std::count_if(slots.begin(), slots.end(), [](const auto &s) { return std::holds_alternative<PresentSlot>(s); }));
}

std::size_t DigestVector::present_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const auto &e) { return e.has_value(); }));
}

Bytes slot_payload(std::uint32_t slot, const Digest &h) {
    ByteWriter w;
    w.u32(slot);
    w.raw(h.view());
    return w.take();
}

Bytes absent_payload(std::uint32_t slot) {
    ByteWriter w;
    w.u32(slot);
    return w.take();
}

bool verify_document_message(const DocumentMessage &msg, const Committee &committee, const KeyRing &keys) {
    if (!msg.doc)
        return false;
    const auto author = msg.doc->author();
    if (author.index >= committee.n || msg.sig.signer != author)
        return false;
    if (msg.doc->doc().epoch != committee.epoch)
        return false;
    if (msg.h != msg.doc->digest())
        return false;
    return keys.verify(SigContext::Doc, committee.epoch, slot_payload(author.index, msg.h), msg.sig);
}

bool verify_equivocation(const EquivocationProof &proof, const Committee &committee, const KeyRing &keys) {
    if (proof.owner.index >= committee.n || proof.h1 == proof.h2)
        return false;
    if (proof.sig1.signer != proof.owner || proof.sig2.signer != proof.owner)
        return false;
    return keys.verify(SigContext::Doc, committee.epoch, slot_payload(proof.owner.index, proof.h1), proof.sig1) &&
           keys.verify(SigContext::Doc, committee.epoch, slot_payload(proof.owner.index, proof.h2), proof.sig2);
}

bool verify_proposal(const Proposal &proposal, const Committee &committee, const KeyRing &keys) {
    if (proposal.proposer.index >= committee.n || proposal.slots.size() != committee.n)
        return false;
    if (proposal.present_count() < committee.ready_threshold())
        return false;
    for (std::uint32_t j = 0; j < committee.n; ++j) {
        const auto &slot = proposal.slots[j];
        if (const auto *p = std::get_if<PresentSlot>(&slot)) {
            if (p->sender_sig.signer != AuthorityId{j} || p->proposer_sig.signer != proposal.proposer)
                return false;
            const auto payload = slot_payload(j, p->h);
            if (!keys.verify(SigContext::Doc, committee.epoch, payload, p->sender_sig) ||
                !keys.verify(SigContext::ProposalSlot, committee.epoch, payload, p->proposer_sig))
                return false;
        } else {
            const auto &a = std::get<AbsentSlot>(slot);
            if (a.proposer_sig.signer != proposal.proposer)
                return false;
            if (!keys.verify(SigContext::AbsentSlot, committee.epoch, absent_payload(j), a.proposer_sig))
                return false;
        }
    }
    return std::all_of(proposal.evidence.begin(), proposal.evidence.end(),
                       [&](const auto &e) { return verify_equivocation(e, committee, keys); });
}

bool verify_vector(const DigestVector &vector, const Committee &committee, const KeyRing &keys) {
    if (vector.entries.size() != committee.n || vector.proofs.size() != committee.n)
        return false;
    if (vector.present_count() < committee.ready_threshold())
        return false;
    for (std::uint32_t j = 0; j < committee.n; ++j) {
        const auto &entry = vector.entries[j];
        const auto &proof = vector.proofs[j];
        if (entry) {
            const auto *inc = std::get_if<InclusionProof>(&proof);
            if (!inc || inc->sigs.size() != committee.proof_size() || !distinct_signers(inc->sigs))
                return false;
            const auto payload = slot_payload(j, *entry);
            for (const auto &s : inc->sigs)
                if (!keys.verify(SigContext::ProposalSlot, committee.epoch, payload, s))
                    return false;
        } else if (const auto *eq = std::get_if<EquivocationProof>(&proof)) {
            if (eq->owner != AuthorityId{j} || !verify_equivocation(*eq, committee, keys))
                return false;
        } else if (const auto *ex = std::get_if<ExclusionProof>(&proof)) {
            if (ex->sigs.size() != committee.proof_size() || !distinct_signers(ex->sigs))
                return false;
            const auto payload = absent_payload(j);
            for (const auto &s : ex->sigs)
                if (!keys.verify(SigContext::AbsentSlot, committee.epoch, payload, s))
                    return false;
        } else {
            return false;
        }
    }
    return true;
}

Digest vector_digest(const DigestVector &vector) {
    ByteWriter w;
    w.raw(as_view("PDVEC"));
    w.u32(static_cast<std::uint32_t>(vector.entries.size()));
    for (const auto &e : vector.entries) {
        w.u8(e ? 1 : 0);
        if (e)
            w.raw(e->view());
    }
    return hash_bytes(w.data());
}

void write_digest(ByteWriter &w, const Digest &d) { w.raw(d.view()); }

Digest read_digest(ByteReader &r) {
    Digest d;
    auto v = r.raw(kDigestBytes);
    std::copy(v.begin(), v.end(), d.bytes.begin());
    return d;
}

void write_equivocation(ByteWriter &w, const EquivocationProof &proof) {
    w.u32(proof.owner.index);
    write_digest(w, proof.h1);
    write_signature(w, proof.sig1);
    write_digest(w, proof.h2);
    write_signature(w, proof.sig2);
}

EquivocationProof read_equivocation(ByteReader &r) {
    EquivocationProof p;
    p.owner = AuthorityId{r.u32()};
    p.h1 = read_digest(r);
    p.sig1 = read_signature(r);
    p.h2 = read_digest(r);
    p.sig2 = read_signature(r);
    return p;
}

void write_vector(ByteWriter &w, const DigestVector &vector) {
    if (vector.entries.size() != vector.proofs.size())
        throw std::invalid_argument("digest vector entries and proofs differ in length");
    w.u64(vector.view);
    w.u32(static_cast<std::uint32_t>(vector.entries.size()));
    for (std::size_t j = 0; j < vector.entries.size(); ++j) {
        const auto &e = vector.entries[j];
        w.u8(e ? 1 : 0);
        if (e)
            write_digest(w, *e);
        const auto &p = vector.proofs[j];
        if (const auto *inc = std::get_if<InclusionProof>(&p)) {
            w.u8(kInclusion);
            write_sig_list(w, inc->sigs);
        } else if (const auto *eq = std::get_if<EquivocationProof>(&p)) {
            w.u8(kEquivocation);
            write_equivocation(w, *eq);
        } else {
            w.u8(kExclusion);
            write_sig_list(w, std::get<ExclusionProof>(p).sigs);
        }
    }
}

DigestVector read_vector(ByteReader &r) {
    DigestVector v;
    v.view = r.u64();
    const auto n = r.u32();
    if (n > r.remaining())
        throw DecodeError("digest vector length exceeds input");
    for (std::uint32_t j = 0; j < n; ++j) {
        const auto present = r.u8();
        if (present > 1)
            throw DecodeError("invalid digest vector entry marker");
        v.entries.push_back(present ? std::optional<Digest>(read_digest(r)) : std::nullopt);
        switch (r.u8()) {
        case kInclusion: v.proofs.emplace_back(InclusionProof{read_sig_list(r)}); break;
        case kEquivocation: v.proofs.emplace_back(read_equivocation(r)); break;
        case kExclusion: v.proofs.emplace_back(ExclusionProof{read_sig_list(r)}); break;
        default: throw DecodeError("unknown slot proof kind");
        }
    }
    return v;
}

EquivocationProof make_equivocation(AuthorityId owner, const Digest &a, const Signature &sig_a, const Digest &b,
                                    const Signature &sig_b) {
    if (b < a)
        return EquivocationProof{owner, b, sig_b, a, sig_a};
    return EquivocationProof{owner, a, sig_a, b, sig_b};
}

} // namespace partialdir::dissemination
