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

#include "partialdir/agreement/messages.hpp"

#include <set>
#include <stdexcept>

namespace partialdir::agreement {

std::uint64_t message_view(const AgreementMessage &msg) {
    return std::visit([](const auto &m) { return m.view; }, msg);
}

AuthorityId leader_of(std::uint64_t view, std::uint32_t n) {
    if (n == 0)
        throw std::invalid_argument("leader_of needs n >= 1");
    return AuthorityId{static_cast<std::uint32_t>(view % n)};
}

Bytes vote_payload(VotePhase phase, std::uint64_t view, const Digest &h) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(phase));
    w.u64(view);
    w.raw(h.view());
    return w.take();
}

Bytes newview_payload(std::uint64_t view, const std::optional<LockedValue> &locked) {
    ByteWriter w;
    w.u64(view);
    w.u8(locked ? 1 : 0);
    if (locked) {
        w.u64(locked->qc.view);
        w.raw(locked->qc.h.view());
    }
    return w.take();
}

Vote make_vote(const KeyRing &keys, const Committee &committee, VotePhase phase, std::uint64_t view, const Digest &h) {
    return Vote{phase, view, h, keys.sign(SigContext::AgreeVote, committee.epoch, vote_payload(phase, view, h))};
}

NewView make_newview(const KeyRing &keys, const Committee &committee, std::uint64_t view,
                     std::optional<LockedValue> locked) {
    auto sig = keys.sign(SigContext::NewView, committee.epoch, newview_payload(view, locked));
    return NewView{view, std::move(locked), std::move(sig)};
}

bool verify_vote(const Vote &vote, const Committee &committee, const KeyRing &keys) {
    if (vote.phase != VotePhase::Prepare && vote.phase != VotePhase::Commit)
        return false;
    return keys.verify(SigContext::AgreeVote, committee.epoch, vote_payload(vote.phase, vote.view, vote.h), vote.sig);
}

bool verify_qc(const PrepareQC &qc, const Committee &committee, const KeyRing &keys) {
    if (qc.sigs.size() != committee.quorum())
        return false;
    std::set<AuthorityId> signers;
    const auto payload = vote_payload(VotePhase::Prepare, qc.view, qc.h);
    for (const auto &s : qc.sigs) {
        if (s.signer.index >= committee.n || !signers.insert(s.signer).second)
            return false;
        if (!keys.verify(SigContext::AgreeVote, committee.epoch, payload, s))
            return false;
    }
    return true;
}

bool verify_locked(const LockedValue &locked, const Committee &committee, const KeyRing &keys) {
    return locked.qc.h == dissemination::vector_digest(locked.value) && verify_qc(locked.qc, committee, keys) &&
           dissemination::verify_vector(locked.value, committee, keys);
}

bool verify_newview(const NewView &nv, AuthorityId sender, const Committee &committee, const KeyRing &keys) {
    if (nv.sig.signer != sender)
        return false;
    if (!keys.verify(SigContext::NewView, committee.epoch, newview_payload(nv.view, nv.locked), nv.sig))
        return false;
    return !nv.locked || verify_locked(*nv.locked, committee, keys);
}

bool validate_proposal(const Propose &msg, AuthorityId sender, const Committee &committee, const KeyRing &keys) {
    if (sender != leader_of(msg.view, committee.n))
        return false;
    if (!dissemination::verify_vector(msg.value, committee, keys))
        return false;
    if (msg.justify) {
        if (msg.justify->h != dissemination::vector_digest(msg.value))
            return false;
        if (!verify_qc(*msg.justify, committee, keys))
            return false;
    }
    return true;
}

void write_qc(ByteWriter &w, const PrepareQC &qc) {
    w.u64(qc.view);
    dissemination::write_digest(w, qc.h);
    w.u16(static_cast<std::uint16_t>(qc.sigs.size()));
    for (const auto &s : qc.sigs)
        write_signature(w, s);
}

PrepareQC read_qc(ByteReader &r) {
    PrepareQC qc;
    qc.view = r.u64();
    qc.h = dissemination::read_digest(r);
    qc.sigs.resize(r.u16());
    for (auto &s : qc.sigs)
        s = read_signature(r);
    return qc;
}

void write_propose(ByteWriter &w, const Propose &p) {
    dissemination::write_vector(w, p.value);
    w.u8(p.justify ? 1 : 0);
    if (p.justify)
        write_qc(w, *p.justify);
}

Propose read_propose(ByteReader &r, std::uint64_t view) {
    Propose p;
    p.view = view;
    p.value = dissemination::read_vector(r);
    switch (r.u8()) {
    case 0: break;
    case 1: p.justify = read_qc(r); break;
    default: throw DecodeError("invalid justify marker");
    }
    return p;
}

void write_vote(ByteWriter &w, const Vote &v) {
    dissemination::write_digest(w, v.h);
    write_signature(w, v.sig);
}

Vote read_vote(ByteReader &r, VotePhase phase, std::uint64_t view) {
    Vote v;
    v.phase = phase;
    v.view = view;
    v.h = dissemination::read_digest(r);
    v.sig = read_signature(r);
    return v;
}

void write_newview(ByteWriter &w, const NewView &nv) {
    w.u8(nv.locked ? 1 : 0);
    if (nv.locked) {
        write_qc(w, nv.locked->qc);
        dissemination::write_vector(w, nv.locked->value);
    }
    write_signature(w, nv.sig);
}

NewView read_newview(ByteReader &r, std::uint64_t view) {
    NewView nv;
    nv.view = view;
    switch (r.u8()) {
    case 0: break;
    case 1: {
        LockedValue lv;
        lv.qc = read_qc(r);
        lv.value = dissemination::read_vector(r);
        nv.locked = std::move(lv);
        break;
    }
    default: throw DecodeError("invalid lock marker");
    }
    nv.sig = read_signature(r);
    return nv;
}

} // namespace partialdir::agreement
