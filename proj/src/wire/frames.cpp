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

#include "partialdir/wire/frames.hpp"

#include <fmt/format.h>

namespace partialdir::wire {

namespace {

using namespace dissemination;

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// DOCUMENT: digest | signature | u32 len + canonical encoding
void write_document(ByteWriter &w, const DocumentMessage &m) {
    write_digest(w, m.h);
    write_signature(w, m.sig);
    w.blob32(m.doc->encoding());
}

DocumentMessage read_document(ByteReader &r) {
    DocumentMessage m;
    m.h = read_digest(r);
    m.sig = read_signature(r);
    m.doc = SealedDocument::from_encoding(r.blob32_view());
    return m;
}

// PROPOSAL: u32 n, then per slot u8 kind (0 absent, 1 present),
// [digest | sender sig] when present, proposer sig; u16 evidence count, evidence
void write_proposal(ByteWriter &w, const Proposal &p) {
    w.u32(static_cast<std::uint32_t>(p.slots.size()));
    for (const auto &slot : p.slots) {
        if (const auto *s = std::get_if<PresentSlot>(&slot)) {
            w.u8(1);
            write_digest(w, s->h);
            write_signature(w, s->sender_sig);
            write_signature(w, s->proposer_sig);
        } else {
            w.u8(0);
            write_signature(w, std::get<AbsentSlot>(slot).proposer_sig);
        }
    }
    w.u16(static_cast<std::uint16_t>(p.evidence.size()));
    for (const auto &e : p.evidence)
        write_equivocation(w, e);
}

Proposal read_proposal(ByteReader &r, AuthorityId sender, std::uint64_t view) {
    Proposal p;
    p.proposer = sender;
    p.view = view;
    const auto n = r.u32();
    if (n > r.remaining())
        throw DecodeError("proposal slot count exceeds input");
    for (std::uint32_t j = 0; j < n; ++j) {
        switch (r.u8()) {
        case 0: p.slots.emplace_back(AbsentSlot{read_signature(r)}); break;
        case 1: {
            PresentSlot s;
            s.h = read_digest(r);
            s.sender_sig = read_signature(r);
            s.proposer_sig = read_signature(r);
            p.slots.emplace_back(std::move(s));
            break;
        }
        default: throw DecodeError("unknown proposal slot kind");
        }
    }
    const auto count = r.u16();
    for (std::uint16_t k = 0; k < count; ++k)
        p.evidence.push_back(read_equivocation(r));
    return p;
}

void write_body(ByteWriter &w, const Payload &payload) {
    std::visit(overloaded{
                   [&](const DocumentMessage &m) { write_document(w, m); },
                   [&](const Proposal &p) { write_proposal(w, p); },
                   [&](const agreement::Propose &p) { agreement::write_propose(w, p); },
                   [&](const agreement::Vote &v) { agreement::write_vote(w, v); },
                   [&](const agreement::NewView &nv) { agreement::write_newview(w, nv); },
                   // FETCH-REQUEST: u32 slot | u8 has digest | [digest]
                   [&](const aggregation::FetchRequest &f) {
                       w.u32(f.slot);
                       w.u8(f.h ? 1 : 0);
                       if (f.h)
                           write_digest(w, *f.h);
                   },
                   // FETCH-RESPONSE: u32 slot | u8 found | [u32 len + encoding]
                   [&](const aggregation::FetchResponse &f) {
                       w.u32(f.slot);
                       w.u8(f.doc ? 1 : 0);
                       if (f.doc)
                           w.blob32(f.doc->encoding());
                   },
                   // CONSENSUS-SIG: body digest | signature
                   [&](const aggregation::ConsensusSig &c) {
                       write_digest(w, c.body_digest);
                       write_signature(w, c.sig);
                   },
                   [&](const SigFetchRequest &) {},
               },
               payload);
}

std::uint8_t read_flag(ByteReader &r) {
    const auto v = r.u8();
    if (v > 1)
        throw DecodeError("invalid presence marker");
    return v;
}

Payload read_body(ByteReader &r, Tag tag, AuthorityId sender, std::uint64_t view) {
    switch (tag) {
    case Tag::Document: return read_document(r);
    case Tag::Proposal: return read_proposal(r, sender, view);
    case Tag::Propose: return agreement::read_propose(r, view);
    case Tag::PrepareVote: return agreement::read_vote(r, agreement::VotePhase::Prepare, view);
    case Tag::CommitVote: return agreement::read_vote(r, agreement::VotePhase::Commit, view);
    case Tag::NewView: return agreement::read_newview(r, view);
    case Tag::FetchRequest: {
        aggregation::FetchRequest f;
        f.slot = r.u32();
        if (read_flag(r))
            f.h = read_digest(r);
        return f;
    }
    case Tag::FetchResponse: {
        aggregation::FetchResponse f;
        f.slot = r.u32();
        if (read_flag(r))
            f.doc = SealedDocument::from_encoding(r.blob32_view());
        return f;
    }
    case Tag::ConsensusSig: {
        aggregation::ConsensusSig c;
        c.body_digest = read_digest(r);
        c.sig = read_signature(r);
        return c;
    }
    case Tag::SigFetchRequest: return SigFetchRequest{};
    }
    throw DecodeError(fmt::format("unknown frame tag 0x{:02x}", static_cast<unsigned>(tag)));
}

bool known_tag(std::uint8_t t) {
    return (t >= 0x01 && t <= 0x02) || (t >= 0x10 && t <= 0x13) || (t >= 0x20 && t <= 0x23);
}

void write_frame(ByteWriter &w, const Message &msg, std::size_t body_len) {
    w.u8(static_cast<std::uint8_t>(tag_of(msg.payload)));
    w.u64(msg.epoch);
    w.u64(msg.view);
    w.u32(msg.sender.index);
    w.u32(static_cast<std::uint32_t>(body_len));
}

} // namespace

MsgClass class_of(Tag tag) {
    const auto t = static_cast<std::uint8_t>(tag);
    if (t < 0x10)
        return MsgClass::Dissemination;
    if (t < 0x20)
        return MsgClass::Agreement;
    return MsgClass::Aggregation;
}

const char *tag_name(Tag tag) {
    switch (tag) {
    case Tag::Document: return "DOCUMENT";
    case Tag::Proposal: return "PROPOSAL";
    case Tag::Propose: return "PROPOSE";
    case Tag::PrepareVote: return "PREPARE-VOTE";
    case Tag::CommitVote: return "COMMIT-VOTE";
    case Tag::NewView: return "NEWVIEW";
    case Tag::FetchRequest: return "FETCH-REQUEST";
    case Tag::FetchResponse: return "FETCH-RESPONSE";
    case Tag::ConsensusSig: return "CONSENSUS-SIG";
    case Tag::SigFetchRequest: return "SIG-FETCH-REQUEST";
    }
    return "?";
}

const char *class_name(MsgClass c) {
    switch (c) {
    case MsgClass::Dissemination: return "dissemination";
    case MsgClass::Agreement: return "agreement";
    case MsgClass::Aggregation: return "aggregation";
    }
    return "?";
}

Tag tag_of(const Payload &payload) {
    return std::visit(overloaded{
                          [](const DocumentMessage &) { return Tag::Document; },
                          [](const Proposal &) { return Tag::Proposal; },
                          [](const agreement::Propose &) { return Tag::Propose; },
                          [](const agreement::Vote &v) {
                              return v.phase == agreement::VotePhase::Prepare ? Tag::PrepareVote : Tag::CommitVote;
                          },
                          [](const agreement::NewView &) { return Tag::NewView; },
                          [](const aggregation::FetchRequest &) { return Tag::FetchRequest; },
                          [](const aggregation::FetchResponse &) { return Tag::FetchResponse; },
                          [](const aggregation::ConsensusSig &) { return Tag::ConsensusSig; },
                          [](const SigFetchRequest &) { return Tag::SigFetchRequest; },
                      },
                      payload);
}

std::uint64_t payload_view(const Payload &payload) {
    return std::visit(overloaded{
                          [](const Proposal &p) { return p.view; },
                          [](const agreement::Propose &p) { return p.view; },
                          [](const agreement::Vote &v) { return v.view; },
                          [](const agreement::NewView &nv) { return nv.view; },
                          [](const auto &) { return std::uint64_t{0}; },
                      },
                      payload);
}

Bytes encode_frame(const Message &msg) {
    ByteWriter body;
    write_body(body, msg.payload);
    ByteWriter w;
    write_frame(w, msg, body.size());
    w.raw(body.data());
    return w.take();
}

std::size_t frame_size(const Message &msg) {
    auto body = ByteWriter::counting();
    write_body(body, msg.payload);
    return kFrameHeaderBytes + body.size();
}

Message decode_frame(ByteView frame) {
    ByteReader r(frame);
    const auto t = r.u8();
    if (!known_tag(t))
        throw DecodeError(fmt::format("unknown frame tag 0x{:02x}", t));
    Message msg;
    msg.epoch = r.u64();
    msg.view = r.u64();
    msg.sender = AuthorityId{r.u32()};
    const auto len = r.u32();
    if (len != r.remaining())
        throw DecodeError("frame body length does not match input");
    ByteReader body(r.raw(len));
    msg.payload = read_body(body, static_cast<Tag>(t), msg.sender, msg.view);
    body.expect_done();
    return msg;
}

} // namespace partialdir::wire
