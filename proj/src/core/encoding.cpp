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

#include "partialdir/core/encoding.hpp"

#include <algorithm>
#include <stdexcept>

#include <sodium.h>

namespace partialdir {

namespace {

constexpr std::uint8_t kStatusMagic[4] = {'S', 'D', 'O', 'C'};
constexpr std::uint8_t kConsensusMagic[4] = {'C', 'O', 'N', 'S'};

void write_relay_body(ByteWriter &w, const RelayDescriptor &r) {
    w.blob8(r.fingerprint);
    w.str8(r.nickname);
    w.u32(r.flags.mask());
    w.u16(r.version.major);
    w.u16(r.version.minor);
    w.u16(r.version.micro);
    w.u16(r.version.patch);
    w.u32(r.protocols);
    w.str16(r.exit_policy_summary);
    w.u8(r.bandwidth.has_value() ? 1 : 0);
    w.u64(r.bandwidth.value_or(0));
    w.u8(r.measured ? 1 : 0);
}

std::size_t body_size(const RelayDescriptor &r) {
    return kRelayBodyFixedBytes + r.fingerprint.size() + r.nickname.size() + r.exit_policy_summary.size();
}

void write_relay_entry(ByteWriter &w, const RelayDescriptor &r, const EncodingParams &params) {
    const auto body = body_size(r);
    w.u32(static_cast<std::uint32_t>(body));
    const auto before = w.size();
    write_relay_body(w, r);
    if (w.size() - before != body)
        throw std::logic_error("relay body size mismatch");
    const auto entry = 4 + body;
    if (entry < params.relay_entry_bytes)
        w.zeros(params.relay_entry_bytes - entry);
}

RelayDescriptor read_relay_entry(ByteReader &r, std::uint32_t entry_width) {
    const auto body_len = r.u32();
    auto body = r.raw(body_len);
    ByteReader br(body);
    RelayDescriptor d;
    d.fingerprint = br.blob8();
    d.nickname = br.str8();
    d.flags = RelayFlags(br.u32());
    d.version.major = br.u16();
    d.version.minor = br.u16();
    d.version.micro = br.u16();
    d.version.patch = br.u16();
    d.protocols = br.u32();
    d.exit_policy_summary = br.str16();
    const auto has_bw = br.u8();
    const auto bw = br.u64();
    if (has_bw > 1)
        throw DecodeError("invalid bandwidth marker");
    if (has_bw == 1)
        d.bandwidth = bw;
    else if (bw != 0)
        throw DecodeError("absent bandwidth must encode as zero");
    const auto measured = br.u8();
    if (measured > 1)
        throw DecodeError("invalid measured marker");
    d.measured = measured == 1;
    br.expect_done();
    const std::size_t entry = 4 + body_len;
    if (entry < entry_width) {
        for (auto b : r.raw(entry_width - entry))
            if (b != 0)
                throw DecodeError("non-zero relay padding");
    }
    return d;
}

void require_canonical(const std::vector<RelayDescriptor> &relays) {
    for (std::size_t i = 0; i < relays.size(); ++i) {
        if (relays[i].fingerprint.empty())
            throw std::invalid_argument("relay with empty fingerprint");
        if (i > 0 && !(relays[i - 1].fingerprint < relays[i].fingerprint))
            throw std::invalid_argument("relays not sorted by fingerprint or duplicated");
    }
}

std::vector<RelayDescriptor> read_relays(ByteReader &r, std::uint32_t count, std::uint32_t width) {
    std::vector<RelayDescriptor> relays;
    relays.reserve(std::min<std::size_t>(count, r.remaining() / 4 + 1));
    for (std::uint32_t i = 0; i < count; ++i)
        relays.push_back(read_relay_entry(r, width));
    try {
        require_canonical(relays);
    } catch (const std::invalid_argument &e) {
        throw DecodeError(e.what());
    }
    return relays;
}

} // namespace

std::size_t natural_entry_size(const RelayDescriptor &relay) { return 4 + body_size(relay); }

std::size_t padded_entry_size(const RelayDescriptor &relay, const EncodingParams &params) {
    return std::max<std::size_t>(natural_entry_size(relay), params.relay_entry_bytes);
}

Bytes canonical_encode(const StatusDocument &doc, const EncodingParams &params) {
    require_canonical(doc.relays);
    std::size_t total = kDocumentHeaderBytes;
    for (const auto &r : doc.relays)
        total += padded_entry_size(r, params);
    ByteWriter w;
    w.raw(kStatusMagic);
    w.u64(doc.epoch);
    w.u32(doc.author.index);
    w.u32(static_cast<std::uint32_t>(doc.relays.size()));
    w.u32(params.relay_entry_bytes);
    for (const auto &r : doc.relays)
        write_relay_entry(w, r, params);
    if (w.size() != total)
        throw std::logic_error("document size mismatch");
    return w.take();
}

StatusDocument decode_status_document(ByteView bytes) {
    ByteReader r(bytes);
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kStatusMagic)))
        throw DecodeError("not a status document");
    StatusDocument doc;
    doc.epoch = r.u64();
    doc.author = AuthorityId{r.u32()};
    const auto count = r.u32();
    const auto width = r.u32();
    doc.relays = read_relays(r, count, width);
    r.expect_done();
    return doc;
}

Digest hash_bytes(ByteView bytes) {
    Digest d;
    crypto_hash_sha256(d.bytes.data(), bytes.data(), bytes.size());
    return d;
}

Digest digest(const StatusDocument &doc, const EncodingParams &params) {
    return hash_bytes(canonical_encode(doc, params));
}

Bytes encode_consensus_body(const ConsensusDocument &doc, const EncodingParams &params) {
    require_canonical(doc.relays);
    ByteWriter w;
    w.raw(kConsensusMagic);
    w.u64(doc.epoch);
    w.u32(static_cast<std::uint32_t>(doc.relays.size()));
    w.u32(params.relay_entry_bytes);
    for (const auto &r : doc.relays)
        write_relay_entry(w, r, params);
    return w.take();
}

void write_signature(ByteWriter &w, const Signature &sig) {
    w.u32(sig.signer.index);
    w.blob16(sig.bytes);
}

Signature read_signature(ByteReader &r) {
    Signature s;
    s.signer = AuthorityId{r.u32()};
    s.bytes = r.blob16();
    return s;
}

Bytes encode_finalized_consensus(const ConsensusDocument &doc, const EncodingParams &params) {
    ByteWriter w;
    w.raw(encode_consensus_body(doc, params));
    w.u32(static_cast<std::uint32_t>(doc.signatures.size()));
    for (const auto &s : doc.signatures)
        write_signature(w, s);
    return w.take();
}

ConsensusDocument decode_finalized_consensus(ByteView bytes) {
    ByteReader r(bytes);
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kConsensusMagic)))
        throw DecodeError("not a consensus document");
    ConsensusDocument doc;
    doc.epoch = r.u64();
    const auto count = r.u32();
    const auto width = r.u32();
    doc.relays = read_relays(r, count, width);
    const auto sigs = r.u32();
    for (std::uint32_t i = 0; i < sigs; ++i)
        doc.signatures.push_back(read_signature(r));
    r.expect_done();
    return doc;
}

Digest consensus_digest(const ConsensusDocument &doc, const EncodingParams &params) {
    return hash_bytes(encode_consensus_body(doc, params));
}

std::shared_ptr<const SealedDocument> SealedDocument::seal(StatusDocument doc, const EncodingParams &params) {
    std::shared_ptr<SealedDocument> s(new SealedDocument());
    s->encoding_ = canonical_encode(doc, params);
    s->digest_ = hash_bytes(s->encoding_);
    s->doc_ = std::move(doc);
    return s;
}

std::shared_ptr<const SealedDocument> SealedDocument::from_encoding(ByteView bytes) {
    auto doc = decode_status_document(bytes);
    ByteReader header(bytes);
    header.skip(4 + 8 + 4 + 4);
    EncodingParams params{header.u32()};
    auto sealed = seal(std::move(doc), params);
    if (!std::equal(sealed->encoding_.begin(), sealed->encoding_.end(), bytes.begin(), bytes.end()))
        throw DecodeError("document bytes are not canonical");
    return sealed;
}

} // namespace partialdir
