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

#include <cstddef>
#include <memory>

#include "partialdir/core/bytes.hpp"
#include "partialdir/core/types.hpp"

// Canonical byte layout of status and consensus documents. The normative
// description lives in docs/encoding.md; keep the two in sync.

namespace partialdir {

struct EncodingParams {
    /// Every relay entry is zero-padded up to this many bytes (entries that
    /// are naturally larger are left unpadded).
    std::uint32_t relay_entry_bytes = 500;
};

inline constexpr std::size_t kDocumentHeaderBytes = 24;
inline constexpr std::size_t kRelayBodyFixedBytes = 30;

/// Size of a relay entry before padding: 4-byte length prefix plus body.
std::size_t natural_entry_size(const RelayDescriptor &relay);
std::size_t padded_entry_size(const RelayDescriptor &relay, const EncodingParams &params);

/// Throws std::invalid_argument on a non-canonical document.
Bytes canonical_encode(const StatusDocument &doc, const EncodingParams &params = {});
StatusDocument decode_status_document(ByteView bytes);

Digest hash_bytes(ByteView bytes);
Digest digest(const StatusDocument &doc, const EncodingParams &params = {});

/// Signing bytes of a consensus document: epoch and relays, no signatures.
Bytes encode_consensus_body(const ConsensusDocument &doc, const EncodingParams &params = {});
/// Body followed by the signature set.
Bytes encode_finalized_consensus(const ConsensusDocument &doc, const EncodingParams &params = {});
ConsensusDocument decode_finalized_consensus(ByteView bytes);
Digest consensus_digest(const ConsensusDocument &doc, const EncodingParams &params = {});

void write_signature(ByteWriter &w, const Signature &sig);
Signature read_signature(ByteReader &r);

/// An immutable status document with its encoding and digest computed once.
class SealedDocument {
  public:
    static std::shared_ptr<const SealedDocument> seal(StatusDocument doc, const EncodingParams &params = {});
    /// Decodes and re-encodes; throws DecodeError unless the bytes are the
    /// canonical encoding of the decoded document.
    static std::shared_ptr<const SealedDocument> from_encoding(ByteView bytes);

    const StatusDocument &doc() const { return doc_; }
    const Bytes &encoding() const { return encoding_; }
    const Digest &digest() const { return digest_; }
    AuthorityId author() const { return doc_.author; }

  private:
    SealedDocument() = default;

    StatusDocument doc_;
    Bytes encoding_;
    Digest digest_;
};

using DocumentHandle = std::shared_ptr<const SealedDocument>;

} // namespace partialdir
