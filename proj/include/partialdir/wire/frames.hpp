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

#include <variant>

#include "partialdir/aggregation/collector.hpp"
#include "partialdir/aggregation/fetch.hpp"
#include "partialdir/agreement/messages.hpp"
#include "partialdir/dissemination/types.hpp"

// Binary framing shared by every protocol message:
//
//   u8 tag | u64 epoch | u64 view | u32 sender | u32 body_len | body
//
// All integers big-endian. Bodies are described next to each encoder.

namespace partialdir::wire {

enum class Tag : std::uint8_t {
    Document = 0x01,
    Proposal = 0x02,
    Propose = 0x10,
    PrepareVote = 0x11,
    CommitVote = 0x12,
    NewView = 0x13,
    FetchRequest = 0x20,
    FetchResponse = 0x21,
    ConsensusSig = 0x22,
    SigFetchRequest = 0x23,
};

inline constexpr std::size_t kFrameHeaderBytes = 25;

enum class MsgClass { Dissemination, Agreement, Aggregation };

MsgClass class_of(Tag tag);
const char *tag_name(Tag tag);
const char *class_name(MsgClass c);

/// Ask a peer for every consensus signature it holds.
struct SigFetchRequest {
    bool operator==(const SigFetchRequest &) const = default;
};

using Payload = std::variant<dissemination::DocumentMessage, dissemination::Proposal, agreement::Propose,
                             agreement::Vote, agreement::NewView, aggregation::FetchRequest,
                             aggregation::FetchResponse, aggregation::ConsensusSig, SigFetchRequest>;

struct Message {
    std::uint64_t epoch = 0;
    std::uint64_t view = 0;
    AuthorityId sender;
    Payload payload;
};

Tag tag_of(const Payload &payload);
inline MsgClass class_of(const Message &msg) { return class_of(tag_of(msg.payload)); }

/// The view field of the header: the payload's own view where it has one.
std::uint64_t payload_view(const Payload &payload);

Bytes encode_frame(const Message &msg);
/// Throws DecodeError on malformed input, including trailing bytes.
Message decode_frame(ByteView frame);
/// Equal to encode_frame(msg).size(), without building the frame.
std::size_t frame_size(const Message &msg);

} // namespace partialdir::wire
