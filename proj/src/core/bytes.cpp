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

#include "partialdir/core/bytes.hpp"

#include <limits>

namespace partialdir {

ByteWriter ByteWriter::counting() {
    ByteWriter w;
    w.counting_ = true;
    return w;
}

void ByteWriter::u8(std::uint8_t v) {
    if (!counting_)
        buf_.push_back(v);
    size_ += 1;
}

void ByteWriter::u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        u8(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        u8(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::raw(ByteView bytes) {
    if (!counting_)
        buf_.insert(buf_.end(), bytes.begin(), bytes.end());
    size_ += bytes.size();
}

void ByteWriter::zeros(std::size_t count) {
    if (!counting_)
        buf_.insert(buf_.end(), count, 0);
    size_ += count;
}

void ByteWriter::blob8(ByteView bytes) {
    if (bytes.size() > std::numeric_limits<std::uint8_t>::max())
        throw std::length_error("field exceeds 8-bit length prefix");
    u8(static_cast<std::uint8_t>(bytes.size()));
    raw(bytes);
}

void ByteWriter::blob16(ByteView bytes) {
    if (bytes.size() > std::numeric_limits<std::uint16_t>::max())
        throw std::length_error("field exceeds 16-bit length prefix");
    u16(static_cast<std::uint16_t>(bytes.size()));
    raw(bytes);
}

void ByteWriter::blob32(ByteView bytes) {
    if (bytes.size() > std::numeric_limits<std::uint32_t>::max())
        throw std::length_error("field exceeds 32-bit length prefix");
    u32(static_cast<std::uint32_t>(bytes.size()));
    raw(bytes);
}

void ByteWriter::str8(std::string_view s) { blob8(as_view(s)); }
void ByteWriter::str16(std::string_view s) { blob16(as_view(s)); }

std::uint8_t ByteReader::u8() {
    if (remaining() < 1)
        throw DecodeError("truncated input");
    return data_[pos_++];
}

std::uint16_t ByteReader::u16() {
    std::uint16_t hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
}

std::uint32_t ByteReader::u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v = (v << 8) | u8();
    return v;
}

std::uint64_t ByteReader::u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v = (v << 8) | u8();
    return v;
}

ByteView ByteReader::raw(std::size_t count) {
    if (remaining() < count)
        throw DecodeError("truncated input");
    auto out = data_.subspan(pos_, count);
    pos_ += count;
    return out;
}

void ByteReader::skip(std::size_t count) { raw(count); }

Bytes ByteReader::blob8() {
    auto v = raw(u8());
    return {v.begin(), v.end()};
}

Bytes ByteReader::blob16() {
    auto v = raw(u16());
    return {v.begin(), v.end()};
}

Bytes ByteReader::blob32() {
    auto v = blob32_view();
    return {v.begin(), v.end()};
}

ByteView ByteReader::blob32_view() { return raw(u32()); }

std::string ByteReader::str8() {
    auto v = raw(u8());
    return {v.begin(), v.end()};
}

std::string ByteReader::str16() {
    auto v = raw(u16());
    return {v.begin(), v.end()};
}

void ByteReader::expect_done() const {
    if (!done())
        throw DecodeError("trailing bytes after message");
}

std::string to_hex(ByteView bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        throw DecodeError("invalid hex digit");
    };
    if (hex.size() % 2 != 0)
        throw DecodeError("odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

} // namespace partialdir
