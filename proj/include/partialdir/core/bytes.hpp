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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace partialdir {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

class DecodeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Big-endian writer. In counting mode nothing is stored and only the
/// length advances, which lets callers size a frame without building it.
class ByteWriter {
  public:
    ByteWriter() = default;
    static ByteWriter counting();

    void u8(std::uint8_t v);
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(ByteView bytes);
    void zeros(std::size_t count);

    void blob8(ByteView bytes);
    void blob16(ByteView bytes);
    void blob32(ByteView bytes);
    void str8(std::string_view s);
    void str16(std::string_view s);

    std::size_t size() const { return size_; }
    bool is_counting() const { return counting_; }
    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }

  private:
    Bytes buf_;
    std::size_t size_ = 0;
    bool counting_ = false;
};

class ByteReader {
  public:
    explicit ByteReader(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    ByteView raw(std::size_t count);
    void skip(std::size_t count);

    Bytes blob8();
    Bytes blob16();
    Bytes blob32();
    ByteView blob32_view();
    std::string str8();
    std::string str16();

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    void expect_done() const;

  private:
    ByteView data_;
    std::size_t pos_ = 0;
};

inline ByteView as_view(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t *>(s.data()), s.size()};
}

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

} // namespace partialdir
