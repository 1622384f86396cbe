/*
Copyright 2026 The lzrobust Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef LZROBUST_BITS_HPP
#define LZROBUST_BITS_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lzr {

/// Raised whenever a decoder runs out of input or meets an impossible field.
class MalformedInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A finite word over {0,1}. One byte per symbol: inputs, names and codewords
/// all use this type, and the algorithms index it heavily.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t n, uint8_t b = 0) : bits_(n, b) {}
    BitString(std::initializer_list<int> bits) {
        bits_.reserve(bits.size());
        for (int b : bits) bits_.push_back(static_cast<uint8_t>(b != 0));
    }
    explicit BitString(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
        for (auto &b : bits_) b = b != 0;
    }

    /// Parse a string of '0'/'1' characters.
    static BitString from_string(std::string_view s) {
        BitString out;
        out.bits_.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1') throw std::invalid_argument("BitString: expected only '0' and '1'");
            out.bits_.push_back(static_cast<uint8_t>(c - '0'));
        }
        return out;
    }

    std::string to_string() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
        return s;
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
    void set(std::size_t i, uint8_t b) noexcept { bits_[i] = b != 0; }
    void push_back(uint8_t b) { bits_.push_back(static_cast<uint8_t>(b != 0)); }
    void reserve(std::size_t n) { bits_.reserve(n); }
    void clear() noexcept { bits_.clear(); }

    /// Append `count` low-order bits of `value`, most significant first.
    void append_uint(uint64_t value, unsigned count) {
        for (unsigned i = count; i-- > 0;) bits_.push_back(static_cast<uint8_t>((value >> i) & 1u));
    }

    BitString &append(const BitString &other) {
        bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
        return *this;
    }
    BitString &operator+=(const BitString &other) { return append(other); }
    friend BitString operator+(BitString a, const BitString &b) { return a.append(b); }

    BitString substr(std::size_t pos, std::size_t len) const {
        BitString out;
        out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                         bits_.begin() + static_cast<std::ptrdiff_t>(pos + len));
        return out;
    }
    BitString prefix(std::size_t len) const { return substr(0, len); }

    bool is_prefix_of(const BitString &other) const {
        return size() <= other.size() && std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
    }

    std::size_t count_ones() const noexcept {
        std::size_t c = 0;
        for (auto b : bits_) c += b;
        return c;
    }

    std::span<const uint8_t> view() const noexcept { return bits_; }
    const std::vector<uint8_t> &raw() const noexcept { return bits_; }

    auto begin() const noexcept { return bits_.begin(); }
    auto end() const noexcept { return bits_.end(); }

    friend bool operator==(const BitString &, const BitString &) = default;
    friend auto operator<=>(const BitString &, const BitString &) = default;

private:
    std::vector<uint8_t> bits_;
};

using BinaryWord = BitString;

/// Sequential reader over a BitString.
class BitReader {
public:
    explicit BitReader(const BitString &s, std::size_t pos = 0) : s_(&s), pos_(pos) {}

    uint8_t read_bit() {
        if (pos_ >= s_->size()) throw MalformedInput("bit stream exhausted");
        return (*s_)[pos_++];
    }
    uint64_t read_uint(unsigned count) {
        if (count > 64) throw MalformedInput("field wider than 64 bits");
        uint64_t v = 0;
        for (unsigned i = 0; i < count; ++i) v = (v << 1) | read_bit();
        return v;
    }
    BitString read_bits(std::size_t count) {
        if (remaining() < count) throw MalformedInput("bit stream exhausted");
        BitString out = s_->substr(pos_, count);
        pos_ += count;
        return out;
    }
    /// Bit at an absolute position, zero past the end (lookahead for decoders
    /// that finish by seeking back).
    uint8_t bit_or_zero(std::size_t pos) const noexcept { return pos < s_->size() ? (*s_)[pos] : 0; }
    void seek(std::size_t pos) {
        if (pos > s_->size()) throw MalformedInput("bit stream exhausted");
        pos_ = pos;
    }
    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return s_->size() - pos_; }
    bool at_end() const noexcept { return pos_ >= s_->size(); }

private:
    const BitString *s_;
    std::size_t pos_;
};

inline unsigned floor_log2(uint64_t k) noexcept { return static_cast<unsigned>(std::bit_width(k)) - 1; }

/// Elias-delta codeword length for k >= 1.
inline std::size_t int_code_length(uint64_t k) {
    if (k == 0) throw std::invalid_argument("int_code_length: k must be positive");
    const unsigned n = floor_log2(k) + 1;
    const unsigned l = floor_log2(n) + 1;
    return (l - 1) + l + (n - 1);
}

/// Prefix-free integer code (Elias delta): len(k) = floor(log k) + 2 floor(log(floor(log k)+1)) + 1.
inline void encode_int(uint64_t k, BitString &out) {
    if (k == 0) throw std::invalid_argument("encode_int: k must be positive");
    const unsigned n = floor_log2(k) + 1;
    const unsigned l = floor_log2(n) + 1;
    for (unsigned i = 0; i + 1 < l; ++i) out.push_back(0);
    out.append_uint(n, l);
    out.append_uint(k, n - 1);
}

inline BitString encode_int(uint64_t k) {
    BitString out;
    encode_int(k, out);
    return out;
}

inline uint64_t decode_int(BitReader &in) {
    unsigned zeros = 0;
    while (in.read_bit() == 0) {
        if (++zeros > 6) throw MalformedInput("integer code prefix too long");
    }
    const unsigned l = zeros + 1;
    const uint64_t n = (uint64_t{1} << zeros) | in.read_uint(zeros);
    if (n > 64 || n < l) throw MalformedInput("integer code length field out of range");
    const uint64_t rest = in.read_uint(static_cast<unsigned>(n - 1));
    return n == 64 ? (uint64_t{1} << 63) | rest : (uint64_t{1} << (n - 1)) | rest;
}

/// Decode one integer from the start of `s`; returns (value, bits consumed).
inline std::pair<uint64_t, std::size_t> decode_int(const BitString &s) {
    BitReader in(s);
    const uint64_t k = decode_int(in);
    return {k, in.position()};
}

/// encode_int(len(u)+1) ++ u, so the empty word is representable.
inline BitString self_delimit(const BitString &u) {
    BitString out = encode_int(u.size() + 1);
    out.append(u);
    return out;
}

inline BitString read_self_delimited(BitReader &in) {
    const uint64_t len = decode_int(in) - 1;
    return in.read_bits(len);
}

/// Truncated-binary ("phase-in") code for a value in [0, k): the first
/// 2^ceil(log k) - k values take one bit less. k == 1 costs nothing.
inline void encode_phased(uint64_t value, uint64_t k, BitString &out) {
    if (k <= 1) return;
    const unsigned b = static_cast<unsigned>(std::bit_width(k - 1));
    const uint64_t shorter = (uint64_t{1} << b) - k;
    if (value < shorter) out.append_uint(value, b - 1);
    else out.append_uint(value + shorter, b);
}

inline std::size_t phased_length(uint64_t value, uint64_t k) noexcept {
    if (k <= 1) return 0;
    const unsigned b = static_cast<unsigned>(std::bit_width(k - 1));
    return value < (uint64_t{1} << b) - k ? b - 1 : b;
}

inline uint64_t decode_phased(BitReader &in, uint64_t k) {
    if (k <= 1) return 0;
    const unsigned b = static_cast<unsigned>(std::bit_width(k - 1));
    const uint64_t shorter = (uint64_t{1} << b) - k;
    uint64_t v = in.read_uint(b - 1);
    if (v < shorter) return v;
    v = (v << 1) | in.read_bit();
    return v - shorter;
}

// Byte container: 8-byte little-endian bit count, then payload packed
// most-significant-bit first, last byte zero padded.

inline std::vector<uint8_t> pack_stream(const BitString &s) {
    std::vector<uint8_t> out(8 + (s.size() + 7) / 8, 0);
    uint64_t n = s.size();
    for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = static_cast<uint8_t>(n >> (8 * i));
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i]) out[8 + i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
    return out;
}

inline BitString unpack_stream(std::span<const uint8_t> bytes) {
    if (bytes.size() < 8) throw MalformedInput("stream shorter than its header");
    uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= uint64_t{bytes[static_cast<std::size_t>(i)]} << (8 * i);
    if ((bytes.size() - 8) * 8 < n || (bytes.size() - 8) != (n + 7) / 8)
        throw MalformedInput("stream payload does not match its bit count");
    BitString s(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i) s.set(i, (bytes[8 + i / 8] >> (7 - i % 8)) & 1u);
    return s;
}

inline void write_stream_file(const std::string &path, const BitString &s) {
    const auto bytes = pack_stream(s);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline BitString read_stream_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return unpack_stream(bytes);
}

} // namespace lzr

#endif
