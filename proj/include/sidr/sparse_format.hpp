// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sidr {

/// Fixed-length bit sequence. Bit i describes dense index i. Storage is
/// little-endian in both word and bit order, so bit i lives in word i/64
/// at position i%64.
class Bitmap {
public:
    using word_type = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    Bitmap() = default;
    explicit Bitmap(std::size_t length);

    /// Parses an index-0-first string of '0'/'1' characters, e.g. "10001101"
    /// has bits 0, 4, 5 and 7 set.
    static Bitmap from_string(std::string_view bits);
    std::string to_string() const;

    std::size_t size() const noexcept { return length_; }
    bool test(std::size_t i) const;
    void set(std::size_t i, bool value = true);

    std::size_t popcount() const noexcept;
    /// Number of set bits strictly before position `end` (end <= size()).
    std::size_t count_before(std::size_t end) const;
    /// Up to 64 bits starting at `pos`, bit pos in the LSB. Bits past the
    /// end read as zero.
    word_type extract(std::size_t pos, std::size_t count) const;

    std::span<const word_type> words() const noexcept { return words_; }

    friend bool operator==(const Bitmap&, const Bitmap&) = default;

private:
    std::size_t length_ = 0;
    std::vector<word_type> words_;
};

/// Original indexes of the set bits, increasing.
using MaskIndex = std::vector<std::uint32_t>;

/// Bitmap plus the packed non-zero values at its set positions.
class CompressedVector {
public:
    CompressedVector() = default;
    /// Throws Errc::corrupt_input unless values.size() == popcount(bitmap).
    CompressedVector(Bitmap bitmap, std::vector<std::int8_t> values);

    const Bitmap& bitmap() const noexcept { return bitmap_; }
    std::span<const std::int8_t> values() const noexcept { return values_; }
    std::size_t length() const noexcept { return bitmap_.size(); }
    std::size_t nnz() const noexcept { return values_.size(); }

    friend bool operator==(const CompressedVector&,
                           const CompressedVector&) = default;

private:
    Bitmap bitmap_;
    std::vector<std::int8_t> values_;
};

CompressedVector compress(std::span<const std::int8_t> dense);
std::vector<std::int8_t> decompress(const CompressedVector& cv);

MaskIndex mask_index(const Bitmap& bm);

/// Compressed position of a set bit. Throws Errc::invalid_argument when the
/// index is out of range or the bit is clear.
std::size_t rank(const Bitmap& bm, std::size_t original_index);

// Compressed-stream wire layout: u32 LE length K, ceil(K/8) bitmap bytes
// (bit i in byte i/8 at bit i%8), then the values as raw signed bytes.
std::vector<std::uint8_t> encode_stream(const CompressedVector& cv);
/// Throws Errc::truncated on short input and Errc::corrupt_input on
/// trailing bytes.
CompressedVector decode_stream(std::span<const std::uint8_t> bytes);

}  // namespace sidr
