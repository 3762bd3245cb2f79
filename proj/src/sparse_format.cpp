// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sidr/sparse_format.hpp"

#include <bit>

#include "sidr/error.hpp"

namespace sidr {

Bitmap::Bitmap(std::size_t length)
    : length_(length), words_((length + word_bits - 1) / word_bits, 0)
{}

Bitmap Bitmap::from_string(std::string_view bits)
{
    Bitmap bm(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            bm.set(i);
        } else if (bits[i] != '0') {
            throw Error(Errc::parse, "bitmap string may only contain 0 and 1");
        }
    }
    return bm;
}

std::string Bitmap::to_string() const
{
    std::string out(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if (test(i)) out[i] = '1';
    }
    return out;
}

bool Bitmap::test(std::size_t i) const
{
    if (i >= length_) throw Error(Errc::invalid_argument, "bit index out of range");
    return (words_[i / word_bits] >> (i % word_bits)) & 1u;
}

void Bitmap::set(std::size_t i, bool value)
{
    if (i >= length_) throw Error(Errc::invalid_argument, "bit index out of range");
    const word_type mask = word_type{1} << (i % word_bits);
    if (value) {
        words_[i / word_bits] |= mask;
    } else {
        words_[i / word_bits] &= ~mask;
    }
}

std::size_t Bitmap::popcount() const noexcept
{
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::size_t Bitmap::count_before(std::size_t end) const
{
    if (end > length_) throw Error(Errc::invalid_argument, "rank position out of range");
    std::size_t n = 0;
    const std::size_t full = end / word_bits;
    for (std::size_t w = 0; w < full; ++w) {
        n += static_cast<std::size_t>(std::popcount(words_[w]));
    }
    if (const auto rem = end % word_bits; rem != 0) {
        n += static_cast<std::size_t>(
            std::popcount(words_[full] & ((word_type{1} << rem) - 1)));
    }
    return n;
}

Bitmap::word_type Bitmap::extract(std::size_t pos, std::size_t count) const
{
    if (count == 0 || pos >= length_) return 0;
    if (count > word_bits) count = word_bits;
    const std::size_t w = pos / word_bits;
    const std::size_t shift = pos % word_bits;
    word_type v = words_[w] >> shift;
    if (shift != 0 && w + 1 < words_.size()) {
        v |= words_[w + 1] << (word_bits - shift);
    }
    if (count < word_bits) v &= (word_type{1} << count) - 1;
    return v;
}

CompressedVector::CompressedVector(Bitmap bitmap, std::vector<std::int8_t> values)
    : bitmap_(std::move(bitmap)), values_(std::move(values))
{
    if (values_.size() != bitmap_.popcount()) {
        throw Error(Errc::corrupt_input,
                    "compressed vector holds " + std::to_string(values_.size()) +
                        " values for " + std::to_string(bitmap_.popcount()) +
                        " set bits");
    }
}

CompressedVector compress(std::span<const std::int8_t> dense)
{
    Bitmap bm(dense.size());
    std::vector<std::int8_t> values;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0) {
            bm.set(i);
            values.push_back(dense[i]);
        }
    }
    return CompressedVector(std::move(bm), std::move(values));
}

std::vector<std::int8_t> decompress(const CompressedVector& cv)
{
    std::vector<std::int8_t> dense(cv.length(), 0);
    const auto values = cv.values();
    std::size_t j = 0;
    for (auto idx : mask_index(cv.bitmap())) dense[idx] = values[j++];
    return dense;
}

MaskIndex mask_index(const Bitmap& bm)
{
    MaskIndex out;
    out.reserve(bm.popcount());
    const auto words = bm.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        for (auto bits = words[w]; bits != 0; bits &= bits - 1) {
            out.push_back(static_cast<std::uint32_t>(
                w * Bitmap::word_bits + static_cast<std::size_t>(std::countr_zero(bits))));
        }
    }
    return out;
}

std::size_t rank(const Bitmap& bm, std::size_t original_index)
{
    if (original_index >= bm.size() || !bm.test(original_index)) {
        throw Error(Errc::invalid_argument,
                    "rank of index " + std::to_string(original_index) +
                        " requested but the bit is not set");
    }
    return bm.count_before(original_index);
}

std::vector<std::uint8_t> encode_stream(const CompressedVector& cv)
{
    const auto k = cv.length();
    if (k > UINT32_MAX) throw Error(Errc::invalid_argument, "stream too long to encode");
    std::vector<std::uint8_t> out;
    out.reserve(4 + (k + 7) / 8 + cv.nnz());
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(k >> (8 * b)));
    for (std::size_t byte = 0; byte < (k + 7) / 8; ++byte) {
        out.push_back(static_cast<std::uint8_t>(cv.bitmap().extract(byte * 8, 8)));
    }
    for (auto v : cv.values()) out.push_back(static_cast<std::uint8_t>(v));
    return out;
}

CompressedVector decode_stream(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 4) throw Error(Errc::truncated, "stream shorter than its length field");
    std::size_t k = 0;
    for (int b = 0; b < 4; ++b) k |= std::size_t{bytes[b]} << (8 * b);
    const std::size_t bitmap_bytes = (k + 7) / 8;
    if (bytes.size() < 4 + bitmap_bytes) throw Error(Errc::truncated, "stream bitmap truncated");

    Bitmap bm(k);
    for (std::size_t byte = 0; byte < bitmap_bytes; ++byte) {
        const auto v = bytes[4 + byte];
        for (std::size_t bit = 0; bit < 8; ++bit) {
            if (!((v >> bit) & 1u)) continue;
            const auto i = byte * 8 + bit;
            if (i >= k) throw Error(Errc::corrupt_input, "bitmap padding bits must be zero");
            bm.set(i);
        }
    }
    const auto nnz = bm.popcount();
    const auto payload = bytes.subspan(4 + bitmap_bytes);
    if (payload.size() < nnz) throw Error(Errc::truncated, "stream values truncated");
    if (payload.size() > nnz) throw Error(Errc::corrupt_input, "trailing bytes after stream values");
    std::vector<std::int8_t> values(nnz);
    for (std::size_t j = 0; j < nnz; ++j) values[j] = static_cast<std::int8_t>(payload[j]);
    return CompressedVector(std::move(bm), std::move(values));
}

}  // namespace sidr
