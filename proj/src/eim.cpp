// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sidr/eim.hpp"

#include <algorithm>
#include <bit>

#include "sidr/error.hpp"

namespace sidr {

namespace {

void require_same_length(const Bitmap& a, const Bitmap& b)
{
    if (a.size() != b.size()) {
        throw Error(Errc::dimension_mismatch,
                    "bitmap lengths differ: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
    }
}

}  // namespace

Bitmap match_bitmap(const Bitmap& bmi, const Bitmap& bmw)
{
    require_same_length(bmi, bmw);
    Bitmap out(bmi.size());
    const auto a = bmi.words();
    const auto b = bmw.words();
    for (std::size_t w = 0; w < a.size(); ++w) {
        for (auto bits = a[w] & b[w]; bits != 0; bits &= bits - 1) {
            out.set(w * Bitmap::word_bits + static_cast<std::size_t>(std::countr_zero(bits)));
        }
    }
    return out;
}

Bitmap masked_bitmap(const Bitmap& bmnz, const MaskIndex& mid)
{
    Bitmap out(mid.size());
    for (std::size_t j = 0; j < mid.size(); ++j) {
        if (mid[j] >= bmnz.size()) {
            throw Error(Errc::invalid_argument,
                        "mask index entry " + std::to_string(mid[j]) +
                            " outside bitmap of length " + std::to_string(bmnz.size()));
        }
        if (bmnz.test(mid[j])) out.set(j);
    }
    return out;
}

MatchStream effective_indexes(const Bitmap& bmi, const Bitmap& bmw)
{
    const Bitmap bmnz = match_bitmap(bmi, bmw);
    const auto eff_i = mask_index(masked_bitmap(bmnz, mask_index(bmi)));
    const auto eff_w = mask_index(masked_bitmap(bmnz, mask_index(bmw)));
    // Both masked bitmaps carry exactly popcount(bmnz) set bits.
    MatchStream out(eff_i.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {eff_i[k], eff_w[k]};
    return out;
}

MatchStream effective_indexes_segmented(const CompressedVector& input,
                                        const CompressedVector& weight,
                                        std::size_t segment_length)
{
    const Bitmap& bmi = input.bitmap();
    const Bitmap& bmw = weight.bitmap();
    require_same_length(bmi, bmw);
    if (segment_length == 0) throw Error(Errc::invalid_argument, "segment length must be >= 1");

    MatchStream out;
    out.reserve(match_count(bmi, bmw));
    std::uint32_t base_i = 0;
    std::uint32_t base_w = 0;
    const std::size_t k = bmi.size();
    for (std::size_t seg = 0; seg < k; seg += segment_length) {
        const std::size_t seg_end = std::min(k, seg + segment_length);
        std::uint32_t local_i = 0;
        std::uint32_t local_w = 0;
        for (std::size_t pos = seg; pos < seg_end; pos += Bitmap::word_bits) {
            const std::size_t n = std::min(Bitmap::word_bits, seg_end - pos);
            const auto a = bmi.extract(pos, n);
            const auto b = bmw.extract(pos, n);
            for (auto both = a & b; both != 0; both &= both - 1) {
                const auto below = (both & (~both + 1)) - 1;
                out.push_back({base_i + local_i + static_cast<std::uint32_t>(std::popcount(a & below)),
                               base_w + local_w + static_cast<std::uint32_t>(std::popcount(b & below))});
            }
            local_i += static_cast<std::uint32_t>(std::popcount(a));
            local_w += static_cast<std::uint32_t>(std::popcount(b));
        }
        base_i += local_i;
        base_w += local_w;
    }
    return out;
}

std::size_t match_count(const Bitmap& bmi, const Bitmap& bmw)
{
    require_same_length(bmi, bmw);
    const auto a = bmi.words();
    const auto b = bmw.words();
    std::size_t n = 0;
    for (std::size_t w = 0; w < a.size(); ++w) {
        n += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
    }
    return n;
}

}  // namespace sidr
