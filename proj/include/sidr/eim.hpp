// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sidr/sparse_format.hpp"

namespace sidr {

/// Compressed-buffer indexes of one non-zero multiplication.
struct MatchPair {
    std::uint32_t eff_input;
    std::uint32_t eff_weight;

    friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

/// Ordered matches for one PE, in original-index order. Both components are
/// strictly increasing along the stream.
using MatchStream = std::vector<MatchPair>;

inline constexpr std::size_t default_segment_length = 64;

/// BMNZ: bitwise AND of the input and weight bitmaps.
Bitmap match_bitmap(const Bitmap& bmi, const Bitmap& bmw);

/// Gathers bmnz at each mask-index entry (IMBM / WMBM). Output bit j is
/// bmnz[mid[j]].
Bitmap masked_bitmap(const Bitmap& bmnz, const MaskIndex& mid);

/// Mask-index route: the set positions of masked_bitmap(BMNZ, IMId) are the
/// effective input indexes, likewise for weights.
MatchStream effective_indexes(const Bitmap& bmi, const Bitmap& bmw);

/// Rank route over fixed-width windows. Each window's local ranks are offset
/// by the running popcounts of the preceding windows. Produces the same
/// stream as effective_indexes for every segment_length >= 1.
MatchStream effective_indexes_segmented(const CompressedVector& input,
                                        const CompressedVector& weight,
                                        std::size_t segment_length = default_segment_length);

/// Number of matches without materializing the stream.
std::size_t match_count(const Bitmap& bmi, const Bitmap& bmw);

}  // namespace sidr
