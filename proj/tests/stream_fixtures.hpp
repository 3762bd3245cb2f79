// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-built stream tiles for engine tests.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "sidr/engine.hpp"

namespace fixture {

inline sidr::MatchStream pairs(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> xs)
{
    sidr::MatchStream s;
    for (auto [i, w] : xs) s.push_back({i, w});
    return s;
}

// Owns the buffers a StreamTile points into.
struct OwnedTile {
    std::vector<std::vector<std::int8_t>> inputs;
    std::vector<std::vector<std::int8_t>> weights;
    sidr::StreamTile tile;

    OwnedTile(std::vector<std::vector<std::int8_t>> in, std::vector<std::vector<std::int8_t>> w,
              std::vector<sidr::MatchStream> streams)
        : inputs(std::move(in)), weights(std::move(w))
    {
        tile.rows = inputs.size();
        tile.cols = weights.size();
        for (const auto& b : inputs) tile.input_buffers.emplace_back(b);
        for (const auto& b : weights) tile.weight_buffers.emplace_back(b);
        tile.streams = std::move(streams);
    }

    OwnedTile(const OwnedTile&) = delete;
    OwnedTile& operator=(const OwnedTile&) = delete;
};

// 2x2 tile where every PE's only match sits 8 entries past the window of one
// of its operands, so no PE fits under either base on the first cycle.
// Streams built from bitmaps cannot do this: the PE holding the smallest
// original index is always the minimum of its row and its column.
inline OwnedTile mutual_stall()
{
    const std::vector<std::int8_t> buf{1, 2, 3, 4, 5, 6, 7, 8, 9};
    return OwnedTile({buf, buf}, {buf, buf},
                     {pairs({{0, 8}}), pairs({{8, 0}}), pairs({{8, 0}}), pairs({{0, 8}})});
}

}  // namespace fixture
