// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sidr/eim.hpp"
#include "sidr/matrix.hpp"
#include "sidr/sparse_format.hpp"

namespace sidr {

enum class DeadlockPolicy { error, direct_fetch };

struct SimConfig {
    std::size_t array_rows = 16;
    std::size_t array_cols = 16;
    std::size_t shared_reg_size = 8;
    std::size_t segment_length = default_segment_length;
    std::size_t output_write_bytes = 1;
    bool count_bitmap_bytes = false;
    DeadlockPolicy deadlock_policy = DeadlockPolicy::direct_fetch;
    std::uint64_t rng_seed = 0;
    // Worker threads for independent tiles; 0 picks the hardware concurrency.
    // Has no effect on results.
    std::size_t threads = 0;

    /// Throws Errc::invalid_argument on a zero dimension or size.
    void validate() const;
};

struct Counters {
    std::uint64_t cycles = 0;
    std::uint64_t active_macs = 0;
    std::uint64_t idle_pe_cycles = 0;
    std::uint64_t input_bytes_read = 0;
    std::uint64_t weight_bytes_read = 0;
    std::uint64_t output_bytes_written = 0;
    std::uint64_t bitmap_bytes_read = 0;
    std::uint64_t refill_events = 0;
    std::uint64_t zero_progress_events = 0;
    std::uint64_t direct_fetch_events = 0;
    // PEs whose running sum left the signed 24-bit adder range.
    std::uint64_t accumulator_range_events = 0;
    // Tiles whose window reads exceeded their compressed entry count.
    std::uint64_t read_once_violations = 0;

    std::uint64_t total_bytes() const noexcept
    {
        return input_bytes_read + weight_bytes_read + output_bytes_written + bitmap_bytes_read;
    }

    Counters& operator+=(const Counters& o) noexcept;
    friend bool operator==(const Counters&, const Counters&) = default;
};

/// Rows of A and columns of B feeding one output tile. Every stream covers
/// the same K range.
struct TileJob {
    std::span<const CompressedVector> input_rows;
    std::span<const CompressedVector> weight_cols;
};

/// Engine-level view of a tile: compressed value buffers per row/column and
/// the per-PE match streams (row-major, rows * cols entries).
struct StreamTile {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::span<const std::int8_t>> input_buffers;
    std::vector<std::span<const std::int8_t>> weight_buffers;
    std::vector<MatchStream> streams;

    const MatchStream& stream(std::size_t r, std::size_t c) const { return streams[r * cols + c]; }
};

/// Runs EIM for every PE of the tile.
StreamTile make_stream_tile(const TileJob& tile, std::size_t segment_length);

enum class PeActivity : std::uint8_t { executed, idle, done };

struct PeTrace {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    PeActivity activity = PeActivity::done;
    // Valid unless activity == done.
    std::uint32_t eff_input = 0;
    std::uint32_t eff_weight = 0;
    std::uint32_t offset_input = 0;
    std::uint32_t offset_weight = 0;
    bool direct_fetch = false;
};

inline constexpr std::uint32_t no_index = std::numeric_limits<std::uint32_t>::max();

struct CycleTrace {
    std::uint64_t cycle = 0;  // 1-based
    std::uint32_t tile_row = 0;
    std::uint32_t tile_col = 0;
    // no_index when every PE of the row/column is done.
    std::vector<std::uint32_t> shared_input;
    std::vector<std::uint32_t> shared_weight;
    std::vector<PeTrace> pes;
    bool zero_progress = false;
};

using TraceSink = std::function<void(const CycleTrace&)>;

struct StalledPe {
    std::uint32_t row;
    std::uint32_t col;
    std::uint32_t offset_input;
    std::uint32_t offset_weight;
};

/// Thrown under DeadlockPolicy::error. Carries every stalled PE.
class DeadlockError : public Error {
public:
    DeadlockError(std::uint64_t cycle, std::vector<StalledPe> stalled);

    std::uint64_t cycle() const noexcept { return cycle_; }
    const std::vector<StalledPe>& stalled() const noexcept { return stalled_; }

private:
    std::uint64_t cycle_;
    std::vector<StalledPe> stalled_;
};

struct StepReport {
    std::size_t executed = 0;
    std::size_t retired = 0;
    bool zero_progress = false;
};

/// Output-stationary PE array running the shared-register dataflow over one
/// tile. Each PE walks its match stream; each row (column) keeps a window of
/// shared_reg_size compressed inputs (weights) starting at the smallest
/// pending effective index of its non-finished PEs. A PE executes when both
/// of its operands sit inside the windows and waits otherwise. Finished PEs
/// drop out of the minima.
class SidrArray {
public:
    SidrArray(const StreamTile& tile, const SimConfig& cfg);

    bool finished() const noexcept { return active_pes_ == 0; }
    std::uint64_t cycle() const noexcept { return cycle_; }

    /// One iteration of the dataflow loop. Precondition: !finished().
    StepReport step(Counters& counters, CycleTrace* trace = nullptr);

    std::span<const std::uint32_t> shared_input() const noexcept { return shared_input_; }
    std::span<const std::uint32_t> shared_weight() const noexcept { return shared_weight_; }
    std::span<const std::int64_t> accumulators() const noexcept { return acc_; }
    /// Consumed pairs per PE.
    std::span<const std::uint32_t> cursors() const noexcept { return cursor_; }

private:
    void refill(std::uint32_t base, std::size_t length, std::uint32_t& covered_end,
                std::uint64_t& bytes, Counters& counters) const;
    void execute(std::size_t pe, Counters& counters);
    std::size_t handle_zero_progress(Counters& counters);

    const StreamTile& tile_;
    SimConfig cfg_;
    std::uint64_t cycle_ = 0;
    std::size_t active_pes_ = 0;

    std::vector<std::uint32_t> cursor_;
    std::vector<std::uint32_t> eff_input_;   // no_index once done
    std::vector<std::uint32_t> eff_weight_;
    std::vector<std::int64_t> acc_;
    std::vector<bool> range_flagged_;

    std::vector<std::uint32_t> shared_input_;
    std::vector<std::uint32_t> shared_weight_;
    std::vector<std::uint32_t> input_covered_;   // end of the highest window fetched so far
    std::vector<std::uint32_t> weight_covered_;
};

struct TileResult {
    OutputMatrix output;  // rows x cols of the tile
    Counters counters;
};

/// Steps the array until every PE is done, then charges output writeback
/// and checks the read-once bound.
TileResult run_stream_tile(const StreamTile& tile, const SimConfig& cfg,
                           const TraceSink& sink = {});

/// EIM followed by run_stream_tile. Adds bitmap metadata bytes when
/// cfg.count_bitmap_bytes is set.
TileResult run_tile(const TileJob& tile, const SimConfig& cfg, const TraceSink& sink = {});

/// Raw outcome of a tiled matrix multiply.
struct MatmulRun {
    OutputMatrix output;
    Counters counters;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::uint64_t total_matches = 0;
    std::uint64_t input_nnz = 0;
    std::uint64_t weight_nnz = 0;
};

/// Tiles C = A x B into array_rows x array_cols output blocks and runs each
/// over the full K range. Tiles are independent and may run on worker
/// threads; tracing forces sequential execution so cycle numbers are global.
MatmulRun run_matmul(const DenseMatrix& a, const DenseMatrix& b, const SimConfig& cfg,
                     const TraceSink& sink = {});

std::vector<CompressedVector> compress_rows(const DenseMatrix& m);
std::vector<CompressedVector> compress_cols(const DenseMatrix& m);

}  // namespace sidr
