// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sidr/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <exception>
#include <mutex>
#include <thread>

namespace sidr {

namespace {

constexpr std::int64_t adder_min = -(std::int64_t{1} << 23);
constexpr std::int64_t adder_max = (std::int64_t{1} << 23) - 1;

std::string describe_stall(std::uint64_t cycle, const std::vector<StalledPe>& stalled)
{
    std::string msg = "no PE can make progress at cycle " + std::to_string(cycle) + ":";
    for (const auto& pe : stalled) {
        msg += " PE(" + std::to_string(pe.row) + "," + std::to_string(pe.col) +
               ") offsets (" + std::to_string(pe.offset_input) + "," +
               std::to_string(pe.offset_weight) + ");";
    }
    return msg;
}

}  // namespace

void SimConfig::validate() const
{
    if (array_rows == 0 || array_cols == 0) throw Error(Errc::invalid_argument, "array dimensions must be >= 1");
    if (shared_reg_size == 0) throw Error(Errc::invalid_argument, "shared register size must be >= 1");
    if (segment_length == 0) throw Error(Errc::invalid_argument, "segment length must be >= 1");
    if (output_write_bytes == 0) throw Error(Errc::invalid_argument, "output write bytes must be >= 1");
}

Counters& Counters::operator+=(const Counters& o) noexcept
{
    cycles += o.cycles;
    active_macs += o.active_macs;
    idle_pe_cycles += o.idle_pe_cycles;
    input_bytes_read += o.input_bytes_read;
    weight_bytes_read += o.weight_bytes_read;
    output_bytes_written += o.output_bytes_written;
    bitmap_bytes_read += o.bitmap_bytes_read;
    refill_events += o.refill_events;
    zero_progress_events += o.zero_progress_events;
    direct_fetch_events += o.direct_fetch_events;
    accumulator_range_events += o.accumulator_range_events;
    read_once_violations += o.read_once_violations;
    return *this;
}

DeadlockError::DeadlockError(std::uint64_t cycle, std::vector<StalledPe> stalled)
    : Error(Errc::deadlock, describe_stall(cycle, stalled)), cycle_(cycle), stalled_(std::move(stalled))
{}

StreamTile make_stream_tile(const TileJob& tile, std::size_t segment_length)
{
    StreamTile st;
    st.rows = tile.input_rows.size();
    st.cols = tile.weight_cols.size();
    for (const auto& row : tile.input_rows) st.input_buffers.push_back(row.values());
    for (const auto& col : tile.weight_cols) st.weight_buffers.push_back(col.values());
    st.streams.reserve(st.rows * st.cols);
    for (const auto& row : tile.input_rows) {
        for (const auto& col : tile.weight_cols) {
            st.streams.push_back(effective_indexes_segmented(row, col, segment_length));
        }
    }
    return st;
}

SidrArray::SidrArray(const StreamTile& tile, const SimConfig& cfg)
    : tile_(tile), cfg_(cfg)
{
    cfg_.validate();
    const auto pes = tile.rows * tile.cols;
    if (tile.streams.size() != pes || tile.input_buffers.size() != tile.rows ||
        tile.weight_buffers.size() != tile.cols) {
        throw Error(Errc::invalid_argument, "stream tile shape is inconsistent");
    }
    cursor_.assign(pes, 0);
    eff_input_.assign(pes, no_index);
    eff_weight_.assign(pes, no_index);
    acc_.assign(pes, 0);
    range_flagged_.assign(pes, false);
    shared_input_.assign(tile.rows, 0);
    shared_weight_.assign(tile.cols, 0);
    input_covered_.assign(tile.rows, 0);
    weight_covered_.assign(tile.cols, 0);

    for (std::size_t pe = 0; pe < pes; ++pe) {
        const auto& s = tile.streams[pe];
        const auto in_len = tile.input_buffers[pe / tile.cols].size();
        const auto w_len = tile.weight_buffers[pe % tile.cols].size();
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k].eff_input >= in_len || s[k].eff_weight >= w_len) {
                throw Error(Errc::corrupt_input, "match stream indexes past its buffers");
            }
            if (k > 0 && (s[k].eff_input <= s[k - 1].eff_input || s[k].eff_weight <= s[k - 1].eff_weight)) {
                throw Error(Errc::corrupt_input, "match stream is not strictly increasing");
            }
        }
        if (!s.empty()) {
            eff_input_[pe] = s[0].eff_input;
            eff_weight_[pe] = s[0].eff_weight;
            ++active_pes_;
        }
    }
}

void SidrArray::refill(std::uint32_t base, std::size_t length, std::uint32_t& covered_end,
                       std::uint64_t& bytes, Counters& counters) const
{
    // Only entries not covered by an earlier window are fetched.
    const auto lo = std::max<std::size_t>(base, covered_end);
    const auto top = std::min<std::size_t>(std::size_t{base} + cfg_.shared_reg_size, length);
    if (top > lo) {
        bytes += top - lo;
        covered_end = static_cast<std::uint32_t>(top);
        ++counters.refill_events;
    }
}

void SidrArray::execute(std::size_t pe, Counters& counters)
{
    const auto r = pe / tile_.cols;
    const auto c = pe % tile_.cols;
    acc_[pe] += std::int64_t{tile_.input_buffers[r][eff_input_[pe]]} *
                std::int64_t{tile_.weight_buffers[c][eff_weight_[pe]]};
    if (!range_flagged_[pe] && (acc_[pe] < adder_min || acc_[pe] > adder_max)) {
        range_flagged_[pe] = true;
        ++counters.accumulator_range_events;
    }
    const auto& s = tile_.streams[pe];
    if (++cursor_[pe] == s.size()) {
        eff_input_[pe] = no_index;
        eff_weight_[pe] = no_index;
        --active_pes_;
    } else {
        eff_input_[pe] = s[cursor_[pe]].eff_input;
        eff_weight_[pe] = s[cursor_[pe]].eff_weight;
    }
}

std::size_t SidrArray::handle_zero_progress(Counters& counters)
{
    const auto cols = tile_.cols;
    std::vector<StalledPe> stalled;
    for (std::size_t pe = 0; pe < eff_input_.size(); ++pe) {
        if (eff_input_[pe] == no_index) continue;
        stalled.push_back({static_cast<std::uint32_t>(pe / cols), static_cast<std::uint32_t>(pe % cols),
                           eff_input_[pe] - shared_input_[pe / cols],
                           eff_weight_[pe] - shared_weight_[pe % cols]});
    }
    if (cfg_.deadlock_policy == DeadlockPolicy::error) throw DeadlockError(cycle_, std::move(stalled));

    // Row-major scan keeps the first of equal offset sums, i.e. (row, col) order.
    const auto best = std::min_element(stalled.begin(), stalled.end(), [](const auto& a, const auto& b) {
        return std::uint64_t{a.offset_input} + a.offset_weight < std::uint64_t{b.offset_input} + b.offset_weight;
    });
    const auto pe = std::size_t{best->row} * cols + best->col;
    ++counters.input_bytes_read;
    ++counters.weight_bytes_read;
    ++counters.direct_fetch_events;
    execute(pe, counters);
    return pe;
}

StepReport SidrArray::step(Counters& counters, CycleTrace* trace)
{
    assert(!finished());
    const auto rows = tile_.rows;
    const auto cols = tile_.cols;
    const auto window = cfg_.shared_reg_size;
    ++cycle_;

    for (std::size_t r = 0; r < rows; ++r) {
        std::uint32_t lo = no_index;
        for (std::size_t c = 0; c < cols; ++c) lo = std::min(lo, eff_input_[r * cols + c]);
        assert(lo >= shared_input_[r]);
        shared_input_[r] = lo;
        if (lo != no_index) {
            refill(lo, tile_.input_buffers[r].size(), input_covered_[r], counters.input_bytes_read, counters);
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        std::uint32_t lo = no_index;
        for (std::size_t r = 0; r < rows; ++r) lo = std::min(lo, eff_weight_[r * cols + c]);
        assert(lo >= shared_weight_[c]);
        shared_weight_[c] = lo;
        if (lo != no_index) {
            refill(lo, tile_.weight_buffers[c].size(), weight_covered_[c], counters.weight_bytes_read, counters);
        }
    }

    if (trace != nullptr) {
        trace->cycle = cycle_;
        trace->shared_input = shared_input_;
        trace->shared_weight = shared_weight_;
        trace->pes.assign(rows * cols, PeTrace{});
        trace->zero_progress = false;
    }

    StepReport report;
    for (std::size_t pe = 0; pe < rows * cols; ++pe) {
        if (eff_input_[pe] == no_index) {
            if (trace != nullptr) {
                trace->pes[pe].row = static_cast<std::uint32_t>(pe / cols);
                trace->pes[pe].col = static_cast<std::uint32_t>(pe % cols);
            }
            continue;
        }
        const auto off_i = eff_input_[pe] - shared_input_[pe / cols];
        const auto off_w = eff_weight_[pe] - shared_weight_[pe % cols];
        const bool fits = off_i < window && off_w < window;
        if (trace != nullptr) {
            trace->pes[pe] = {static_cast<std::uint32_t>(pe / cols), static_cast<std::uint32_t>(pe % cols),
                              fits ? PeActivity::executed : PeActivity::idle,
                              eff_input_[pe], eff_weight_[pe], off_i, off_w, false};
        }
        if (fits) {
            execute(pe, counters);
            ++report.executed;
            if (eff_input_[pe] == no_index) ++report.retired;
        }
    }

    if (report.executed == 0) {
        report.zero_progress = true;
        ++counters.zero_progress_events;
        if (trace != nullptr) trace->zero_progress = true;
        const auto pe = handle_zero_progress(counters);
        ++report.executed;
        if (eff_input_[pe] == no_index) ++report.retired;
        if (trace != nullptr) {
            trace->pes[pe].activity = PeActivity::executed;
            trace->pes[pe].direct_fetch = true;
        }
    }

    ++counters.cycles;
    counters.active_macs += report.executed;
    counters.idle_pe_cycles += rows * cols - report.executed;
    return report;
}

TileResult run_stream_tile(const StreamTile& tile, const SimConfig& cfg, const TraceSink& sink)
{
    TileResult result;
    SidrArray array(tile, cfg);
    CycleTrace trace;
    while (!array.finished()) {
        array.step(result.counters, sink ? &trace : nullptr);
        if (sink) sink(trace);
    }

    result.output = OutputMatrix(tile.rows, tile.cols);
    const auto acc = array.accumulators();
    for (std::size_t pe = 0; pe < acc.size(); ++pe) {
        result.output.data()[pe] = static_cast<std::int32_t>(acc[pe]);
    }
    result.counters.output_bytes_written += tile.rows * tile.cols * cfg.output_write_bytes;

    std::uint64_t input_entries = 0;
    std::uint64_t weight_entries = 0;
    for (const auto& b : tile.input_buffers) input_entries += b.size();
    for (const auto& b : tile.weight_buffers) weight_entries += b.size();
    // Direct fetches bypass the shared windows and are charged on top.
    const auto& c = result.counters;
    if (c.input_bytes_read - c.direct_fetch_events > input_entries ||
        c.weight_bytes_read - c.direct_fetch_events > weight_entries) {
        ++result.counters.read_once_violations;
    }
    return result;
}

TileResult run_tile(const TileJob& tile, const SimConfig& cfg, const TraceSink& sink)
{
    cfg.validate();
    const auto st = make_stream_tile(tile, cfg.segment_length);
    auto result = run_stream_tile(st, cfg, sink);
    if (cfg.count_bitmap_bytes) {
        const std::size_t k = tile.input_rows.empty() ? 0 : tile.input_rows.front().length();
        result.counters.bitmap_bytes_read += (st.rows + st.cols) * ((k + 7) / 8);
    }
    return result;
}

std::vector<CompressedVector> compress_rows(const DenseMatrix& m)
{
    std::vector<CompressedVector> out;
    out.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(compress(m.row(r)));
    return out;
}

std::vector<CompressedVector> compress_cols(const DenseMatrix& m)
{
    std::vector<CompressedVector> out;
    out.reserve(m.cols());
    std::vector<std::int8_t> column(m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c) {
        for (std::size_t r = 0; r < m.rows(); ++r) column[r] = m(r, c);
        out.push_back(compress(column));
    }
    return out;
}

MatmulRun run_matmul(const DenseMatrix& a, const DenseMatrix& b, const SimConfig& cfg, const TraceSink& sink)
{
    cfg.validate();
    if (a.cols() != b.rows()) {
        throw Error(Errc::dimension_mismatch, "inner dimensions differ: A is " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + ", B is " +
                                                  std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    MatmulRun run;
    run.m = a.rows();
    run.n = b.cols();
    run.k = a.cols();
    run.output = OutputMatrix(run.m, run.n);

    const auto rows = compress_rows(a);
    const auto cols = compress_cols(b);
    for (const auto& r : rows) run.input_nnz += r.nnz();
    for (const auto& c : cols) run.weight_nnz += c.nnz();
    for (const auto& r : rows) {
        for (const auto& c : cols) run.total_matches += match_count(r.bitmap(), c.bitmap());
    }

    const auto tile_rows = (run.m + cfg.array_rows - 1) / cfg.array_rows;
    const auto tile_cols = (run.n + cfg.array_cols - 1) / cfg.array_cols;
    const auto tiles = tile_rows * tile_cols;

    auto run_one = [&](std::size_t t, Counters& counters, std::uint64_t& cycle_offset) {
        const auto tr = t / tile_cols;
        const auto tc = t % tile_cols;
        const auto r0 = tr * cfg.array_rows;
        const auto c0 = tc * cfg.array_cols;
        const TileJob job{std::span(rows).subspan(r0, std::min(cfg.array_rows, run.m - r0)),
                          std::span(cols).subspan(c0, std::min(cfg.array_cols, run.n - c0))};
        TraceSink tile_sink;
        if (sink) {
            tile_sink = [&](const CycleTrace& local) {
                CycleTrace global = local;
                global.cycle += cycle_offset;
                global.tile_row = static_cast<std::uint32_t>(tr);
                global.tile_col = static_cast<std::uint32_t>(tc);
                sink(global);
            };
        }
        const auto result = run_tile(job, cfg, tile_sink);
        for (std::size_t r = 0; r < result.output.rows(); ++r) {
            for (std::size_t c = 0; c < result.output.cols(); ++c) {
                run.output(r0 + r, c0 + c) = result.output(r, c);
            }
        }
        counters += result.counters;
        cycle_offset += result.counters.cycles;
    };

    std::size_t workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    if (sink) workers = 1;
    workers = std::min(workers, std::max<std::size_t>(tiles, 1));

    if (workers <= 1) {
        std::uint64_t offset = 0;
        for (std::size_t t = 0; t < tiles; ++t) run_one(t, run.counters, offset);
        return run;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex merge;
    std::exception_ptr error;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                Counters local;
                std::uint64_t offset = 0;
                try {
                    for (auto t = next++; t < tiles && !failed; t = next++) run_one(t, local, offset);
                } catch (...) {
                    std::lock_guard lock(merge);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
                std::lock_guard lock(merge);
                run.counters += local;
            });
        }
    }
    if (error) std::rethrow_exception(error);
    return run;
}

}  // namespace sidr
