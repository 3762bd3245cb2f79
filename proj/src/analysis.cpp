// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sidr/analysis.hpp"

#include <algorithm>

namespace sidr {

namespace {

std::optional<Rational> ratio(std::uint64_t num, std::uint64_t den)
{
    if (den == 0) return std::nullopt;
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

double to_double(const Rational& r)
{
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::optional<Rational> mapm(const Counters& counters)
{
    return ratio(counters.total_bytes(), counters.active_macs);
}

std::optional<Rational> utilization(const Counters& counters, std::size_t mapped_pe_count)
{
    return ratio(counters.active_macs, counters.cycles * mapped_pe_count);
}

std::optional<Rational> utilization(const Counters& counters)
{
    return ratio(counters.active_macs, counters.active_macs + counters.idle_pe_cycles);
}

DenseBaseline dense_baseline(std::size_t m, std::size_t n, std::size_t k, const SimConfig& cfg)
{
    cfg.validate();
    DenseBaseline out;
    out.cycles = ceil_div(m, cfg.array_rows) * ceil_div(n, cfg.array_cols) * k;

    // Summing mapped rows + mapped cols over the tile grid.
    const std::uint64_t operand_reads =
        (std::uint64_t{m} * ceil_div(n, cfg.array_cols) + std::uint64_t{n} * ceil_div(m, cfg.array_rows)) * k;
    const std::uint64_t writes = std::uint64_t{m} * n * cfg.output_write_bytes;
    out.mapm = ratio(operand_reads + writes, std::uint64_t{m} * n * k);
    return out;
}

SpartenBaseline sparten_baseline(std::uint64_t matches, std::size_t m, std::size_t n, const SimConfig& cfg)
{
    cfg.validate();
    SpartenBaseline out;
    out.matches = matches;
    out.mapm = ratio(2 * matches + std::uint64_t{m} * n * cfg.output_write_bytes, matches);
    out.ideal_cycles = ceil_div(matches, cfg.array_rows * cfg.array_cols);
    return out;
}

SpartenBaseline sparten_baseline(const DenseMatrix& a, const DenseMatrix& b, const SimConfig& cfg)
{
    if (a.cols() != b.rows()) throw Error(Errc::dimension_mismatch, "inner dimensions differ");
    const auto rows = compress_rows(a);
    const auto cols = compress_cols(b);
    std::uint64_t matches = 0;
    for (const auto& r : rows) {
        for (const auto& c : cols) matches += match_count(r.bitmap(), c.bitmap());
    }
    return sparten_baseline(matches, a.rows(), b.cols(), cfg);
}

Speedup speedup(std::uint64_t dense_cycles, std::uint64_t cycles)
{
    if (cycles == 0) {
        return {dense_cycles == 0 ? Speedup::Kind::undefined : Speedup::Kind::unbounded, Rational(0)};
    }
    return {Speedup::Kind::finite,
            Rational(static_cast<std::int64_t>(dense_cycles), static_cast<std::int64_t>(cycles))};
}

Speedup speedup(const SimReport& report)
{
    return speedup(report.dense_cycles, report.counters.cycles);
}

SimReport make_report(const MatmulRun& run, const SimConfig& cfg)
{
    SimReport rep;
    rep.counters = run.counters;
    rep.m = run.m;
    rep.n = run.n;
    rep.k = run.k;
    rep.total_matches = run.total_matches;
    rep.mapm = mapm(run.counters);
    rep.utilization = utilization(run.counters);
    const auto dense = dense_baseline(run.m, run.n, run.k, cfg);
    rep.dense_cycles = dense.cycles;
    rep.dense_mapm = dense.mapm;
    rep.speedup = speedup(rep);
    const auto sparten = sparten_baseline(run.total_matches, run.m, run.n, cfg);
    rep.sparten_mapm = sparten.mapm;
    rep.sparten_ideal_cycles = sparten.ideal_cycles;
    rep.input_density = ratio(run.input_nnz, std::uint64_t{run.m} * run.k);
    rep.weight_density = ratio(run.weight_nnz, std::uint64_t{run.k} * run.n);
    return rep;
}

SimResult simulate_matmul(const DenseMatrix& a, const DenseMatrix& b, const SimConfig& cfg, const TraceSink& sink)
{
    auto run = run_matmul(a, b, cfg, sink);
    auto report = make_report(run, cfg);
    return {std::move(run.output), std::move(report)};
}

}  // namespace sidr
