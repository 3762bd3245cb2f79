// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <boost/rational.hpp>

#include "sidr/engine.hpp"
#include "sidr/matrix.hpp"

namespace sidr {

using Rational = boost::rational<std::int64_t>;

/// SRAM bytes per executed MAC. Empty when no MAC ran.
std::optional<Rational> mapm(const Counters& counters);

/// active_macs / (cycles * mapped_pe_count). Empty when no cycle ran.
std::optional<Rational> utilization(const Counters& counters, std::size_t mapped_pe_count);

/// Aggregate form over tiles with different mapped PE counts:
/// active_macs / (active_macs + idle_pe_cycles).
std::optional<Rational> utilization(const Counters& counters);

/// Dense output-stationary array with full broadcast reuse: each tile reads
/// one input per mapped row and one weight per mapped column every cycle for
/// K cycles, then writes its outputs once.
struct DenseBaseline {
    std::uint64_t cycles = 0;
    std::optional<Rational> mapm;
};

DenseBaseline dense_baseline(std::size_t m, std::size_t n, std::size_t k, const SimConfig& cfg);

/// Dot-product dataflow with output reuse only: two operand bytes per MAC and
/// one write per output.
struct SpartenBaseline {
    std::uint64_t matches = 0;
    std::optional<Rational> mapm;
    std::uint64_t ideal_cycles = 0;
};

SpartenBaseline sparten_baseline(std::uint64_t matches, std::size_t m, std::size_t n, const SimConfig& cfg);
SpartenBaseline sparten_baseline(const DenseMatrix& a, const DenseMatrix& b, const SimConfig& cfg);

struct Speedup {
    enum class Kind { finite, unbounded, undefined };
    Kind kind = Kind::undefined;
    Rational value;
};

Speedup speedup(std::uint64_t dense_cycles, std::uint64_t cycles);

struct SimReport {
    Counters counters;
    std::optional<Rational> mapm;
    std::optional<Rational> utilization;
    std::uint64_t dense_cycles = 0;
    std::optional<Rational> dense_mapm;
    Speedup speedup;
    std::optional<Rational> sparten_mapm;
    std::uint64_t sparten_ideal_cycles = 0;
    std::uint64_t total_matches = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::optional<Rational> input_density;
    std::optional<Rational> weight_density;
};

SimReport make_report(const MatmulRun& run, const SimConfig& cfg);

Speedup speedup(const SimReport& report);

/// Exact product and report for C = A x B.
struct SimResult {
    OutputMatrix c;
    SimReport report;
};

SimResult simulate_matmul(const DenseMatrix& a, const DenseMatrix& b, const SimConfig& cfg,
                          const TraceSink& sink = {});

double to_double(const Rational& r);

}  // namespace sidr
