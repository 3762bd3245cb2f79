// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sidr/analysis.hpp"
#include "sidr/engine.hpp"
#include "sidr/matrix.hpp"

namespace sidr {

/// Single JSON document for one run. Exact ratios appear as
/// {"num": n, "den": d, "value": n/d}; missing ones as "undefined", and an
/// infinite speedup as "unbounded".
std::string report_json(const SimReport& report, const SimConfig& cfg);

/// One JSON line per simulated cycle; see docs/formats.md.
std::string trace_record_json(const CycleTrace& record);

struct TraceOptions {
    std::uint64_t first_cycle = 1;
    std::uint64_t last_cycle = UINT64_MAX;
    // Upper bound on emitted PE entries (mapped PEs x cycles).
    std::uint64_t cap = 1'000'000;
};

/// Simulates A x B and passes each trace line in [first_cycle, last_cycle]
/// to `emit`. Refuses with Errc::trace_cap when M*N*K exceeds the cap, or
/// when the emitted PE entries would.
SimResult run_trace(const DenseMatrix& a, const DenseMatrix& b, const SimConfig& cfg, const TraceOptions& opts,
                    const std::function<void(const std::string&)>& emit);

struct SweepSpec {
    std::vector<double> input_sparsity;
    std::vector<double> weight_sparsity;
    std::size_t m = 1024;
    std::size_t n = 1024;
    std::size_t k = 1024;
    std::size_t seeds = 1;

    void validate() const;
};

struct SweepCell {
    double input_sparsity = 0;
    double weight_sparsity = 0;
    // Means over seeds.
    double utilization = 0;
    double speedup = 0;
    double mapm = 0;
    double sparten_mapm = 0;
    // Sums over seeds.
    std::uint64_t zero_progress_events = 0;
    std::uint64_t read_once_violations = 0;
};

/// Matrix seeds for run `s` of a cell: A uses base + 2s, B uses base + 2s + 1.
std::uint64_t sweep_seed_a(std::uint64_t base, std::size_t s);
std::uint64_t sweep_seed_b(std::uint64_t base, std::size_t s);

/// Cells in grid order: input sparsity outer, weight sparsity inner.
std::vector<SweepCell> run_sweep(const SweepSpec& spec, const SimConfig& cfg,
                                 const std::function<void(const SweepCell&)>& on_cell = {});

inline constexpr const char* sweep_csv_header =
    "input_sparsity,weight_sparsity,utilization,speedup,mapm,sparten_mapm,zero_progress_events";
std::string sweep_csv_row(const SweepCell& cell);
std::string sweep_csv(const std::vector<SweepCell>& cells);

struct VerifySpec {
    std::vector<std::size_t> dims{4, 16, 17, 64, 128};
    std::vector<double> sparsities{0.0, 0.25, 0.5, 0.75, 0.95};
    std::size_t seeds = 5;
};

struct Mismatch {
    std::size_t dim = 0;
    double input_sparsity = 0;
    double weight_sparsity = 0;
    std::uint64_t seed_a = 0;
    std::uint64_t seed_b = 0;
    std::size_t row = 0;
    std::size_t col = 0;
    std::int32_t expected = 0;
    std::int32_t actual = 0;
};

struct VerifyOutcome {
    std::size_t cases = 0;
    std::size_t passed = 0;
    std::uint64_t zero_progress_events = 0;
    std::uint64_t read_once_violations = 0;
    std::optional<Mismatch> first_mismatch;
    // Non-empty when a case broke a counter invariant.
    std::string invariant_failure;

    bool ok() const noexcept { return passed == cases && invariant_failure.empty(); }
};

/// Output hook for fault-injection tests; receives each simulated product
/// before it is compared.
using OutputHook = std::function<void(OutputMatrix&)>;

/// Square d x d x d products over every (input, weight) sparsity pair and
/// seed, each compared bit-exactly against reference_matmul.
VerifyOutcome run_verify(const VerifySpec& spec, const SimConfig& cfg, const OutputHook& fault = {});

std::string verify_summary(const VerifyOutcome& outcome);

/// Empty when the report satisfies work conservation, the progress bound and
/// the per-tile read-once bound; otherwise names the first broken one.
std::string check_counter_invariants(const SimReport& report);

}  // namespace sidr
