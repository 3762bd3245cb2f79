// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sidr/driver.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "sidr/workload.hpp"

namespace sidr {

namespace {

using json = nlohmann::ordered_json;

json rational_json(const std::optional<Rational>& r)
{
    if (!r) return "undefined";
    return json{{"num", r->numerator()}, {"den", r->denominator()}, {"value", to_double(*r)}};
}

json speedup_json(const Speedup& s)
{
    switch (s.kind) {
    case Speedup::Kind::finite: return rational_json(s.value);
    case Speedup::Kind::unbounded: return "unbounded";
    case Speedup::Kind::undefined: break;
    }
    return "undefined";
}

json counters_json(const Counters& c)
{
    return json{
        {"cycles", c.cycles},
        {"active_macs", c.active_macs},
        {"idle_pe_cycles", c.idle_pe_cycles},
        {"input_bytes_read", c.input_bytes_read},
        {"weight_bytes_read", c.weight_bytes_read},
        {"output_bytes_written", c.output_bytes_written},
        {"bitmap_bytes_read", c.bitmap_bytes_read},
        {"refill_events", c.refill_events},
        {"zero_progress_events", c.zero_progress_events},
        {"direct_fetch_events", c.direct_fetch_events},
        {"accumulator_range_events", c.accumulator_range_events},
        {"read_once_violations", c.read_once_violations},
    };
}

json config_json(const SimConfig& cfg)
{
    return json{
        {"array_rows", cfg.array_rows},
        {"array_cols", cfg.array_cols},
        {"shared_reg_size", cfg.shared_reg_size},
        {"segment_length", cfg.segment_length},
        {"output_write_bytes", cfg.output_write_bytes},
        {"count_bitmap_bytes", cfg.count_bitmap_bytes},
        {"deadlock_policy", cfg.deadlock_policy == DeadlockPolicy::error ? "error" : "direct_fetch"},
        {"rng_seed", cfg.rng_seed},
    };
}

json index_json(std::uint32_t v)
{
    if (v == no_index) return nullptr;
    return v;
}

const char* activity_name(const PeTrace& pe)
{
    switch (pe.activity) {
    case PeActivity::executed: return pe.direct_fetch ? "direct" : "exec";
    case PeActivity::idle: return "idle";
    case PeActivity::done: break;
    }
    return "done";
}

double metric_value(const std::optional<Rational>& r)
{
    return r ? to_double(*r) : std::numeric_limits<double>::quiet_NaN();
}

double speedup_value(const Speedup& s)
{
    switch (s.kind) {
    case Speedup::Kind::finite: return to_double(s.value);
    case Speedup::Kind::unbounded: return std::numeric_limits<double>::infinity();
    case Speedup::Kind::undefined: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string format_number(double v, const char* fmt)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

std::string report_json(const SimReport& report, const SimConfig& cfg)
{
    json doc{
        {"M", report.m},
        {"N", report.n},
        {"K", report.k},
        {"config", config_json(cfg)},
        {"counters", counters_json(report.counters)},
        {"mapm", rational_json(report.mapm)},
        {"utilization", rational_json(report.utilization)},
        {"dense_cycles", report.dense_cycles},
        {"dense_mapm", rational_json(report.dense_mapm)},
        {"speedup", speedup_json(report.speedup)},
        {"sparten_mapm", rational_json(report.sparten_mapm)},
        {"sparten_ideal_cycles", report.sparten_ideal_cycles},
        {"total_matches", report.total_matches},
        {"input_density", rational_json(report.input_density)},
        {"weight_density", rational_json(report.weight_density)},
    };
    return doc.dump(2) + "\n";
}

std::string trace_record_json(const CycleTrace& record)
{
    json pes = json::array();
    for (const auto& pe : record.pes) {
        json entry{{"row", pe.row}, {"col", pe.col}, {"state", activity_name(pe)}};
        if (pe.activity != PeActivity::done) {
            entry["eff_input"] = pe.eff_input;
            entry["eff_weight"] = pe.eff_weight;
            entry["offset_input"] = pe.offset_input;
            entry["offset_weight"] = pe.offset_weight;
        }
        pes.push_back(std::move(entry));
    }
    json shared_input = json::array();
    for (auto v : record.shared_input) shared_input.push_back(index_json(v));
    json shared_weight = json::array();
    for (auto v : record.shared_weight) shared_weight.push_back(index_json(v));

    json line{
        {"cycle", record.cycle},
        {"tile", {record.tile_row, record.tile_col}},
        {"shared_input", std::move(shared_input)},
        {"shared_weight", std::move(shared_weight)},
        {"zero_progress", record.zero_progress},
        {"pes", std::move(pes)},
    };
    return line.dump();
}

SimResult run_trace(const DenseMatrix& a, const DenseMatrix& b, const SimConfig& cfg, const TraceOptions& opts,
                    const std::function<void(const std::string&)>& emit)
{
    const auto volume = static_cast<double>(a.rows()) * static_cast<double>(b.cols()) * static_cast<double>(a.cols());
    if (volume > static_cast<double>(opts.cap)) {
        throw Error(Errc::trace_cap, "workload of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                         "x" + std::to_string(b.cols()) + " exceeds the trace cap of " +
                                         std::to_string(opts.cap) + " PE-cycles; use smaller dims");
    }
    std::vector<std::string> lines;
    std::uint64_t entries = 0;
    auto sink = [&](const CycleTrace& rec) {
        if (rec.cycle < opts.first_cycle || rec.cycle > opts.last_cycle) return;
        entries += rec.pes.size();
        if (entries > opts.cap) {
            throw Error(Errc::trace_cap, "trace exceeds the cap of " + std::to_string(opts.cap) +
                                             " PE entries; use smaller dims or a narrower cycle range");
        }
        lines.push_back(trace_record_json(rec));
    };
    auto result = simulate_matmul(a, b, cfg, sink);
    for (const auto& line : lines) emit(line);
    return result;
}

void SweepSpec::validate() const
{
    if (input_sparsity.empty() || weight_sparsity.empty()) {
        throw Error(Errc::invalid_argument, "sweep needs at least one input and one weight sparsity");
    }
    for (const auto* list : {&input_sparsity, &weight_sparsity}) {
        for (double s : *list) {
            if (!(s >= 0.0 && s <= 1.0)) {
                throw Error(Errc::invalid_argument, "sparsity " + std::to_string(s) + " outside [0, 1]");
            }
        }
    }
    if (seeds == 0) throw Error(Errc::invalid_argument, "sweep needs at least one seed");
}

std::uint64_t sweep_seed_a(std::uint64_t base, std::size_t s) { return base + 2 * s; }
std::uint64_t sweep_seed_b(std::uint64_t base, std::size_t s) { return base + 2 * s + 1; }

std::vector<SweepCell> run_sweep(const SweepSpec& spec, const SimConfig& cfg,
                                 const std::function<void(const SweepCell&)>& on_cell)
{
    spec.validate();
    cfg.validate();
    std::vector<SweepCell> cells;
    for (double isp : spec.input_sparsity) {
        for (double wsp : spec.weight_sparsity) {
            SweepCell cell;
            cell.input_sparsity = isp;
            cell.weight_sparsity = wsp;
            for (std::size_t s = 0; s < spec.seeds; ++s) {
                const auto a = gen_random(spec.m, spec.k, isp, sweep_seed_a(cfg.rng_seed, s));
                const auto b = gen_random(spec.k, spec.n, wsp, sweep_seed_b(cfg.rng_seed, s));
                const auto rep = simulate_matmul(a, b, cfg).report;
                cell.utilization += metric_value(rep.utilization);
                cell.speedup += speedup_value(rep.speedup);
                cell.mapm += metric_value(rep.mapm);
                cell.sparten_mapm += metric_value(rep.sparten_mapm);
                cell.zero_progress_events += rep.counters.zero_progress_events;
                cell.read_once_violations += rep.counters.read_once_violations;
            }
            const auto runs = static_cast<double>(spec.seeds);
            cell.utilization /= runs;
            cell.speedup /= runs;
            cell.mapm /= runs;
            cell.sparten_mapm /= runs;
            if (on_cell) on_cell(cell);
            cells.push_back(cell);
        }
    }
    return cells;
}

std::string sweep_csv_row(const SweepCell& cell)
{
    return format_number(cell.input_sparsity, "%g") + "," + format_number(cell.weight_sparsity, "%g") + "," +
           format_number(cell.utilization, "%.6f") + "," + format_number(cell.speedup, "%.6f") + "," +
           format_number(cell.mapm, "%.6f") + "," + format_number(cell.sparten_mapm, "%.6f") + "," +
           std::to_string(cell.zero_progress_events);
}

std::string sweep_csv(const std::vector<SweepCell>& cells)
{
    std::string out = std::string(sweep_csv_header) + "\n";
    for (const auto& cell : cells) out += sweep_csv_row(cell) + "\n";
    return out;
}

std::string check_counter_invariants(const SimReport& report)
{
    const auto& c = report.counters;
    if (c.active_macs != report.total_matches) {
        return "work conservation: " + std::to_string(c.active_macs) + " MACs executed for " +
               std::to_string(report.total_matches) + " matches";
    }
    if (c.read_once_violations != 0) {
        return "read-once bound broken in " + std::to_string(c.read_once_violations) + " tile(s)";
    }
    if (c.cycles > report.total_matches + c.direct_fetch_events + std::uint64_t{report.m} * report.n) {
        return "progress bound: " + std::to_string(c.cycles) + " cycles exceed matches + direct fetches + PEs";
    }
    return {};
}

VerifyOutcome run_verify(const VerifySpec& spec, const SimConfig& cfg, const OutputHook& fault)
{
    cfg.validate();
    for (double s : spec.sparsities) {
        if (!(s >= 0.0 && s <= 1.0)) throw Error(Errc::invalid_argument, "sparsity outside [0, 1]");
    }
    VerifyOutcome out;
    for (auto d : spec.dims) {
        for (double isp : spec.sparsities) {
            for (double wsp : spec.sparsities) {
                for (std::size_t s = 0; s < spec.seeds; ++s) {
                    const auto seed_a = sweep_seed_a(cfg.rng_seed, s);
                    const auto seed_b = sweep_seed_b(cfg.rng_seed, s);
                    const auto a = gen_random(d, d, isp, seed_a);
                    const auto b = gen_random(d, d, wsp, seed_b);
                    auto result = simulate_matmul(a, b, cfg);
                    if (fault) fault(result.c);
                    const auto expected = reference_matmul(a, b);
                    ++out.cases;
                    out.zero_progress_events += result.report.counters.zero_progress_events;
                    out.read_once_violations += result.report.counters.read_once_violations;
                    if (auto broken = check_counter_invariants(result.report);
                        !broken.empty() && out.invariant_failure.empty()) {
                        out.invariant_failure = "dim " + std::to_string(d) + ": " + broken;
                    }
                    bool same = result.c == expected;
                    if (same) {
                        ++out.passed;
                        continue;
                    }
                    if (out.first_mismatch) continue;
                    for (std::size_t r = 0; r < d && !out.first_mismatch; ++r) {
                        for (std::size_t c = 0; c < d; ++c) {
                            if (result.c(r, c) != expected(r, c)) {
                                out.first_mismatch =
                                    Mismatch{d, isp, wsp, seed_a, seed_b, r, c, expected(r, c), result.c(r, c)};
                                break;
                            }
                        }
                    }
                    if (!out.first_mismatch) {
                        // Shapes differ.
                        out.first_mismatch = Mismatch{d, isp, wsp, seed_a, seed_b, 0, 0, 0, 0};
                    }
                }
            }
        }
    }
    return out;
}

std::string verify_summary(const VerifyOutcome& o)
{
    std::string s = (o.ok() ? "PASS " : "FAIL ") + std::to_string(o.passed) + "/" + std::to_string(o.cases) +
                    " cases match the reference product; zero_progress_events=" +
                    std::to_string(o.zero_progress_events) +
                    " read_once_violations=" + std::to_string(o.read_once_violations) + "\n";
    if (o.first_mismatch) {
        const auto& m = *o.first_mismatch;
        s += "first mismatch: dim=" + std::to_string(m.dim) + " input_sparsity=" + format_number(m.input_sparsity, "%g") +
             " weight_sparsity=" + format_number(m.weight_sparsity, "%g") + " seeds=(" + std::to_string(m.seed_a) +
             "," + std::to_string(m.seed_b) + ") C[" + std::to_string(m.row) + "][" + std::to_string(m.col) +
             "] expected " + std::to_string(m.expected) + " got " + std::to_string(m.actual) + "\n";
    }
    if (!o.invariant_failure.empty()) s += "invariant failure: " + o.invariant_failure + "\n";
    return s;
}

}  // namespace sidr
