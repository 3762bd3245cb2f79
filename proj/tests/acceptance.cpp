// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sidr/analysis.hpp"
#include "sidr/driver.hpp"
#include "sidr/eim.hpp"
#include "sidr/engine.hpp"
#include "sidr/workload.hpp"
#include "stream_fixtures.hpp"

using namespace sidr;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, const std::function<Verdict()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("%s %s %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", id, title, secs, v.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string rat(const std::optional<Rational>& r)
{
    if (!r) return "undefined";
    return std::to_string(r->numerator()) + "/" + std::to_string(r->denominator());
}

Bitmap to_bitmap(const oracle::Bits& bits)
{
    Bitmap bm(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bm.set(i, bits[i]);
    return bm;
}

MatchStream oracle_stream(const oracle::Bits& in, const oracle::Bits& w)
{
    MatchStream s;
    for (auto [i, j] : oracle::matches(in, w)) s.push_back({i, j});
    return s;
}

CompressedVector with_ones(const Bitmap& bm) { return CompressedVector(bm, std::vector<std::int8_t>(bm.popcount(), 1)); }

// Returns an empty string on agreement, otherwise a description of the case.
std::string eim_case(const oracle::Bits& in, const oracle::Bits& w)
{
    const auto expected = oracle_stream(in, w);
    const auto bi = to_bitmap(in);
    const auto bw = to_bitmap(w);
    if (effective_indexes(bi, bw) != expected) return fmt("mask route differs at length %zu", in.size());
    const auto ci = with_ones(bi);
    const auto cw = with_ones(bw);
    for (std::size_t seg : {std::size_t{1}, std::size_t{8}, std::size_t{64}, in.size()}) {
        if (effective_indexes_segmented(ci, cw, seg) != expected) {
            return fmt("segmented route (segment %zu) differs at length %zu", seg, in.size());
        }
    }
    return {};
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main()
{
    SimConfig cfg;

    std::uint64_t verify_read_once = 0;
    std::uint64_t verify_zero_progress = 0;
    criterion("AC1", "functional exactness over the verify grid", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto out = run_verify(VerifySpec{}, cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        verify_read_once = out.read_once_violations;
        verify_zero_progress = out.zero_progress_events;
        std::string detail = fmt("%zu/%zu cases bit-exact, %.1fs", out.passed, out.cases, secs);
        if (out.first_mismatch) detail += "; " + verify_summary(out);
        if (!out.invariant_failure.empty()) detail += "; " + out.invariant_failure;
        return Verdict{out.ok() && out.cases == 625 && secs <= 60.0, detail};
    });

    criterion("AC2", "dense 4x4x4 on a 4x4 array has MAPM 3/4", [&] {
        SimConfig small = cfg;
        small.array_rows = small.array_cols = 4;
        const auto d = dense_baseline(4, 4, 4, small);
        return Verdict{d.mapm && *d.mapm == Rational(3, 4), "mapm " + rat(d.mapm)};
    });

    criterion("AC3", "dense 16x16xK tile runs in lockstep", [&] {
        std::string detail;
        bool ok = true;
        for (std::size_t k : {64u, 256u, 1024u}) {
            const auto a = gen_random(16, k, 0.0, 1);
            const auto b = gen_random(k, 16, 0.0, 2);
            const auto r = simulate_matmul(a, b, cfg).report;
            const auto want = Rational(1, 8) + Rational(1, static_cast<std::int64_t>(k));
            const bool cell = r.counters.cycles == k && r.utilization == Rational(1) && r.mapm == want;
            ok = ok && cell;
            detail += fmt("K=%zu cycles=%llu util=%s mapm=%s; ", k, static_cast<unsigned long long>(r.counters.cycles),
                          rat(r.utilization).c_str(), rat(r.mapm).c_str());
        }
        return Verdict{ok, detail};
    });

    criterion("AC4", "EIM equals brute-force enumeration", [&] {
        std::size_t cases = 0;
        for (std::size_t len = 1; len <= 12; ++len) {
            for (std::uint32_t x = 0; x < (1u << len); ++x) {
                oracle::Bits in(len);
                for (std::size_t i = 0; i < len; ++i) in[i] = (x >> i) & 1u;
                for (std::uint32_t y = 0; y < (1u << len); ++y) {
                    oracle::Bits w(len);
                    for (std::size_t i = 0; i < len; ++i) w[i] = (y >> i) & 1u;
                    if (auto err = eim_case(in, w); !err.empty()) return Verdict{false, err};
                    ++cases;
                }
            }
        }
        const std::size_t exhaustive = cases;
        std::mt19937_64 rng(4096);
        std::uniform_real_distribution<double> density(0.0, 1.0);
        for (std::size_t len = 13; len <= 64; ++len) {
            for (int t = 0; t < 50; ++t) {
                if (auto err = eim_case(oracle::random_bits(rng, len, density(rng)),
                                        oracle::random_bits(rng, len, density(rng)));
                    !err.empty()) {
                    return Verdict{false, err};
                }
                ++cases;
            }
        }
        for (std::size_t len : {64u, 128u, 256u}) {
            for (int t = 0; t < 500; ++t) {
                if (auto err = eim_case(oracle::random_bits(rng, len, density(rng)),
                                        oracle::random_bits(rng, len, density(rng)));
                    !err.empty()) {
                    return Verdict{false, err};
                }
                ++cases;
            }
        }
        return Verdict{true, fmt("%zu pairs (%zu exhaustive up to length 12), segments {1,8,64,K}", cases, exhaustive)};
    });

    std::uint64_t sweep_read_once = 0;
    std::string sweep_zero_progress;
    criterion("AC5", "utilization above 0.5 across the 50-70% sparsity grid", [&] {
        bool ok = true;
        std::string detail;
        for (std::size_t dim : {1024u, 512u}) {
            SweepSpec spec;
            spec.input_sparsity = spec.weight_sparsity = {0.5, 0.6, 0.7};
            spec.m = spec.n = spec.k = dim;
            spec.seeds = 3;
            detail += fmt("%zu^3:", dim);
            for (const auto& c : run_sweep(spec, cfg)) {
                ok = ok && c.utilization > 0.5;
                sweep_read_once += c.read_once_violations;
                detail += fmt(" (%.1f,%.1f)=%.3f", c.input_sparsity, c.weight_sparsity, c.utilization);
                if (dim == 1024) {
                    sweep_zero_progress += fmt(" (%.1f,%.1f)=%llu", c.input_sparsity, c.weight_sparsity,
                                               static_cast<unsigned long long>(c.zero_progress_events));
                }
            }
            detail += "; ";
        }
        return Verdict{ok, detail};
    });

    // Shared by AC6 and AC7.
    const auto a_half = gen_random(1024, 1024, 0.5, sweep_seed_a(cfg.rng_seed, 0));
    const auto b_quarter = gen_random(1024, 1024, 0.75, sweep_seed_b(cfg.rng_seed, 0));
    const auto sparse = simulate_matmul(a_half, b_quarter, cfg).report;

    criterion("AC6", "MAPM at (0.5, 0.75) against the dot-product baseline", [&] {
        if (!sparse.mapm || !sparse.sparten_mapm) return Verdict{false, "undefined MAPM"};
        const Rational reduction = Rational(1) - *sparse.mapm / *sparse.sparten_mapm;
        const bool ok = *sparse.mapm <= Rational(45, 100) && reduction >= Rational(78, 100);
        return Verdict{ok, fmt("mapm %.4f, sparten %.4f, reduction %.2f%%", to_double(*sparse.mapm),
                               to_double(*sparse.sparten_mapm), 100.0 * to_double(reduction))};
    });

    criterion("AC7", "speedup over the dense array", [&] {
        const auto dense = simulate_matmul(gen_random(1024, 1024, 0.0, 1), gen_random(1024, 1024, 0.0, 2), cfg).report;
        const bool sparse_ok = sparse.speedup.kind == Speedup::Kind::finite && sparse.speedup.value >= Rational(3, 2);
        const bool dense_ok = dense.speedup.kind == Speedup::Kind::finite && dense.speedup.value == Rational(1);
        return Verdict{sparse_ok && dense_ok,
                       fmt("(0.5,0.75) speedup %.3f; (0,0) speedup %lld/%lld", to_double(sparse.speedup.value),
                           static_cast<long long>(dense.speedup.value.numerator()),
                           static_cast<long long>(dense.speedup.value.denominator()))};
    });

    criterion("AC8", "per-tile reads stay within the compressed entries", [&] {
        const auto total = verify_read_once + sweep_read_once + sparse.counters.read_once_violations;
        return Verdict{total == 0, fmt("read-once violations: verify %llu, sweep %llu, (0.5,0.75) run %llu",
                                       static_cast<unsigned long long>(verify_read_once),
                                       static_cast<unsigned long long>(sweep_read_once),
                                       static_cast<unsigned long long>(sparse.counters.read_once_violations))};
    });

    criterion("AC9", "two-PE example and golden trace", [&] {
        const auto a = load_matrix(SIDR_TEST_DATA "/data/sidr_2x1_A.txt");
        const auto b = load_matrix(SIDR_TEST_DATA "/data/sidr_2x1_B.txt");
        std::string trace;
        const auto r = run_trace(a, b, cfg, TraceOptions{}, [&](const std::string& l) { trace += l + "\n"; }).report;
        const bool counts = r.counters.cycles == 5 && r.counters.active_macs == 9 && r.utilization == Rational(9, 10);
        const bool golden = trace == slurp(SIDR_TEST_DATA "/golden/sidr_2x1_trace.jsonl");
        return Verdict{counts && golden, fmt("cycles %llu, MACs %llu, utilization %s, trace %s",
                                             static_cast<unsigned long long>(r.counters.cycles),
                                             static_cast<unsigned long long>(r.counters.active_macs),
                                             rat(r.utilization).c_str(), golden ? "matches" : "differs")};
    });

    criterion("AC10", "mutual stall handling", [&] {
        auto st = fixture::mutual_stall();
        const auto resolved = run_stream_tile(st.tile, cfg);
        const bool one_event =
            resolved.counters.zero_progress_events == 1 && resolved.counters.active_macs == 4;

        SimConfig strict = cfg;
        strict.deadlock_policy = DeadlockPolicy::error;
        bool aborted = false;
        std::size_t stalled = 0;
        try {
            run_stream_tile(st.tile, strict);
        } catch (const DeadlockError& e) {
            aborted = true;
            stalled = e.stalled().size();
        }
        return Verdict{one_event && aborted && stalled == 4,
                       fmt("direct_fetch: %llu zero_progress event(s), %llu cycles; error policy: %s with %zu PEs; "
                           "verify grid zero_progress %llu; 1024^3 sweep zero_progress%s",
                           static_cast<unsigned long long>(resolved.counters.zero_progress_events),
                           static_cast<unsigned long long>(resolved.counters.cycles),
                           aborted ? "aborted" : "did not abort", stalled,
                           static_cast<unsigned long long>(verify_zero_progress), sweep_zero_progress.c_str())};
    });

    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
