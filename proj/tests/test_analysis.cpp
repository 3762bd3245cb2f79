// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sidr/analysis.hpp"
#include "sidr/workload.hpp"

using namespace sidr;

namespace {

SimConfig array_of(std::size_t rows, std::size_t cols)
{
    SimConfig cfg;
    cfg.array_rows = rows;
    cfg.array_cols = cols;
    return cfg;
}

DenseMatrix filled(std::size_t rows, std::size_t cols, std::int8_t v)
{
    return DenseMatrix(rows, cols, std::vector<std::int8_t>(rows * cols, v));
}

}  // namespace

TEST_CASE("mapm is bytes over executed MACs")
{
    Counters c;
    CHECK_FALSE(mapm(c).has_value());

    // No reuse at all: input, weight, partial-sum read and write per MAC.
    c.active_macs = 10;
    c.input_bytes_read = 10;
    c.weight_bytes_read = 10;
    c.output_bytes_written = 20;
    CHECK(*mapm(c) == Rational(4));

    Counters reuse;
    reuse.active_macs = 64;
    reuse.input_bytes_read = 16;
    reuse.weight_bytes_read = 16;
    reuse.output_bytes_written = 16;
    CHECK(*mapm(reuse) == Rational(3, 4));
}

TEST_CASE("utilization")
{
    Counters c;
    CHECK_FALSE(utilization(c, 2).has_value());
    CHECK_FALSE(utilization(c).has_value());
    c.cycles = 5;
    c.active_macs = 9;
    c.idle_pe_cycles = 1;
    CHECK(*utilization(c, 2) == Rational(9, 10));
    CHECK(*utilization(c) == Rational(9, 10));
}

TEST_CASE("dense baseline")
{
    const auto small = dense_baseline(4, 4, 4, array_of(4, 4));
    CHECK(small.cycles == 4);
    CHECK(*small.mapm == Rational(3, 4));

    for (std::size_t k : {64u, 256u, 1024u}) {
        const auto d = dense_baseline(16, 16, k, SimConfig{});
        CHECK(d.cycles == k);
        CHECK(*d.mapm == Rational(1, 8) + Rational(1, static_cast<std::int64_t>(k)));
    }

    // Partial tiles still take K cycles each.
    CHECK(dense_baseline(17, 17, 10, SimConfig{}).cycles == 40);
    CHECK_FALSE(dense_baseline(16, 16, 0, SimConfig{}).mapm.has_value());
}

TEST_CASE("sparten baseline")
{
    CHECK(*sparten_baseline(8, 1, 1, SimConfig{}).mapm == Rational(17, 8));
    const auto s = sparten_baseline(16 * 16 * 8, 16, 16, SimConfig{});
    CHECK(*s.mapm == Rational(17, 8));
    CHECK(s.ideal_cycles == 8);

    const auto dense = sparten_baseline(filled(16, 1024, 1), filled(1024, 16, 1), SimConfig{});
    CHECK(dense.matches == 16 * 16 * 1024);
    CHECK(*dense.mapm == Rational(2) + Rational(1, 1024));

    CHECK_FALSE(sparten_baseline(0, 4, 4, SimConfig{}).mapm.has_value());
    CHECK_THROWS_AS(sparten_baseline(filled(2, 3, 1), filled(2, 2, 1), SimConfig{}), Error);
}

TEST_CASE("speedup kinds")
{
    const auto finite = speedup(64, 16);
    CHECK(finite.kind == Speedup::Kind::finite);
    CHECK(finite.value == Rational(4));
    CHECK(speedup(64, 0).kind == Speedup::Kind::unbounded);
    CHECK(speedup(0, 0).kind == Speedup::Kind::undefined);
}

TEST_CASE("dense operands: speedup exactly one, mapm equals the dense baseline")
{
    for (std::size_t k : {64u, 256u}) {
        const auto r = simulate_matmul(filled(16, k, 3), filled(k, 16, -2), SimConfig{}).report;
        CHECK(r.speedup.kind == Speedup::Kind::finite);
        CHECK(r.speedup.value == Rational(1));
        CHECK(*r.mapm == *r.dense_mapm);
        CHECK(*r.utilization == Rational(1));
        CHECK(*r.input_density == Rational(1));
    }
}

TEST_CASE("identity operands")
{
    std::vector<std::int8_t> eye(256, 0);
    for (std::size_t i = 0; i < 16; ++i) eye[i * 16 + i] = 1;
    const DenseMatrix id(16, 16, eye);
    const auto res = simulate_matmul(id, id, SimConfig{});
    CHECK(res.report.counters.cycles == 1);
    CHECK(res.report.speedup.value == Rational(16));
    CHECK(*res.report.utilization == Rational(1, 16));
    CHECK(*res.report.input_density == Rational(1, 16));
}

TEST_CASE("all-zero operands: no cycles, unbounded speedup, undefined ratios")
{
    const auto r = simulate_matmul(filled(8, 8, 0), filled(8, 8, 5), SimConfig{}).report;
    CHECK(r.counters.cycles == 0);
    CHECK(r.speedup.kind == Speedup::Kind::unbounded);
    CHECK_FALSE(r.mapm.has_value());
    CHECK_FALSE(r.utilization.has_value());
    CHECK_FALSE(r.sparten_mapm.has_value());

    const auto empty = simulate_matmul(DenseMatrix(4, 0), DenseMatrix(0, 4), SimConfig{}).report;
    CHECK(empty.speedup.kind == Speedup::Kind::undefined);
}

TEST_CASE("shared registers beat the dot-product baseline on sparse operands")
{
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto a = gen_random(64, 64, 0.5, 2 * seed);
        const auto b = gen_random(64, 64, 0.5 + 0.1 * seed, 2 * seed + 1);
        const auto r = simulate_matmul(a, b, SimConfig{}).report;
        CHECK(*r.mapm < *r.sparten_mapm);
        CHECK(*r.sparten_mapm > Rational(2));
        CHECK(r.sparten_mapm == sparten_baseline(a, b, SimConfig{}).mapm);
    }
}

TEST_CASE("report counts match the oracle")
{
    std::mt19937_64 rng(4);
    const auto av = oracle::random_dense(rng, 30 * 50, 0.6);
    const auto bv = oracle::random_dense(rng, 50 * 20, 0.3);
    const auto res = simulate_matmul(DenseMatrix(30, 50, av), DenseMatrix(50, 20, bv), SimConfig{});
    std::uint64_t matches = 0;
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            for (std::size_t p = 0; p < 50; ++p) matches += (av[i * 50 + p] != 0 && bv[p * 20 + j] != 0);
        }
    }
    CHECK(res.report.total_matches == matches);
    CHECK(res.report.counters.active_macs == matches);
    const auto expected = oracle::matmul(av, bv, 30, 50, 20);
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(res.c.data()[i] == expected[i]);
}
