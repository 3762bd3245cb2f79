// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "oracles.hpp"
#include "sidr/error.hpp"
#include "sidr/workload.hpp"

using namespace sidr;
namespace fs = std::filesystem;

namespace {

Errc errc_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected sidr::Error");
    return Errc::invalid_argument;
}

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::size_t zeros(const DenseMatrix& m) { return std::count(m.data().begin(), m.data().end(), 0); }

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("sidr_test_" + std::to_string(std::random_device{}()));
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("gen_random places the exact zero count")
{
    const auto m = gen_random(1024, 1024, 0.75, 42);
    CHECK(zeros(m) == 786432);
    CHECK(zeros(gen_random(10, 10, 0.0, 1)) == 0);
    CHECK(zeros(gen_random(10, 10, 1.0, 1)) == 100);
    CHECK(zeros(gen_random(3, 3, 0.5, 1)) == 5);  // 4.5 rounds away from zero
}

TEST_CASE("gen_random is deterministic per seed")
{
    CHECK(gen_random(40, 30, 0.5, 7) == gen_random(40, 30, 0.5, 7));
    CHECK_FALSE(gen_random(40, 30, 0.5, 7) == gen_random(40, 30, 0.5, 8));
    CHECK(errc_of([] { gen_random(2, 2, 1.5, 0); }) == Errc::invalid_argument);
    CHECK(errc_of([] { gen_random(2, 2, -0.1, 0); }) == Errc::invalid_argument);
}

TEST_CASE("gen_random covers the int8 range except zero")
{
    const auto m = gen_random(256, 256, 0.0, 3);
    const auto [lo, hi] = std::minmax_element(m.data().begin(), m.data().end());
    CHECK(*lo == -128);
    CHECK(*hi == 127);
}

TEST_CASE("binary matrix layout")
{
    const DenseMatrix m(2, 3, {1, -1, 0, 127, -128, 5});
    const auto bytes = encode_matrix(m);
    const std::vector<std::uint8_t> expected{'S', 'D', 'M', '1', 2, 0, 0, 0, 3, 0, 0, 0, 1,
                                             1, 0xFF, 0, 127, 0x80, 5};
    CHECK(bytes == expected);
    CHECK(decode_matrix(bytes) == m);
}

TEST_CASE("store and load round trip")
{
    TempDir dir;
    std::mt19937_64 rng(9);
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{0, 0}, {0, 5}, {5, 0}, {1, 1}, {17, 33}}) {
        const DenseMatrix m(r, c, oracle::random_dense(rng, r * c, 0.3));
        const auto bin = dir.path / "m.sdm";
        store_matrix(m, bin);
        CHECK(load_matrix(bin) == m);
        if (r > 0 && c > 0) {
            const auto txt = dir.path / "m.txt";
            store_matrix_text(m, txt);
            CHECK(load_matrix(txt) == m);
        }
    }
}

TEST_CASE("text grids")
{
    CHECK(decode_matrix(bytes_of("1 0 -3\n4 5 6\n")) == DenseMatrix(2, 3, {1, 0, -3, 4, 5, 6}));
    CHECK(decode_matrix(bytes_of("  7\t8  \r\n\n9 10")) == DenseMatrix(2, 2, {7, 8, 9, 10}));
    CHECK(errc_of([] { decode_matrix(bytes_of("1 2\n3\n")); }) == Errc::parse);
    CHECK(errc_of([] { decode_matrix(bytes_of("1 200\n")); }) == Errc::parse);
    CHECK(errc_of([] { decode_matrix(bytes_of("1 -\n")); }) == Errc::parse);
}

TEST_CASE("matrix decoding errors")
{
    CHECK(errc_of([] { decode_matrix({}); }) == Errc::truncated);
    auto good = encode_matrix(DenseMatrix(2, 2, {1, 2, 3, 4}));
    auto bad_magic = good;
    bad_magic[0] = 'X';
    CHECK(errc_of([&] { decode_matrix(bad_magic); }) == Errc::bad_magic);
    auto bad_dtype = good;
    bad_dtype[12] = 0x02;
    CHECK(errc_of([&] { decode_matrix(bad_dtype); }) == Errc::bad_dtype);
    auto short_payload = good;
    short_payload.pop_back();
    CHECK(errc_of([&] { decode_matrix(short_payload); }) == Errc::truncated);
    auto short_header = good;
    short_header.resize(8);
    CHECK(errc_of([&] { decode_matrix(short_header); }) == Errc::truncated);
    auto trailing = good;
    trailing.push_back(0);
    CHECK(errc_of([&] { decode_matrix(trailing); }) == Errc::corrupt_input);

    CHECK(errc_of([] { load_matrix("/nonexistent/dir/m.sdm"); }) == Errc::io);

    TempDir dir;
    std::ofstream(dir.path / "empty.sdm").close();
    CHECK(errc_of([&] { load_matrix(dir.path / "empty.sdm"); }) == Errc::truncated);
}

TEST_CASE("pointwise convolution lowers to a product")
{
    std::mt19937_64 rng(12);
    const std::size_t cout = 6, cin = 5, h = 3, w = 4;
    const auto wv = oracle::random_dense(rng, cout * cin, 0.4);
    // Activations stored channel-major as Cin x (H*W).
    const auto xv = oracle::random_dense(rng, cin * h * w, 0.4);
    const auto g = pw_to_gemm(DenseMatrix(cout, cin, wv), DenseMatrix(cin, h * w, xv));
    CHECK(g.a.rows() == cout);
    CHECK(g.b.cols() == h * w);
    const auto out = reference_matmul(g.a, g.b);
    for (std::size_t co = 0; co < cout; ++co) {
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                std::int32_t acc = 0;
                for (std::size_t ci = 0; ci < cin; ++ci) acc += wv[co * cin + ci] * xv[ci * h * w + y * w + x];
                CHECK(out(co, y * w + x) == acc);
            }
        }
    }
    CHECK(errc_of([] { pw_to_gemm(DenseMatrix(2, 3), DenseMatrix(4, 5)); }) == Errc::dimension_mismatch);

    // Identity weights pass activations through.
    DenseMatrix eye(cin, cin);
    for (std::size_t i = 0; i < cin; ++i) eye(i, i) = 1;
    const auto id = pw_to_gemm(eye, DenseMatrix(cin, h * w, xv));
    const auto passthrough = reference_matmul(id.a, id.b);
    for (std::size_t i = 0; i < xv.size(); ++i) CHECK(passthrough.data()[i] == xv[i]);
}

TEST_CASE("reference matmul")
{
    const DenseMatrix a(2, 2, {1, 2, 3, 4});
    const DenseMatrix b(2, 2, {5, 6, 7, 8});
    CHECK(reference_matmul(a, b) == OutputMatrix(2, 2, {19, 22, 43, 50}));
    CHECK(errc_of([] { reference_matmul(DenseMatrix(2, 3), DenseMatrix(2, 3)); }) == Errc::dimension_mismatch);
}
