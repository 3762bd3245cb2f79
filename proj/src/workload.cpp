// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sidr/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "sidr/error.hpp"

namespace sidr {

namespace {

bool looks_like_text(std::span<const std::uint8_t> bytes)
{
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t ch) {
        return (ch >= '0' && ch <= '9') || ch == '-' || ch == '+' || ch == ' ' || ch == '\t' || ch == '\n' ||
               ch == '\r';
    });
}

DenseMatrix parse_text(std::span<const std::uint8_t> bytes)
{
    std::istringstream in(std::string(bytes.begin(), bytes.end()));
    std::vector<std::int8_t> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::size_t count = 0;
        std::string token;
        while (fields >> token) {
            long v = 0;
            std::size_t used = 0;
            try {
                v = std::stol(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size()) throw Error(Errc::parse, "not an integer: '" + token + "'");
            if (v < -128 || v > 127) throw Error(Errc::parse, "value out of int8 range: " + token);
            data.push_back(static_cast<std::int8_t>(v));
            ++count;
        }
        if (count == 0) continue;
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            throw Error(Errc::parse, "row " + std::to_string(rows) + " has " + std::to_string(count) +
                                         " entries, expected " + std::to_string(cols));
        }
        ++rows;
    }
    return DenseMatrix(rows, cols, std::move(data));
}

std::uint32_t read_u32(std::span<const std::uint8_t> bytes, std::size_t at)
{
    return static_cast<std::uint32_t>(bytes[at]) | static_cast<std::uint32_t>(bytes[at + 1]) << 8 |
           static_cast<std::uint32_t>(bytes[at + 2]) << 16 | static_cast<std::uint32_t>(bytes[at + 3]) << 24;
}

void put_u32(std::vector<std::uint8_t>& out, std::size_t v)
{
    if (v > UINT32_MAX) throw Error(Errc::invalid_argument, "matrix dimension exceeds 32 bits");
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

}  // namespace

DenseMatrix gen_random(std::size_t rows, std::size_t cols, double sparsity, std::uint64_t seed)
{
    if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
        throw Error(Errc::invalid_argument, "sparsity must lie in [0, 1]");
    }
    const std::size_t total = rows * cols;
    const auto zeros = static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(total)));

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::int8_t> data(total, 0);
    std::uniform_int_distribution<int> value(-128, 126);
    for (std::size_t i = zeros; i < total; ++i) {
        const int v = value(rng);
        data[order[i]] = static_cast<std::int8_t>(v >= 0 ? v + 1 : v);
    }
    return DenseMatrix(rows, cols, std::move(data));
}

std::vector<std::uint8_t> encode_matrix(const DenseMatrix& m)
{
    std::vector<std::uint8_t> out(std::begin(matrix_magic), std::end(matrix_magic));
    put_u32(out, m.rows());
    put_u32(out, m.cols());
    out.push_back(dtype_int8);
    for (auto v : m.data()) out.push_back(static_cast<std::uint8_t>(v));
    return out;
}

DenseMatrix decode_matrix(std::span<const std::uint8_t> bytes)
{
    if (bytes.empty()) throw Error(Errc::truncated, "matrix file is empty");
    if (looks_like_text(bytes)) return parse_text(bytes);

    if (bytes.size() < matrix_header_bytes) throw Error(Errc::truncated, "matrix header truncated");
    if (!std::equal(std::begin(matrix_magic), std::end(matrix_magic), bytes.begin())) {
        throw Error(Errc::bad_magic, "matrix file does not start with SDM1");
    }
    const std::size_t rows = read_u32(bytes, 4);
    const std::size_t cols = read_u32(bytes, 8);
    if (bytes[12] != dtype_int8) {
        throw Error(Errc::bad_dtype, "unsupported dtype code " + std::to_string(bytes[12]));
    }
    const auto payload = bytes.subspan(matrix_header_bytes);
    if (payload.size() < rows * cols) {
        throw Error(Errc::truncated, "matrix payload holds " + std::to_string(payload.size()) + " of " +
                                         std::to_string(rows * cols) + " bytes");
    }
    if (payload.size() > rows * cols) throw Error(Errc::corrupt_input, "trailing bytes after matrix payload");
    std::vector<std::int8_t> data(rows * cols);
    std::transform(payload.begin(), payload.end(), data.begin(),
                   [](std::uint8_t b) { return static_cast<std::int8_t>(b); });
    return DenseMatrix(rows, cols, std::move(data));
}

DenseMatrix load_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(Errc::io, "read failed for " + path.string());
    return decode_matrix(bytes);
}

void store_matrix(const DenseMatrix& m, const std::filesystem::path& path)
{
    const auto bytes = encode_matrix(m);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::io, "write failed for " + path.string());
}

void store_matrix_text(const DenseMatrix& m, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot create " + path.string());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out << (c == 0 ? "" : " ") << static_cast<int>(m(r, c));
        }
        out << '\n';
    }
    if (!out) throw Error(Errc::io, "write failed for " + path.string());
}

GemmOperands pw_to_gemm(DenseMatrix weights, DenseMatrix activations)
{
    if (weights.cols() != activations.rows()) {
        throw Error(Errc::dimension_mismatch, "weights have " + std::to_string(weights.cols()) +
                                                  " input channels, activations have " +
                                                  std::to_string(activations.rows()));
    }
    return {std::move(weights), std::move(activations)};
}

OutputMatrix reference_matmul(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.rows()) throw Error(Errc::dimension_mismatch, "inner dimensions differ");
    OutputMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const std::int32_t x = a(i, p);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += x * b(p, j);
        }
    }
    return c;
}

}  // namespace sidr
