// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sidr/matrix.hpp"

namespace sidr {

/// Exactly round(sparsity * rows * cols) zeros at seeded uniformly shuffled
/// positions; every other entry is uniform over [-128, 127] without 0.
DenseMatrix gen_random(std::size_t rows, std::size_t cols, double sparsity, std::uint64_t seed);

// Binary matrix file: "SDM1", u32 LE rows, u32 LE cols, dtype byte (0x01 =
// int8), then rows*cols row-major signed bytes.
inline constexpr char matrix_magic[4] = {'S', 'D', 'M', '1'};
inline constexpr std::uint8_t dtype_int8 = 0x01;
inline constexpr std::size_t matrix_header_bytes = 13;

std::vector<std::uint8_t> encode_matrix(const DenseMatrix& m);

/// Parses either the binary layout or a whitespace-separated text grid (one
/// row per line). A buffer made only of digits, signs and whitespace is read
/// as text. Errors: Errc::truncated, Errc::bad_magic, Errc::bad_dtype,
/// Errc::parse.
DenseMatrix decode_matrix(std::span<const std::uint8_t> bytes);

DenseMatrix load_matrix(const std::filesystem::path& path);
void store_matrix(const DenseMatrix& m, const std::filesystem::path& path);
void store_matrix_text(const DenseMatrix& m, const std::filesystem::path& path);

struct GemmOperands {
    DenseMatrix a;  // weights, Cout x Cin
    DenseMatrix b;  // activations, Cin x (H*W)
};

/// A 1x1 convolution is the product weights x activations.
GemmOperands pw_to_gemm(DenseMatrix weights, DenseMatrix activations);

/// Straightforward triple loop, used as the correctness oracle by verify.
OutputMatrix reference_matmul(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace sidr
