// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sidr {

enum class Errc {
    invalid_argument,
    corrupt_input,
    dimension_mismatch,
    io,
    bad_magic,
    bad_dtype,
    truncated,
    parse,
    deadlock,
    verify_mismatch,
    trace_cap,
};

const char* errc_name(Errc code) noexcept;

/// Exception carrying a machine-readable category. The C API maps each
/// category onto a distinct status code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace sidr
