// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sidr/error.hpp"

namespace sidr {

const char* errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::corrupt_input: return "corrupt_input";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::io: return "io";
    case Errc::bad_magic: return "bad_magic";
    case Errc::bad_dtype: return "bad_dtype";
    case Errc::truncated: return "truncated";
    case Errc::parse: return "parse";
    case Errc::deadlock: return "deadlock";
    case Errc::verify_mismatch: return "verify_mismatch";
    case Errc::trace_cap: return "trace_cap";
    }
    return "unknown";
}

}  // namespace sidr
