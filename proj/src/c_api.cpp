// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sidr/sidr.h"

#include <exception>
#include <new>
#include <string>

#include "sidr/analysis.hpp"
#include "sidr/driver.hpp"
#include "sidr/engine.hpp"
#include "sidr/sparse_format.hpp"
#include "sidr/workload.hpp"

struct sidr_config {
    sidr::SimConfig cfg;
};

struct sidr_matrix {
    sidr::DenseMatrix m;
};

struct sidr_result {
    sidr::SimResult result;
    std::string json;
};

struct sidr_text {
    std::string text;
};

namespace {

thread_local std::string last_error;

sidr_status status_of(sidr::Errc code)
{
    using sidr::Errc;
    switch (code) {
    case Errc::invalid_argument: return SIDR_ERR_INVALID_ARGUMENT;
    case Errc::corrupt_input: return SIDR_ERR_CORRUPT_INPUT;
    case Errc::dimension_mismatch: return SIDR_ERR_DIMENSION;
    case Errc::io: return SIDR_ERR_IO;
    case Errc::bad_magic: return SIDR_ERR_BAD_MAGIC;
    case Errc::bad_dtype: return SIDR_ERR_BAD_DTYPE;
    case Errc::truncated: return SIDR_ERR_TRUNCATED;
    case Errc::parse: return SIDR_ERR_PARSE;
    case Errc::deadlock: return SIDR_ERR_DEADLOCK;
    case Errc::verify_mismatch: return SIDR_ERR_VERIFY_MISMATCH;
    case Errc::trace_cap: return SIDR_ERR_TRACE_CAP;
    }
    return SIDR_ERR_INTERNAL;
}

sidr_status fail(sidr_status status, std::string msg)
{
    last_error = std::move(msg);
    return status;
}

template <typename F>
sidr_status guarded(F&& body) noexcept
{
    try {
        return body();
    } catch (const sidr::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(SIDR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SIDR_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SIDR_ERR_INTERNAL, "unknown exception");
    }
}

#define SIDR_REQUIRE(cond)                                                        \
    do {                                                                          \
        if (!(cond)) return fail(SIDR_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
    } while (0)

sidr_ratio to_ratio(const std::optional<sidr::Rational>& r)
{
    if (!r) return {0, 0};
    return {r->numerator(), r->denominator()};
}

}  // namespace

extern "C" {

const char* sidr_version(void) { return "1.0.0"; }

const char* sidr_last_error(void) { return last_error.c_str(); }

const char* sidr_status_name(sidr_status status)
{
    switch (status) {
    case SIDR_OK: return "ok";
    case SIDR_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SIDR_ERR_CORRUPT_INPUT: return "corrupt_input";
    case SIDR_ERR_DIMENSION: return "dimension_mismatch";
    case SIDR_ERR_IO: return "io";
    case SIDR_ERR_BAD_MAGIC: return "bad_magic";
    case SIDR_ERR_BAD_DTYPE: return "bad_dtype";
    case SIDR_ERR_TRUNCATED: return "truncated";
    case SIDR_ERR_PARSE: return "parse";
    case SIDR_ERR_DEADLOCK: return "deadlock";
    case SIDR_ERR_VERIFY_MISMATCH: return "verify_mismatch";
    case SIDR_ERR_TRACE_CAP: return "trace_cap";
    case SIDR_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

sidr_status sidr_config_create(sidr_config** out)
{
    SIDR_REQUIRE(out);
    return guarded([&] {
        *out = new sidr_config{};
        return SIDR_OK;
    });
}

void sidr_config_destroy(sidr_config* cfg) { delete cfg; }

sidr_status sidr_config_set_array(sidr_config* cfg, uint32_t rows, uint32_t cols)
{
    SIDR_REQUIRE(cfg);
    if (rows == 0 || cols == 0) return fail(SIDR_ERR_INVALID_ARGUMENT, "array dimensions must be >= 1");
    cfg->cfg.array_rows = rows;
    cfg->cfg.array_cols = cols;
    return SIDR_OK;
}

sidr_status sidr_config_set_shared_reg_size(sidr_config* cfg, uint32_t size)
{
    SIDR_REQUIRE(cfg);
    if (size == 0) return fail(SIDR_ERR_INVALID_ARGUMENT, "shared register size must be >= 1");
    cfg->cfg.shared_reg_size = size;
    return SIDR_OK;
}

sidr_status sidr_config_set_segment_length(sidr_config* cfg, uint32_t bits)
{
    SIDR_REQUIRE(cfg);
    if (bits == 0) return fail(SIDR_ERR_INVALID_ARGUMENT, "segment length must be >= 1");
    cfg->cfg.segment_length = bits;
    return SIDR_OK;
}

sidr_status sidr_config_set_output_write_bytes(sidr_config* cfg, uint32_t bytes)
{
    SIDR_REQUIRE(cfg);
    if (bytes == 0) return fail(SIDR_ERR_INVALID_ARGUMENT, "output write bytes must be >= 1");
    cfg->cfg.output_write_bytes = bytes;
    return SIDR_OK;
}

sidr_status sidr_config_set_count_bitmap_bytes(sidr_config* cfg, int enabled)
{
    SIDR_REQUIRE(cfg);
    cfg->cfg.count_bitmap_bytes = enabled != 0;
    return SIDR_OK;
}

sidr_status sidr_config_set_deadlock_policy(sidr_config* cfg, sidr_deadlock_policy policy)
{
    SIDR_REQUIRE(cfg);
    switch (policy) {
    case SIDR_DEADLOCK_DIRECT_FETCH: cfg->cfg.deadlock_policy = sidr::DeadlockPolicy::direct_fetch; break;
    case SIDR_DEADLOCK_ERROR: cfg->cfg.deadlock_policy = sidr::DeadlockPolicy::error; break;
    default: return fail(SIDR_ERR_INVALID_ARGUMENT, "unknown deadlock policy");
    }
    return SIDR_OK;
}

sidr_status sidr_config_set_seed(sidr_config* cfg, uint64_t seed)
{
    SIDR_REQUIRE(cfg);
    cfg->cfg.rng_seed = seed;
    return SIDR_OK;
}

sidr_status sidr_config_set_threads(sidr_config* cfg, uint32_t threads)
{
    SIDR_REQUIRE(cfg);
    cfg->cfg.threads = threads;
    return SIDR_OK;
}

sidr_status sidr_matrix_create(uint32_t rows, uint32_t cols, const int8_t* data, sidr_matrix** out)
{
    SIDR_REQUIRE(out);
    SIDR_REQUIRE(data || std::size_t{rows} * cols == 0);
    return guarded([&] {
        const std::size_t count = std::size_t{rows} * cols;
        std::vector<std::int8_t> values(data, data + count);
        *out = new sidr_matrix{sidr::DenseMatrix(rows, cols, std::move(values))};
        return SIDR_OK;
    });
}

sidr_status sidr_matrix_random(uint32_t rows, uint32_t cols, double sparsity, uint64_t seed, sidr_matrix** out)
{
    SIDR_REQUIRE(out);
    return guarded([&] {
        *out = new sidr_matrix{sidr::gen_random(rows, cols, sparsity, seed)};
        return SIDR_OK;
    });
}

sidr_status sidr_matrix_load(const char* path, sidr_matrix** out)
{
    SIDR_REQUIRE(path);
    SIDR_REQUIRE(out);
    return guarded([&] {
        *out = new sidr_matrix{sidr::load_matrix(path)};
        return SIDR_OK;
    });
}

sidr_status sidr_matrix_store(const sidr_matrix* m, const char* path)
{
    SIDR_REQUIRE(m);
    SIDR_REQUIRE(path);
    return guarded([&] {
        sidr::store_matrix(m->m, path);
        return SIDR_OK;
    });
}

void sidr_matrix_destroy(sidr_matrix* m) { delete m; }

uint32_t sidr_matrix_rows(const sidr_matrix* m) { return m ? static_cast<uint32_t>(m->m.rows()) : 0; }
uint32_t sidr_matrix_cols(const sidr_matrix* m) { return m ? static_cast<uint32_t>(m->m.cols()) : 0; }
const int8_t* sidr_matrix_data(const sidr_matrix* m) { return m ? m->m.data().data() : nullptr; }

sidr_status sidr_stream_encode(const int8_t* dense, uint32_t length, uint8_t* out, size_t capacity, size_t* written)
{
    SIDR_REQUIRE(dense || length == 0);
    SIDR_REQUIRE(written);
    SIDR_REQUIRE(out || capacity == 0);
    return guarded([&] {
        const auto bytes = sidr::encode_stream(sidr::compress(std::span<const std::int8_t>(dense, length)));
        *written = bytes.size();
        if (bytes.size() > capacity) return fail(SIDR_ERR_INVALID_ARGUMENT, "output buffer too small");
        std::copy(bytes.begin(), bytes.end(), out);
        return SIDR_OK;
    });
}

sidr_status sidr_stream_decode(const uint8_t* bytes, size_t size, int8_t* dense, size_t capacity, uint32_t* length)
{
    SIDR_REQUIRE(bytes || size == 0);
    SIDR_REQUIRE(length);
    return guarded([&] {
        const auto cv = sidr::decode_stream(std::span<const std::uint8_t>(bytes, size));
        *length = static_cast<uint32_t>(cv.length());
        if (cv.length() > capacity || (dense == nullptr && cv.length() != 0)) {
            return fail(SIDR_ERR_INVALID_ARGUMENT, "output buffer too small");
        }
        const auto values = sidr::decompress(cv);
        std::copy(values.begin(), values.end(), dense);
        return SIDR_OK;
    });
}

sidr_status sidr_simulate(const sidr_matrix* a, const sidr_matrix* b, const sidr_config* cfg, sidr_result** out)
{
    SIDR_REQUIRE(a);
    SIDR_REQUIRE(b);
    SIDR_REQUIRE(cfg);
    SIDR_REQUIRE(out);
    return guarded([&] {
        auto result = sidr::simulate_matmul(a->m, b->m, cfg->cfg);
        auto json = sidr::report_json(result.report, cfg->cfg);
        *out = new sidr_result{std::move(result), std::move(json)};
        return SIDR_OK;
    });
}

void sidr_result_destroy(sidr_result* r) { delete r; }

uint32_t sidr_result_rows(const sidr_result* r) { return r ? static_cast<uint32_t>(r->result.c.rows()) : 0; }
uint32_t sidr_result_cols(const sidr_result* r) { return r ? static_cast<uint32_t>(r->result.c.cols()) : 0; }
const int32_t* sidr_result_output(const sidr_result* r) { return r ? r->result.c.data().data() : nullptr; }

sidr_status sidr_result_counters(const sidr_result* r, sidr_counters* out)
{
    SIDR_REQUIRE(r);
    SIDR_REQUIRE(out);
    const auto& c = r->result.report.counters;
    *out = {c.cycles,
            c.active_macs,
            c.idle_pe_cycles,
            c.input_bytes_read,
            c.weight_bytes_read,
            c.output_bytes_written,
            c.bitmap_bytes_read,
            c.refill_events,
            c.zero_progress_events,
            c.direct_fetch_events,
            c.accumulator_range_events,
            c.read_once_violations};
    return SIDR_OK;
}

sidr_status sidr_result_metrics(const sidr_result* r, sidr_metrics* out)
{
    SIDR_REQUIRE(r);
    SIDR_REQUIRE(out);
    const auto& rep = r->result.report;
    *out = {};
    out->mapm = to_ratio(rep.mapm);
    out->utilization = to_ratio(rep.utilization);
    if (rep.speedup.kind == sidr::Speedup::Kind::finite) out->speedup = to_ratio(rep.speedup.value);
    out->speedup_unbounded = rep.speedup.kind == sidr::Speedup::Kind::unbounded;
    out->sparten_mapm = to_ratio(rep.sparten_mapm);
    out->dense_mapm = to_ratio(rep.dense_mapm);
    out->dense_cycles = rep.dense_cycles;
    out->total_matches = rep.total_matches;
    return SIDR_OK;
}

const char* sidr_result_report_json(const sidr_result* r) { return r ? r->json.c_str() : nullptr; }

sidr_status sidr_trace(const sidr_matrix* a, const sidr_matrix* b, const sidr_config* cfg, uint64_t first_cycle,
                       uint64_t last_cycle, uint64_t cap, sidr_line_callback cb, void* user)
{
    SIDR_REQUIRE(a);
    SIDR_REQUIRE(b);
    SIDR_REQUIRE(cfg);
    SIDR_REQUIRE(cb);
    return guarded([&] {
        sidr::TraceOptions opts{first_cycle, last_cycle, cap};
        sidr::run_trace(a->m, b->m, cfg->cfg, opts, [&](const std::string& line) { cb(line.c_str(), user); });
        return SIDR_OK;
    });
}

const char* sidr_sweep_csv_header(void) { return sidr::sweep_csv_header; }

sidr_status sidr_sweep(const double* input_sparsity, size_t n_input, const double* weight_sparsity, size_t n_weight,
                       uint32_t m, uint32_t n, uint32_t k, uint32_t seeds, const sidr_config* cfg,
                       sidr_line_callback on_row, void* user, sidr_text** csv)
{
    SIDR_REQUIRE(input_sparsity || n_input == 0);
    SIDR_REQUIRE(weight_sparsity || n_weight == 0);
    SIDR_REQUIRE(cfg);
    SIDR_REQUIRE(csv);
    return guarded([&] {
        sidr::SweepSpec spec;
        spec.input_sparsity.assign(input_sparsity, input_sparsity + n_input);
        spec.weight_sparsity.assign(weight_sparsity, weight_sparsity + n_weight);
        spec.m = m;
        spec.n = n;
        spec.k = k;
        spec.seeds = seeds;
        const auto cells = sidr::run_sweep(spec, cfg->cfg, [&](const sidr::SweepCell& cell) {
            if (on_row) on_row(sidr::sweep_csv_row(cell).c_str(), user);
        });
        *csv = new sidr_text{sidr::sweep_csv(cells)};
        return SIDR_OK;
    });
}

sidr_status sidr_verify(const uint32_t* dims, size_t n_dims, const double* sparsities, size_t n_sparsities,
                        uint32_t seeds, const sidr_config* cfg, sidr_text** summary)
{
    SIDR_REQUIRE(dims || n_dims == 0);
    SIDR_REQUIRE(sparsities || n_sparsities == 0);
    SIDR_REQUIRE(cfg);
    SIDR_REQUIRE(summary);
    return guarded([&] {
        sidr::VerifySpec spec;
        spec.dims.assign(dims, dims + n_dims);
        spec.sparsities.assign(sparsities, sparsities + n_sparsities);
        spec.seeds = seeds;
        const auto outcome = sidr::run_verify(spec, cfg->cfg);
        *summary = new sidr_text{sidr::verify_summary(outcome)};
        if (!outcome.ok()) return fail(SIDR_ERR_VERIFY_MISMATCH, "simulated product disagrees with the reference");
        return SIDR_OK;
    });
}

const char* sidr_text_data(const sidr_text* t) { return t ? t->text.c_str() : nullptr; }

void sidr_text_destroy(sidr_text* t) { delete t; }

}  // extern "C"
