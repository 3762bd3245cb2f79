/*
 * Copyright 2026 The sidrsim Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * C interface to the sidrsim library. All objects are opaque handles owned
 * by the caller and released with the matching *_destroy function. Every
 * fallible call returns a sidr_status; on failure sidr_last_error() holds a
 * message for the calling thread until its next failing call.
 */

#ifndef SIDR_SIDR_H_
#define SIDR_SIDR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SIDR_API __declspec(dllexport)
#else
#define SIDR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sidr_status {
    SIDR_OK = 0,
    SIDR_ERR_INVALID_ARGUMENT = 1,
    SIDR_ERR_CORRUPT_INPUT = 2,
    SIDR_ERR_DIMENSION = 3,
    SIDR_ERR_IO = 4,
    SIDR_ERR_BAD_MAGIC = 5,
    SIDR_ERR_BAD_DTYPE = 6,
    SIDR_ERR_TRUNCATED = 7,
    SIDR_ERR_PARSE = 8,
    SIDR_ERR_DEADLOCK = 9,
    SIDR_ERR_VERIFY_MISMATCH = 10,
    SIDR_ERR_TRACE_CAP = 11,
    SIDR_ERR_INTERNAL = 12
} sidr_status;

typedef enum sidr_deadlock_policy {
    SIDR_DEADLOCK_DIRECT_FETCH = 0,
    SIDR_DEADLOCK_ERROR = 1
} sidr_deadlock_policy;

typedef struct sidr_config sidr_config;
typedef struct sidr_matrix sidr_matrix;
typedef struct sidr_result sidr_result;
typedef struct sidr_text sidr_text;

typedef struct sidr_counters {
    uint64_t cycles;
    uint64_t active_macs;
    uint64_t idle_pe_cycles;
    uint64_t input_bytes_read;
    uint64_t weight_bytes_read;
    uint64_t output_bytes_written;
    uint64_t bitmap_bytes_read;
    uint64_t refill_events;
    uint64_t zero_progress_events;
    uint64_t direct_fetch_events;
    uint64_t accumulator_range_events;
    uint64_t read_once_violations;
} sidr_counters;

/* Exact ratio; den == 0 marks an undefined metric. */
typedef struct sidr_ratio {
    int64_t num;
    int64_t den;
} sidr_ratio;

typedef struct sidr_metrics {
    sidr_ratio mapm;
    sidr_ratio utilization;
    sidr_ratio speedup;
    int speedup_unbounded;
    sidr_ratio sparten_mapm;
    sidr_ratio dense_mapm;
    uint64_t dense_cycles;
    uint64_t total_matches;
} sidr_metrics;

SIDR_API const char* sidr_version(void);
SIDR_API const char* sidr_last_error(void);
SIDR_API const char* sidr_status_name(sidr_status status);

/* Configuration; defaults are a 16x16 array with 8-entry shared registers. */
SIDR_API sidr_status sidr_config_create(sidr_config** out);
SIDR_API void sidr_config_destroy(sidr_config* cfg);
SIDR_API sidr_status sidr_config_set_array(sidr_config* cfg, uint32_t rows, uint32_t cols);
SIDR_API sidr_status sidr_config_set_shared_reg_size(sidr_config* cfg, uint32_t size);
SIDR_API sidr_status sidr_config_set_segment_length(sidr_config* cfg, uint32_t bits);
SIDR_API sidr_status sidr_config_set_output_write_bytes(sidr_config* cfg, uint32_t bytes);
SIDR_API sidr_status sidr_config_set_count_bitmap_bytes(sidr_config* cfg, int enabled);
SIDR_API sidr_status sidr_config_set_deadlock_policy(sidr_config* cfg, sidr_deadlock_policy policy);
SIDR_API sidr_status sidr_config_set_seed(sidr_config* cfg, uint64_t seed);
SIDR_API sidr_status sidr_config_set_threads(sidr_config* cfg, uint32_t threads);

/* int8 matrices. */
SIDR_API sidr_status sidr_matrix_create(uint32_t rows, uint32_t cols, const int8_t* data, sidr_matrix** out);
SIDR_API sidr_status sidr_matrix_random(uint32_t rows, uint32_t cols, double sparsity, uint64_t seed,
                                        sidr_matrix** out);
SIDR_API sidr_status sidr_matrix_load(const char* path, sidr_matrix** out);
SIDR_API sidr_status sidr_matrix_store(const sidr_matrix* m, const char* path);
SIDR_API void sidr_matrix_destroy(sidr_matrix* m);
SIDR_API uint32_t sidr_matrix_rows(const sidr_matrix* m);
SIDR_API uint32_t sidr_matrix_cols(const sidr_matrix* m);
SIDR_API const int8_t* sidr_matrix_data(const sidr_matrix* m);

/* Compressed-stream layout of a dense int8 vector. Writes at most `capacity`
 * bytes; `*written` always receives the full encoded size. */
SIDR_API sidr_status sidr_stream_encode(const int8_t* dense, uint32_t length, uint8_t* out, size_t capacity,
                                        size_t* written);
/* Decodes into `dense` (capacity entries); `*length` receives K. */
SIDR_API sidr_status sidr_stream_decode(const uint8_t* bytes, size_t size, int8_t* dense, size_t capacity,
                                        uint32_t* length);

/* C = A x B on the simulated array. */
SIDR_API sidr_status sidr_simulate(const sidr_matrix* a, const sidr_matrix* b, const sidr_config* cfg,
                                   sidr_result** out);
SIDR_API void sidr_result_destroy(sidr_result* r);
SIDR_API uint32_t sidr_result_rows(const sidr_result* r);
SIDR_API uint32_t sidr_result_cols(const sidr_result* r);
SIDR_API const int32_t* sidr_result_output(const sidr_result* r);
SIDR_API sidr_status sidr_result_counters(const sidr_result* r, sidr_counters* out);
SIDR_API sidr_status sidr_result_metrics(const sidr_result* r, sidr_metrics* out);
/* Report document; valid until the result is destroyed. */
SIDR_API const char* sidr_result_report_json(const sidr_result* r);

/* Called once per trace line (JSON, no trailing newline). */
typedef void (*sidr_line_callback)(const char* line, void* user);

SIDR_API sidr_status sidr_trace(const sidr_matrix* a, const sidr_matrix* b, const sidr_config* cfg,
                                uint64_t first_cycle, uint64_t last_cycle, uint64_t cap, sidr_line_callback cb,
                                void* user);

/* Sparsity sweep; the text handle receives the CSV. `on_row`, when non-null,
 * sees each CSV row as its cell completes. */
SIDR_API const char* sidr_sweep_csv_header(void);
SIDR_API sidr_status sidr_sweep(const double* input_sparsity, size_t n_input, const double* weight_sparsity,
                                size_t n_weight, uint32_t m, uint32_t n, uint32_t k, uint32_t seeds,
                                const sidr_config* cfg, sidr_line_callback on_row, void* user, sidr_text** csv);

/* Returns SIDR_ERR_VERIFY_MISMATCH when any case disagrees with the
 * reference product; the summary is produced either way. */
SIDR_API sidr_status sidr_verify(const uint32_t* dims, size_t n_dims, const double* sparsities,
                                 size_t n_sparsities, uint32_t seeds, const sidr_config* cfg, sidr_text** summary);

SIDR_API const char* sidr_text_data(const sidr_text* t);
SIDR_API void sidr_text_destroy(sidr_text* t);

#ifdef __cplusplus
}
#endif

#endif /* SIDR_SIDR_H_ */
