// Copyright 2026 The sidrsim Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver. Talks to the simulator only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sidr/sidr.h"

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_usage = 2,
    exit_io = 3,
    exit_dimension = 4,
    exit_verify = 5,
    exit_deadlock = 6,
    exit_refused = 7,
};

int exit_code_for(sidr_status s)
{
    switch (s) {
    case SIDR_OK: return exit_ok;
    case SIDR_ERR_INVALID_ARGUMENT: return exit_usage;
    case SIDR_ERR_IO:
    case SIDR_ERR_BAD_MAGIC:
    case SIDR_ERR_BAD_DTYPE:
    case SIDR_ERR_TRUNCATED:
    case SIDR_ERR_PARSE:
    case SIDR_ERR_CORRUPT_INPUT: return exit_io;
    case SIDR_ERR_DIMENSION: return exit_dimension;
    case SIDR_ERR_VERIFY_MISMATCH: return exit_verify;
    case SIDR_ERR_DEADLOCK: return exit_deadlock;
    case SIDR_ERR_TRACE_CAP: return exit_refused;
    case SIDR_ERR_INTERNAL: break;
    }
    return exit_internal;
}

struct Failure {
    int code;
};

void check(sidr_status s)
{
    if (s == SIDR_OK) return;
    std::cerr << "sidrsim: " << sidr_status_name(s) << ": " << sidr_last_error() << "\n";
    throw Failure{exit_code_for(s)};
}

struct ConfigDeleter {
    void operator()(sidr_config* c) const { sidr_config_destroy(c); }
};
struct MatrixDeleter {
    void operator()(sidr_matrix* m) const { sidr_matrix_destroy(m); }
};
struct ResultDeleter {
    void operator()(sidr_result* r) const { sidr_result_destroy(r); }
};
struct TextDeleter {
    void operator()(sidr_text* t) const { sidr_text_destroy(t); }
};

using ConfigPtr = std::unique_ptr<sidr_config, ConfigDeleter>;
using MatrixPtr = std::unique_ptr<sidr_matrix, MatrixDeleter>;
using ResultPtr = std::unique_ptr<sidr_result, ResultDeleter>;
using TextPtr = std::unique_ptr<sidr_text, TextDeleter>;

struct ConfigFlags {
    std::uint32_t array_rows = 16;
    std::uint32_t array_cols = 16;
    std::uint32_t shared_reg_size = 8;
    std::uint32_t segment_length = 64;
    std::uint32_t output_write_bytes = 1;
    bool count_bitmap_bytes = false;
    std::string deadlock_policy = "direct_fetch";
    std::uint64_t seed = 0;
    std::uint32_t threads = 0;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--array-rows", array_rows, "PE array rows")->capture_default_str();
        cmd->add_option("--array-cols", array_cols, "PE array columns")->capture_default_str();
        cmd->add_option("--shared-reg-size", shared_reg_size, "entries per shared register")->capture_default_str();
        cmd->add_option("--segment-length", segment_length, "EIM segment width in bits")->capture_default_str();
        cmd->add_option("--output-write-bytes", output_write_bytes, "bytes written per output element")
            ->capture_default_str();
        cmd->add_flag("--count-bitmap-bytes", count_bitmap_bytes, "charge bitmap metadata reads to MAPM");
        cmd->add_option("--deadlock-policy", deadlock_policy, "zero-progress handling")
            ->check(CLI::IsMember({"error", "direct_fetch"}))
            ->capture_default_str();
        cmd->add_option("--seed", seed, "base RNG seed")->capture_default_str();
        cmd->add_option("--threads", threads, "tile worker threads (0 = all cores)")->capture_default_str();
    }

    ConfigPtr build() const
    {
        sidr_config* raw = nullptr;
        check(sidr_config_create(&raw));
        ConfigPtr cfg(raw);
        check(sidr_config_set_array(raw, array_rows, array_cols));
        check(sidr_config_set_shared_reg_size(raw, shared_reg_size));
        check(sidr_config_set_segment_length(raw, segment_length));
        check(sidr_config_set_output_write_bytes(raw, output_write_bytes));
        check(sidr_config_set_count_bitmap_bytes(raw, count_bitmap_bytes ? 1 : 0));
        check(sidr_config_set_deadlock_policy(
            raw, deadlock_policy == "error" ? SIDR_DEADLOCK_ERROR : SIDR_DEADLOCK_DIRECT_FETCH));
        check(sidr_config_set_seed(raw, seed));
        check(sidr_config_set_threads(raw, threads));
        return cfg;
    }
};

MatrixPtr load(const std::string& path)
{
    sidr_matrix* raw = nullptr;
    check(sidr_matrix_load(path.c_str(), &raw));
    return MatrixPtr(raw);
}

void print_line(const char* line, void*)
{
    std::fputs(line, stdout);
    std::fputc('\n', stdout);
    std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cycle-level simulator of a sparse shared-register PE array"};
    app.require_subcommand(1);

    ConfigFlags run_flags, sweep_flags, verify_flags, trace_flags;

    auto* run = app.add_subcommand("run", "simulate A x B and print a JSON report");
    std::string run_a, run_b;
    run->add_option("A", run_a, "left operand (M x K matrix file)")->required();
    run->add_option("B", run_b, "right operand (K x N matrix file)")->required();
    run_flags.attach(run);

    auto* sweep = app.add_subcommand("sweep", "random-matrix sparsity sweep, CSV on stdout");
    std::vector<double> input_sparsity{0.5, 0.6, 0.7};
    std::vector<double> weight_sparsity{0.5, 0.6, 0.7};
    std::uint32_t sweep_m = 1024, sweep_n = 1024, sweep_k = 1024, sweep_seeds = 1;
    sweep->add_option("--input-sparsity", input_sparsity, "comma-separated input sparsities")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--weight-sparsity", weight_sparsity, "comma-separated weight sparsities")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("-m,--rows", sweep_m, "rows of A")->capture_default_str();
    sweep->add_option("-n,--cols", sweep_n, "columns of B")->capture_default_str();
    sweep->add_option("-k,--inner", sweep_k, "inner dimension")->capture_default_str();
    sweep->add_option("--seeds", sweep_seeds, "random matrix pairs per cell")->capture_default_str();
    sweep_flags.attach(sweep);

    auto* verify = app.add_subcommand("verify", "compare simulated products against a reference multiply");
    std::vector<std::uint32_t> verify_dims{4, 16, 17, 64, 128};
    std::vector<double> verify_sparsities{0.0, 0.25, 0.5, 0.75, 0.95};
    std::uint32_t verify_seeds = 5;
    verify->add_option("--dims", verify_dims, "square problem sizes")->delimiter(',')->capture_default_str();
    verify->add_option("--sparsities", verify_sparsities, "sparsity grid for both operands")
        ->delimiter(',')
        ->capture_default_str();
    verify->add_option("--seeds", verify_seeds, "seeds per grid point")->capture_default_str();
    verify_flags.attach(verify);

    auto* trace = app.add_subcommand("trace", "per-cycle JSON-lines trace of A x B");
    std::string trace_a, trace_b;
    std::uint64_t first_cycle = 1, last_cycle = UINT64_MAX, cap = 1'000'000;
    trace->add_option("A", trace_a, "left operand")->required();
    trace->add_option("B", trace_b, "right operand")->required();
    trace->add_option("--first-cycle", first_cycle, "first cycle to emit (1-based)")->capture_default_str();
    trace->add_option("--last-cycle", last_cycle, "last cycle to emit");
    trace->add_option("--cap", cap, "refuse workloads above this many PE-cycles")->capture_default_str();
    trace_flags.attach(trace);

    auto* gen = app.add_subcommand("gen", "write a random matrix file");
    std::uint32_t gen_rows = 0, gen_cols = 0;
    double gen_sparsity = 0.0;
    std::string gen_out;
    gen->add_option("rows", gen_rows)->required();
    gen->add_option("cols", gen_cols)->required();
    gen->add_option("output", gen_out)->required();
    std::uint64_t gen_seed = 0;
    gen->add_option("--sparsity", gen_sparsity)->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*run) {
            const auto cfg = run_flags.build();
            const auto a = load(run_a);
            const auto b = load(run_b);
            sidr_result* raw = nullptr;
            check(sidr_simulate(a.get(), b.get(), cfg.get(), &raw));
            const ResultPtr result(raw);
            std::fputs(sidr_result_report_json(result.get()), stdout);
        } else if (*sweep) {
            const auto cfg = sweep_flags.build();
            std::puts(sidr_sweep_csv_header());
            std::fflush(stdout);
            sidr_text* raw = nullptr;
            check(sidr_sweep(input_sparsity.data(), input_sparsity.size(), weight_sparsity.data(),
                             weight_sparsity.size(), sweep_m, sweep_n, sweep_k, sweep_seeds, cfg.get(), print_line,
                             nullptr, &raw));
            const TextPtr csv(raw);
        } else if (*verify) {
            const auto cfg = verify_flags.build();
            sidr_text* raw = nullptr;
            const auto status = sidr_verify(verify_dims.data(), verify_dims.size(), verify_sparsities.data(),
                                            verify_sparsities.size(), verify_seeds, cfg.get(), &raw);
            const TextPtr summary(raw);
            if (summary) std::fputs(sidr_text_data(summary.get()), stdout);
            check(status);
        } else if (*trace) {
            const auto cfg = trace_flags.build();
            const auto a = load(trace_a);
            const auto b = load(trace_b);
            check(sidr_trace(a.get(), b.get(), cfg.get(), first_cycle, last_cycle, cap, print_line, nullptr));
        } else if (*gen) {
            sidr_matrix* raw = nullptr;
            check(sidr_matrix_random(gen_rows, gen_cols, gen_sparsity, gen_seed, &raw));
            const MatrixPtr m(raw);
            check(sidr_matrix_store(m.get(), gen_out.c_str()));
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return exit_ok;
}
