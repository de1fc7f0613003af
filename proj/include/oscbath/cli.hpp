// cli.hpp — reproducible experiment pipelines behind the command-line tool:
// verify (identity checks), evolve (trajectory + analysis), sweep
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oscbath/params.hpp"

namespace oscbath::cli {

// Flat configuration mirrored by the JSON config file; CLI flags override
// file values field by field.
struct RunConfig {
    double omega0 = 1.0;
    double eta = 0.2;
    double cutoff = 20.0;
    double beta = 2.0;
    long n_modes = 1200;
    std::string scheme = "midpoint"; // midpoint | gauss
    double t_max = 60.0;
    double dt = 0.05;
    std::string fit_channel = "p2"; // p2 | q2
    double fit_lo = -1.0;           // < 0: auto (2/eta)
    double fit_hi = -1.0;           // < 0: auto (min(t_max, recurrence/2))
    double equil_rel_tol = 0.01;
    std::string output_dir = "out";
    bool free_run = false;      // uncoupled control experiment (requires eta == 0)
    std::string bath_csv = "";  // verify: load the bath from CSV instead of discretizing
};

// Parses the flat JSON document; unknown keys are rejected (InvalidParam).
RunConfig config_from_json_file(const std::filesystem::path& path);
void validate(const RunConfig& cfg);

// Exit codes: 0 success, 1 validation, 2 numerical-check failure, 3 I/O.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

// Runs the normal-mode identity checks plus the spectral boundary invariant
// and writes verify.json (and bath.csv/modes.csv for inspection) to the
// output directory. Returns kExitOk iff every residual is below threshold.
int run_verify(const RunConfig& cfg);

// Full pipeline: discretize -> modes -> trajectory -> analysis -> continuum
// comparison. Writes trajectory.csv, equilibrium.json, summary.json.
int run_evolve(const RunConfig& cfg);

// One pipeline run per value of the varied parameter; per-point failures are
// recorded in-row and the sweep continues. Writes sweep.csv.
int run_sweep(const RunConfig& cfg, const std::string& vary, const std::vector<double>& values);

// Maps an exception thrown by the pipeline to the documented exit code and
// prints the message to stderr.
int exit_code_for_current_exception();

} // namespace oscbath::cli
