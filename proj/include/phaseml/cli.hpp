#pragma once

// Command-line front end. Subcommands wrap the library into reproducible
// experiments emitting CSV/JSON artifacts.
//
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical-contract
// violation.

#include <cstdint>
#include <string>

#include "phaseml/comparison.hpp"
#include "phaseml/inference.hpp"

namespace phaseml::cli {

enum class Command {
    simulate,
    estimate,
    entropy_scan,
    fisher_scan,
    figure1,
    resolution,
    decompose,
    compare_vs,
};

struct RunConfig {
    Command command = Command::simulate;
    double amp = 1.0;
    double sig_phase = 0.0;
    double squeeze = 0.0;
    double theta_prime = 0.0;
    double phi = 0.0;
    bool has_phi = false;
    long long n = 100;
    std::uint64_t seed = 0;
    long long grid_count = 0;  // 0 selects the per-command default
    long long theta_count = 181;
    PhaseInterval interval = PhaseInterval::half;
    bool amp_given = false;
    bool squeeze_given = false;
    bool degrees = false;
    std::string input_path;
    std::string output_path;
    std::string report_path;
    ResolutionMethod method = ResolutionMethod::ml_dispersion;
};

int run_command(const RunConfig& config);

// Parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv);

}  // namespace phaseml::cli
