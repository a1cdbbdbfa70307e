#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nlwave/errors.hpp"
#include "nlwave/wave.hpp"

namespace nlwave::cli {

/// Everything a command reads. Optional solver fields override the command's defaults.
struct RunConfig {
    std::string model = "phase";
    std::filesystem::path out = "nlwave-out";
    std::uint64_t seed = 0;
    bool reproducible = false;

    std::optional<double> L;
    std::optional<int> n;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<double> u0;
    std::optional<double> seed_width;
    std::optional<std::filesystem::path> init;
    bool force = false;

    // rates
    std::optional<std::filesystem::path> wave_file;
    std::vector<double> window;  // empty or {lo, hi} in |ξ|

    // greens
    double d = 1.0;
    double c = 0.0;
    double a = -1.0;
    double b = 0.0;
    std::string kernel = "gaussian";
    double kernel_parameter = 1.0;
    std::optional<double> L_G;
    int n_G = 4096;

    /// Solver settings with the overrides applied; ConfigError on invalid values.
    SolverConfig solver(double default_L, int default_n) const;
};

int cmd_check(const RunConfig& config);
int cmd_solve(const RunConfig& config);
int cmd_rates(const RunConfig& config);
int cmd_spectrum(const RunConfig& config);
int cmd_greens(const RunConfig& config);
int cmd_demo(const RunConfig& config);

/// Parses the command line and dispatches. Exit codes: 0 success, 1 numerical or
/// quality failure, 2 usage or configuration error.
int run(int argc, char** argv);

}  // namespace nlwave::cli
