#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlwave/errors.hpp"
#include "nlwave/grid.hpp"
#include "nlwave/model.hpp"

namespace nlwave {

struct SolverConfig {
    double L = 40.0;
    int n = 2048;
    double tolerance = 1e-10;
    int max_iterations = 50;
    /// Line search halves the Newton step down to this factor before declaring a stall.
    double min_damping = 1.0 / 1024.0;
    /// Phase value U(0) = u0; defaults to the middle zero q.
    std::optional<double> u0;
    /// Width of the default seed tanh(ξ / width).
    double seed_width = 2.0;

    /// ConfigError unless n in [128, 8193] and L >= 10.
    void validate() const;
};

struct IterationRecord {
    int iteration = 0;
    double residual = 0.0;
    double damping = 0.0;
    double c = 0.0;
};

/// ConvergenceError with the Newton trace up to the failure.
class NewtonFailure : public ConvergenceError {
public:
    NewtonFailure(const std::string& what, std::vector<IterationRecord> trace)
        : ConvergenceError(what), trace_(std::move(trace)) {}
    const std::vector<IterationRecord>& trace() const { return trace_; }

private:
    std::vector<IterationRecord> trace_;
};

/// Profile on [-L, L] with U(-L) = -1, U(L) = 1, speed c and the phase U(0) = u0.
struct WaveSolution {
    std::string model;
    Grid grid;
    std::vector<double> xi;
    std::vector<double> U;
    double c = 0.0;
    double u0 = 0.0;
    double residual = 0.0;   // sup norm over interior nodes, independent evaluator
    double tolerance = 0.0;  // Newton tolerance the residual was checked against
    bool monotone = false;
    double boundary_deviation = 0.0;  // max(|U(-L)+1|, |U(L)-1|)
    int iterations = 0;
    std::vector<IterationRecord> trace;
    SolverConfig config;

    /// Cubic interpolation of U at ξ; ∓1 outside [-L, L].
    double at(double xi) const;
};

/// Newton iteration for cU' = dU'' + f(U, J*U) on the grid of `config`.
/// ConvergenceError (with the trace) on stall or iteration limit,
/// MonotonicityError if the converged profile is not strictly increasing.
WaveSolution solve_wave(const ModelProblem& problem, const SolverConfig& config,
                        const std::optional<WaveSolution>& init = std::nullopt);

/// Sup norm over interior nodes of c·D U - d·D²U - f(U, J*U), evaluated by direct
/// summation, independently of the Newton assembly.
double residual(const ModelProblem& problem, const WaveSolution& wave);

/// Same discretization as `residual`, for an arbitrary profile and speed on `grid`,
/// with U continued by `left` and `right` outside the grid.
double residual(const ModelProblem& problem, const Grid& grid, const std::vector<double>& U, double c,
                double left = -1.0, double right = 1.0);

struct ContinuationResult {
    std::vector<WaveSolution> steps;
    std::optional<std::size_t> failed_at;  // index into the path
    std::string failure;
};

/// Solves along `path`, seeding each step with the previous solution. A failure
/// after the first step ends the run and is recorded; a first-step failure throws.
ContinuationResult continuation(const std::function<ModelProblem(double)>& family, const std::vector<double>& path,
                                const SolverConfig& config);

/// ξ* with U(ξ*) = value, by bisection on the cubic interpolant of the monotone profile.
double locate_level(const WaveSolution& wave, double value);

/// Two-column (ξ, U) text with a JSON header line (c, residual, config).
void export_wave(const WaveSolution& wave, const std::filesystem::path& path);
WaveSolution import_wave(const std::filesystem::path& path);

}  // namespace nlwave
