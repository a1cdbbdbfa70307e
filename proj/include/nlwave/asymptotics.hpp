#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlwave/charfn.hpp"
#include "nlwave/model.hpp"
#include "nlwave/wave.hpp"

namespace nlwave {

enum class Side { plus_infinity, minus_infinity };
std::string to_string(Side side);

struct PredictedRates {
    double lambda_s_plus = 0.0;   // negative root of Δ₊
    double lambda_u_minus = 0.0;  // positive root of Δ₋
    RootPair plus;
    RootPair minus;
};

PredictedRates predicted_rates(const ModelProblem& problem, double c);

/// Fit window in |ξ|: ξ ∈ [lo, hi] on the plus side, ξ ∈ [-hi, -lo] on the minus side.
struct FitWindow {
    double lo = 0.0;
    double hi = 0.0;
};

/// [0.3L, 0.8L].
FitWindow default_window(double L);

/// Tail 1 - U ≈ D e^{rate·ξ} (plus side) or U + 1 ≈ D e^{rate·ξ} (minus side).
struct DecayFit {
    Side side = Side::plus_infinity;
    double rate = 0.0;
    double amplitude = 0.0;
    FitWindow window;
    double r2 = 0.0;
    int points = 0;
    std::optional<double> predicted;
    std::optional<double> relative_error;  // |rate - predicted| / |predicted|
};

/// Log-linear fit of positive tail samples over the window. WindowError if the window
/// is empty, starts below 0, reaches the outer 10% of the samples or holds fewer than
/// 8 samples. A window inside the core is not rejected up front; it fails on R².
/// UnderflowWindowError if a sample is below 1e-14; FitError if R² < r2_min.
DecayFit fit_decay(const std::vector<double>& xi, const std::vector<double>& tail, Side side, FitWindow window,
                   double r2_min = 0.999);

/// Fits log(1 - U) or log(U + 1) of the wave; the window defaults to default_window(L).
DecayFit fit_tail_rate(const WaveSolution& wave, Side side, std::optional<FitWindow> window = std::nullopt,
                       std::optional<double> predicted = std::nullopt);

/// U' by second-order differences (centered inside, one-sided at the ends).
std::vector<double> wave_derivative(const WaveSolution& wave);

/// V = U' ≈ γ e^{λξ} at the chosen end, from the residue of ĥ/Δ at the real root λ,
/// where L±V = h± = -M±V. Plus side: γ = N/Δ'₊(λ^s). Minus side: γ = -N/Δ'₋(λ^u).
struct ResidueAmplitude {
    Side side = Side::plus_infinity;
    double lambda = 0.0;
    double numerator = 0.0;           // N = ∫ h(η) e^{-λη} dη
    double delta_prime = 0.0;         // Δ'(λ)
    double printed_denominator = 0.0; // ∫ η J(η) e^{-λη} dη - c
    double gamma = 0.0;
    double gamma_printed = 0.0;       // N / printed_denominator
    double denominator_ratio = 0.0;   // -Δ'(λ) / printed_denominator
    double amplitude = 0.0;           // D₁ = -γ/λ^s or D₂ = γ/λ^u
    bool clipped = false;
    std::string warning;
};

ResidueAmplitude residue_amplitude(const ModelProblem& problem, const WaveSolution& wave, Side side);

struct PairwiseAgreement {
    std::size_t first = 0;
    std::size_t second = 0;
    double speed_difference = 0.0;
    double profile_difference = 0.0;  // sup over the common window after alignment
};

struct UniquenessReport {
    std::vector<WaveSolution> waves;
    std::vector<PairwiseAgreement> pairs;
    double max_speed_difference = 0.0;
    double max_profile_difference = 0.0;
    double speed_tolerance = 1e-6;
    double profile_tolerance = 1e-5;
    double window = 0.0;  // profiles compared on |ξ| <= window
    /// Disagreement beyond tolerance: a solver artifact or a hypothesis violation.
    bool alarm = false;
    std::string message;
};

/// Solves with each config and compares every pair; profiles are aligned at the level q
/// and compared on |ξ| <= L_min/2. SpecError with fewer than two configs.
UniquenessReport uniqueness_check(const ModelProblem& problem, const std::vector<SolverConfig>& configs,
                                  double speed_tolerance = 1e-6, double profile_tolerance = 1e-5);

}  // namespace nlwave
