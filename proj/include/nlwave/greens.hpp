#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "nlwave/charfn.hpp"
#include "nlwave/grid.hpp"

namespace nlwave {

/// G₀(ξ) = (2π)⁻¹ ∫ e^{iξη} / Δ(iη) dη on the periodic grid ξ_j = -L_G + j·h_G,
/// j = 0..n-1, h_G = 2L_G/n (ξ = 0 sits at j = n/2). L₀G₀ = δ.
struct GreensTable {
    CharFn source;
    double L_G = 0.0;
    int n = 0;
    double h = 0.0;
    std::vector<double> xi;
    std::vector<cplx> values;
    /// Fitted decay rates of |G₀| for ξ → +∞ and ξ → -∞ (infinity when a side vanishes).
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
    double fit_residual_plus = 0.0;
    double fit_residual_minus = 0.0;
    /// Envelope |G₀(ξ)| <= K1 e^{-alpha|ξ|} holding on every sample.
    double K1 = 0.0;
    double alpha = 0.0;

    /// G₀(k·h) for integer k, |k| < n/2.
    cplx at_offset(int k) const { return values[static_cast<std::size_t>(n / 2 + k)]; }
};

/// Fourier inversion with the slowly decaying part of 1/Δ(iη) subtracted and its
/// closed-form inverse added back. n must be a power of two.
/// HyperbolicityError if Δ vanishes on the imaginary axis, HypothesisError for
/// d = c = 0 (G₀ carries a delta), WindowError if the boundary values exceed 1e-6·max|G₀|.
GreensTable compute_g0(const CharFn& cf, double L_G, int n);

/// Half-width making e^{-αL} < 1e-8, with α from a coarse preliminary inversion.
double suggest_window(const CharFn& cf);

/// d = 0: G₀(0+) - G₀(0-). d > 0: G₀'(0+) - G₀'(0-). One-sided limits by
/// cubic extrapolation (fourth-order one-sided differences for d > 0);
/// ResolutionError if they disagree with the next lower order by more than 1e-3.
double jump_at_zero(const GreensTable& gt);

/// v = G₀ * h on the table grid, computed as v̂ = ĥ / Δ(iη). Requires real λ.
std::vector<double> solve_inhomogeneous(const GreensTable& gt, const std::vector<double>& h);

/// A function sampled on a closed uniform grid.
struct Sampled {
    Grid grid;
    std::vector<double> values;
};

/// G_q(ξ_i, η_j) for L₀ + Q with (Qv)(ξ) = m(ξ)v(ξ) + n(ξ)(J*v)(ξ), on the
/// periodic N-point grid carrying m and n.
struct PerturbedKernel {
    Grid grid;
    Eigen::MatrixXd values;  // G_q(ξ_i, η_j)
    int depth = 0;           // number of Neumann terms beyond G₀
    double tail_bound = 0.0; // bound on the sup norm of the dropped operator remainder
    double contraction = 0.0;  // ‖QK₀‖_∞ on the grid
    double epsilon = 0.0;      // max(sup|m|, sup|n|)
    double threshold = 0.0;    // α/(4K₁)
    double K1 = 0.0;
    double alpha = 0.0;
    std::vector<double> term_norms;  // sup of the j-th kernel term, j = 0..depth

    /// Quadrature of ∫G_q(ξ, η)h(η)dη on the grid.
    std::vector<double> apply(const std::vector<double>& h) const;
};

/// Neumann series G_q = K₀ Σ_j (-QK₀)^j truncated when the geometric tail bound
/// drops below tol. PerturbationTooLarge if ε >= α/(4K₁) or the grid contraction
/// is not below 1. SizeError above 2049 grid points.
PerturbedKernel perturbed_green(const CharFn& cf, const Sampled& m, const Sampled& n, double tol);

/// (L₀ + Q)v with the spectral periodic discretization used by perturbed_green.
std::vector<double> apply_perturbed_operator(const CharFn& cf, const Sampled& m, const Sampled& n,
                                             const std::vector<double>& v);

/// Decay rate ν of max over |ξ-η| = r of |G_q(ξ,η)| and the matching prefactor.
struct KernelDecay {
    double nu = 0.0;
    double K = 0.0;
    double r2 = 0.0;
};
KernelDecay fit_kernel_decay(const PerturbedKernel& pk);

}  // namespace nlwave
