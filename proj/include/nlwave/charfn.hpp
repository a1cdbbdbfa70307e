#pragma once

#include <complex>

#include "nlwave/kernel.hpp"
#include "nlwave/model.hpp"

namespace nlwave {

/// Δ(z) = d z² - c z + (a - λ) + b M(z).
struct CharFn {
    double d = 0.0;
    double c = 0.0;
    double a = 0.0;
    double b = 0.0;
    cplx lambda = 0.0;
    Kernel kernel = Kernel::gaussian(1.0);
};

/// Characteristic functions of the limiting operators at ξ → +∞ and ξ → -∞.
CharFn plus_charfn(const ModelProblem& problem, double c, cplx lambda = 0.0);
CharFn minus_charfn(const ModelProblem& problem, double c, cplx lambda = 0.0);

cplx eval_delta(const CharFn& cf, cplx z);
/// Δ'(z) = 2dz - c - b ∫ s J(s) e^{-zs} ds.
cplx eval_delta_prime(const CharFn& cf, cplx z);

struct RootPair {
    double lambda_s = 0.0;  // < 0
    double lambda_u = 0.0;  // > 0
    double residual_s = 0.0;
    double residual_u = 0.0;
};

/// The two real roots. Requires real λ with a - λ < 0 < b < -(a - λ); otherwise
/// HypothesisError. DivergenceError when no sign change is found within |z| <= 50.
RootPair real_roots(const CharFn& cf);

/// Number of zeros of Δ in re_lo < Re z < re_hi, |Im z| < im_max, from the
/// winding number of the rectangle contour. ContourError if |Δ| < 1e-8 on the
/// boundary; AccuracyError if the winding stays more than 0.1 from an integer
/// after one refinement.
int count_zeros_in_strip(const CharFn& cf, double re_lo, double re_hi, double im_max);

struct HyperbolicityScan {
    bool hyperbolic = false;
    double min_abs = 0.0;     // min over the scan of |Δ(iη)|
    double eta_at_min = 0.0;
    double eta_max = 0.0;     // scan window [-eta_max, eta_max]
    bool window_certified = false;  // growth bound excludes zeros beyond the window
};

/// Scans |Δ(iη)| on [-η_max, η_max], where η_max makes
/// |dη² + icη - (a-λ)| - |b|·M(0) exceed 1; local minima are refined by golden section.
HyperbolicityScan hyperbolicity_scan(const CharFn& cf, double tol = 1e-8);
bool is_hyperbolic(const CharFn& cf);

/// ι̅ = max(a⁺+b⁺, a⁻+b⁻), ι_ = min(a⁺-b⁺, a⁻-b⁻) and the two printed forms of Ξ.
struct RegionReport {
    double iota_bar = 0.0;
    double iota_underbar = 0.0;
    double d = 0.0;
    double c = 0.0;
    double b_min = 0.0;  // b⁺ ∧ b⁻

    bool in_strip(cplx lambda, double margin = 0.0) const;
    bool in_omega_plus(cplx lambda) const { return lambda.real() > iota_bar; }
    bool in_omega_minus(cplx lambda) const { return lambda.real() < iota_underbar; }
    /// |Im λ| > √(ι̅ - Re λ) + b∧, Re λ <= ι̅; or Re λ > ι̅.
    bool in_xi_theorem(cplx lambda) const;
    /// |Im λ| > c²√(ι̅ - Re λ) + b∧; or Re λ > ι̅.
    bool in_xi_appendix(cplx lambda) const;
};

RegionReport spectrum_regions(const ModelProblem& problem, double c);

}  // namespace nlwave
