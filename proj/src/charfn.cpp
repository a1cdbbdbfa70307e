#include "nlwave/charfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBracketLimit = 50.0;

// Real Δ on the real axis. M grows without bound there when b > 0, so an
// overflowing transform is reported as +∞.
double delta_real(const CharFn& cf, double x) {
    try {
        return eval_delta(cf, x).real();
    } catch (const TransformDivergence&) {
        return kInf;
    }
}

double polish_root(const CharFn& cf, double lo, double hi) {
    // Invariant: Δ(lo) < 0 < Δ(hi) on the side being searched, up to orientation.
    double flo = delta_real(cf, lo);
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = delta_real(cf, x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if (std::abs(hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
        const double dfx = eval_delta_prime(cf, x).real();
        double next = (std::isfinite(fx) && dfx != 0.0) ? x - fx / dfx : std::numeric_limits<double>::quiet_NaN();
        const double a = std::min(lo, hi), b = std::max(lo, hi);
        if (!(next > a && next < b)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return x;
}

double find_root(const CharFn& cf, double direction) {
    double prev = 0.0;
    double cap = kBracketLimit;
    if (std::isfinite(cf.kernel.abscissa())) cap = std::min(cap, cf.kernel.abscissa() * (1.0 - 1e-12));
    for (double r = 1.0;; r = std::min(2.0 * r, cap)) {
        const double x = direction * std::min(r, cap);
        if (delta_real(cf, x) > 0.0) return polish_root(cf, prev, x);
        prev = x;
        if (r >= cap) break;
    }
    std::ostringstream msg;
    msg << "no sign change of the characteristic function within |z| <= " << cap << " on the "
        << (direction > 0 ? "positive" : "negative") << " real axis";
    throw DivergenceError(msg.str());
}

// Adaptive Simpson on a complex integrand; accumulates into `sum`.
template <class F>
cplx simpson(F& g, double a, double b, cplx fa, cplx fm, cplx fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx flm = g(lm), frm = g(rm);
    const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson(g, a, m, fa, flm, fm, 0.5 * tol, depth - 1) + simpson(g, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

cplx edge_integral(const CharFn& cf, cplx z0, cplx z1, double tol, int pieces, int depth) {
    const cplx dz = z1 - z0;
    auto g = [&](double t) {
        const cplx z = z0 + t * dz;
        return eval_delta_prime(cf, z) / eval_delta(cf, z) * dz;
    };
    cplx total = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double a = static_cast<double>(k) / pieces, b = static_cast<double>(k + 1) / pieces;
        total += simpson(g, a, b, g(a), g(0.5 * (a + b)), g(b), tol / pieces, depth);
    }
    return total;
}

double boundary_minimum(const CharFn& cf, const std::array<cplx, 4>& corners, int samples) {
    double worst = kInf;
    for (int e = 0; e < 4; ++e) {
        const cplx z0 = corners[static_cast<std::size_t>(e)], z1 = corners[static_cast<std::size_t>((e + 1) % 4)];
        for (int i = 0; i < samples; ++i) {
            const double t = static_cast<double>(i) / samples;
            worst = std::min(worst, std::abs(eval_delta(cf, z0 + t * (z1 - z0))));
        }
    }
    return worst;
}

}  // namespace

CharFn plus_charfn(const ModelProblem& problem, double c, cplx lambda) {
    const auto& k = problem.constants();
    return {problem.d(), c, k.a_plus, k.b_plus, lambda, problem.kernel()};
}

CharFn minus_charfn(const ModelProblem& problem, double c, cplx lambda) {
    const auto& k = problem.constants();
    return {problem.d(), c, k.a_minus, k.b_minus, lambda, problem.kernel()};
}

cplx eval_delta(const CharFn& cf, cplx z) {
    cplx v = cf.d * z * z - cf.c * z + (cf.a - cf.lambda);
    if (cf.b != 0.0) v += cf.b * cf.kernel.transform(z);
    return v;
}

cplx eval_delta_prime(const CharFn& cf, cplx z) {
    cplx v = 2.0 * cf.d * z - cf.c;
    if (cf.b != 0.0) v -= cf.b * cf.kernel.first_moment(z);
    return v;
}

RootPair real_roots(const CharFn& cf) {
    const double shifted = cf.a - cf.lambda.real();
    if (cf.lambda.imag() != 0.0 || !(shifted < 0.0) || !(cf.b > 0.0) || !(cf.b < -shifted)) {
        std::ostringstream msg;
        msg << "real_roots needs real lambda with a - lambda < 0 < b < -(a - lambda); got a - lambda = "
            << shifted << ", b = " << cf.b << ", Im lambda = " << cf.lambda.imag();
        throw HypothesisError(msg.str());
    }
    RootPair roots;
    roots.lambda_s = find_root(cf, -1.0);
    roots.lambda_u = find_root(cf, +1.0);
    roots.residual_s = std::abs(eval_delta(cf, roots.lambda_s));
    roots.residual_u = std::abs(eval_delta(cf, roots.lambda_u));
    return roots;
}

int count_zeros_in_strip(const CharFn& cf, double re_lo, double re_hi, double im_max) {
    if (!(re_lo < re_hi) || !(im_max > 0.0)) throw SpecError("count_zeros_in_strip needs re_lo < re_hi and im_max > 0");
    const double abscissa = cf.kernel.abscissa();
    if (std::max(std::abs(re_lo), std::abs(re_hi)) >= abscissa) {
        throw TransformDivergence("strip reaches the abscissa where the kernel transform diverges");
    }
    const std::array<cplx, 4> corners = {cplx(re_lo, -im_max), cplx(re_hi, -im_max), cplx(re_hi, im_max),
                                         cplx(re_lo, im_max)};
    const double floor = boundary_minimum(cf, corners, 2000);
    if (floor < 1e-8) {
        std::ostringstream msg;
        msg << "characteristic function nearly vanishes on the contour (min |Delta| = " << floor << ")";
        throw ContourError(msg.str());
    }
    double last_error = 0.0;
    for (int level = 0; level < 2; ++level) {
        const double tol = level == 0 ? 1e-8 : 1e-11;
        const int pieces = level == 0 ? 64 : 512;
        cplx total = 0.0;
        for (int e = 0; e < 4; ++e) {
            total += edge_integral(cf, corners[static_cast<std::size_t>(e)],
                                   corners[static_cast<std::size_t>((e + 1) % 4)], tol, pieces, 30);
        }
        const cplx winding = total / cplx(0.0, 2.0 * std::numbers::pi);
        const double nearest = std::round(winding.real());
        last_error = std::max(std::abs(winding.real() - nearest), std::abs(winding.imag()));
        if (last_error <= 0.1) return static_cast<int>(nearest);
    }
    std::ostringstream msg;
    msg << "winding number is not close to an integer (deviation " << last_error
        << "); enlarge im_max or refine the contour";
    throw AccuracyError(msg.str());
}

HyperbolicityScan hyperbolicity_scan(const CharFn& cf, double tol) {
    constexpr double kWindowCap = 1e3;
    const double shifted = std::abs(cf.a - cf.lambda);
    const bool grows = cf.d != 0.0 || cf.c != 0.0;
    // |Δ(iη)| >= ||dη² + icη| - |a-λ|| - |b|·B(η) with B the kernel's nonincreasing
    // bound on |M|. With growth the first term increases past |a-λ|; without it the
    // bound is |a-λ| - |b|B(η), increasing as M(iη) decays.
    const double margin = grows ? 1.0 : 0.5 * shifted;
    auto bound = [&](double eta) {
        const double poly = std::abs(eta) * std::hypot(cf.d * eta, cf.c);
        const double base = grows ? poly - shifted : shifted;
        return base - std::abs(cf.b) * cf.kernel.imaginary_axis_bound(eta);
    };
    HyperbolicityScan scan;
    double eta_max = 1.0;
    while (eta_max < kWindowCap && !(bound(eta_max) > margin)) eta_max *= 2.0;
    scan.window_certified = margin > tol && bound(eta_max) > margin;
    // Heuristic window when no certificate exists (d = c = 0 with a tabulated kernel).
    if (!scan.window_certified) eta_max = std::min(eta_max, 200.0 / cf.kernel.effective_radius() + 50.0);
    scan.eta_max = eta_max;

    const int n = static_cast<int>(std::clamp(eta_max / 0.005, 2000.0, 200000.0));
    const double step = 2.0 * eta_max / n;
    auto mag = [&](double eta) { return std::abs(eval_delta(cf, cplx(0.0, eta))); };
    std::vector<double> v(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = mag(-eta_max + i * step);
    scan.min_abs = kInf;
    for (int i = 0; i <= n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const bool local_min = (i == 0 || v[idx] <= v[idx - 1]) && (i == n || v[idx] <= v[idx + 1]);
        if (!local_min) continue;
        double lo = -eta_max + std::max(i - 1, 0) * step, hi = -eta_max + std::min(i + 1, n) * step;
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = mag(x1), f2 = mag(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = mag(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = mag(x2);
            }
        }
        const double best_eta = f1 < f2 ? x1 : x2;
        const double best = std::min({f1, f2, v[idx]});
        if (best < scan.min_abs) {
            scan.min_abs = best;
            scan.eta_at_min = best == v[idx] ? -eta_max + i * step : best_eta;
        }
    }
    scan.hyperbolic = scan.min_abs > tol;
    return scan;
}

bool is_hyperbolic(const CharFn& cf) { return hyperbolicity_scan(cf).hyperbolic; }

bool RegionReport::in_strip(cplx lambda, double margin) const {
    return lambda.real() >= iota_underbar - margin && lambda.real() <= iota_bar + margin;
}

bool RegionReport::in_xi_theorem(cplx lambda) const {
    if (lambda.real() > iota_bar) return true;
    return std::abs(lambda.imag()) > std::sqrt(iota_bar - lambda.real()) + b_min;
}

bool RegionReport::in_xi_appendix(cplx lambda) const {
    if (lambda.real() > iota_bar) return true;
    return std::abs(lambda.imag()) > c * c * std::sqrt(iota_bar - lambda.real()) + b_min;
}

RegionReport spectrum_regions(const ModelProblem& problem, double c) {
    const auto& k = problem.constants();
    RegionReport r;
    r.iota_bar = std::max(k.a_plus + k.b_plus, k.a_minus + k.b_minus);
    r.iota_underbar = std::min(k.a_plus - k.b_plus, k.a_minus - k.b_minus);
    r.d = problem.d();
    r.c = c;
    r.b_min = std::min(k.b_plus, k.b_minus);
    return r;
}

}  // namespace nlwave
