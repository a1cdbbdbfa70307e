#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlwave/catalog.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/greens.hpp"
#include "../support/oracles.hpp"

using namespace nlwave;

namespace {

CharFn make(double d, double c, double a, double b, Kernel k = Kernel::gaussian(1.0), double lambda = 0.0) {
    CharFn cf;
    cf.d = d;
    cf.c = c;
    cf.a = a;
    cf.b = b;
    cf.lambda = lambda;
    cf.kernel = k;
    return cf;
}

// ∫G₀·(L₀ᵀφ) = φ(0) for φ = e^{-ξ²/2s²} and a unit-mass gaussian kernel of width σ,
// where L₀ᵀ = dD² + cD + (a-λ) + bJ*. The two sides of ξ = 0 are integrated
// separately with one-sided limits extrapolated from the table.
double weak_form_defect(const GreensTable& gt, double sigma, double s) {
    const CharFn& cf = gt.source;
    const double A = cf.a - cf.lambda.real();
    auto adjoint_phi = [&](double x) {
        const double phi = std::exp(-x * x / (2 * s * s));
        const double v = s * s + sigma * sigma;
        const double conv = s / std::sqrt(v) * std::exp(-x * x / (2 * v));
        return cf.d * (x * x / (s * s * s * s) - 1.0 / (s * s)) * phi - cf.c * x / (s * s) * phi + A * phi + cf.b * conv;
    };
    const int mid = gt.n / 2;
    auto G = [&](int j) { return gt.values[static_cast<std::size_t>(j)].real(); };
    auto f = [&](int j) { return G(j) * adjoint_phi(gt.xi[static_cast<std::size_t>(j)]); };
    const double right0 = (4 * G(mid + 1) - 6 * G(mid + 2) + 4 * G(mid + 3) - G(mid + 4)) * adjoint_phi(0.0);
    const double left0 = (4 * G(mid - 1) - 6 * G(mid - 2) + 4 * G(mid - 3) - G(mid - 4)) * adjoint_phi(0.0);
    // Composite Simpson on [ξ_0, 0] and [0, ξ_{n-2}]; both spans hold an even number of steps.
    auto simpson = [&](int from, int to, double first, double last) {
        double sum = first + last;
        for (int j = from + 1; j < to; ++j) sum += ((j - from) % 2 ? 4.0 : 2.0) * f(j);
        return sum * gt.h / 3.0;
    };
    const double total = simpson(0, mid, f(0), left0) + simpson(mid, gt.n - 2, right0, f(gt.n - 2));
    return std::abs(total - 1.0);
}

// Table on the suggested window with spacing at most h.
GreensTable table(const CharFn& cf, double h) {
    const double L = suggest_window(cf);
    int n = 16;
    while (2.0 * L / n > h) n *= 2;
    return compute_g0(cf, L, n);
}

std::vector<double> random_bumps(const GreensTable& gt, std::mt19937& rng) {
    std::uniform_real_distribution<double> centre(-5.0, 5.0), width(0.7, 2.0), amp(-1.0, 1.0);
    std::vector<double> h(gt.xi.size(), 0.0);
    for (int k = 0; k < 3; ++k) {
        const double x0 = centre(rng), w = width(rng), a = amp(rng);
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += a * std::exp(-std::pow((gt.xi[i] - x0) / w, 2));
    }
    return h;
}

// Largest δ with no zero of Δ in -δ < Re z < δ, by bisection on zero counts.
double zero_free_half_width(const CharFn& cf, double upper) {
    double lo = 0.0, hi = upper;
    for (int i = 0; i < 30; ++i) {
        const double mid = 0.5 * (lo + hi);
        bool empty = false;
        try {
            empty = count_zeros_in_strip(cf, -mid, mid, 50.0) == 0;
        } catch (const ContourError&) {
        }
        (empty ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

TEST(GreensG0, FirstOrderClosedForm) {
    const GreensTable gt = compute_g0(make(0.0, 1.0, -1.0, 0.0), 20.0, 1024);
    for (int j = 0; j < gt.n; ++j) {
        const double x = gt.xi[static_cast<std::size_t>(j)];
        if (std::abs(x) < 0.5 * gt.h) continue;
        const double expected = x > 0 ? -std::exp(-x) : 0.0;
        EXPECT_NEAR(gt.values[static_cast<std::size_t>(j)].real(), expected, 1e-10) << x;
    }
    EXPECT_NEAR(jump_at_zero(gt), -1.0, 1e-3);
}

TEST(GreensG0, HelmholtzClosedForm) {
    const GreensTable gt = compute_g0(make(1.0, 0.0, -1.0, 0.0), 30.0, 2048);
    for (std::size_t j = 0; j < gt.xi.size(); ++j) {
        EXPECT_NEAR(gt.values[j].real(), -0.5 * std::exp(-std::abs(gt.xi[j])), 1e-10);
    }
    EXPECT_NEAR(jump_at_zero(gt), 1.0, 1e-3);
    EXPECT_NEAR(gt.alpha, 1.0, 0.02);
}

TEST(GreensG0, JumpScalesWithInverseSpeed) {
    EXPECT_NEAR(jump_at_zero(table(make(0.0, 2.0, -1.0, 0.0), 0.02)), -0.5, 1e-3);
    EXPECT_NEAR(jump_at_zero(compute_g0(make(0.0, 1.0, -2.0, 1.0), 20.0, 4096)), -1.0, 1e-3);
    EXPECT_NEAR(jump_at_zero(table(make(2.0, 0.3, -2.0, 1.0), 0.02)), 0.5, 1e-3);
}

TEST(GreensG0, WeakFormIdentity) {
    const std::vector<CharFn> cases{make(0.0, 1.0, -2.0, 1.0), make(0.0, -0.6, -1.5, 0.5, Kernel::gaussian(1.0), 0.2),
                                    make(1.0, 0.5, -2.0, 1.0), make(4.0, 0.0, -2.1, 0.1)};
    for (const auto& cf : cases) {
        const GreensTable gt = table(cf, 0.02);
        EXPECT_LT(weak_form_defect(gt, 1.0, 0.8), 1e-5) << cf.d << " " << cf.c;
        EXPECT_LT(weak_form_defect(gt, 1.0, 2.0), 1e-5) << cf.d << " " << cf.c;
    }
}

TEST(GreensG0, RealForRealLambda) {
    const GreensTable gt = table(make(0.5, 0.8, -2.0, 1.0, Kernel::bump(2.0), -0.3), 0.05);
    for (const cplx v : gt.values) EXPECT_LT(std::abs(v.imag()), 1e-12);
}

TEST(GreensG0, ErrorConditions) {
    EXPECT_THROW(compute_g0(make(1.0, 0.5, -2.0, 1.0, Kernel::gaussian(1.0), -1.0), 20.0, 1024), HyperbolicityError);
    EXPECT_THROW(compute_g0(make(0.0, 0.0, -2.0, 1.0), 20.0, 1024), HypothesisError);
    EXPECT_THROW(compute_g0(make(1.0, 0.0, -1.0, 0.0), 2.0, 256), WindowError);
    EXPECT_THROW(compute_g0(make(1.0, 0.0, -1.0, 0.0), 20.0, 1000), GridError);
}

TEST(GreensG0, CoarseGridIsResolutionError) {
    const GreensTable gt = compute_g0(make(0.0, 1.0, -3.0, 0.0), 20.0, 64);
    EXPECT_THROW(jump_at_zero(gt), ResolutionError);
}

TEST(GreensG0, DecayRateBoundedByNearestZero) {
    const std::vector<CharFn> cfs{make(0.0, 1.0, -2.0, 1.0), make(1.0, 0.5, -2.0, 1.0),
                                  plus_charfn(builtin_model("phase"), 0.0)};
    for (const CharFn& cf : cfs) {
        const RootPair r = real_roots(cf);
        const double dist = zero_free_half_width(cf, std::min(-r.lambda_s, r.lambda_u) + 1e-3);
        const GreensTable gt = table(cf, 0.02);
        EXPECT_GT(gt.alpha, 0.0);
        EXPECT_GE(gt.alpha, 0.9 * dist) << cf.d << " " << cf.c;
        EXPECT_LT(gt.fit_residual_plus, 0.05);
        EXPECT_LT(gt.fit_residual_minus, 0.05);
    }
}

TEST(GreensG0, EnvelopeHoldsOnEverySample) {
    const GreensTable gt = table(make(1.0, 0.5, -2.0, 1.0), 0.02);
    for (std::size_t j = 0; j < gt.xi.size(); ++j) {
        if (std::abs(gt.xi[j]) <= 0.8 * gt.L_G) {
            EXPECT_LE(std::abs(gt.values[j]), gt.K1 * std::exp(-gt.alpha * std::abs(gt.xi[j])) * (1 + 1e-12));
        }
    }
}

TEST(GreensSolve, ZeroAndLinearity) {
    const GreensTable gt = compute_g0(make(0.0, 1.0, -2.0, 1.0), 20.0, 512);
    const auto zero = solve_inhomogeneous(gt, std::vector<double>(512, 0.0));
    for (double v : zero) EXPECT_EQ(v, 0.0);
    std::mt19937 rng(5);
    const auto h1 = random_bumps(gt, rng), h2 = random_bumps(gt, rng);
    std::vector<double> sum(h1.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = h1[i] + h2[i];
    const auto v1 = solve_inhomogeneous(gt, h1), v2 = solve_inhomogeneous(gt, h2), vs = solve_inhomogeneous(gt, sum);
    for (std::size_t i = 0; i < sum.size(); ++i) EXPECT_NEAR(vs[i], v1[i] + v2[i], 1e-10);
    EXPECT_THROW(solve_inhomogeneous(gt, std::vector<double>(100, 0.0)), GridError);
}

TEST(GreensSolve, AgreesWithDenseDifferenceSolve) {
    const std::vector<CharFn> cfs{make(1.0, 0.0, -1.0, 0.0), make(0.0, 1.0, -2.0, 1.0), make(1.0, 0.5, -2.0, 1.0),
                                  make(4.0, 0.0, -2.1, 0.1)};
    std::mt19937 rng(17);
    for (const CharFn& cf : cfs) {
        const GreensTable gt = table(cf, 0.05);
        const Eigen::MatrixXd A =
            oracle::periodic_operator(cf.d, cf.c, cf.a - cf.lambda.real(), cf.b, cf.kernel, gt.n, gt.h);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        for (int trial = 0; trial < 5; ++trial) {
            const auto h = random_bumps(gt, rng);
            const auto v = solve_inhomogeneous(gt, h);
            const Eigen::VectorXd dense = lu.solve(Eigen::Map<const Eigen::VectorXd>(h.data(), gt.n));
            const Eigen::VectorXd applied = A * Eigen::Map<const Eigen::VectorXd>(v.data(), gt.n);
            const int skip = gt.n / 10;
            for (int i = skip; i < gt.n - skip; ++i) {
                EXPECT_NEAR(v[static_cast<std::size_t>(i)], dense(i), 1e-6) << cf.d << " " << cf.c;
                EXPECT_NEAR(applied(i), h[static_cast<std::size_t>(i)], 1e-6);
            }
        }
    }
}

namespace {

Sampled constant(const Grid& g, double value) { return {g, std::vector<double>(static_cast<std::size_t>(g.n), value)}; }

Sampled step_left(const Grid& g, double eps) {
    Sampled s = constant(g, 0.0);
    for (int i = 0; i < g.n; ++i) {
        if (g.x(i) < 0.0) s.values[static_cast<std::size_t>(i)] = eps;
    }
    return s;
}

}  // namespace

TEST(PerturbedGreen, NoPerturbationGivesG0) {
    const CharFn cf = make(1.0, 0.5, -2.0, 1.0);
    const Grid g(30.0, 1024);
    const PerturbedKernel pk = perturbed_green(cf, constant(g, 0.0), constant(g, 0.0), 1e-10);
    EXPECT_EQ(pk.depth, 0);
    EXPECT_EQ(pk.tail_bound, 0.0);
    // A pure convolution: entries depend on i - j only (periodically).
    for (int i = 0; i < g.n; i += 37) {
        for (int j = 0; j < g.n; j += 41) {
            EXPECT_NEAR(pk.values(i, j), pk.values((i + 5) % g.n, (j + 5) % g.n), 1e-14);
        }
    }
    // Same spacing, power-of-two table: offsets line up node for node. The grid
    // operator drops the symbol beyond Nyquist, ∫_{|η|>π/h} dη/(2π dη²) = h/(π²d),
    // which rounds off the kink at 0; away from it the two agree closely.
    const GreensTable gt = compute_g0(cf, 0.5 * g.n * g.h(), g.n);
    const double dropped = g.h() / (M_PI * M_PI * cf.d);
    EXPECT_NEAR(pk.values(100, 100) - gt.at_offset(0).real(), dropped, 0.1 * dropped);
    for (int i = 0; i < g.n; i += 37) {
        for (int j = 0; j < g.n; j += 41) {
            if (i != j && std::abs(i - j) < g.n / 2) EXPECT_NEAR(pk.values(i, j), gt.at_offset(i - j).real(), 1e-3);
        }
    }
}

TEST(PerturbedGreen, ResidualOfPerturbedOperator) {
    const CharFn cf = make(1.0, 0.3, -2.0, 1.0);
    const Grid g(20.0, 513);
    const double tol = 1e-8;
    const PerturbedKernel probe = perturbed_green(cf, constant(g, 0.0), constant(g, 0.0), tol);
    const double eps = 0.5 * probe.threshold;
    const Sampled m = step_left(g, eps), n = constant(g, 0.0);
    const PerturbedKernel pk = perturbed_green(cf, m, n, tol);
    EXPECT_GT(pk.depth, 0);
    EXPECT_LT(pk.tail_bound, tol);
    std::vector<double> h(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) h[static_cast<std::size_t>(i)] = std::exp(-g.x(i) * g.x(i));
    const auto v = pk.apply(h);
    const auto back = apply_perturbed_operator(cf, m, n, v);
    for (int i = 0; i < g.n; ++i) EXPECT_NEAR(back[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(i)], 10 * tol);
    for (std::size_t j = 1; j < pk.term_norms.size(); ++j) EXPECT_LT(pk.term_norms[j], pk.term_norms[j - 1]);
}

TEST(PerturbedGreen, DecayAlongDiagonal) {
    const CharFn cf = make(1.0, 0.3, -2.0, 1.0);
    const Grid g(20.0, 1025);
    const double tol = 1e-10;
    const PerturbedKernel probe = perturbed_green(cf, constant(g, 0.0), constant(g, 0.0), tol);
    // The predicted rate is a worst-case lower bound; it tracks the measured rate
    // only for small ε (at ε = ε*/2 it is α/√2 whatever the perturbation).
    for (const double fraction : {0.1, 0.5}) {
        const double eps = fraction * probe.threshold;
        const PerturbedKernel pk = perturbed_green(cf, step_left(g, eps), constant(g, 0.0), tol);
        const KernelDecay decay = fit_kernel_decay(pk);
        const double predicted = std::sqrt(pk.alpha * pk.alpha - 4.0 * eps * pk.K1 * pk.alpha);
        EXPECT_GT(decay.nu, 0.0);
        EXPECT_GE(decay.nu, 0.95 * predicted) << fraction;
        if (fraction <= 0.1) {
            EXPECT_NEAR(decay.nu, predicted, 0.25 * predicted) << "fitted " << decay.nu << " predicted " << predicted;
        }
    }
}

TEST(PerturbedGreen, ErrorConditions) {
    const CharFn cf = make(1.0, 0.3, -2.0, 1.0);
    const Grid g(20.0, 257);
    EXPECT_THROW(perturbed_green(cf, constant(g, 10.0), constant(g, 0.0), 1e-8), PerturbationTooLarge);
    const Grid big(20.0, 2051);
    EXPECT_THROW(perturbed_green(cf, constant(big, 0.0), constant(big, 0.0), 1e-8), SizeError);
}

TEST(GreensG0, SuggestedWindowCoversSlowTails) {
    // The slow side decays at 0.35: a 20-unit coarse window aliases it and would
    // overestimate α, giving a window on which G₀ has not decayed.
    const CharFn cf = make(1.0, 1.0, -1.0, 0.5, Kernel::bump(2.0));
    const RootPair r = real_roots(cf);
    const double L = suggest_window(cf);
    EXPECT_GT(L * -r.lambda_s, std::log(1e8));
    const GreensTable gt = compute_g0(cf, L, 4096);
    EXPECT_NEAR(gt.alpha, -r.lambda_s, 0.01 * -r.lambda_s);
}

TEST(GreensSolve, SlowTransportAgreesWithDenseUpwindSolve) {
    // d = 0 with a steep e^{-4ξ} side: the table needs h ≈ 0.02.
    const CharFn cf = make(0.0, 0.5, -2.0, 0.8);
    const GreensTable gt = table(cf, 0.02);
    const Eigen::MatrixXd A = oracle::periodic_operator(cf.d, cf.c, cf.a, cf.b, cf.kernel, gt.n, gt.h);
    std::mt19937 rng(3);
    const auto h = random_bumps(gt, rng);
    const auto v = solve_inhomogeneous(gt, h);
    const Eigen::VectorXd dense = A.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(h.data(), gt.n));
    for (int i = gt.n / 10; i < gt.n - gt.n / 10; ++i) EXPECT_NEAR(v[static_cast<std::size_t>(i)], dense(i), 1e-6);
}
