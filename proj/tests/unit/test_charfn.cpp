#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlwave/catalog.hpp"
#include "nlwave/charfn.hpp"
#include "nlwave/errors.hpp"
#include "../support/oracles.hpp"

using namespace nlwave;

namespace {

CharFn make(double d, double c, double a, double b, Kernel k = Kernel::gaussian(1.0), cplx lambda = 0.0) {
    CharFn cf;
    cf.d = d;
    cf.c = c;
    cf.a = a;
    cf.b = b;
    cf.lambda = lambda;
    cf.kernel = k;
    return cf;
}

std::vector<cplx> disk_points(int count, double radius, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<cplx> z;
    while (static_cast<int>(z.size()) < count) {
        const cplx p(u(rng), u(rng));
        if (std::abs(p) <= radius) z.push_back(p);
    }
    return z;
}

}  // namespace

TEST(CharFn, KernelFreeCaseIsPolynomial) {
    const CharFn cf = make(0.7, -1.3, -2.0, 0.0);
    for (const cplx z : disk_points(10, 3.0, 1)) {
        EXPECT_EQ(eval_delta(cf, z), 0.7 * z * z + 1.3 * z - 2.0);
    }
}

TEST(CharFn, AtOriginIsAPlusB) {
    EXPECT_NEAR(eval_delta(make(2.0, 5.0, -2.0, 1.0), 0.0).real(), -1.0, 1e-15);
}

TEST(CharFn, DerivativeTrivialCases) {
    EXPECT_EQ(eval_delta_prime(make(0.0, 1.0, -2.0, 0.0), cplx(0.3, 0.4)), cplx(-1.0, 0.0));
    EXPECT_NEAR(std::abs(eval_delta_prime(make(0.0, 0.0, -2.0, 1.0), 0.0)), 0.0, 1e-15);
}

TEST(CharFn, DerivativeMatchesCenteredDifferences) {
    for (const Kernel& k : {Kernel::gaussian(1.0), Kernel::laplace(3.0), Kernel::bump(2.0)}) {
        const CharFn cf = make(0.5, 0.8, -2.0, 1.0, k);
        for (const cplx z : disk_points(10, 1.0, 2)) {
            const double e = 1e-5;
            const cplx fd = (eval_delta(cf, z + e) - eval_delta(cf, z - e)) / (2.0 * e);
            EXPECT_LT(std::abs(eval_delta_prime(cf, z) - fd), 1e-6) << k.describe();
        }
    }
}

TEST(CharFn, AdjointSymmetry) {
    const CharFn cf = make(0.5, 0.8, -2.0, 1.0, Kernel::gaussian(1.0), 0.3);
    CharFn adj = cf;
    adj.c = -cf.c;
    for (const cplx z : disk_points(10, 2.0, 3)) {
        EXPECT_LT(std::abs(eval_delta(adj, z) - eval_delta(cf, -z)), 1e-13);
    }
}

TEST(RealRoots, FirstOrderExampleMatchesBisection) {
    const auto g = [](double z) { return -z - 2.0 + std::exp(0.5 * z * z); };
    const double s = oracle::bisect(g, -5.0, 0.0);
    const double u = oracle::bisect(g, 0.0, 5.0);
    EXPECT_NEAR(s, -0.71, 0.01);
    EXPECT_NEAR(u, 1.60, 0.01);
    const RootPair r = real_roots(make(0.0, 1.0, -2.0, 1.0));
    EXPECT_NEAR(r.lambda_s, s, 1e-12);
    EXPECT_NEAR(r.lambda_u, u, 1e-12);
    EXPECT_LT(r.residual_s, 1e-10);
    EXPECT_LT(r.residual_u, 1e-10);
}

TEST(RealRoots, SecondOrderExampleReducesToScalarEquation) {
    // Δ(z) = z² - 2 + e^{z²/2}; with t = z² the roots solve t + e^{t/2} = 2.
    const double t = oracle::bisect([](double t) { return t + std::exp(0.5 * t) - 2.0; }, 0.0, 2.0);
    EXPECT_NEAR(std::sqrt(t), 0.794, 1e-3);
    const RootPair r = real_roots(make(1.0, 0.0, -2.0, 1.0));
    EXPECT_NEAR(r.lambda_u, std::sqrt(t), 1e-12);
    EXPECT_EQ(r.lambda_s, -r.lambda_u);
}

TEST(RealRoots, PreconditionViolationsAreHypothesisErrors) {
    EXPECT_THROW(real_roots(make(0.0, 1.0, -1.0, 2.0)), HypothesisError);   // b > -a
    EXPECT_THROW(real_roots(make(0.0, 1.0, 1.0, 0.5)), HypothesisError);    // a > 0
    EXPECT_THROW(real_roots(make(0.0, 1.0, -2.0, -0.5)), HypothesisError);  // b < 0
    EXPECT_THROW(real_roots(make(0.0, 1.0, -2.0, 1.0, Kernel::gaussian(1.0), cplx(0.0, 1.0))), HypothesisError);
}

TEST(RealRoots, NoBracketWithinBoundIsDivergence) {
    // A tiny, narrow kernel term pushes both roots far beyond 50.
    EXPECT_THROW(real_roots(make(0.0, 1.0, -2.0, 1e-300, Kernel::gaussian(0.1))), DivergenceError);
}

TEST(RealRoots, ShiftedSpectralParameter) {
    const CharFn cf = make(0.3, 0.4, -2.0, 0.5, Kernel::bump(2.0), -0.6);
    const RootPair r = real_roots(cf);
    const auto g = [&](double z) { return eval_delta(cf, z).real(); };
    EXPECT_NEAR(r.lambda_s, oracle::bisect(g, -20.0, 0.0), 1e-11);
    EXPECT_NEAR(r.lambda_u, oracle::bisect(g, 0.0, 20.0), 1e-11);
}

TEST(ZeroCount, AffineCase) { EXPECT_EQ(count_zeros_in_strip(make(0.0, 1.0, -1.0, 0.0), -2.0, 0.0, 5.0), 1); }

TEST(ZeroCount, ExampleStrips) {
    const CharFn cf = make(0.0, 1.0, -2.0, 1.0);
    const RootPair r = real_roots(cf);
    EXPECT_EQ(count_zeros_in_strip(cf, r.lambda_s - 0.1, r.lambda_u + 0.1, 30.0), 2);
    EXPECT_EQ(count_zeros_in_strip(cf, r.lambda_s + 0.05, r.lambda_u - 0.05, 30.0), 0);
}

TEST(ZeroCount, DenseGridAgreesOnExample) {
    // Independent locate: local minima of |Δ| on a fine grid over the wide strip.
    const CharFn cf = make(0.0, 1.0, -2.0, 1.0);
    const double lo = -0.81, hi = 1.7;
    int minima = 0;
    const int nx = 252, ny = 400;
    auto mag = [&](int i, int j) { return std::abs(eval_delta(cf, cplx(lo + (hi - lo) * i / nx, -10.0 + 20.0 * j / ny))); };
    for (int i = 1; i < nx; ++i) {
        for (int j = 1; j < ny; ++j) {
            const double v = mag(i, j);
            if (v < 0.05 && v < mag(i - 1, j) && v < mag(i + 1, j) && v < mag(i, j - 1) && v < mag(i, j + 1)) ++minima;
        }
    }
    EXPECT_EQ(minima, 2);
}

TEST(ZeroCount, ZeroOnBoundaryIsContourError) {
    const CharFn cf = make(0.0, 1.0, -1.0, 0.0);
    EXPECT_THROW(count_zeros_in_strip(cf, -1.0, 0.5, 5.0), ContourError);
}

TEST(ZeroCount, RandomHypothesisTuples) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ua(-3.0, -0.5), uc(-1.0, 1.0), frac(0.05, 0.9);
    const double eps = 1e-3;
    for (int trial = 0; trial < 6; ++trial) {
        const double a = ua(rng);
        const CharFn cf = make(trial % 2 ? 0.5 : 0.0, uc(rng), a, -a * frac(rng), Kernel::gaussian(1.0));
        const RootPair r = real_roots(cf);
        EXPECT_EQ(count_zeros_in_strip(cf, r.lambda_s + eps, r.lambda_u - eps, 50.0), 0) << trial;
        EXPECT_EQ(count_zeros_in_strip(cf, r.lambda_s - eps, r.lambda_u + eps, 50.0), 2) << trial;
    }
}

TEST(Hyperbolicity, Examples) {
    for (double c : {0.0, 0.7}) {
        for (double d : {0.0, 1.0}) {
            if (c == 0.0 && d == 0.0) continue;
            EXPECT_TRUE(is_hyperbolic(make(d, c, -2.0, 1.0))) << c << " " << d;
        }
    }
    const CharFn at_zero = make(1.0, 0.5, -2.0, 1.0, Kernel::gaussian(1.0), -1.0);
    EXPECT_FALSE(is_hyperbolic(at_zero));
    const auto scan = hyperbolicity_scan(at_zero);
    EXPECT_NEAR(scan.eta_at_min, 0.0, 1e-3);
    EXPECT_TRUE(hyperbolicity_scan(make(1.0, 0.5, -2.0, 1.0)).window_certified);
}

TEST(Hyperbolicity, RightOfStripForBuiltins) {
    for (const auto& name : builtin_names()) {
        const ModelProblem p = builtin_model(name);
        const RegionReport reg = spectrum_regions(p, 0.0);
        const cplx lambda = reg.iota_bar + 1.0;
        EXPECT_TRUE(is_hyperbolic(plus_charfn(p, 0.0, lambda))) << name;
        EXPECT_TRUE(is_hyperbolic(minus_charfn(p, 0.0, lambda))) << name;
        EXPECT_TRUE(reg.in_omega_plus(0.0)) << name;
    }
}

TEST(Regions, Arithmetic) {
    const RegionReport phase = spectrum_regions(builtin_model("phase"), 0.0);
    EXPECT_NEAR(phase.iota_bar, -2.0, 1e-12);
    EXPECT_NEAR(phase.iota_underbar, -2.2, 1e-12);
    RegionReport r;
    r.iota_bar = -1.0;
    r.iota_underbar = -3.0;
    r.b_min = 1.0;
    r.c = 2.0;
    EXPECT_TRUE(r.in_strip(-2.0));
    EXPECT_FALSE(r.in_strip(-0.5));
    EXPECT_TRUE(r.in_xi_theorem(0.0));
    // Re λ = -5: √4 + 1 = 3 for the first form, 4·2 + 1 = 9 for the second.
    EXPECT_TRUE(r.in_xi_theorem(cplx(-5.0, 3.5)));
    EXPECT_FALSE(r.in_xi_appendix(cplx(-5.0, 3.5)));
    EXPECT_TRUE(r.in_xi_appendix(cplx(-5.0, 9.5)));
}
