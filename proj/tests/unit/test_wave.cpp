#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "nlwave/catalog.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/wave.hpp"

using namespace nlwave;

namespace {

SolverConfig config(double L, int n) {
    SolverConfig c;
    c.L = L;
    c.n = n;
    return c;
}

ModelProblem detuned() { return phase_model(0.1, 0.1); }

// Explicit Euler for u_t = d u'' + f(u, J*u) on [-X, X] with u clamped to ∓1 at
// the ends, starting from a tanh front. Returns the lab-frame velocity of the
// level u = q over [t1, t2]; travelling waves U(x + ct) move at -c.
double front_velocity(const ModelProblem& p, double X, double h, double dt, double t1, double t2) {
    const int n = static_cast<int>(std::lround(2 * X / h)) + 1;
    const int K = static_cast<int>(std::ceil(p.kernel().effective_radius() / h));
    std::vector<double> w(static_cast<std::size_t>(2 * K + 1));
    double mass = 0.0;
    for (int k = -K; k <= K; ++k) mass += w[static_cast<std::size_t>(k + K)] = h * p.kernel()(k * h);
    for (double& v : w) v *= p.kernel().mass() / mass;
    std::vector<double> u(static_cast<std::size_t>(n)), next(u.size()), conv(u.size());
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = std::tanh((-X + i * h) / 2.0);
    auto at = [&](int i) { return i < 0 ? -1.0 : (i >= n ? 1.0 : u[static_cast<std::size_t>(i)]); };
    auto level = [&] {
        for (int i = 0; i + 1 < n; ++i) {
            const double a = u[static_cast<std::size_t>(i)] - p.q(), b = u[static_cast<std::size_t>(i + 1)] - p.q();
            if (a <= 0.0 && b > 0.0) return -X + (i + a / (a - b)) * h;
        }
        return std::nan("");
    };
    double x1 = 0.0;
    const int steps = static_cast<int>(std::lround(t2 / dt));
    for (int s = 1; s <= steps; ++s) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = -K; k <= K; ++k) acc += w[static_cast<std::size_t>(k + K)] * at(i - k);
            conv[static_cast<std::size_t>(i)] = acc;
        }
        for (int i = 0; i < n; ++i) {
            const double lap = (at(i - 1) - 2 * at(i) + at(i + 1)) / (h * h);
            next[static_cast<std::size_t>(i)] = at(i) + dt * (p.d() * lap + p.f()(at(i), conv[static_cast<std::size_t>(i)]));
        }
        u.swap(next);
        if (s == static_cast<int>(std::lround(t1 / dt))) x1 = level();
    }
    return (level() - x1) / (t2 - t1);
}

}  // namespace

TEST(Wave, SymmetricPhaseModelIsStanding) {
    const WaveSolution w = solve_wave(builtin_model("phase"), config(30.0, 512));
    EXPECT_LT(std::abs(w.c), 1e-8);
    EXPECT_LT(w.residual, w.tolerance);
    EXPECT_TRUE(w.monotone);
    for (double u : w.U) {
        EXPECT_GE(u, -1.0 - 1e-8);
        EXPECT_LE(u, 1.0 + 1e-8);
    }
}

TEST(Wave, IndependentResidualOfConvergedSolutions) {
    for (const auto& name : builtin_names()) {
        const ModelProblem p = builtin_model(name);
        const WaveSolution w = solve_wave(p, config(30.0, 512));
        EXPECT_LT(residual(p, w), 1e-8) << name;
        EXPECT_EQ(w.U.front(), -1.0);
        EXPECT_EQ(w.U.back(), 1.0);
        for (std::size_t i = 1; i < w.U.size(); ++i) EXPECT_GT(w.U[i], w.U[i - 1]) << name;
    }
}

TEST(Wave, ResidualOfConstantStateIsZero) {
    const ModelProblem p = detuned();
    const Grid g(20.0, 256);
    EXPECT_EQ(residual(p, g, std::vector<double>(256, 1.0), 0.37, 1.0, 1.0), 0.0);
    EXPECT_EQ(residual(p, g, std::vector<double>(256, -1.0), -2.0, -1.0, -1.0), 0.0);
}

TEST(Wave, PerturbationRaisesResidual) {
    const ModelProblem p = detuned();
    const WaveSolution w = solve_wave(p, config(30.0, 512));
    std::vector<double> U = w.U;
    for (std::size_t i = 0; i < U.size(); ++i) U[i] += 1e-3 / std::cosh(w.xi[i]);
    EXPECT_GT(residual(p, w.grid, U, w.c), 1e3 * residual(p, w));
}

TEST(Wave, DetunedSpeedMatchesTimeStepping) {
    const ModelProblem p = detuned();
    const WaveSolution w = solve_wave(p, config(40.0, 2048));
    // ∫(1-s²)(s+0.1)ds = 0.4/3 > 0 favours the upper state.
    EXPECT_GT(w.c, 1e-3);
    const double velocity = front_velocity(p, 50.0, 0.2, 4e-3, 15.0, 35.0);
    EXPECT_NEAR(-velocity, w.c, 0.02 * w.c) << "time stepping " << -velocity << " newton " << w.c;
}

TEST(Wave, TranslationGauge) {
    const ModelProblem p = detuned();
    SolverConfig a = config(30.0, 1024), b = a;
    const WaveSolution wa = solve_wave(p, a);
    // Choose u0' so the implied offset is exactly k grid steps: the phase condition
    // interpolates midway between the two nodes around 0, so use the same midpoint k
    // nodes to the right. Then wb_i = wa_{i+k} up to exponentially small boundary effects.
    const int k = 20;
    const std::size_t mid = static_cast<std::size_t>(a.n / 2 - 1);
    b.u0 = 0.5 * (wa.U[mid + k] + wa.U[mid + k + 1]);
    const WaveSolution wb = solve_wave(p, b);
    EXPECT_NEAR(wa.c, wb.c, 1e-8);
    EXPECT_NEAR(locate_level(wa, *b.u0), k * wa.grid.h(), 1e-3);
    double worst = 0.0;
    for (std::size_t i = 0; i + k < wb.U.size(); ++i) {
        if (std::abs(wb.xi[i]) < 20.0) worst = std::max(worst, std::abs(wb.U[i] - wa.U[i + k]));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Wave, DomainTruncationBarelyMovesSpeed) {
    const ModelProblem p = detuned();
    const double c30 = solve_wave(p, config(30.0, 1501)).c;
    const double c40 = solve_wave(p, config(40.0, 2001)).c;
    EXPECT_LT(std::abs(c30 - c40), 1e-8);
}

TEST(Wave, GridRefinementConverges) {
    const ModelProblem p = detuned();
    const double c1 = solve_wave(p, config(30.0, 301)).c;
    const double c2 = solve_wave(p, config(30.0, 601)).c;
    const double c3 = solve_wave(p, config(30.0, 1201)).c;
    EXPECT_LT(std::abs(c2 - c1), 4.0 * std::abs(c3 - c2) * 1.1);
    EXPECT_GT(std::abs(c2 - c1), 2.0 * std::abs(c3 - c2));
}

TEST(Wave, ContinuationPath) {
    auto family = [](double eps) { return phase_model(eps, 0.1); };
    const SolverConfig cfg = config(30.0, 512);
    const auto forward = continuation(family, {0.05, 0.1, 0.2}, cfg);
    ASSERT_FALSE(forward.failed_at.has_value()) << forward.failure;
    ASSERT_EQ(forward.steps.size(), 3u);
    for (std::size_t i = 1; i < 3; ++i) EXPECT_LT(std::abs(forward.steps[i].c - forward.steps[i - 1].c), 0.1);
    const auto backward = continuation(family, {0.2, 0.1, 0.05}, cfg);
    ASSERT_EQ(backward.steps.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(forward.steps[i].c, backward.steps[2 - i].c, 1e-8);
    const auto single = continuation(family, {0.1}, cfg);
    EXPECT_NEAR(single.steps.at(0).c, solve_wave(family(0.1), cfg).c, 1e-12);
}

TEST(Wave, ContinuationFirstStepFailurePropagates) {
    auto family = [](double) { return detuned(); };
    SolverConfig cfg = config(30.0, 256);
    cfg.max_iterations = 1;
    EXPECT_THROW(continuation(family, {0.0}, cfg), ConvergenceError);
}

TEST(Wave, ConfigValidation) {
    EXPECT_THROW(solve_wave(detuned(), config(30.0, 64)), ConfigError);
    EXPECT_THROW(solve_wave(detuned(), config(5.0, 512)), ConfigError);
    EXPECT_THROW(solve_wave(detuned(), config(30.0, 9000)), ConfigError);
}

TEST(Wave, IterationLimitIsConvergenceErrorWithTrace) {
    SolverConfig cfg = config(30.0, 256);
    cfg.max_iterations = 2;
    try {
        solve_wave(detuned(), cfg);
        FAIL() << "expected a convergence error";
    } catch (const ConvergenceError& e) {
        EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos);
    }
}

TEST(Wave, ExportImportRoundTrip) {
    const WaveSolution w = solve_wave(detuned(), config(30.0, 512));
    const auto path = std::filesystem::temp_directory_path() / "nlwave_wave_roundtrip.txt";
    export_wave(w, path);
    const WaveSolution back = import_wave(path);
    EXPECT_EQ(back.c, w.c);
    ASSERT_EQ(back.U.size(), w.U.size());
    for (std::size_t i = 0; i < w.U.size(); ++i) EXPECT_EQ(back.U[i], w.U[i]);
    // Seeding Newton with the imported profile converges immediately.
    const WaveSolution again = solve_wave(detuned(), w.config, back);
    EXPECT_LE(again.iterations, 1);
    EXPECT_NEAR(again.c, w.c, 1e-12);
    std::filesystem::remove(path);
}

TEST(Wave, LocateLevelInvertsInterpolant) {
    const WaveSolution w = solve_wave(detuned(), config(30.0, 512));
    for (double v : {-0.9, -0.1, 0.0, 0.5, 0.95}) EXPECT_NEAR(w.at(locate_level(w, v)), v, 1e-12);
    // The phase condition interpolates linearly, the profile cubically: O(h²) apart.
    EXPECT_NEAR(locate_level(w, w.u0), 0.0, w.grid.h() * w.grid.h());
}
