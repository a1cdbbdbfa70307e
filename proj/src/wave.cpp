#include "nlwave/wave.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <sstream>

#include "nlwave/dense.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/textio.hpp"

namespace nlwave {

namespace {

using Vec = Eigen::VectorXd;

// Discrete first derivative at interior node i: centered when d > 0, upwind
// oriented by sign(c) when d = 0 (drift +c in the moving frame).
struct Stencil {
    bool centered = true;
    bool backward = true;

    static Stencil choose(double d, double c) { return {d > 0.0, c >= 0.0}; }

    double derivative(const std::vector<double>& U, std::size_t i, double h) const {
        if (centered) return (U[i + 1] - U[i - 1]) / (2.0 * h);
        return backward ? (U[i] - U[i - 1]) / h : (U[i + 1] - U[i]) / h;
    }
};

struct Phase {
    int index = 0;
    double t = 0.0;  // U(0) ≈ (1-t)U[index] + t U[index+1]
};

Phase phase_location(const Grid& g) {
    const int i = g.bracket(0.0);
    return {i, (0.0 - g.x(i)) / g.h()};
}

struct System {
    const ModelProblem& problem;
    Grid grid;
    std::vector<double> weights;
    int half = 0;
    Phase phase;
    double u0 = 0.0;

    double h() const { return grid.h(); }

    std::vector<double> convolve(const std::vector<double>& U) const {
        return convolve_extended(U, weights, -1.0, 1.0);
    }

    // Residual vector: interior equations 1..n-2 followed by the phase equation.
    Vec residual(const std::vector<double>& U, double c) const {
        const int n = grid.n;
        const double hh = h(), d = problem.d();
        const Stencil st = Stencil::choose(d, c);
        const std::vector<double> JU = convolve(U);
        Vec F(n - 1);
        for (int i = 1; i < n - 1; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double second = (U[k + 1] - 2.0 * U[k] + U[k - 1]) / (hh * hh);
            F(i - 1) = c * st.derivative(U, k, hh) - d * second - problem.f()(U[k], JU[k]);
        }
        const auto p = static_cast<std::size_t>(phase.index);
        F(n - 2) = (1.0 - phase.t) * U[p] + phase.t * U[p + 1] - u0;
        return F;
    }

    // Jacobian with respect to (U_1..U_{n-2}, c).
    Eigen::MatrixXd jacobian(const std::vector<double>& U, double c) const {
        const int n = grid.n, m = n - 2;
        const double hh = h(), d = problem.d();
        const Stencil st = Stencil::choose(d, c);
        const std::vector<double> JU = convolve(U);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
        auto add = [&](int row, int node, double v) {
            if (node >= 1 && node <= n - 2) A(row, node - 1) += v;
        };
        for (int i = 1; i < n - 1; ++i) {
            const int row = i - 1;
            const auto k = static_cast<std::size_t>(i);
            const double fr = problem.f().f_r(U[k], JU[k]);
            const double fs = problem.f().f_s(U[k], JU[k]);
            add(row, i, -fr);
            const int lo = std::max(1, i - half), hi = std::min(n - 2, i + half);
            for (int j = lo; j <= hi; ++j) {
                A(row, j - 1) -= fs * weights[static_cast<std::size_t>(i - j + half)];
            }
            add(row, i - 1, -d / (hh * hh));
            add(row, i, 2.0 * d / (hh * hh));
            add(row, i + 1, -d / (hh * hh));
            if (st.centered) {
                add(row, i + 1, c / (2.0 * hh));
                add(row, i - 1, -c / (2.0 * hh));
            } else if (st.backward) {
                add(row, i, c / hh);
                add(row, i - 1, -c / hh);
            } else {
                add(row, i + 1, c / hh);
                add(row, i, -c / hh);
            }
            A(row, m) = st.derivative(U, k, hh);
        }
        add(m, phase.index, 1.0 - phase.t);
        add(m, phase.index + 1, phase.t);
        return A;
    }
};

double cubic_at(const std::vector<double>& U, const Grid& g, double xi) {
    if (xi <= -g.L) return -1.0;
    if (xi >= g.L) return 1.0;
    const int i = g.bracket(xi);
    const double t = (xi - g.x(i)) / g.h();
    auto u = [&](int j) {
        if (j < 0) return -1.0;
        if (j >= g.n) return 1.0;
        return U[static_cast<std::size_t>(j)];
    };
    // Cubic Lagrange through nodes i-1 .. i+2.
    const double p0 = u(i - 1), p1 = u(i), p2 = u(i + 1), p3 = u(i + 2);
    return p0 * (-t * (t - 1.0) * (t - 2.0) / 6.0) + p1 * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0) +
           p2 * (-(t + 1.0) * t * (t - 2.0) / 2.0) + p3 * ((t + 1.0) * t * (t - 1.0) / 6.0);
}

}  // namespace

void SolverConfig::validate() const {
    if (n < 128) throw ConfigError("solver needs n >= 128 (got " + std::to_string(n) + ")");
    if (n > 8193) throw ConfigError("solver caps n at 8193 (dense Jacobian)");
    if (!(L >= 10.0)) throw ConfigError("solver needs L >= 10");
    if (!(tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("solver needs at least one iteration");
    if (!(min_damping > 0.0 && min_damping <= 1.0)) throw ConfigError("min_damping must lie in (0, 1]");
    if (!(seed_width > 0.0)) throw ConfigError("seed width must be positive");
    if (u0 && !(*u0 > -1.0 && *u0 < 1.0)) throw ConfigError("phase value u0 must lie in (-1, 1)");
}

double WaveSolution::at(double x) const { return cubic_at(U, grid, x); }

double residual(const ModelProblem& problem, const Grid& grid, const std::vector<double>& U, double c, double left,
                double right) {
    const int n = grid.n;
    const double h = grid.h(), d = problem.d();
    const std::vector<double> w = problem.kernel().weights(h);
    const int K = static_cast<int>(w.size() - 1) / 2;
    auto value = [&](int j) {
        if (j < 0) return left;
        if (j >= n) return right;
        return U[static_cast<std::size_t>(j)];
    };
    double worst = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        double conv = 0.0;
        for (int k = -K; k <= K; ++k) conv += w[static_cast<std::size_t>(k + K)] * value(i - k);
        double slope = 0.0;
        if (d > 0.0) slope = (value(i + 1) - value(i - 1)) / (2.0 * h);
        else if (c >= 0.0) slope = (value(i) - value(i - 1)) / h;
        else slope = (value(i + 1) - value(i)) / h;
        const double curvature = (value(i + 1) - 2.0 * value(i) + value(i - 1)) / (h * h);
        const double r = c * slope - d * curvature - problem.f()(value(i), conv);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double residual(const ModelProblem& problem, const WaveSolution& wave) {
    return residual(problem, wave.grid, wave.U, wave.c);
}

WaveSolution solve_wave(const ModelProblem& problem, const SolverConfig& config,
                        const std::optional<WaveSolution>& init) {
    config.validate();
    const Grid grid(config.L, config.n);
    System sys{problem, grid, problem.kernel().weights(grid.h()), 0, phase_location(grid),
               config.u0.value_or(problem.q())};
    sys.half = static_cast<int>(sys.weights.size() - 1) / 2;

    const std::vector<double> xi = grid.nodes();
    std::vector<double> U(xi.size());
    double c = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        U[i] = init ? init->at(xi[i]) : std::tanh(xi[i] / config.seed_width);
    }
    if (init) c = init->c;
    U.front() = -1.0;
    U.back() = 1.0;

    WaveSolution out;
    out.model = problem.name();
    out.grid = grid;
    out.config = config;
    out.u0 = sys.u0;
    out.tolerance = config.tolerance;

    Vec F = sys.residual(U, c);
    double norm = F.lpNorm<Eigen::Infinity>();
    int it = 0;
    out.trace.push_back({0, norm, 0.0, c});
    while (!(norm < config.tolerance)) {
        if (it >= config.max_iterations) {
            std::ostringstream msg;
            msg << "Newton reached " << config.max_iterations << " iterations with residual " << norm;
            throw NewtonFailure(msg.str(), out.trace);
        }
        ++it;
        const Vec step = solve_dense(sys.jacobian(U, c), -F);
        double damping = 1.0;
        for (;;) {
            std::vector<double> trial = U;
            for (int i = 1; i < grid.n - 1; ++i) trial[static_cast<std::size_t>(i)] += damping * step(i - 1);
            const double trial_c = c + damping * step(grid.n - 2);
            const Vec trial_F = sys.residual(trial, trial_c);
            const double trial_norm = trial_F.lpNorm<Eigen::Infinity>();
            if (trial_norm < norm) {
                U = std::move(trial);
                c = trial_c;
                F = trial_F;
                norm = trial_norm;
                break;
            }
            damping *= 0.5;
            if (damping < config.min_damping) {
                std::ostringstream msg;
                msg << "Newton stalled at iteration " << it << " with residual " << norm
                    << " (no decrease down to damping " << config.min_damping << ")";
                out.trace.push_back({it, norm, damping, c});
                throw NewtonFailure(msg.str(), out.trace);
            }
        }
        out.trace.push_back({it, norm, damping, c});
    }

    out.xi = xi;
    out.U = std::move(U);
    out.c = c;
    out.iterations = it;
    out.residual = residual(problem, out);
    out.boundary_deviation = std::max(std::abs(out.U.front() + 1.0), std::abs(out.U.back() - 1.0));
    double min_slope = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < out.U.size(); ++i) min_slope = std::min(min_slope, out.U[i + 1] - out.U[i]);
    out.monotone = min_slope > 0.0;
    if (!out.monotone) {
        std::ostringstream msg;
        msg << "converged profile is not strictly increasing (min slope " << min_slope << ")";
        throw MonotonicityError(msg.str());
    }
    return out;
}

ContinuationResult continuation(const std::function<ModelProblem(double)>& family, const std::vector<double>& path,
                                const SolverConfig& config) {
    ContinuationResult result;
    std::optional<WaveSolution> seed;
    for (std::size_t k = 0; k < path.size(); ++k) {
        try {
            WaveSolution w = solve_wave(family(path[k]), config, seed);
            seed = w;
            result.steps.push_back(std::move(w));
        } catch (const Error& e) {
            if (k == 0) throw;
            result.failed_at = k;
            result.failure = e.what();
            break;
        }
    }
    return result;
}

double locate_level(const WaveSolution& wave, double value) {
    const auto it = std::upper_bound(wave.U.begin(), wave.U.end(), value);
    if (it == wave.U.begin() || it == wave.U.end()) throw NumericalError("level outside the profile range");
    const auto i = static_cast<int>(it - wave.U.begin()) - 1;
    double lo = wave.grid.x(std::max(i - 1, 0)), hi = wave.grid.x(std::min(i + 2, wave.grid.n - 1));
    for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
        const double mid = 0.5 * (lo + hi);
        (wave.at(mid) < value ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void export_wave(const WaveSolution& wave, const std::filesystem::path& path) {
    nlohmann::json header = {
        {"model", wave.model},     {"c", wave.c},
        {"residual", wave.residual}, {"tolerance", wave.tolerance},
        {"u0", wave.u0},           {"iterations", wave.iterations},
        {"config", {{"L", wave.config.L}, {"n", wave.config.n}, {"tolerance", wave.config.tolerance},
                    {"max_iterations", wave.config.max_iterations}}},
    };
    write_columns(path, {wave.xi, wave.U}, {header.dump(), "xi U"});
}

WaveSolution import_wave(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    nlohmann::json header;
    while (std::getline(in, line)) {
        if (line.rfind("# {", 0) == 0) {
            try {
                header = nlohmann::json::parse(line.substr(2));
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(path.string() + ": malformed JSON header: " + e.what());
            }
            break;
        }
    }
    if (header.is_null() || !header.contains("c")) throw ParseError(path.string() + ": missing JSON header with the speed");
    const auto cols = read_columns(path, 2);
    const std::size_t n = cols[0].size();
    if (n < 3) throw ParseError(path.string() + ": too few profile samples");
    WaveSolution w;
    w.model = header.value("model", std::string("imported"));
    w.grid = Grid(-cols[0].front(), static_cast<int>(n));
    if (std::abs(cols[0].back() + cols[0].front()) > 1e-9 * w.grid.L ||
        std::abs(w.grid.x(static_cast<int>(n) - 1) - cols[0].back()) > 1e-9 * w.grid.L) {
        throw ParseError(path.string() + ": profile grid must be uniform and symmetric");
    }
    w.xi = cols[0];
    w.U = cols[1];
    w.c = header["c"].get<double>();
    w.u0 = header.value("u0", 0.0);
    w.residual = header.value("residual", 0.0);
    w.tolerance = header.value("tolerance", 0.0);
    w.config.L = w.grid.L;
    w.config.n = w.grid.n;
    w.monotone = std::is_sorted(w.U.begin(), w.U.end());
    return w;
}

}  // namespace nlwave
