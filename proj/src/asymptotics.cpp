#include "nlwave/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlwave/errors.hpp"
#include "nlwave/fit.hpp"
#include "nlwave/grid.hpp"

namespace nlwave {

namespace {

constexpr double kOuterFraction = 0.9;
constexpr double kUnderflow = 1e-14;
constexpr int kMinPoints = 8;
// exp overflows near 709.8; leave headroom for the integrand's own size.
constexpr double kExpLimit = 700.0;

double sign_of(Side side) { return side == Side::plus_infinity ? 1.0 : -1.0; }

}  // namespace

std::string to_string(Side side) { return side == Side::plus_infinity ? "plus" : "minus"; }

PredictedRates predicted_rates(const ModelProblem& problem, double c) {
    PredictedRates out;
    out.plus = real_roots(plus_charfn(problem, c));
    out.minus = real_roots(minus_charfn(problem, c));
    out.lambda_s_plus = out.plus.lambda_s;
    out.lambda_u_minus = out.minus.lambda_u;
    return out;
}

FitWindow default_window(double L) { return {0.3 * L, 0.8 * L}; }

DecayFit fit_decay(const std::vector<double>& xi, const std::vector<double>& tail, Side side, FitWindow window,
                   double r2_min) {
    if (xi.size() != tail.size() || xi.empty()) throw WindowError("tail samples and abscissae differ in length");
    double extent = 0.0;
    for (double x : xi) extent = std::max(extent, std::abs(x));
    if (!(window.lo < window.hi) || window.lo < 0.0 || window.hi > kOuterFraction * extent) {
        std::ostringstream msg;
        msg << "fit window [" << window.lo << ", " << window.hi << "] must lie in [0, "
            << kOuterFraction * extent << "]";
        throw WindowError(msg.str());
    }
    const double s = sign_of(side);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double a = s * xi[i];
        if (a < window.lo || a > window.hi) continue;
        if (!(tail[i] >= kUnderflow)) {
            std::ostringstream msg;
            msg << "tail value " << tail[i] << " at xi = " << xi[i] << " is below the " << kUnderflow
                << " floor; move the window toward the core";
            throw UnderflowWindowError(msg.str());
        }
        x.push_back(xi[i]);
        y.push_back(std::log(tail[i]));
    }
    if (static_cast<int>(x.size()) < kMinPoints) throw WindowError("fit window holds fewer than 8 samples");
    const LineFit line = fit_line(x, y);
    if (line.r2 < r2_min) {
        std::ostringstream msg;
        msg << "tail fit R^2 = " << line.r2 << " below " << r2_min;
        throw FitError(msg.str());
    }
    DecayFit fit;
    fit.side = side;
    fit.rate = line.slope;
    fit.amplitude = std::exp(line.intercept);
    fit.window = window;
    fit.r2 = line.r2;
    fit.points = line.points;
    return fit;
}

DecayFit fit_tail_rate(const WaveSolution& wave, Side side, std::optional<FitWindow> window,
                       std::optional<double> predicted) {
    std::vector<double> tail(wave.U.size());
    for (std::size_t i = 0; i < tail.size(); ++i)
        tail[i] = side == Side::plus_infinity ? 1.0 - wave.U[i] : wave.U[i] + 1.0;
    DecayFit fit = fit_decay(wave.xi, tail, side, window.value_or(default_window(wave.grid.L)));
    if (predicted) {
        fit.predicted = *predicted;
        fit.relative_error = std::abs(fit.rate - *predicted) / std::abs(*predicted);
    }
    return fit;
}

std::vector<double> wave_derivative(const WaveSolution& wave) {
    const std::vector<double>& U = wave.U;
    const std::size_t n = U.size();
    if (n < 3) throw GridError("derivative needs at least three nodes");
    const double h = wave.grid.h();
    std::vector<double> V(n);
    for (std::size_t i = 1; i + 1 < n; ++i) V[i] = (U[i + 1] - U[i - 1]) / (2.0 * h);
    V[0] = (-3.0 * U[0] + 4.0 * U[1] - U[2]) / (2.0 * h);
    V[n - 1] = (3.0 * U[n - 1] - 4.0 * U[n - 2] + U[n - 3]) / (2.0 * h);
    return V;
}

ResidueAmplitude residue_amplitude(const ModelProblem& problem, const WaveSolution& wave, Side side) {
    const bool plus = side == Side::plus_infinity;
    const CharFn cf = plus ? plus_charfn(problem, wave.c) : minus_charfn(problem, wave.c);
    const RootPair roots = real_roots(cf);
    const double lambda = plus ? roots.lambda_s : roots.lambda_u;
    const EquilibriumConstants& k = problem.constants();
    const double a = plus ? k.a_plus : k.a_minus;
    const double b = plus ? k.b_plus : k.b_minus;

    const Grid& grid = wave.grid;
    const double h = grid.h();
    const std::vector<double> w = problem.kernel().weights(h);
    const std::vector<double> V = wave_derivative(wave);
    const std::vector<double> JU = convolve_extended(wave.U, w, -1.0, 1.0);
    const std::vector<double> JV = convolve_extended(V, w, 0.0, 0.0);

    ResidueAmplitude out;
    out.side = side;
    out.lambda = lambda;
    double reach = grid.L;
    if (std::abs(lambda) * grid.L > kExpLimit) {
        reach = kExpLimit / std::abs(lambda);
        out.clipped = true;
        std::ostringstream msg;
        msg << "exponential weight overflows beyond |xi| = " << reach << "; numerator integrated on the clipped window";
        out.warning = msg.str();
    }

    // Trapezoid over the nodes with |ξ| <= reach; the end nodes get half weight.
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < wave.xi.size(); ++i)
        if (std::abs(wave.xi[i]) <= reach) idx.push_back(i);
    const Nonlinearity& f = problem.f();
    double sum = 0.0;
    for (std::size_t m = 0; m < idx.size(); ++m) {
        const std::size_t i = idx[m];
        const double mv = (f.f_r(wave.U[i], JU[i]) - a) * V[i] + (f.f_s(wave.U[i], JU[i]) - b) * JV[i];
        const double term = -mv * std::exp(-lambda * wave.xi[i]);
        sum += (m == 0 || m + 1 == idx.size()) ? 0.5 * term : term;
    }
    out.numerator = sum * h;
    out.delta_prime = eval_delta_prime(cf, lambda).real();
    out.printed_denominator = problem.kernel().first_moment(lambda).real() - wave.c;
    out.gamma = sign_of(side) * out.numerator / out.delta_prime;
    out.gamma_printed = out.numerator / out.printed_denominator;
    out.denominator_ratio = -out.delta_prime / out.printed_denominator;
    out.amplitude = plus ? -out.gamma / lambda : out.gamma / lambda;
    return out;
}

UniquenessReport uniqueness_check(const ModelProblem& problem, const std::vector<SolverConfig>& configs,
                                  double speed_tolerance, double profile_tolerance) {
    if (configs.size() < 2) throw SpecError("uniqueness check needs at least two solver configurations");
    UniquenessReport report;
    report.speed_tolerance = speed_tolerance;
    report.profile_tolerance = profile_tolerance;
    double L_min = configs.front().L;
    for (const SolverConfig& cfg : configs) {
        report.waves.push_back(solve_wave(problem, cfg));
        L_min = std::min(L_min, cfg.L);
    }
    report.window = 0.5 * L_min;
    std::vector<double> shift;
    for (const WaveSolution& w : report.waves) shift.push_back(locate_level(w, problem.q()));

    for (std::size_t i = 0; i < report.waves.size(); ++i) {
        for (std::size_t j = i + 1; j < report.waves.size(); ++j) {
            const WaveSolution& wi = report.waves[i];
            const WaveSolution& wj = report.waves[j];
            PairwiseAgreement p{i, j, std::abs(wi.c - wj.c), 0.0};
            for (std::size_t k = 0; k < wi.xi.size(); ++k) {
                const double t = wi.xi[k] - shift[i];
                if (std::abs(t) > report.window) continue;
                p.profile_difference = std::max(p.profile_difference, std::abs(wi.U[k] - wj.at(t + shift[j])));
            }
            report.max_speed_difference = std::max(report.max_speed_difference, p.speed_difference);
            report.max_profile_difference = std::max(report.max_profile_difference, p.profile_difference);
            report.pairs.push_back(p);
        }
    }
    report.alarm = report.max_speed_difference > speed_tolerance || report.max_profile_difference > profile_tolerance;
    std::ostringstream msg;
    msg << "max speed difference " << report.max_speed_difference << " (tol " << speed_tolerance
        << "), max profile difference " << report.max_profile_difference << " (tol " << profile_tolerance << ")";
    if (report.alarm) msg << ": runs disagree, which points to a solver artifact or a hypothesis violation";
    report.message = msg.str();
    return report;
}

}  // namespace nlwave
