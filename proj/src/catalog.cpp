#include "nlwave/catalog.hpp"

#include <cmath>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

template <class F>
double bisect(F&& g, double lo, double hi) {
    double glo = g(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

ModelProblem neural() {
    constexpr double kappa = 5.0;
    auto logistic = [](double u) { return 1.0 / (1.0 + std::exp(-kappa * (u - 0.5))); };
    // Upper stable fixed point of S(u) = u; the lower one is 1 - u_plus by symmetry.
    const double u_plus = bisect([&](double u) { return logistic(u) - u; }, 0.6, 1.0);
    const AffineMap map{0.5, u_plus - 0.5};
    auto s_tilde = [=](double s) { return map.to_rescaled(logistic(map.to_original(s))); };
    auto s_tilde_prime = [=](double s) {
        const double y = logistic(map.to_original(s));
        return kappa * y * (1.0 - y);
    };
    Nonlinearity f(
        "neural", [=](double r, double s) { return -r + s_tilde(s); }, 0.0,
        Fn2([](double, double) { return -1.0; }), Fn2([=](double, double s) { return s_tilde_prime(s); }));
    return {"neural", 0.0, Kernel::gaussian(2.0), f.with_rescaling(map)};
}

ModelProblem ising() {
    constexpr double beta = 2.0;
    const double m = ising_magnetization(beta);
    Nonlinearity f(
        "ising", [=](double r, double s) { return std::tanh(beta * m * s) / m - r; }, 0.0,
        Fn2([](double, double) { return -1.0; }),
        Fn2([=](double, double s) { return beta * sech2(beta * m * s); }));
    return {"ising", 0.0, Kernel::bump(10.0), f.with_rescaling(AffineMap{0.0, m})};
}

}  // namespace

double ising_magnetization(double beta) {
    if (!(beta > 1.0)) throw SpecError("Ising magnetization needs beta > 1");
    return bisect([&](double m) { return std::tanh(beta * m) - m; }, 1e-3, 1.0);
}

ModelProblem phase_model(double epsilon, double detuning, double d, double sigma) {
    if (!(epsilon > 0.0)) throw SpecError("phase model needs epsilon > 0");
    if (!(std::abs(detuning) < 1.0)) throw SpecError("phase model detuning must lie in (-1, 1)");
    const double e = epsilon, t = detuning;
    Nonlinearity f(
        "phase", [=](double r, double s) { return e * (s - r) + (1.0 - r * r) * (r + t); }, -t,
        Fn2([=](double r, double) { return -e + 1.0 - 3.0 * r * r - 2.0 * t * r; }),
        Fn2([=](double, double) { return e; }));
    return {"phase", d, Kernel::gaussian(sigma), f};
}

ModelProblem builtin_model(const std::string& name) {
    if (name == "neural") return neural();
    if (name == "ising") return ising();
    if (name == "phase") return phase_model(0.1);
    throw CatalogError("unknown built-in model '" + name + "' (expected neural, ising or phase)");
}

std::vector<std::string> builtin_names() { return {"neural", "ising", "phase"}; }

}  // namespace nlwave
