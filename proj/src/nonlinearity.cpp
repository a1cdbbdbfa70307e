#include "nlwave/nonlinearity.hpp"

#include <cmath>
#include <utility>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

constexpr double kStep = 1e-6;
constexpr double kCoarseStep = 1e-5;
constexpr double kAgreement = 1e-6;

template <class G>
double refined_derivative(G&& g) {
    const double fine = (g(kStep) - g(-kStep)) / (2.0 * kStep);
    const double coarse = (g(kCoarseStep) - g(-kCoarseStep)) / (2.0 * kCoarseStep);
    if (std::abs(fine - coarse) <= kAgreement) return fine;
    // Second-order error: ratio of squared steps is 100.
    return fine + (fine - coarse) / 99.0;
}

}  // namespace

Nonlinearity::Nonlinearity(std::string name, Fn2 f, double q, std::optional<Fn2> f_r,
                           std::optional<Fn2> f_s)
    : name_(std::move(name)), f_(std::move(f)), q_(q), fr_(std::move(f_r)), fs_(std::move(f_s)) {
    if (!f_) throw SpecError("nonlinearity needs an f(r, s) evaluator");
    if (!(q_ > -1.0 && q_ < 1.0)) throw SpecError("middle zero q must lie in (-1, 1)");
}

double Nonlinearity::f_r_fd(double r, double s) const {
    return refined_derivative([&](double e) { return f_(r + e, s); });
}

double Nonlinearity::f_s_fd(double r, double s) const {
    return refined_derivative([&](double e) { return f_(r, s + e); });
}

double Nonlinearity::f_r(double r, double s) const { return fr_ ? (*fr_)(r, s) : f_r_fd(r, s); }

double Nonlinearity::f_s(double r, double s) const { return fs_ ? (*fs_)(r, s) : f_s_fd(r, s); }

Nonlinearity Nonlinearity::with_rescaling(AffineMap map) const {
    Nonlinearity copy = *this;
    copy.rescaling_ = map;
    return copy;
}

}  // namespace nlwave
