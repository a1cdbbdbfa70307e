#include "nlwave/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp() overflows just above 709.
constexpr double kExpLimit = 700.0;

double bump_shape(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw SpecError(std::string("kernel parameter ") + what + " must be positive and finite");
    }
}

// The bump is C-infinity with compact support: 512 trapezoid intervals reach
// roundoff for |z|R of order 20; at larger |z|R two nodes per radian already do, and
// four leave margin for the exponential weight.
int bump_intervals(cplx z, double radius) {
    const double phase = std::abs(z) * radius;
    return static_cast<int>(std::clamp(4.0 * phase, 512.0, 65536.0));
}

}  // namespace

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::laplace: return "laplace";
        case KernelFamily::bump: return "bump";
        case KernelFamily::tabulated: return "tabulated";
    }
    return "unknown";
}

Kernel Kernel::gaussian(double sigma, double scale) {
    require_positive(sigma, "sigma");
    require_positive(scale, "scale");
    Kernel k;
    k.family_ = KernelFamily::gaussian;
    k.param_ = sigma;
    k.scale_ = scale;
    return k;
}

Kernel Kernel::laplace(double beta, double scale) {
    require_positive(beta, "beta");
    require_positive(scale, "scale");
    Kernel k;
    k.family_ = KernelFamily::laplace;
    k.param_ = beta;
    k.scale_ = scale;
    return k;
}

Kernel Kernel::bump(double radius, double scale) {
    require_positive(radius, "radius");
    require_positive(scale, "scale");
    Kernel k;
    k.family_ = KernelFamily::bump;
    k.param_ = radius;
    k.scale_ = scale;
    // The shape is C-infinity with compact support, so the trapezoid rule converges
    // faster than any power of the step.
    const int n = 20000;
    const double dt = 2.0 / n;
    double sum = 0.0;
    for (int i = 1; i < n; ++i) sum += bump_shape(-1.0 + i * dt);
    k.norm_ = 1.0 / (sum * dt * radius);
    // ‖J''‖₁ bounds |M(iη)| by ‖J''‖₁/η² (two integrations by parts); 1% covers the
    // difference-quotient error.
    double curvature = 0.0;
    for (int i = 1; i < n; ++i) {
        const double x = -1.0 + i * dt;
        curvature += std::abs(bump_shape(x + dt) - 2.0 * bump_shape(x) + bump_shape(x - dt)) / (dt * dt);
    }
    k.curvature_ = 1.01 * scale * k.norm_ * curvature * dt / radius;
    return k;
}

Kernel Kernel::tabulated(std::vector<double> s, std::vector<double> j) {
    if (s.size() != j.size() || s.size() < 3) {
        throw SpecError("tabulated kernel needs at least 3 (s, J) pairs of equal length");
    }
    const double step = s[1] - s[0];
    if (!(step > 0.0)) throw SpecError("tabulated kernel abscissae must increase");
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (std::abs((s[i] - s[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step))) {
            throw SpecError("tabulated kernel abscissae must be uniformly spaced");
        }
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const double w = (i == 0 || i + 1 == j.size()) ? 0.5 : 1.0;
        mass += w * j[i] * step;
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw SpecError("tabulated kernel has non-positive mass");
    }
    Kernel k;
    k.family_ = KernelFamily::tabulated;
    k.param_ = std::max(std::abs(s.front()), std::abs(s.back()));
    k.renorm_ = 1.0 / mass;
    for (double& v : j) v *= k.renorm_;
    k.ts_ = std::move(s);
    k.tj_ = std::move(j);
    k.tstep_ = step;
    return k;
}

double Kernel::operator()(double s) const {
    switch (family_) {
        case KernelFamily::gaussian: {
            const double sg = param_;
            return scale_ * std::exp(-0.5 * s * s / (sg * sg)) / (sg * std::sqrt(2.0 * std::numbers::pi));
        }
        case KernelFamily::laplace:
            return scale_ * 0.5 * param_ * std::exp(-param_ * std::abs(s));
        case KernelFamily::bump:
            return scale_ * norm_ * bump_shape(s / param_);
        case KernelFamily::tabulated: {
            if (s < ts_.front() || s > ts_.back()) return 0.0;
            const double pos = (s - ts_.front()) / tstep_;
            const auto i = std::min(static_cast<std::size_t>(pos), ts_.size() - 2);
            const double t = pos - static_cast<double>(i);
            return (1.0 - t) * tj_[i] + t * tj_[i + 1];
        }
    }
    return 0.0;
}

double Kernel::support_radius() const {
    switch (family_) {
        case KernelFamily::bump: return param_;
        case KernelFamily::tabulated: return param_;
        default: return kInf;
    }
}

double Kernel::abscissa() const {
    return family_ == KernelFamily::laplace ? param_ : kInf;
}

double Kernel::imaginary_axis_bound(double eta) const {
    const double e = std::abs(eta);
    switch (family_) {
        case KernelFamily::gaussian: return scale_ * std::exp(-0.5 * e * e * param_ * param_);
        case KernelFamily::laplace: return scale_ * param_ * param_ / (param_ * param_ + e * e);
        case KernelFamily::bump: return e > 0.0 ? std::min(scale_, curvature_ / (e * e)) : scale_;
        case KernelFamily::tabulated: return mass();
    }
    return mass();
}

double Kernel::effective_radius() const {
    switch (family_) {
        case KernelFamily::gaussian: return 9.0 * param_;
        case KernelFamily::laplace: return 40.0 / param_;
        default: return param_;
    }
}

cplx Kernel::quadrature(cplx z, int power, int intervals) const {
    const double x = std::abs(z.real());
    double lo = 0.0, hi = 0.0;
    int n = intervals;
    switch (family_) {
        case KernelFamily::gaussian: {
            const double sg = param_;
            hi = sg * (10.0 + 2.0 * x * sg);
            lo = -hi;
            break;
        }
        case KernelFamily::laplace: {
            if (x >= param_) throw TransformDivergence("laplace transform diverges at |Re z| >= beta");
            hi = 45.0 / (param_ - x);
            lo = -hi;
            n = 2 * (intervals / 2);  // keep a node on the kink at 0
            break;
        }
        case KernelFamily::bump:
            hi = param_;
            lo = -hi;
            break;
        case KernelFamily::tabulated:
            lo = ts_.front();
            hi = ts_.back();
            n = static_cast<int>(ts_.size()) - 1;
            break;
    }
    if (x * std::max(std::abs(lo), std::abs(hi)) > kExpLimit) {
        std::ostringstream msg;
        msg << "kernel transform weight overflows at z = " << z.real() << (z.imag() < 0 ? "" : "+")
            << z.imag() << "i";
        throw TransformDivergence(msg.str());
    }
    const double ds = (hi - lo) / n;
    cplx sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = lo + i * ds;
        const double j = family_ == KernelFamily::tabulated ? tj_[static_cast<std::size_t>(i)] * scale_
                                                            : (*this)(s);
        if (j == 0.0) continue;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        cplx term = w * j * std::exp(-z * s);
        if (power == 1) term *= s;
        sum += term;
    }
    return sum * ds;
}

cplx Kernel::transform_by_quadrature(cplx z, int intervals) const {
    return quadrature(z, 0, intervals);
}

cplx Kernel::transform(cplx z) const {
    switch (family_) {
        case KernelFamily::gaussian: {
            const double s2 = param_ * param_;
            const cplx e = 0.5 * z * z * s2;
            if (e.real() > kExpLimit) throw TransformDivergence("gaussian transform overflows");
            return scale_ * std::exp(e);
        }
        case KernelFamily::laplace: {
            if (std::abs(z.real()) >= param_) {
                throw TransformDivergence("laplace transform diverges at |Re z| >= beta");
            }
            const double b2 = param_ * param_;
            return scale_ * b2 / (b2 - z * z);
        }
        case KernelFamily::bump: return quadrature(z, 0, bump_intervals(z, param_));
        case KernelFamily::tabulated: return quadrature(z, 0, 0);
    }
    return 0.0;
}

cplx Kernel::first_moment(cplx z) const {
    switch (family_) {
        case KernelFamily::gaussian: {
            const double s2 = param_ * param_;
            return -z * s2 * transform(z);
        }
        case KernelFamily::laplace: {
            const double b2 = param_ * param_;
            const cplx den = b2 - z * z;
            if (std::abs(z.real()) >= param_) {
                throw TransformDivergence("laplace transform diverges at |Re z| >= beta");
            }
            return -scale_ * 2.0 * b2 * z / (den * den);
        }
        case KernelFamily::bump: return quadrature(z, 1, bump_intervals(z, param_));
        case KernelFamily::tabulated: return quadrature(z, 1, 0);
    }
    return 0.0;
}

std::vector<double> Kernel::weights(double h) const {
    if (!(h > 0.0)) throw GridError("kernel weights need a positive spacing");
    const double radius = effective_radius();
    const auto half = static_cast<long>(std::floor(radius / h + 1e-12));
    if (half > 1'000'000) throw SizeError("kernel support spans too many grid nodes");
    std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (long k = -half; k <= half; ++k) {
        const double v = (*this)(static_cast<double>(k) * h);
        w[static_cast<std::size_t>(k + half)] = v;
        sum += v;
    }
    if (!(sum > 0.0)) throw GridError("grid spacing too coarse to sample the kernel");
    const double factor = mass() / sum;
    for (double& v : w) v *= factor;
    return w;
}

std::string Kernel::describe() const {
    std::ostringstream out;
    out << to_string(family_);
    switch (family_) {
        case KernelFamily::gaussian: out << "(sigma=" << param_ << ")"; break;
        case KernelFamily::laplace: out << "(beta=" << param_ << ")"; break;
        case KernelFamily::bump: out << "(R=" << param_ << ")"; break;
        case KernelFamily::tabulated: out << "(" << ts_.size() << " samples)"; break;
    }
    if (scale_ != 1.0) out << " x" << scale_;
    return out.str();
}

}  // namespace nlwave
