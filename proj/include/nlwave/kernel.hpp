#pragma once

#include <complex>
#include <string>
#include <vector>

namespace nlwave {

using cplx = std::complex<double>;

enum class KernelFamily { gaussian, laplace, bump, tabulated };

std::string to_string(KernelFamily family);

/// Even interaction kernel J with its two-sided transform M(z) = ∫J(s)e^{-zs}ds.
///
/// Every family carries a multiplicative `scale`, so mass() == scale. Built
/// kernels are immutable; copies share nothing mutable.
class Kernel {
public:
    static Kernel gaussian(double sigma, double scale = 1.0);
    static Kernel laplace(double beta, double scale = 1.0);
    /// C-infinity bump exp(-1/(1-(s/R)^2)) on [-R, R], normalized by quadrature.
    static Kernel bump(double radius, double scale = 1.0);
    /// Uniformly spaced samples (s_k, J_k). Renormalized to unit mass with the
    /// trapezoid rule; the applied factor is kept in renormalization().
    static Kernel tabulated(std::vector<double> s, std::vector<double> j);

    KernelFamily family() const { return family_; }
    double parameter() const { return param_; }
    double scale() const { return scale_; }
    double mass() const { return scale_; }
    double renormalization() const { return renorm_; }

    double operator()(double s) const;

    /// M(z). Throws TransformDivergence where the integral does not converge
    /// or the quadrature weight overflows.
    cplx transform(cplx z) const;
    /// ∫ s J(s) e^{-zs} ds, so that M'(z) = -first_moment(z).
    cplx first_moment(cplx z) const;
    /// Trapezoid quadrature of M(z) regardless of family; used to cross-check
    /// closed forms.
    cplx transform_by_quadrature(cplx z, int intervals = 8192) const;

    /// Radius outside which J vanishes (infinity for gaussian and laplace).
    double support_radius() const;
    /// Sup of |Re z| for which M(z) is finite (infinity except for laplace).
    double abscissa() const;
    /// Nonincreasing bound on sup over |η'| >= |η| of |M(iη')|. The trapezoid sum of a
    /// tabulated kernel is periodic in η, so only the mass bound applies there.
    double imaginary_axis_bound(double eta) const;
    /// Radius beyond which J is below 1e-17 of its peak; finite for every family.
    double effective_radius() const;

    /// Discrete convolution weights w_k ≈ h·J(kh), k = -K..K, rescaled so that
    /// Σw_k = mass(). Length 2K+1.
    std::vector<double> weights(double h) const;

    std::string describe() const;

private:
    Kernel() = default;
    cplx quadrature(cplx z, int power, int intervals) const;

    KernelFamily family_ = KernelFamily::gaussian;
    double param_ = 1.0;   // sigma, beta, or R
    double scale_ = 1.0;
    double norm_ = 1.0;    // bump normalization so that ∫J = scale
    double renorm_ = 1.0;
    double curvature_ = 0.0;  // bump: ‖J''‖₁
    std::vector<double> ts_, tj_;
    double tstep_ = 0.0;
};

}  // namespace nlwave
