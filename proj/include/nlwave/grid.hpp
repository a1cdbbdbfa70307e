#pragma once

#include <complex>
#include <vector>

namespace nlwave {

/// Uniform grid of n nodes on [-L, L]; h = 2L/(n-1). Symmetric: x(i) = -x(n-1-i).
struct Grid {
    double L = 0.0;
    int n = 0;

    Grid() = default;
    Grid(double half_width, int nodes);

    double h() const { return 2.0 * L / (n - 1); }
    double x(int i) const { return -L + i * h(); }
    std::vector<double> nodes() const;
    /// Index i with x(i) <= xi < x(i+1), clamped to [0, n-2].
    int bracket(double xi) const;
};

/// (J*u)_i = Σ_k w_k u_{i-k} for weights w_{-K..K}, with u extended by `left`
/// below index 0 and by `right` above index n-1. Computed with FFTW.
std::vector<double> convolve_extended(const std::vector<double>& u, const std::vector<double>& w, double left,
                                      double right);

/// Forward DFT X_k = Σ_j x_j e^{-2πijk/N} and its unnormalized inverse.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x);
std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x);

}  // namespace nlwave
