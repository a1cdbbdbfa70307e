#include "nlwave/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t fast_size(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& x, int sign) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> out(x.size());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(x.data()));
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

Grid::Grid(double half_width, int nodes) : L(half_width), n(nodes) {
    if (!(L > 0.0) || n < 3) throw GridError("grid needs L > 0 and at least 3 nodes");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = x(i);
    // Exact symmetry about 0 keeps odd profiles odd to roundoff.
    for (int i = 0; i < n / 2; ++i) out[static_cast<std::size_t>(n - 1 - i)] = -out[static_cast<std::size_t>(i)];
    if (n % 2 == 1) out[static_cast<std::size_t>(n / 2)] = 0.0;
    return out;
}

int Grid::bracket(double xi) const {
    const int i = static_cast<int>(std::floor((xi + L) / h()));
    return std::clamp(i, 0, n - 2);
}

std::vector<double> convolve_extended(const std::vector<double>& u, const std::vector<double>& w, double left,
                                      double right) {
    if (w.size() % 2 == 0) throw GridError("convolution weights need odd length");
    const std::size_t n = u.size();
    const std::size_t K = (w.size() - 1) / 2;
    const std::size_t len = n + 2 * K;
    const std::size_t N = fast_size(len + w.size());
    std::vector<double> a(N, 0.0), b(N, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
        a[i] = left;
        a[K + n + i] = right;
    }
    std::copy(u.begin(), u.end(), a.begin() + static_cast<std::ptrdiff_t>(K));
    std::copy(w.begin(), w.end(), b.begin());

    const std::size_t nc = N / 2 + 1;
    std::vector<std::complex<double>> fa(nc), fb(nc);
    fftw_plan pa, pb, pinv;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        pa = fftw_plan_dft_r2c_1d(static_cast<int>(N), a.data(), reinterpret_cast<fftw_complex*>(fa.data()),
                                  FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(static_cast<int>(N), b.data(), reinterpret_cast<fftw_complex*>(fb.data()),
                                  FFTW_ESTIMATE);
        pinv = fftw_plan_dft_c2r_1d(static_cast<int>(N), reinterpret_cast<fftw_complex*>(fa.data()), a.data(),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::size_t k = 0; k < nc; ++k) fa[k] *= fb[k];
    fftw_execute(pinv);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pinv);
    }
    // Full linear convolution c_m = Σ_j a_j b_{m-j}; output node i sits at m = i + 2K.
    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(N);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i + 2 * K] * scale;
    return out;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
    return transform(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& x) {
    return transform(x, FFTW_BACKWARD);
}

}  // namespace nlwave
