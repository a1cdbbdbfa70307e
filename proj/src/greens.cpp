#include "nlwave/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlwave/errors.hpp"
#include "nlwave/fit.hpp"

namespace nlwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFitFloor = 1e-12;  // relative to max|G₀|; below this roundoff dominates

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double signed_frequency(int k, int n, double step) {
    const int s = k < (n + 1) / 2 ? k : k - n;
    return s * step;
}

// Leading part 1/P(iη) of 1/Δ(iη) with a closed-form inverse transform.
struct Reference {
    double d = 0.0, c = 0.0;
    cplx shift;           // A_ref in P(z) = dz² - cz + A_ref
    cplx z_minus, z_plus;  // roots of P with Re z_minus < 0 < Re z_plus (d > 0)
    cplx z0;               // root of P (d = 0)

    cplx symbol(double eta) const {
        const cplx z(0.0, eta);
        return 1.0 / (d * z * z - c * z + shift);
    }

    cplx inverse(double xi) const {
        if (d > 0.0) {
            const cplx den = d * (z_minus - z_plus);
            return xi >= 0.0 ? std::exp(z_minus * xi) / den : std::exp(z_plus * xi) / den;
        }
        // P(z) = -c(z - z0); the inverse lives on the side where e^{z0 ξ} decays.
        if (z0.real() < 0.0) {
            if (xi > 0.0) return -std::exp(z0 * xi) / c;
            return xi == 0.0 ? cplx(-0.5 / c) : cplx(0.0);
        }
        if (xi < 0.0) return std::exp(z0 * xi) / c;
        return xi == 0.0 ? cplx(0.5 / c) : cplx(0.0);
    }
};

Reference make_reference(const CharFn& cf) {
    Reference ref;
    ref.d = cf.d;
    ref.c = cf.c;
    const cplx A = cf.a - cf.lambda;
    if (cf.d > 0.0) {
        auto roots = [&](cplx shift) {
            const cplx disc = std::sqrt(cplx(cf.c * cf.c) - 4.0 * cf.d * shift);
            cplx r1 = (cf.c - disc) / (2.0 * cf.d), r2 = (cf.c + disc) / (2.0 * cf.d);
            if (r1.real() > r2.real()) std::swap(r1, r2);
            return std::pair{r1, r2};
        };
        ref.shift = A;
        auto [lo, hi] = roots(A);
        if (!(lo.real() < 0.0 && hi.real() > 0.0)) {
            ref.shift = -(cf.d + std::abs(cf.c) + 1.0);
            std::tie(lo, hi) = roots(ref.shift);
        }
        ref.z_minus = lo;
        ref.z_plus = hi;
    } else {
        ref.shift = A;
        if (std::abs((A / cf.c).real()) < 1e-3) ref.shift = A - std::abs(cf.c);
        ref.z0 = ref.shift / cf.c;
    }
    return ref;
}

struct SideFit {
    double alpha = kInf;
    double residual = 0.0;
};

SideFit fit_side(const std::vector<double>& xi, const std::vector<cplx>& g, double L, double peak, int sign) {
    // Past its minimum |G₀| is dominated by roundoff or by the periodic image of the
    // other side's tail; keep only samples 10³ above that minimum and before it.
    double valley = kInf, valley_at = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
        const double s = sign * xi[j];
        if (s > 0.0 && s <= 0.8 * L && std::abs(g[j]) < valley) {
            valley = std::abs(g[j]);
            valley_at = s;
        }
    }
    const double floor = std::max(kFitFloor * peak, 1e3 * valley);
    double last = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) {
        const double s = sign * xi[j];
        if (s > 0.0 && s <= valley_at && std::abs(g[j]) > floor) last = std::max(last, s);
    }
    SideFit fit;
    const double h = xi[1] - xi[0];
    if (last < 8.0 * h) return fit;  // side vanishes to roundoff
    std::vector<double> x, mag;
    for (std::size_t j = 0; j < xi.size(); ++j) {
        const double s = sign * xi[j];
        if (s >= 0.5 * last && s <= last) {
            x.push_back(s);
            mag.push_back(std::abs(g[j]));
        }
    }
    const EnvelopeFit env = fit_envelope(x, mag, 0.5 * last, last, floor);
    fit.alpha = env.alpha;
    fit.residual = env.relative_residual;
    return fit;
}

GreensTable invert(const CharFn& cf, double L_G, int n, bool check_window) {
    if (!is_power_of_two(n) || n < 16) throw GridError("compute_g0 needs n a power of two (>= 16)");
    if (!(L_G > 0.0)) throw GridError("compute_g0 needs L_G > 0");
    if (cf.d == 0.0 && cf.c == 0.0) {
        throw HypothesisError("d = c = 0: the inverse of the constant-coefficient operator has a delta part (H1a)");
    }
    const HyperbolicityScan scan = hyperbolicity_scan(cf);
    if (!scan.hyperbolic) {
        std::ostringstream msg;
        msg << "characteristic function vanishes on the imaginary axis near eta = " << scan.eta_at_min
            << " (|Delta| = " << scan.min_abs << ")";
        throw HyperbolicityError(msg.str());
    }
    GreensTable gt;
    gt.source = cf;
    gt.L_G = L_G;
    gt.n = n;
    gt.h = 2.0 * L_G / n;
    const double deta = std::numbers::pi / L_G;
    const Reference ref = make_reference(cf);

    std::vector<cplx> spec(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double eta = signed_frequency(k, n, deta);
        const int s = k < n / 2 ? k : k - n;
        const cplx remainder = 1.0 / eval_delta(cf, cplx(0.0, eta)) - ref.symbol(eta);
        // (-1)^k accounts for the grid starting at ξ = -L_G.
        spec[static_cast<std::size_t>(k)] = (s % 2 == 0 ? 1.0 : -1.0) * remainder;
    }
    const std::vector<cplx> smooth = idft(spec);
    gt.xi.resize(static_cast<std::size_t>(n));
    gt.values.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double xi = j == n / 2 ? 0.0 : -L_G + j * gt.h;
        gt.xi[static_cast<std::size_t>(j)] = xi;
        gt.values[static_cast<std::size_t>(j)] =
            smooth[static_cast<std::size_t>(j)] * (deta / (2.0 * std::numbers::pi)) + ref.inverse(xi);
    }

    double peak = 0.0;
    for (const cplx& v : gt.values) peak = std::max(peak, std::abs(v));
    if (check_window) {
        const double edge = std::max(std::abs(gt.values.front()), std::abs(gt.values.back()));
        if (edge > 1e-6 * peak) {
            std::ostringstream msg;
            msg << "G0 has not decayed at the window edge (|G0(+-L_G)| = " << edge << "); increase L_G";
            throw WindowError(msg.str());
        }
    }
    const SideFit plus = fit_side(gt.xi, gt.values, L_G, peak, +1);
    const SideFit minus = fit_side(gt.xi, gt.values, L_G, peak, -1);
    gt.alpha_plus = plus.alpha;
    gt.alpha_minus = minus.alpha;
    gt.fit_residual_plus = plus.residual;
    gt.fit_residual_minus = minus.residual;
    gt.alpha = std::min(plus.alpha, minus.alpha);
    if (!std::isfinite(gt.alpha)) throw FitError("G0 vanishes on both sides; cannot fit a decay rate");
    gt.K1 = 0.0;
    for (int j = 0; j < n; ++j) {
        const double xi = gt.xi[static_cast<std::size_t>(j)];
        if (std::abs(xi) > 0.8 * L_G) continue;
        gt.K1 = std::max(gt.K1, std::abs(gt.values[static_cast<std::size_t>(j)]) * std::exp(gt.alpha * std::abs(xi)));
    }
    return gt;
}

}  // namespace

GreensTable compute_g0(const CharFn& cf, double L_G, int n) { return invert(cf, L_G, n, true); }

double suggest_window(const CharFn& cf) {
    // A coarse window that is too small aliases the slow tail back in and inflates α,
    // so widen it until the coarse table itself has decayed at its edges.
    double L = 20.0;
    GreensTable coarse = invert(cf, L, 1024, false);
    for (int k = 0; k < 4; ++k) {
        double peak = 0.0;
        for (cplx v : coarse.values) peak = std::max(peak, std::abs(v));
        const double edge = std::max(std::abs(coarse.values.front()), std::abs(coarse.values.back()));
        if (edge <= 1e-6 * peak) break;
        L *= 2.0;
        coarse = invert(cf, L, 1024, false);
    }
    return std::clamp(1.2 * std::log(1e8) / coarse.alpha, 10.0, 400.0);
}

double jump_at_zero(const GreensTable& gt) {
    auto g = [&](int k) { return gt.at_offset(k).real(); };
    const double h = gt.h;
    double right_lo = 0.0, right_hi = 0.0, left_lo = 0.0, left_hi = 0.0;
    if (gt.source.d == 0.0) {
        right_lo = 3.0 * g(1) - 3.0 * g(2) + g(3);
        right_hi = 4.0 * g(1) - 6.0 * g(2) + 4.0 * g(3) - g(4);
        left_lo = 3.0 * g(-1) - 3.0 * g(-2) + g(-3);
        left_hi = 4.0 * g(-1) - 6.0 * g(-2) + 4.0 * g(-3) - g(-4);
    } else {
        right_lo = (-11.0 * g(0) + 18.0 * g(1) - 9.0 * g(2) + 2.0 * g(3)) / (6.0 * h);
        right_hi = (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * h);
        left_lo = (11.0 * g(0) - 18.0 * g(-1) + 9.0 * g(-2) - 2.0 * g(-3)) / (6.0 * h);
        left_hi = (25.0 * g(0) - 48.0 * g(-1) + 36.0 * g(-2) - 16.0 * g(-3) + 3.0 * g(-4)) / (12.0 * h);
    }
    const double disagreement = std::max(std::abs(right_lo - right_hi), std::abs(left_lo - left_hi));
    if (disagreement > 1e-3) {
        std::ostringstream msg;
        msg << "grid too coarse to resolve the jump at 0 (extrapolations differ by " << disagreement << ")";
        throw ResolutionError(msg.str());
    }
    return right_hi - left_hi;
}

std::vector<double> solve_inhomogeneous(const GreensTable& gt, const std::vector<double>& h) {
    if (static_cast<int>(h.size()) != gt.n) throw GridError("right-hand side does not match the Green's table grid");
    if (gt.source.lambda.imag() != 0.0) throw SpecError("solve_inhomogeneous needs a real spectral shift");
    const int n = gt.n;
    const double deta = std::numbers::pi / gt.L_G;
    std::vector<cplx> x(h.begin(), h.end());
    std::vector<cplx> xf = dft(x);
    for (int k = 0; k < n; ++k) {
        xf[static_cast<std::size_t>(k)] /= eval_delta(gt.source, cplx(0.0, signed_frequency(k, n, deta)));
    }
    const std::vector<cplx> v = idft(xf);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)].real() / n;
    return out;
}

namespace {

struct PeriodicSymbols {
    std::vector<cplx> delta, transform;
};

PeriodicSymbols periodic_symbols(const CharFn& cf, int N, double h) {
    const double deta = 2.0 * std::numbers::pi / (N * h);
    PeriodicSymbols s;
    s.delta.resize(static_cast<std::size_t>(N));
    s.transform.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        const cplx z(0.0, signed_frequency(k, N, deta));
        s.delta[static_cast<std::size_t>(k)] = eval_delta(cf, z);
        s.transform[static_cast<std::size_t>(k)] = cf.kernel.transform(z);
    }
    return s;
}

// Real first column of the circulant with the given DFT symbol.
std::vector<double> circulant_column(const std::vector<cplx>& symbol) {
    const std::vector<cplx> col = idft(symbol);
    const double N = static_cast<double>(symbol.size());
    std::vector<double> out(symbol.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = col[i].real() / N;
    return out;
}

Eigen::MatrixXd circulant(const std::vector<double>& col) {
    const auto N = static_cast<Eigen::Index>(col.size());
    Eigen::MatrixXd C(N, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        for (Eigen::Index i = 0; i < N; ++i) C(i, j) = col[static_cast<std::size_t>((i - j + N) % N)];
    }
    return C;
}

std::vector<double> apply_symbol(const std::vector<cplx>& symbol, const std::vector<double>& v) {
    std::vector<cplx> x(v.begin(), v.end());
    std::vector<cplx> xf = dft(x);
    for (std::size_t k = 0; k < xf.size(); ++k) xf[k] *= symbol[k];
    const std::vector<cplx> y = idft(xf);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i].real() / static_cast<double>(v.size());
    return out;
}

void check_perturbation_grids(const Sampled& m, const Sampled& n) {
    if (m.grid.n != n.grid.n || m.grid.L != n.grid.L || static_cast<int>(m.values.size()) != m.grid.n ||
        static_cast<int>(n.values.size()) != n.grid.n) {
        throw GridError("perturbation coefficients must be sampled on one common grid");
    }
}

}  // namespace

std::vector<double> PerturbedKernel::apply(const std::vector<double>& h) const {
    if (static_cast<Eigen::Index>(h.size()) != values.cols()) throw GridError("vector does not match kernel grid");
    const Eigen::Map<const Eigen::VectorXd> hv(h.data(), static_cast<Eigen::Index>(h.size()));
    const Eigen::VectorXd out = values * hv * grid.h();
    return {out.data(), out.data() + out.size()};
}

PerturbedKernel perturbed_green(const CharFn& cf, const Sampled& m, const Sampled& n, double tol) {
    check_perturbation_grids(m, n);
    const int N = m.grid.n;
    if (N > 2049) throw SizeError("perturbed kernel grid capped at 2049 points");
    if (!(tol > 0.0)) throw SpecError("perturbed_green needs tol > 0");
    const double h = m.grid.h();

    PerturbedKernel pk;
    pk.grid = m.grid;
    const GreensTable g0 = compute_g0(cf, suggest_window(cf), 4096);
    pk.K1 = g0.K1;
    pk.alpha = g0.alpha;
    pk.threshold = g0.alpha / (4.0 * g0.K1);
    for (double v : m.values) pk.epsilon = std::max(pk.epsilon, std::abs(v));
    for (double v : n.values) pk.epsilon = std::max(pk.epsilon, std::abs(v));
    if (pk.epsilon >= pk.threshold) {
        std::ostringstream msg;
        msg << "perturbation too large for the Neumann series: epsilon = " << pk.epsilon
            << " >= alpha/(4 K1) = " << pk.threshold;
        throw PerturbationTooLarge(msg.str());
    }

    const PeriodicSymbols sym = periodic_symbols(cf, N, h);
    std::vector<cplx> inv(sym.delta.size()), conv_inv(sym.delta.size());
    for (std::size_t k = 0; k < inv.size(); ++k) {
        inv[k] = 1.0 / sym.delta[k];
        conv_inv[k] = sym.transform[k] / sym.delta[k];
    }
    // K₀ = L₀⁻¹ and J*K₀ on the periodic grid; the J-convolution is transformed once.
    const Eigen::MatrixXd K0 = circulant(circulant_column(inv));
    const Eigen::MatrixXd JK0 = circulant(circulant_column(conv_inv));
    const Eigen::Map<const Eigen::VectorXd> mv(m.values.data(), N), nv(n.values.data(), N);
    const Eigen::MatrixXd step = -(mv.asDiagonal() * K0 + nv.asDiagonal() * JK0);  // -QK₀

    pk.contraction = step.cwiseAbs().rowwise().sum().maxCoeff();
    if (!(pk.contraction < 1.0)) {
        std::ostringstream msg;
        msg << "discrete Neumann step is not a contraction (||QK0|| = " << pk.contraction << ")";
        throw PerturbationTooLarge(msg.str());
    }
    const double k0_norm = K0.cwiseAbs().rowwise().sum().maxCoeff();

    Eigen::MatrixXd term = K0;
    Eigen::MatrixXd sum = K0;
    pk.term_norms.push_back(term.cwiseAbs().maxCoeff() / h);
    double rho_power = pk.contraction;
    constexpr int kMaxDepth = 1000;
    while (k0_norm * rho_power / (1.0 - pk.contraction) >= tol) {
        if (pk.depth >= kMaxDepth) throw ConvergenceError("Neumann series did not reach the tail tolerance");
        term = term * step;
        sum += term;
        ++pk.depth;
        pk.term_norms.push_back(term.cwiseAbs().maxCoeff() / h);
        rho_power *= pk.contraction;
    }
    pk.tail_bound = k0_norm * rho_power / (1.0 - pk.contraction);
    pk.values = sum / h;
    return pk;
}

std::vector<double> apply_perturbed_operator(const CharFn& cf, const Sampled& m, const Sampled& n,
                                             const std::vector<double>& v) {
    check_perturbation_grids(m, n);
    if (static_cast<int>(v.size()) != m.grid.n) throw GridError("vector does not match perturbation grid");
    const PeriodicSymbols sym = periodic_symbols(cf, m.grid.n, m.grid.h());
    std::vector<double> out = apply_symbol(sym.delta, v);
    const std::vector<double> jv = apply_symbol(sym.transform, v);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += m.values[i] * v[i] + n.values[i] * jv[i];
    return out;
}

KernelDecay fit_kernel_decay(const PerturbedKernel& pk) {
    const int N = pk.grid.n;
    const int kmax = static_cast<int>(0.8 * (N / 2));
    std::vector<double> best(static_cast<std::size_t>(kmax + 1), 0.0);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            const int k = std::abs(i - j);
            if (k <= kmax) best[static_cast<std::size_t>(k)] = std::max(best[static_cast<std::size_t>(k)], std::abs(pk.values(i, j)));
        }
    }
    const double peak = *std::max_element(best.begin(), best.end());
    int last = 0;
    for (int k = 0; k <= kmax; ++k) {
        if (best[static_cast<std::size_t>(k)] > kFitFloor * peak) last = k;
    }
    if (last < 8) throw FitError("perturbed kernel decays to roundoff within a few grid points");
    std::vector<double> r, mag;
    for (int k = last / 2; k <= last; ++k) {
        r.push_back(k * pk.grid.h());
        mag.push_back(best[static_cast<std::size_t>(k)]);
    }
    const EnvelopeFit env = fit_envelope(r, mag, r.front(), r.back(), kFitFloor * peak);
    return {env.alpha, env.K, env.r2};
}

}  // namespace nlwave
