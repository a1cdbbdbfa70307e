#include "nlwave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "nlwave/asymptotics.hpp"
#include "nlwave/errors.hpp"
#include "nlwave/fit.hpp"
#include "nlwave/grid.hpp"

namespace nlwave {

namespace {

constexpr double kOuterBand = 0.8;          // |ξ| > 0.8L is the boundary band
constexpr double kTruncationFactor = 1e-4;  // relative to ‖op‖
constexpr double kDecayCore = 5.0;
constexpr double kDecayFloor = 1e-10;       // relative to max |ψ|

double boundary_share(const std::vector<double>& xi, double L) {
    const auto count = std::count_if(xi.begin(), xi.end(), [&](double x) { return std::abs(x) > kOuterBand * L; });
    return static_cast<double>(count) / static_cast<double>(xi.size());
}

std::optional<double> decay_fit(const std::vector<double>& xi, const Eigen::VectorXcd& v, double L) {
    std::vector<double> mag(xi.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        mag[i] = std::abs(v(static_cast<Eigen::Index>(i)));
        peak = std::max(peak, mag[i]);
    }
    try {
        const EnvelopeFit env = fit_envelope(xi, mag, kDecayCore, kOuterBand * L, kDecayFloor * peak);
        return env.alpha;
    } catch (const FitError&) {
        return std::nullopt;
    }
}

}  // namespace

double LinearizedOperator::norm() const { return matrix.cwiseAbs().rowwise().sum().maxCoeff(); }

LinearizedOperator assemble_linearization(const ModelProblem& problem, const Grid& grid, const std::vector<double>& U,
                                          double c, bool adjoint, double left, double right) {
    const int n = grid.n, m = n - 2;
    if (static_cast<int>(U.size()) != n) throw SpecError("profile length does not match the grid");
    if (m > kDenseCap) {
        std::ostringstream msg;
        msg << "dense operator of size " << m << " exceeds the cap " << kDenseCap;
        throw SizeError(msg.str());
    }
    const double h = grid.h(), d = problem.d();
    const std::vector<double> w = problem.kernel().weights(h);
    const int K = static_cast<int>(w.size() - 1) / 2;
    const std::vector<double> JU = convolve_extended(U, w, left, right);

    std::vector<double> fr(static_cast<std::size_t>(m)), fs(fr.size());
    for (int i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i + 1);
        fr[static_cast<std::size_t>(i)] = problem.f().f_r(U[k], JU[k]);
        fs[static_cast<std::size_t>(i)] = problem.f().f_s(U[k], JU[k]);
    }

    // Π_L as rows, then transposed for the adjoint: D² is symmetric, the adjoint of
    // -c·D is +c·(-Dᵀ), and diag(f_s)·W becomes W·diag(f_s).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    auto add = [&](int row, int col, double v) {
        if (col >= 0 && col < m) A(row, col) += v;
    };
    const bool upwind = !(d > 0.0);
    for (int i = 0; i < m; ++i) {
        add(i, i - 1, d / (h * h));
        add(i, i, -2.0 * d / (h * h) + fr[static_cast<std::size_t>(i)]);
        add(i, i + 1, d / (h * h));
        if (!upwind) {
            add(i, i + 1, -c / (2.0 * h));
            add(i, i - 1, c / (2.0 * h));
        } else if (c >= 0.0) {
            add(i, i, -c / h);
            add(i, i - 1, c / h);
        } else {
            add(i, i + 1, -c / h);
            add(i, i, c / h);
        }
        const int lo = std::max(0, i - K), hi = std::min(m - 1, i + K);
        for (int j = lo; j <= hi; ++j) A(i, j) += fs[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i - j + K)];
    }

    LinearizedOperator op;
    op.matrix = adjoint ? Eigen::MatrixXd(A.transpose()) : A;
    op.xi.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) op.xi[static_cast<std::size_t>(i)] = grid.x(i + 1);
    op.h = h;
    op.L = grid.L;
    op.c = c;
    op.d = d;
    op.adjoint = adjoint;
    op.upwind = upwind;
    op.model = problem.name();
    return op;
}

LinearizedOperator assemble_linearization(const ModelProblem& problem, const WaveSolution& wave, bool adjoint) {
    LinearizedOperator op = assemble_linearization(problem, wave.grid, wave.U, wave.c, adjoint);
    const std::vector<double> V = wave_derivative(wave);
    op.u_prime.assign(V.begin() + 1, V.end() - 1);
    return op;
}

RangeSolver::RangeSolver(const LinearizedOperator& op) : svd_(svd(op.matrix)) {
    const Eigen::Index m = svd_.singular.size();
    smallest_ = m > 0 ? svd_.singular(m - 1) : 0.0;
    truncated_ = m > 0 && smallest_ < kTruncationFactor * op.norm();
    rank_ = truncated_ ? m - 1 : m;
}

double RangeSolver::relative_residual(const std::vector<double>& rhs) const {
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    if (b.size() != svd_.U.rows()) throw SpecError("right-hand side does not match the operator size");
    const double nb = b.norm();
    if (nb == 0.0) return 0.0;
    // Residual of the truncated least squares = component of b outside span(U[:, :rank]).
    const Eigen::VectorXd coeff = svd_.U.leftCols(rank_).transpose() * b;
    return (b - svd_.U.leftCols(rank_) * coeff).norm() / nb;
}

RangeMembership range_membership(const std::vector<double>& psi, const RangeSolver& solver,
                                 const std::vector<double>& rhs, double h) {
    if (psi.size() != rhs.size()) throw SpecError("Ψ and the right-hand side differ in length");
    RangeMembership out;
    out.inner_product = h * std::inner_product(psi.begin(), psi.end(), rhs.begin(), 0.0);
    out.residual = solver.relative_residual(rhs);
    return out;
}

RangeMembership range_membership(const std::vector<double>& psi, const LinearizedOperator& op,
                                 const std::vector<double>& rhs) {
    return range_membership(psi, RangeSolver(op), rhs, op.h);
}

SpectrumReport eigen_report(const LinearizedOperator& op, const LinearizedOperator& adjoint_op,
                            const RegionReport& regions) {
    if (op.adjoint || !adjoint_op.adjoint) throw SpecError("eigen_report expects (Π_L, Π_L*) in that order");
    if (op.matrix.rows() != adjoint_op.matrix.rows() || op.h != adjoint_op.h)
        throw SpecError("Π_L and Π_L* are assembled on different grids");
    if (op.u_prime.size() != op.xi.size()) throw SpecError("operator carries no discrete U'");
    const Eigen::Index m = op.matrix.rows();

    SpectrumReport rep;
    rep.xi = op.xi;
    rep.h = op.h;
    rep.L = op.L;
    rep.regions = regions;
    rep.op_norm = op.norm();

    const EigenDecomposition eig = eigen_decompose(op.matrix, true);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return eig.values(a).real() > eig.values(b).real(); });

    const double share = boundary_share(op.xi, op.L);
    rep.vectors.resize(m, m);
    cplx sum = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        rep.vectors.col(k) = eig.vectors.col(src);
        EigenEntry e;
        e.value = eig.values(src);
        double outer = 0.0, total = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double p = std::norm(eig.vectors(i, src));
            total += p;
            if (std::abs(op.xi[static_cast<std::size_t>(i)]) > kOuterBand * op.L) outer += p;
        }
        e.boundary_mass = total > 0.0 ? outer / total : 0.0;
        e.delocalized = e.boundary_mass > kDelocalizedMass;
        e.extended = e.boundary_mass > kExtendedShare * share;
        rep.eigenvalues.push_back(e);
        sum += e.value;
    }
    rep.trace = op.matrix.trace();
    rep.trace_relative_error = std::abs(rep.trace - sum.real()) / std::max(std::abs(rep.trace), 1.0);
    rep.leftmost_real = rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.back().value.real();
    for (const EigenEntry& e : rep.eigenvalues) {
        double best = std::numeric_limits<double>::infinity();
        for (const EigenEntry& f : rep.eigenvalues) best = std::min(best, std::abs(std::conj(e.value) - f.value));
        rep.conjugate_pair_error = std::max(rep.conjugate_pair_error, best / rep.op_norm);
    }

    // Zero mode: eigenvalue of smallest modulus, compared with U'.
    std::size_t z = 0;
    for (std::size_t k = 1; k < rep.eigenvalues.size(); ++k)
        if (std::abs(rep.eigenvalues[k].value) < std::abs(rep.eigenvalues[z].value)) z = k;
    const Eigen::Map<const Eigen::VectorXd> up(op.u_prime.data(), m);
    const Eigen::VectorXcd v = rep.vectors.col(static_cast<Eigen::Index>(z));
    const cplx overlap = v.dot(up.cast<cplx>());  // v^H U'
    rep.zero.index = z;
    rep.zero.lambda0 = rep.eigenvalues[z].value;
    rep.zero.cosine = std::abs(overlap) / (v.norm() * up.norm());
    const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
    Eigen::VectorXd mode = (v * phase).real();
    mode.normalize();
    rep.zero.mode.assign(mode.data(), mode.data() + m);
    rep.spectral_bound_excluding_zero = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rep.eigenvalues.size(); ++k)
        if (k != z) rep.spectral_bound_excluding_zero = std::max(rep.spectral_bound_excluding_zero, rep.eigenvalues[k].value.real());

    const RangeSolver solver(op);
    rep.zero.truncated = solver.truncated();
    rep.zero.simplicity_residual = solver.relative_residual(op.u_prime);

    // Ψ by inverse iteration on Π_L* at the computed zero eigenvalue, started from U'.
    const Eigen::MatrixXd& B = adjoint_op.matrix;
    double shift = rep.zero.lambda0.real();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B - shift * Eigen::MatrixXd::Identity(m, m));
    Eigen::VectorXd psi = up.normalized();
    for (int it = 0; it < 4; ++it) {
        Eigen::VectorXd next = lu.solve(psi);
        if (!next.allFinite()) {
            shift += 1e-13 * rep.op_norm;
            lu.compute(B - shift * Eigen::MatrixXd::Identity(m, m));
            next = lu.solve(psi);
            if (!next.allFinite()) throw EigenError("inverse iteration for the adjoint zero mode failed");
        }
        psi = next.normalized();
    }
    const double mu = psi.dot(B * psi);
    rep.adjoint.eigenvalue = mu;
    rep.adjoint.residual = (B * psi - mu * psi).norm();
    const double pairing = op.h * psi.dot(up);
    if (pairing == 0.0) throw EigenError("adjoint zero mode is orthogonal to U'");
    psi /= pairing;
    rep.adjoint.psi.assign(psi.data(), psi.data() + m);
    double pos = 0.0, tot = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        tot += std::abs(psi(i));
        if (psi(i) > 0.0) pos += psi(i);
    }
    rep.adjoint.positive_fraction = tot > 0.0 ? pos / tot : 0.0;
    return rep;
}

Classification classify_vs_regions(const SpectrumReport& report, const RegionReport& regions, double d) {
    Classification out;
    out.margin = 10.0 * report.h;
    out.diffusive = d > 0.0;
    for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) {
        const EigenEntry& e = report.eigenvalues[k];
        ClassifiedEigenvalue ce;
        ce.value = e.value;
        ce.delocalized = e.delocalized;
        const double re = e.value.real();
        ce.in_strip = re >= regions.iota_underbar - out.margin && re <= regions.iota_bar + out.margin;
        const cplx shifted = e.value - out.margin;
        ce.outside_xi = !regions.in_xi_theorem(shifted);
        ce.outside_xi_appendix = !regions.in_xi_appendix(shifted);
        const bool in_essential_region = out.diffusive ? ce.outside_xi : ce.in_strip;
        ce.point_spectrum = !e.delocalized && !in_essential_region;
        if (ce.point_spectrum)
            ce.decay_rate = decay_fit(report.xi, report.vectors.col(static_cast<Eigen::Index>(k)), report.L);
        if (e.delocalized) {
            ++out.delocalized_count;
            if (!ce.in_strip) ++out.delocalized_outside_strip;
            if (!ce.outside_xi) ++out.delocalized_inside_xi;
        }
        if (e.extended) {
            ++out.extended_count;
            if (!ce.in_strip) ++out.extended_outside_strip;
            if (!ce.outside_xi) ++out.extended_inside_xi;
        }
        if (ce.point_spectrum) ++out.point_count;
        out.entries.push_back(ce);
    }
    out.zero_mode_decay =
        decay_fit(report.xi, report.vectors.col(static_cast<Eigen::Index>(report.zero.index)), report.L);
    return out;
}

std::vector<InjectivityMargin> injectivity_margins(const LinearizedOperator& op, const std::vector<double>& etas) {
    std::vector<InjectivityMargin> out;
    const Eigen::Index m = op.matrix.rows();
    for (double eta : etas) {
        Eigen::MatrixXcd shifted = op.matrix.cast<cplx>();
        shifted.diagonal().array() -= cplx(0.0, eta);
        const Eigen::VectorXd s = singular_values(shifted);
        InjectivityMargin r;
        r.eta = eta;
        r.sigma_min = m > 0 ? s(m - 1) : 0.0;
        r.floor = op.h * op.h;
        r.pass = r.sigma_min > r.floor;
        out.push_back(r);
    }
    return out;
}

void export_eigenvalues_csv(const SpectrumReport& report, const Classification& classes, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out.precision(17);
    out << "re,im,boundary_mass,delocalized,decay_rate\n";
    for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) {
        const EigenEntry& e = report.eigenvalues[k];
        out << e.value.real() << ',' << e.value.imag() << ',' << e.boundary_mass << ',' << (e.delocalized ? 1 : 0)
            << ',';
        if (k < classes.entries.size() && classes.entries[k].decay_rate) out << *classes.entries[k].decay_rate;
        out << '\n';
    }
}

}  // namespace nlwave
