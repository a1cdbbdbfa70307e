#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "nlwave/charfn.hpp"
#include "nlwave/dense.hpp"
#include "nlwave/model.hpp"
#include "nlwave/wave.hpp"

namespace nlwave {

/// Largest interior dimension accepted for dense assembly.
inline constexpr int kDenseCap = 4096;

/// Π_L v = d v'' - c v' + f_r(U, J*U) v + f_s(U, J*U) J*v on the interior nodes of the
/// wave grid, with v = 0 at ±L and beyond. The adjoint Π_L* v = d v'' + c v' + f_r v +
/// J*(f_s v) is assembled so that its matrix is the transpose of Π_L's.
/// The drift uses the wave solver's stencil: centered when d > 0, upwind when d = 0.
struct LinearizedOperator {
    Eigen::MatrixXd matrix;
    std::vector<double> xi;       // interior nodes
    std::vector<double> u_prime;  // discrete U' on xi (empty for frozen operators)
    double h = 0.0;
    double L = 0.0;
    double c = 0.0;
    double d = 0.0;
    bool adjoint = false;
    bool upwind = false;
    std::string model;

    /// Max absolute row sum.
    double norm() const;
};

LinearizedOperator assemble_linearization(const ModelProblem& problem, const WaveSolution& wave, bool adjoint);

/// Same operator for an arbitrary profile U on `grid`, continued by `left` and `right`
/// in J*U. U ≡ 1 with left = right = 1 gives the frozen operator at +∞.
LinearizedOperator assemble_linearization(const ModelProblem& problem, const Grid& grid, const std::vector<double>& U,
                                          double c, bool adjoint, double left = -1.0, double right = 1.0);

struct EigenEntry {
    cplx value;
    double boundary_mass = 0.0;  // fraction of |v|² on |ξ| > 0.8L
    bool delocalized = false;
    bool extended = false;
};

struct ZeroModeDiagnostics {
    std::size_t index = 0;  // into SpectrumReport::eigenvalues
    cplx lambda0;
    double cosine = 0.0;               // |<v, U'>| / (|v| |U'|)
    double simplicity_residual = 0.0;  // |Π_L x - U'| / |U'| for the truncated least squares
    bool truncated = false;            // smallest singular value dropped
    std::vector<double> mode;          // real part, sign matched to U', unit 2-norm
};

struct AdjointZeroMode {
    double eigenvalue = 0.0;          // Rayleigh quotient of Ψ under Π_L*
    std::vector<double> psi;          // normalized so that h Σ Ψ U' = 1
    double positive_fraction = 0.0;   // Σ_{Ψ>0} |Ψ| / Σ |Ψ|
    double residual = 0.0;            // |Π_L* Ψ - μΨ| / |Ψ|
};

/// Delocalization proxy: boundary_mass above this fraction.
inline constexpr double kDelocalizedMass = 0.5;
/// Looser proxy reported alongside: boundary_mass above half the share a uniformly
/// spread vector would place on |ξ| > 0.8L (catches standing waves across the domain).
inline constexpr double kExtendedShare = 0.5;

struct SpectrumReport {
    std::vector<EigenEntry> eigenvalues;  // real part descending
    Eigen::MatrixXcd vectors;             // columns match `eigenvalues`, unit 2-norm
    std::vector<double> xi;
    double h = 0.0;
    double L = 0.0;
    double op_norm = 0.0;
    double trace = 0.0;
    double trace_relative_error = 0.0;  // |trace - Σλ| / max(|trace|, 1)
    double conjugate_pair_error = 0.0;  // max distance from each λ̄ to the spectrum, relative to op_norm
    ZeroModeDiagnostics zero;
    AdjointZeroMode adjoint;
    RegionReport regions;
    /// max Re λ over eigenvalues other than λ₀ (-inf for a 1x1 operator).
    double spectral_bound_excluding_zero = 0.0;
    double leftmost_real = 0.0;
};

/// Full eigendecomposition of `op` plus the zero-mode, simplicity and adjoint diagnostics.
/// EigenError on solver failure; SpecError if the operators live on different grids or
/// `op` carries no U'.
SpectrumReport eigen_report(const LinearizedOperator& op, const LinearizedOperator& adjoint_op,
                            const RegionReport& regions);

struct ClassifiedEigenvalue {
    cplx value;
    bool delocalized = false;
    bool in_strip = false;         // ι_ - margin <= Re λ <= ι̅ + margin
    bool outside_xi = false;       // λ ∉ Ξ (theorem form), with the margin on Re λ
    bool outside_xi_appendix = false;
    bool point_spectrum = false;   // localized and outside the essential-spectrum region
    std::optional<double> decay_rate;  // μ̂ in |ψ| ≤ C e^{-μ|ξ|}, point spectrum only
};

struct Classification {
    std::vector<ClassifiedEigenvalue> entries;
    double margin = 0.0;  // 10 h
    bool diffusive = false;  // d > 0: the essential region is C∖Ξ, not the strip
    int delocalized_count = 0;
    int delocalized_outside_strip = 0;
    int delocalized_inside_xi = 0;  // theorem form of Ξ
    int point_count = 0;
    int extended_count = 0;
    int extended_outside_strip = 0;
    int extended_inside_xi = 0;
    std::optional<double> zero_mode_decay;
};

/// Flags each eigenvalue against the strip (the d = 0 statement) and against C∖Ξ (the
/// d > 0 statement); localized eigenvalues outside the relevant region get a decay fit.
Classification classify_vs_regions(const SpectrumReport& report, const RegionReport& regions, double d);

/// SVD of Π_L with the smallest singular value dropped when it is below
/// 1e-4·‖op‖; used for every least-squares solve against Π_L.
class RangeSolver {
public:
    explicit RangeSolver(const LinearizedOperator& op);
    /// |Π_L x - rhs| / |rhs| for the truncated least-squares x.
    double relative_residual(const std::vector<double>& rhs) const;
    bool truncated() const { return truncated_; }
    double smallest_singular_value() const { return smallest_; }

private:
    Svd svd_;
    Eigen::Index rank_ = 0;
    bool truncated_ = false;
    double smallest_ = 0.0;
};

struct RangeMembership {
    double inner_product = 0.0;  // h Σ Ψ_i rhs_i
    double residual = 0.0;
};

RangeMembership range_membership(const std::vector<double>& psi, const RangeSolver& solver,
                                 const std::vector<double>& rhs, double h);
RangeMembership range_membership(const std::vector<double>& psi, const LinearizedOperator& op,
                                 const std::vector<double>& rhs);

struct InjectivityMargin {
    double eta = 0.0;
    double sigma_min = 0.0;  // smallest singular value of Π_L - iη
    double floor = 0.0;      // h²
    bool pass = false;
};

/// Spot check that Π_L - iη is injective: σ_min above the h² truncation floor.
std::vector<InjectivityMargin> injectivity_margins(const LinearizedOperator& op,
                                                   const std::vector<double>& etas = {0.5, 1.0, 2.0});

/// CSV rows "re,im,boundary_mass,delocalized,decay_rate".
void export_eigenvalues_csv(const SpectrumReport& report, const Classification& classes, const std::string& path);

}  // namespace nlwave
