#include "nlwave/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <sstream>

#include "nlwave/errors.hpp"

namespace nlwave {

EigenDecomposition eigen_decompose(const Eigen::MatrixXd& A, bool want_vectors) {
    if (A.rows() != A.cols()) throw EigenError("eigendecomposition needs a square matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, want_vectors);
    if (es.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigenvalue iteration did not converge (n = " << A.rows() << ", ||A||_inf = "
            << A.cwiseAbs().rowwise().sum().maxCoeff() << ")";
        throw EigenError(msg.str());
    }
    EigenDecomposition out;
    out.values = es.eigenvalues();
    if (want_vectors) {
        out.vectors = es.eigenvectors();
        for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) out.vectors.col(j).normalize();
    }
    return out;
}

Svd svd(const Eigen::MatrixXd& A) {
    Eigen::BDCSVD<Eigen::MatrixXd> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success) throw EigenError("SVD did not converge");
    return {dec.singularValues(), dec.matrixU(), dec.matrixV()};
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& A) {
    Eigen::BDCSVD<Eigen::MatrixXcd> dec(A);
    if (dec.info() != Eigen::Success) throw EigenError("SVD did not converge");
    return dec.singularValues();
}

Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != A.cols() || b.size() != A.rows()) throw EigenError("solve_dense: dimension mismatch");
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd x = lu.solve(b);
    if (!x.allFinite()) throw EigenError("dense solve failed: matrix is singular");
    return x;
}

}  // namespace nlwave
