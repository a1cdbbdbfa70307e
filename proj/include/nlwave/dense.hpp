#pragma once

#include <Eigen/Dense>

namespace nlwave {

/// Dense decompositions used by the wave and spectrum modules; inputs are copied.
struct EigenDecomposition {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // right eigenvectors, unit 2-norm columns
};

/// Real nonsymmetric eigenproblem. Throws EigenError if the QR iteration fails.
EigenDecomposition eigen_decompose(const Eigen::MatrixXd& A, bool want_vectors = true);

struct Svd {
    Eigen::VectorXd singular;  // descending
    Eigen::MatrixXd U;
    Eigen::MatrixXd V;
};

/// Full SVD (divide and conquer) of a square or rectangular matrix.
Svd svd(const Eigen::MatrixXd& A);

/// Singular values only of a complex matrix, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& A);

/// Partial-pivoting LU solve. Throws EigenError on a singular matrix.
Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace nlwave
