#pragma once

#include "dmdcp/types.hpp"

namespace dmdcp {

/// Relative singular-value cutoff used by reduced_svd, pinv and rank
/// queries unless a caller overrides it.
inline constexpr double kDefaultRankTol = 1e-10;

/// Eigenvector-matrix condition number above which a matrix is treated
/// as having no full set of eigenvectors.
inline constexpr double kEigCondLimit = 1e12;

/// Reduced SVD m = Q * diag(sigma) * V^H, truncated at the relative rank
/// tolerance: singular values <= tol_rank * sigma_0 are dropped together
/// with their vectors. sigma is nonincreasing.
struct SvdResult {
    Matrix Q;               // m.rows x r, orthonormal columns
    Eigen::VectorXd sigma;  // r, nonincreasing, positive after truncation
    Matrix V;               // m.cols x r, orthonormal columns
    Index rank() const { return sigma.size(); }
};

SvdResult reduced_svd(const Matrix& m, double tol_rank = kDefaultRankTol);

/// Eigendecomposition m * W = W * diag(values). Throws NumericalError
/// ("no full eigenvector set") when the eigenvector matrix condition
/// number exceeds cond_limit.
struct EigResult {
    Vector values;
    Matrix vectors;           // unit-norm columns
    double vector_condition;  // sigma_max / sigma_min of the eigenvector matrix
};

EigResult eig(const Matrix& m, double cond_limit = kEigCondLimit);

/// Moore-Penrose pseudoinverse via reduced_svd with the same rank
/// tolerance.
Matrix pinv(const Matrix& m, double tol_rank = kDefaultRankTol);

/// Numerical rank: retained singular values at the given tolerance.
Index matrix_rank(const Matrix& m, double tol_rank = kDefaultRankTol);

}  // namespace dmdcp
