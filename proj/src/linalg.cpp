#include "dmdcp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace dmdcp {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

SvdResult reduced_svd(const Matrix& m, double tol_rank) {
    if (m.rows() < 1 || m.cols() < 1)
        throw DataError("reduced_svd: empty matrix");
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (!all_finite(svd.matrixU()) || !all_finite(svd.matrixV()) ||
        !svd.singularValues().allFinite())
        throw NumericalError("reduced_svd: iteration produced non-finite values");

    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? tol_rank * sv(0) : 0.0;
    Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;

    SvdResult out;
    out.Q = svd.matrixU().leftCols(r);
    out.sigma = sv.head(r);
    out.V = svd.matrixV().leftCols(r);
    return out;
}

EigResult eig(const Matrix& m, double cond_limit) {
    if (m.rows() != m.cols())
        throw DataError("eig: matrix is not square (" + std::to_string(m.rows()) +
                        " x " + std::to_string(m.cols()) + ")");
    Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eig: eigenvalue iteration failed to converge");

    EigResult out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();

    Eigen::JacobiSVD<Matrix> svd(out.vectors);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    out.vector_condition =
        smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(out.vector_condition <= cond_limit))
        throw NumericalError("eig: no full eigenvector set (eigenvector matrix "
                             "condition number " +
                             std::to_string(out.vector_condition) + " exceeds limit)");
    return out;
}

Matrix pinv(const Matrix& m, double tol_rank) {
    const SvdResult svd = reduced_svd(m, tol_rank);
    if (svd.rank() == 0) return Matrix::Zero(m.cols(), m.rows());
    return svd.V * svd.sigma.cwiseInverse().asDiagonal() * svd.Q.adjoint();
}

Index matrix_rank(const Matrix& m, double tol_rank) {
    if (m.size() == 0) return 0;
    return reduced_svd(m, tol_rank).rank();
}

}  // namespace dmdcp
