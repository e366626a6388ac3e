#include "dmdcp/dmd.hpp"

#include "dmdcp/tensor_ops.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <string>

namespace dmdcp {

ConsistencyReport linear_consistency_check(const SnapshotPair& p, double tol) {
    if (p.X.rows() != p.Y.rows() || p.X.cols() != p.Y.cols())
        throw DataError("linear_consistency_check: X and Y shapes differ");

    // Null space of X from the full right singular basis.
    Eigen::JacobiSVD<Matrix> svd(p.X, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? kDefaultRankTol * sv(0) : 0.0;
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;

    ConsistencyReport rep;
    rep.null_dim = p.X.cols() - rank;
    const double norm_y = p.Y.norm();
    for (Index k = rank; k < p.X.cols(); ++k) {
        const double violation =
            norm_y > 0.0 ? (p.Y * svd.matrixV().col(k)).norm() / norm_y : 0.0;
        rep.worst_violation = std::max(rep.worst_violation, violation);
    }
    rep.consistent = rep.worst_violation <= tol;
    return rep;
}

DmdResult exact_dmd(const SnapshotPair& p, double tol_rank) {
    if (p.X.rows() != p.Y.rows() || p.X.cols() != p.Y.cols())
        throw DataError("exact_dmd: X and Y shapes differ");
    if (p.X.norm() == 0.0)
        throw DataError("exact_dmd: X is identically zero");

    const SvdResult svd = reduced_svd(p.X, tol_rank);
    const Index r = svd.rank();

    const Matrix y_proj = p.Y * svd.V * svd.sigma.cwiseInverse().asDiagonal();  // n x r
    const Matrix a_tilde = svd.Q.adjoint() * y_proj;                            // r x r
    const EigResult es = eig(a_tilde);

    DmdResult out;
    out.eigenvalues = es.values;
    out.rank_used = r;
    out.modes.resize(p.X.rows(), r);
    for (Index k = 0; k < r; ++k) {
        if (std::abs(es.values(k)) >= kZeroEigModulus)
            out.modes.col(k) = y_proj * es.vectors.col(k) / es.values(k);
        else
            out.modes.col(k) = svd.Q * es.vectors.col(k);  // projected mode
    }
    out.diagnostics.eigvec_condition = es.vector_condition;
    return out;
}

AmplitudeFit koopman_amplitudes(const Matrix& modes, const Vector& x0) {
    if (modes.rows() != x0.size())
        throw DataError("koopman_amplitudes: modes have " + std::to_string(modes.rows()) +
                        " rows but x0 has length " + std::to_string(x0.size()));
    AmplitudeFit fit;
    fit.phi = pinv(modes) * x0;
    const double norm_x0 = x0.norm();
    fit.residual = norm_x0 > 0.0 ? (modes * fit.phi - x0).norm() / norm_x0 : 0.0;
    return fit;
}

Matrix vandermonde_matrix(const Vector& lambdas, Index m) {
    if (m < 1) throw DataError("vandermonde_matrix: m must be >= 1");
    Matrix out(m, lambdas.size());
    for (Index r = 0; r < lambdas.size(); ++r) {
        out(0, r) = lambdas(r);
        for (Index k = 1; k < m; ++k) out(k, r) = lambdas(r) * out(k - 1, r);
    }
    return out;
}

namespace {

// Greedy nearest-eigenvalue assignment of the slice modes onto the
// reference modes; ties broken by mode-vector cosine similarity.
std::vector<Index> match_to_reference(const Vector& ref_vals, const Matrix& ref_modes,
                                      const DmdResult& slice) {
    const Index r = ref_vals.size();
    std::vector<Index> assign(static_cast<std::size_t>(r), -1);
    std::vector<bool> taken(static_cast<std::size_t>(r), false);
    for (Index i = 0; i < r; ++i) {
        Index best = -1;
        double best_dist = 0.0, best_cos = -1.0;
        for (Index j = 0; j < r; ++j) {
            if (taken[static_cast<std::size_t>(j)]) continue;
            const double dist = std::abs(ref_vals(i) - slice.eigenvalues(j));
            const double denom = ref_modes.col(i).norm() * slice.modes.col(j).norm();
            const double cosine =
                denom > 0.0
                    ? std::abs((ref_modes.col(i).adjoint() * slice.modes.col(j)).value()) / denom
                    : 0.0;
            if (best < 0 || dist < best_dist ||
                (dist == best_dist && cosine > best_cos)) {
                best = j;
                best_dist = dist;
                best_cos = cosine;
            }
        }
        assign[static_cast<std::size_t>(i)] = best;
        taken[static_cast<std::size_t>(best)] = true;
    }
    return assign;
}

}  // namespace

DmdResult dmd_tensor(const Tensor3& X, const Tensor3& Y, DmdStrategy strategy,
                     double tol_rank) {
    if (X.dims() != Y.dims())
        throw DataError("dmd_tensor: X dims (" + std::to_string(X.dim(0)) + ", " +
                        std::to_string(X.dim(1)) + ", " + std::to_string(X.dim(2)) +
                        ") differ from Y dims (" + std::to_string(Y.dim(0)) + ", " +
                        std::to_string(Y.dim(1)) + ", " + std::to_string(Y.dim(2)) + ")");
    const Index n = X.dim(0), m = X.dim(1), q = X.dim(2);

    DmdDiagnostics diag;
    diag.slice_consistent.resize(static_cast<std::size_t>(q));
    diag.slice_violation.resize(static_cast<std::size_t>(q));
    for (Index j = 0; j < q; ++j) {
        const ConsistencyReport rep =
            linear_consistency_check({X.slice(j), Y.slice(j)});
        diag.slice_consistent[static_cast<std::size_t>(j)] = rep.consistent;
        diag.slice_violation[static_cast<std::size_t>(j)] = rep.worst_violation;
    }

    DmdResult out;
    if (strategy == DmdStrategy::Stacked) {
        Matrix xs(n, m * q), ys(n, m * q);
        for (Index j = 0; j < q; ++j) {
            xs.middleCols(j * m, m) = X.slice(j);
            ys.middleCols(j * m, m) = Y.slice(j);
        }
        out = exact_dmd({xs, ys}, tol_rank);
    } else {
        std::vector<DmdResult> per_slice;
        per_slice.reserve(static_cast<std::size_t>(q));
        for (Index j = 0; j < q; ++j)
            per_slice.push_back(exact_dmd({X.slice(j), Y.slice(j)}, tol_rank));

        bool ranks_agree = true;
        for (const auto& s : per_slice)
            ranks_agree = ranks_agree && s.rank_used == per_slice.front().rank_used;
        if (!ranks_agree) {
            std::string ranks;
            for (const auto& s : per_slice)
                ranks += (ranks.empty() ? "" : ", ") + std::to_string(s.rank_used);
            throw NumericalError("dmd_tensor: per-slice rank disagreement [" + ranks + "]");
        }

        const Index r = per_slice.front().rank_used;
        Matrix mean_modes = Matrix::Zero(n, r);
        Vector mean_vals = Vector::Zero(r);
        double worst_cond = 0.0;
        for (const auto& s : per_slice) {
            const auto assign = match_to_reference(per_slice.front().eigenvalues,
                                                   per_slice.front().modes, s);
            for (Index i = 0; i < r; ++i) {
                const Index j = assign[static_cast<std::size_t>(i)];
                Vector mode = s.modes.col(j);
                // Rotate away the arbitrary eigenvector phase before
                // averaging, otherwise slices can cancel each other.
                const Cx overlap =
                    (per_slice.front().modes.col(i).adjoint() * mode).value();
                if (std::abs(overlap) > 0.0) mode *= std::conj(overlap) / std::abs(overlap);
                mean_modes.col(i) += mode;
                mean_vals(i) += s.eigenvalues(j);
            }
            worst_cond = std::max(worst_cond, s.diagnostics.eigvec_condition);
        }
        out.modes = mean_modes / static_cast<double>(q);
        out.eigenvalues = mean_vals / static_cast<double>(q);
        out.rank_used = r;
        out.diagnostics.eigvec_condition = worst_cond;
    }

    out.strategy = strategy;
    diag.eigvec_condition = out.diagnostics.eigvec_condition;
    out.diagnostics = std::move(diag);

    out.amplitudes.resize(q, out.rank_used);
    for (Index j = 0; j < q; ++j) {
        const AmplitudeFit fit = koopman_amplitudes(out.modes, X.slice(j).col(0));
        out.amplitudes.row(j) = fit.phi.transpose();
        out.diagnostics.max_amplitude_residual =
            std::max(out.diagnostics.max_amplitude_residual, fit.residual);
    }
    return out;
}

CPFactors dmd_to_cp(const DmdResult& res, Index m) {
    if (res.amplitudes.size() == 0)
        throw DataError("dmd_to_cp: amplitudes have not been computed");
    return {res.modes, vandermonde_matrix(res.eigenvalues, m), res.amplitudes};
}

}  // namespace dmdcp
