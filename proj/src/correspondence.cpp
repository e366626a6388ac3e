#include "dmdcp/correspondence.hpp"

#include "dmdcp/cp.hpp"
#include "dmdcp/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dmdcp {

namespace {

// Product over the three factors of |<unit columns>|, so one orthogonal
// factor vetoes the match.
Eigen::MatrixXd similarity_matrix(const CPFactors& d, const CPFactors& t) {
    const Index r = d.rank();
    Eigen::MatrixXd score(r, r);
    const std::array<const Matrix*, 3> df{&d.A, &d.B, &d.C};
    const std::array<const Matrix*, 3> tf{&t.A, &t.B, &t.C};
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j) {
            double s = 1.0;
            for (int f = 0; f < 3; ++f) {
                const auto& dc = df[static_cast<std::size_t>(f)]->col(i);
                const auto& tc = tf[static_cast<std::size_t>(f)]->col(j);
                const double denom = dc.norm() * tc.norm();
                s *= denom > 0.0 ? std::abs((dc.adjoint() * tc).value()) / denom : 0.0;
            }
            score(i, j) = s;
        }
    return score;
}

std::vector<Index> exhaustive_max(const Eigen::MatrixXd& score) {
    const Index r = score.rows();
    std::vector<Index> perm(static_cast<std::size_t>(r));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::vector<Index> best = perm;
    double best_total = -std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (Index i = 0; i < r; ++i) total += score(i, perm[static_cast<std::size_t>(i)]);
        if (total > best_total) {
            best_total = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

std::vector<Index> hungarian_max(const Eigen::MatrixXd& score) {
    // Potential-based shortest augmenting path on cost = -score, O(n^3).
    const Index n = score.rows();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<Index> p(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Index> way(static_cast<std::size_t>(n) + 1, 0);
    for (Index i = 1; i <= n; ++i) {
        p[0] = i;
        Index j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const Index i0 = p[static_cast<std::size_t>(j0)];
            Index j1 = 0;
            double delta = inf;
            for (Index j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = -score(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const Index j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<Index> result(static_cast<std::size_t>(n), 0);
    for (Index j = 1; j <= n; ++j)
        if (p[static_cast<std::size_t>(j)] > 0)
            result[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return result;
}

std::vector<Index> match_modes(const CPFactors& d, const CPFactors& t) {
    check_factors(d, "match_modes");
    check_factors(t, "match_modes");
    if (d.rank() != t.rank())
        throw DataError("match_modes: component counts differ (" +
                        std::to_string(d.rank()) + " vs " + std::to_string(t.rank()) + ")");
    if (d.A.rows() != t.A.rows() || d.B.rows() != t.B.rows() || d.C.rows() != t.C.rows())
        throw DataError("match_modes: factor shapes differ");

    const Eigen::MatrixXd score = similarity_matrix(d, t);
    return d.rank() <= 8 ? exhaustive_max(score) : hungarian_max(score);
}

Alignment align_and_error(const Vector& d_col, const Vector& t_col) {
    if (d_col.size() != t_col.size())
        throw DataError("align_and_error: lengths differ");
    const double norm_t = t_col.norm();
    if (norm_t == 0.0) throw DataError("align_and_error: reference column is zero");
    const double d_sq = d_col.squaredNorm();
    if (d_sq == 0.0) return {Cx(0.0, 0.0), 1.0};
    const Cx sigma = (d_col.adjoint() * t_col).value() / d_sq;
    return {sigma, (sigma * d_col - t_col).norm() / norm_t};
}

MatchReport compare_report(const Tensor3& Y, const CPFactors& d, const CPFactors& t) {
    MatchReport rep;
    rep.permutation = match_modes(d, t);

    const Index r = d.rank();
    rep.factor_errors.resize(r, 3);
    rep.per_mode_scalars.resize(static_cast<std::size_t>(r));
    const std::array<const Matrix*, 3> df{&d.A, &d.B, &d.C};
    const std::array<const Matrix*, 3> tf{&t.A, &t.B, &t.C};
    for (Index i = 0; i < r; ++i) {
        const Index j = rep.permutation[static_cast<std::size_t>(i)];
        for (int f = 0; f < 3; ++f) {
            const Alignment a = align_and_error(df[static_cast<std::size_t>(f)]->col(i),
                                                tf[static_cast<std::size_t>(f)]->col(j));
            rep.per_mode_scalars[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)] =
                a.sigma;
            rep.factor_errors(i, f) = a.err;
        }
    }
    rep.mean_error = r > 0 ? rep.factor_errors.mean() : 0.0;

    const double norm_y = frobenius_norm3(Y);
    if (norm_y == 0.0) throw DataError("compare_report: Y is identically zero");
    rep.dmd_residual = cp_residual(Y, d) / norm_y;
    rep.cp_residual = cp_residual(Y, t) / norm_y;
    rep.kruskal_satisfied = kruskal_check(t).satisfied;
    return rep;
}

}  // namespace dmdcp
