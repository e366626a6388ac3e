#include "dmdcp/cp.hpp"

#include "dmdcp/rng.hpp"
#include "dmdcp/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dmdcp {

void CPConfig::validate() const {
    if (R < 1) throw DataError("CPConfig: R must be >= 1");
    if (restarts < 1) throw DataError("CPConfig: restarts must be >= 1");
    if (max_iters < 1) throw DataError("CPConfig: max_iters must be >= 1");
}

double cp_residual(const Tensor3& Y, const CPFactors& f) {
    return cp_fit_residual(Y, f);
}

namespace {

Matrix random_factor(UniformStream& stream, Index rows, Index R) {
    Matrix m(rows, R);
    for (Index r = 0; r < R; ++r)
        for (Index i = 0; i < rows; ++i) {
            const double re = stream.next_signed();
            const double im = stream.next_signed();
            m(i, r) = Cx(re, im);
        }
    return m;
}

// One least-squares mode update: factor = MTTKRP * pinv(conjugated Gram
// product). The Gram product of the Khatri-Rao matrix collapses to the
// Hadamard product of the two small Gram matrices.
Matrix als_update(const Tensor3& Y, const CPFactors& f, int mode) {
    const Matrix w = mttkrp_conj(Y, f, mode);
    Matrix gram;
    if (mode == 1)
        gram = (f.C.adjoint() * f.C).cwiseProduct(f.B.adjoint() * f.B);
    else if (mode == 2)
        gram = (f.A.adjoint() * f.A).cwiseProduct(f.C.adjoint() * f.C);
    else
        gram = (f.B.adjoint() * f.B).cwiseProduct(f.A.adjoint() * f.A);
    return w * pinv(gram.conjugate());
}

// Unit-norm columns in A and B, magnitudes pushed into C. Leaves the
// reconstruction unchanged.
void normalize_columns(CPFactors& f) {
    for (Index r = 0; r < f.rank(); ++r) {
        const double na = f.A.col(r).norm();
        const double nb = f.B.col(r).norm();
        if (na > 0.0) f.A.col(r) /= na;
        if (nb > 0.0) f.B.col(r) /= nb;
        f.C.col(r) *= na * nb;
    }
}

CPFactors extrapolate(const CPFactors& cur, const CPFactors& prev, double step) {
    return {cur.A + step * (cur.A - prev.A), cur.B + step * (cur.B - prev.B),
            cur.C + step * (cur.C - prev.C)};
}

struct RestartOutcome {
    CPFactors factors;
    double rel_residual = std::numeric_limits<double>::infinity();
    int iters = 0;
    bool stopped_by_tol = false;
    std::vector<double> history;
};

RestartOutcome run_restart(const Tensor3& Y, const CPConfig& cfg, int restart,
                           double norm_y) {
    RestartOutcome out;

    CPFactors f;
    if (cfg.init && restart == 0) {
        f = *cfg.init;
        check_factors(f, "cp_als");
        if (f.rank() != cfg.R || f.A.rows() != Y.dim(0) || f.B.rows() != Y.dim(1) ||
            f.C.rows() != Y.dim(2))
            throw DataError("cp_als: given initialization does not match Y and R");
    } else {
        UniformStream stream(cfg.seed + static_cast<std::uint64_t>(restart));
        f.A = random_factor(stream, Y.dim(0), cfg.R);
        f.B = random_factor(stream, Y.dim(1), cfg.R);
        f.C = random_factor(stream, Y.dim(2), cfg.R);
    }

    double prev_rel = std::numeric_limits<double>::infinity();
    out.history.reserve(64);
    for (int it = 0; it < cfg.max_iters; ++it) {
        const CPFactors before = f;
        f.A = als_update(Y, f, 1);
        f.B = als_update(Y, f, 2);
        f.C = als_update(Y, f, 3);
        normalize_columns(f);
        double rel = cp_fit_residual(Y, f) / norm_y;

        // Guarded line search along the last move. ALS crawls through
        // ill-conditioned "swamps" with nearly linear factor
        // trajectories; jumping along the sweep direction cuts those
        // crossings by orders of magnitude. Accepted only when the
        // residual drops, so the history stays non-increasing.
        if (it > 0) {
            for (double step = 1.0; step <= 1024.0; step *= 2.0) {
                CPFactors cand = extrapolate(f, before, step);
                normalize_columns(cand);
                const double cand_rel = cp_fit_residual(Y, cand) / norm_y;
                if (!(cand_rel < rel)) break;
                f = std::move(cand);
                rel = cand_rel;
            }
        }

        out.history.push_back(rel);
        out.iters = it + 1;
        if (std::abs(prev_rel - rel) < cfg.tol_rel_change) {
            out.stopped_by_tol = true;
            break;
        }
        prev_rel = rel;
    }
    out.rel_residual = out.history.empty() ? std::numeric_limits<double>::infinity()
                                           : out.history.back();
    out.factors = std::move(f);
    return out;
}

}  // namespace

CPResult cp_als(const Tensor3& Y, const CPConfig& cfg) {
    cfg.validate();
    const double norm_y = frobenius_norm3(Y);
    if (norm_y == 0.0) throw DataError("cp_als: Y is identically zero");

    const Index i1 = Y.dim(0), i2 = Y.dim(1), i3 = Y.dim(2);
    const Index solvable = std::min({i2 * i3, i3 * i1, i1 * i2});
    if (cfg.R > solvable)
        throw DataError("cp_als: R = " + std::to_string(cfg.R) +
                        " exceeds the solvable bound " + std::to_string(solvable) +
                        " for dims (" + std::to_string(i1) + ", " + std::to_string(i2) +
                        ", " + std::to_string(i3) + ")");

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < cfg.restarts; ++r)
        outcomes[static_cast<std::size_t>(r)] = run_restart(Y, cfg, r, norm_y);

    int best = 0;
    for (int r = 1; r < cfg.restarts; ++r)
        if (outcomes[static_cast<std::size_t>(r)].rel_residual <
            outcomes[static_cast<std::size_t>(best)].rel_residual)
            best = r;

    RestartOutcome& win = outcomes[static_cast<std::size_t>(best)];
    CPResult result;
    result.factors = std::move(win.factors);
    result.rel_residual = win.rel_residual;
    result.iters = win.iters;
    result.restart_index = best;
    result.converged = win.stopped_by_tol && win.rel_residual <= kStallResidual;
    result.residual_history = std::move(win.history);
    return result;
}

CPFactors lemma1_inflate(const CPFactors& f, Index R_target,
                         const std::vector<double>& alphas) {
    check_factors(f, "lemma1_inflate");
    const Index R = f.rank();
    if (R < 1) throw DataError("lemma1_inflate: input factors are empty");
    if (R_target <= R)
        throw DataError("lemma1_inflate: target rank " + std::to_string(R_target) +
                        " must exceed current rank " + std::to_string(R));
    const std::size_t want = static_cast<std::size_t>(R_target - R + 1);
    if (alphas.size() != want)
        throw DataError("lemma1_inflate: need " + std::to_string(want) +
                        " alphas, got " + std::to_string(alphas.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] == 0.0) throw DataError("lemma1_inflate: alphas must be nonzero");
        for (std::size_t j = i + 1; j < alphas.size(); ++j)
            if (alphas[i] == alphas[j])
                throw DataError("lemma1_inflate: alphas must be pairwise distinct");
        sum += alphas[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw DataError("lemma1_inflate: alphas must sum to 1, got " +
                        std::to_string(sum));

    CPFactors out;
    out.A.resize(f.A.rows(), R_target);
    out.B.resize(f.B.rows(), R_target);
    out.C.resize(f.C.rows(), R_target);
    out.A.leftCols(R - 1) = f.A.leftCols(R - 1);
    out.B.leftCols(R - 1) = f.B.leftCols(R - 1);
    out.C.leftCols(R - 1) = f.C.leftCols(R - 1);
    for (Index k = 0; k + R - 1 < R_target; ++k) {
        out.A.col(R - 1 + k) = alphas[static_cast<std::size_t>(k)] * f.A.col(R - 1);
        out.B.col(R - 1 + k) = f.B.col(R - 1);
        out.C.col(R - 1 + k) = f.C.col(R - 1);
    }
    return out;
}

KruskalReport kruskal_check(const CPFactors& f, double rank_tol) {
    check_factors(f, "kruskal_check");
    KruskalReport rep;
    rep.ranks = {matrix_rank(f.A, rank_tol), matrix_rank(f.B, rank_tol),
                 matrix_rank(f.C, rank_tol)};
    rep.satisfied = rep.ranks[0] + rep.ranks[1] + rep.ranks[2] >= 2 * f.rank() + 2;
    return rep;
}

}  // namespace dmdcp
