#pragma once

#include "dmdcp/linalg.hpp"
#include "dmdcp/types.hpp"

#include <array>
#include <optional>
#include <vector>

namespace dmdcp {

/// Residual level above which a stalled ALS run is reported as not
/// converged (likely trapped in a local minimum).
inline constexpr double kStallResidual = 1e-6;

struct CPConfig {
    Index R = 2;
    int max_iters = 2000;
    double tol_rel_change = 1e-14;  // on the relative residual between sweeps
    int restarts = 10;
    std::uint64_t seed = 0;
    std::optional<CPFactors> init;  // fixed initialization for restart 0

    void validate() const;
};

struct CPResult {
    CPFactors factors;
    double rel_residual = 0.0;  // |Y - reconstruction| / |Y|
    int iters = 0;
    int restart_index = 0;
    bool converged = false;
    std::vector<double> residual_history;  // per sweep, best restart
};

/// Multi-restart alternating least squares for the rank-R decomposition
/// minimizing |Y - sum_r a_r (x) b_r (x) c_r|. Restart r draws its
/// initialization from UniformStream(cfg.seed + r); restarts are
/// independent and may run concurrently. Columns of A and B are
/// renormalized each sweep with the magnitudes absorbed into C. Returns
/// the best restart by relative residual (ties by lowest index).
CPResult cp_als(const Tensor3& Y, const CPConfig& cfg);

/// |Y - cp_reconstruct(f)| (absolute Frobenius residual).
double cp_residual(const Tensor3& Y, const CPFactors& f);

/// Rank inflation that preserves the reconstruction: the last component
/// is duplicated with its A-columns scaled by the alphas, which must be
/// nonzero, pairwise distinct and sum to 1.
CPFactors lemma1_inflate(const CPFactors& f, Index R_target,
                         const std::vector<double>& alphas);

struct KruskalReport {
    bool satisfied = false;
    std::array<Index, 3> ranks{0, 0, 0};  // rank(A), rank(B), rank(C)
};

/// Sufficient uniqueness condition: rank(A) + rank(B) + rank(C) >= 2R + 2.
KruskalReport kruskal_check(const CPFactors& f, double rank_tol = kDefaultRankTol);

}  // namespace dmdcp
