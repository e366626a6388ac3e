#pragma once

#include "dmdcp/types.hpp"

#include <array>
#include <vector>

namespace dmdcp {

/// Result of matching two CP decompositions up to permutation and
/// per-mode complex scaling.
struct MatchReport {
    std::vector<Index> permutation;              // dmd mode r -> cp mode permutation[r]
    std::vector<std::array<Cx, 3>> per_mode_scalars;  // (sigma_A, sigma_B, sigma_C)
    Eigen::MatrixXd factor_errors;               // R x 3 relative errors
    double mean_error = 0.0;                     // mean over all 3R entries
    double dmd_residual = 0.0;                   // |Y - recon(d)| / |Y|
    double cp_residual = 0.0;                    // |Y - recon(t)| / |Y|
    bool kruskal_satisfied = false;
};

/// Assignment of the columns of d onto the columns of t maximizing the
/// total similarity, where the similarity of a pair is the product over
/// the three factors of |<unit(d col), unit(t col)>|. Exhaustive search
/// for R <= 8, Hungarian assignment above that.
std::vector<Index> match_modes(const CPFactors& d, const CPFactors& t);

struct Alignment {
    Cx sigma;    // least-squares complex scale: sigma*d ~ t
    double err;  // |sigma*d - t| / |t|
};

/// Least-squares alignment of one factor column onto another.
Alignment align_and_error(const Vector& d_col, const Vector& t_col);

/// Full comparison: matching, per-factor alignment errors, normalized
/// reconstruction residuals of both decompositions, and the uniqueness
/// check on t.
MatchReport compare_report(const Tensor3& Y, const CPFactors& d, const CPFactors& t);

/// Maximum-total-score assignment (square score matrix); returns the
/// column assigned to each row. Exposed for testing against the
/// exhaustive search.
std::vector<Index> hungarian_max(const Eigen::MatrixXd& score);

}  // namespace dmdcp
