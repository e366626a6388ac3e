#pragma once

#include "dmdcp/linalg.hpp"
#include "dmdcp/types.hpp"

#include <vector>

namespace dmdcp {

/// Tolerance below which a linear-consistency violation is ignored.
inline constexpr double kDefaultConsistencyTol = 1e-10;

/// Eigenvalue modulus below which the exact-mode formula (which divides
/// by lambda) falls back to projected modes.
inline constexpr double kZeroEigModulus = 1e-12;

/// A snapshot matrix pair: column k of Y is the image of column k of X
/// under the (unknown) dynamics.
struct SnapshotPair {
    Matrix X;
    Matrix Y;
};

struct ConsistencyReport {
    bool consistent = true;
    double worst_violation = 0.0;  // max over null-space basis c of |Yc| / |Y|
    Index null_dim = 0;
};

/// Checks that every null vector of X is a null vector of Y, which makes
/// A X = Y exact for the least-squares operator A.
ConsistencyReport linear_consistency_check(const SnapshotPair& p,
                                           double tol = kDefaultConsistencyTol);

enum class DmdStrategy { Stacked, PerSliceMean };

struct DmdDiagnostics {
    double eigvec_condition = 0.0;
    std::vector<bool> slice_consistent;        // per frontal slice pair
    std::vector<double> slice_violation;       // worst violation per slice
    double max_amplitude_residual = 0.0;       // worst relative LS residual
};

/// Koopman triplets: mode vectors, eigenvalues, and eigenfunction values
/// per initial condition (amplitudes row j belongs to initial condition j).
struct DmdResult {
    Matrix modes;        // n x R
    Vector eigenvalues;  // R
    Matrix amplitudes;   // q x R; empty until amplitude recovery runs
    Index rank_used = 0;
    DmdStrategy strategy = DmdStrategy::Stacked;
    DmdDiagnostics diagnostics;
};

/// Exact DMD of a snapshot pair: reduced SVD of X, the projected
/// operator Q^H Y V Sigma^{-1}, its eigendecomposition, and the exact
/// modes Y V Sigma^{-1} w / lambda. Amplitudes are left empty.
DmdResult exact_dmd(const SnapshotPair& p, double tol_rank = kDefaultRankTol);

struct AmplitudeFit {
    Vector phi;       // coefficients of x0 in the mode basis
    double residual;  // |modes*phi - x0| / |x0| (0 for x0 = 0)
};

/// Least-squares expansion of an initial condition in the mode basis.
AmplitudeFit koopman_amplitudes(const Matrix& modes, const Vector& x0);

/// m x R matrix with entry (k, r) = lambda_r^{k+1}; rows run lambda,
/// lambda^2, ..., lambda^m. Powers are built by iterated multiplication
/// so row k+1 is exactly lambda times row k.
Matrix vandermonde_matrix(const Vector& lambdas, Index m);

/// Exact DMD of a third-order snapshot tensor pair. Stacked: one DMD of
/// the horizontally concatenated slices. PerSliceMean: DMD per slice,
/// modes matched across slices by eigenvalue proximity and averaged.
/// Either way, amplitudes row j comes from the first column of slice j
/// of X. Inconsistent slice pairs are recorded in the diagnostics, not
/// fatal.
DmdResult dmd_tensor(const Tensor3& X, const Tensor3& Y,
                     DmdStrategy strategy = DmdStrategy::Stacked,
                     double tol_rank = kDefaultRankTol);

/// The mode correspondence as CP factor matrices: A = modes,
/// B = vandermonde_matrix(eigenvalues, m), C = amplitudes.
CPFactors dmd_to_cp(const DmdResult& res, Index m);

}  // namespace dmdcp
