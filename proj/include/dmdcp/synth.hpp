#pragma once

#include "dmdcp/types.hpp"

namespace dmdcp {

/// Parameters of the synthetic linear-dynamics tensor generator.
struct SynthConfig {
    std::uint64_t seed = 7;
    Index R = 2;     // planted mode count
    Index n = 2;     // state dimension, must be >= R
    Index N = 100;   // time steps
    Index q = 10;    // initial conditions
    double K = 3.0;  // exclusive upper bound of the polynomial exponents

    void validate() const;
};

/// The planted factors, kept for oracle comparison against computed
/// decompositions.
struct SynthGroundTruth {
    Matrix Vbar;                  // n x R, orthonormal columns
    Vector lambdas;               // R, exp(2*pi*i*alpha/10 + beta/10)
    Eigen::VectorXd alphas;       // R, in (-1,1)
    Eigen::VectorXd betas;        // R, in (-1,1)
    Eigen::VectorXd gammas;       // R, in (0,K)
    Eigen::VectorXd initial_grid; // q values in (0,1], 0.1..1.0 when q=10
};

struct SynthData {
    Tensor3 X;
    Tensor3 Y;
    SynthGroundTruth truth;
};

/// exp(2*pi*i*alpha/10 + beta/10).
Cx lambda_from_alpha_beta(double alpha, double beta);

/// q evenly spaced points in (0,1]: (j+1)/q.
Eigen::VectorXd initial_condition_grid(Index q);

/// q x R matrix of grid[j]^gamma_r values.
Matrix eigenfunction_factors(const Eigen::VectorXd& grid, const Eigen::VectorXd& gammas);

/// Modified Gram-Schmidt. Output columns span the same space and have a
/// Gram matrix equal to the identity to 1e-12. Throws on rank-deficient
/// input or when rows < cols.
Matrix orthonormalize(const Matrix& m);

/// Builds the shifted tensor pair (X, Y) from planted orthonormal
/// spatial modes, geometric time factors and polynomial eigenfunction
/// profiles. Deterministic in cfg.seed; draw order is the Vbar entries
/// (column by column), then all alphas, all betas, all gammas.
SynthData synth_generate(const SynthConfig& cfg);

}  // namespace dmdcp
