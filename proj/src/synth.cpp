#include "dmdcp/synth.hpp"

#include "dmdcp/dmd.hpp"
#include "dmdcp/rng.hpp"
#include "dmdcp/tensor_ops.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dmdcp {

void SynthConfig::validate() const {
    if (R < 1) throw DataError("SynthConfig: R must be >= 1");
    if (n < R)
        throw DataError("SynthConfig: n must be >= R for orthonormalization, got n=" +
                        std::to_string(n) + ", R=" + std::to_string(R));
    if (N < 2) throw DataError("SynthConfig: N must be >= 2");
    if (q < 1) throw DataError("SynthConfig: q must be >= 1");
    if (!(K > 0.0)) throw DataError("SynthConfig: K must be > 0");
}

Cx lambda_from_alpha_beta(double alpha, double beta) {
    return std::exp(Cx(beta / 10.0, 2.0 * std::numbers::pi * alpha / 10.0));
}

Eigen::VectorXd initial_condition_grid(Index q) {
    Eigen::VectorXd grid(q);
    for (Index j = 0; j < q; ++j)
        grid(j) = static_cast<double>(j + 1) / static_cast<double>(q);
    return grid;
}

Matrix eigenfunction_factors(const Eigen::VectorXd& grid, const Eigen::VectorXd& gammas) {
    Matrix phi(grid.size(), gammas.size());
    for (Index r = 0; r < gammas.size(); ++r)
        for (Index j = 0; j < grid.size(); ++j)
            phi(j, r) = Cx(std::pow(grid(j), gammas(r)), 0.0);
    return phi;
}

Matrix orthonormalize(const Matrix& m) {
    if (m.rows() < m.cols())
        throw DataError("orthonormalize: more columns than rows (" +
                        std::to_string(m.rows()) + " x " + std::to_string(m.cols()) + ")");
    Matrix q = m;
    for (Index k = 0; k < q.cols(); ++k) {
        const double original = q.col(k).norm();
        // Two MGS passes; the second pass cleans up the loss of
        // orthogonality a single sweep leaves on close-to-dependent input.
        for (int pass = 0; pass < 2; ++pass)
            for (Index j = 0; j < k; ++j)
                q.col(k) -= (q.col(j).adjoint() * q.col(k)).value() * q.col(j);
        const double remaining = q.col(k).norm();
        if (remaining <= 1e-10 * original || remaining == 0.0)
            throw DataError("orthonormalize: rank-deficient input (column " +
                            std::to_string(k) + ")");
        q.col(k) /= remaining;
    }
    return q;
}

SynthData synth_generate(const SynthConfig& cfg) {
    cfg.validate();
    UniformStream stream(cfg.seed);

    Matrix raw(cfg.n, cfg.R);
    for (Index r = 0; r < cfg.R; ++r)
        for (Index i = 0; i < cfg.n; ++i)
            raw(i, r) = Cx(stream.next(), 0.0);

    SynthGroundTruth truth;
    truth.Vbar = orthonormalize(raw);
    truth.alphas.resize(cfg.R);
    truth.betas.resize(cfg.R);
    truth.gammas.resize(cfg.R);
    for (Index r = 0; r < cfg.R; ++r) truth.alphas(r) = stream.next_signed();
    for (Index r = 0; r < cfg.R; ++r) truth.betas(r) = stream.next_signed();
    for (Index r = 0; r < cfg.R; ++r) truth.gammas(r) = cfg.K * stream.next();

    truth.lambdas.resize(cfg.R);
    for (Index r = 0; r < cfg.R; ++r)
        truth.lambdas(r) = lambda_from_alpha_beta(truth.alphas(r), truth.betas(r));
    truth.initial_grid = initial_condition_grid(cfg.q);

    // Time factors are geometric: row k holds lambda^{k+1}, so the
    // shifted factor is exactly lambda times the unshifted one.
    const Matrix s_bar = vandermonde_matrix(truth.lambdas, cfg.N);
    Matrix s_shift(cfg.N, cfg.R);
    for (Index r = 0; r < cfg.R; ++r)
        for (Index k = 0; k < cfg.N; ++k)
            s_shift(k, r) = truth.lambdas(r) * s_bar(k, r);

    const Matrix phi = eigenfunction_factors(truth.initial_grid, truth.gammas);

    SynthData out;
    out.X = cp_reconstruct({truth.Vbar, s_bar, phi});
    out.Y = cp_reconstruct({truth.Vbar, s_shift, phi});
    out.truth = std::move(truth);
    return out;
}

}  // namespace dmdcp
