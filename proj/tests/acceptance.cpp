// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include "dmdcp/correspondence.hpp"
#include "dmdcp/cp.hpp"
#include "dmdcp/dmd.hpp"
#include "dmdcp/experiments.hpp"
#include "dmdcp/io.hpp"
#include "dmdcp/rng.hpp"
#include "dmdcp/synth.hpp"
#include "dmdcp/tensor_ops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

using namespace dmdcp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_matrix(UniformStream& stream, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r)
            m(r, c) = Cx(stream.next_signed(), stream.next_signed());
    return m;
}

Tensor3 random_tensor(UniformStream& stream, Index i1, Index i2, Index i3) {
    Tensor3 t(i1, i2, i3);
    for (Index i = 0; i < t.size(); ++i)
        t.data()[i] = Cx(stream.next_signed(), stream.next_signed());
    return t;
}

CPFactors well_conditioned_factors(std::uint64_t seed, Index i1, Index i2, Index i3,
                                   Index R) {
    UniformStream stream(seed);
    while (true) {
        CPFactors f{random_matrix(stream, i1, R), random_matrix(stream, i2, R),
                    random_matrix(stream, i3, R)};
        const auto cond = [](const Matrix& m) {
            const SvdResult s = reduced_svd(m);
            return s.sigma(0) / s.sigma(s.rank() - 1);
        };
        if (cond(f.A) <= 10.0 && cond(f.B) <= 10.0 && cond(f.C) <= 10.0) return f;
    }
}

std::vector<Cx> sorted_by_phase(const Vector& v) {
    std::vector<Cx> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end(),
              [](const Cx& a, const Cx& b) { return std::arg(a) < std::arg(b); });
    return out;
}

// ---- criterion 1: eigenvalue recovery -------------------------------------

Outcome criterion_eigenvalue_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    SynthConfig cfg;  // R=2, n=2, N=100, q=10, K=3, seed 7
    const SynthData data = synth_generate(cfg);
    const DmdResult res = dmd_tensor(data.X, data.Y, DmdStrategy::Stacked);
    const double elapsed = seconds_since(t0);

    const auto got = sorted_by_phase(res.eigenvalues);
    const auto want = sorted_by_phase(data.truth.lambdas);
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        worst = std::max(worst, std::abs(got[i] - want[i]));

    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |dlambda| %.3e (tol 1e-9), %.3f s/trial", worst,
                  elapsed);
    return {worst <= 1e-9 && elapsed < 1.0, buf};
}

// ---- criterion 2: DMD triplets reconstruct the tensor ----------------------

Outcome criterion_dmd_reconstruction() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SynthConfig cfg;
        cfg.seed = seed;
        const SynthData data = synth_generate(cfg);
        const DmdResult res = dmd_tensor(data.X, data.Y, DmdStrategy::Stacked);
        const CPFactors f = dmd_to_cp(res, cfg.N);
        worst = std::max(worst,
                         cp_fit_residual(data.Y, f) / frobenius_norm3(data.Y));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max residual %.3e over 20 seeds (tol 1e-9)", worst);
    return {worst <= 1e-9, buf};
}

// ---- criterion 3: planted CP recovery ---------------------------------------

Outcome criterion_planted_cp_recovery() {
    int good = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 301; seed <= 320; ++seed) {
        const CPFactors planted = well_conditioned_factors(seed, 4, 20, 6, 2);
        const Tensor3 y = cp_reconstruct(planted);
        CPConfig cfg;
        cfg.R = 2;
        cfg.seed = seed;
        cfg.restarts = 10;
        const CPResult res = cp_als(y, cfg);
        const MatchReport rep = compare_report(y, res.factors, planted);
        const double err = rep.factor_errors.maxCoeff();
        worst = std::max(worst, err);
        if (err <= 1e-6) ++good;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d/20 seeds recovered (need >= 19), worst %.3e",
                  good, worst);
    return {good >= 19, buf};
}

// ---- criterion 4: 100-trial benchmark --------------------------------------

Outcome criterion_benchmark() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;  // section-V parameters, 100 trials, seed 7
    const BenchReport report = bench(cfg);
    const double elapsed = seconds_since(t0);

    const auto out_dir = std::filesystem::temp_directory_path();
    write_trials_csv(report.records, (out_dir / "dmdcp_acceptance_trials.csv").string());
    write_summary_json(report, (out_dir / "dmdcp_acceptance_summary.json").string());

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "median mean_error %.3e (tol 1e-6), %d/%d failed, %d nonconverged, "
                  "%.0f s",
                  report.summary.median_mean_error, report.summary.failed,
                  report.summary.trials, report.summary.cp_nonconverged, elapsed);
    return {report.summary.failed == 0 &&
                report.summary.median_mean_error <= 1e-6 && elapsed < 300.0,
            buf};
}

// ---- criterion 5: rank inflation keeps the residual -------------------------

Outcome criterion_lemma1_inflation() {
    UniformStream alpha_stream(909);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Index base_rank = trial % 2 == 0 ? 1 : 2;
        const CPFactors f = well_conditioned_factors(500 + static_cast<std::uint64_t>(trial),
                                                     3, 6, 4, base_rank);
        const Tensor3 y = cp_reconstruct(f);
        const Index target = base_rank + 1 + (trial % 3 == 0 ? 1 : 0);

        std::vector<double> alphas;
        while (true) {
            alphas.assign(static_cast<std::size_t>(target - base_rank + 1), 0.0);
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
                alphas[i] = alpha_stream.next_signed();
                sum += alphas[i];
            }
            alphas.back() = 1.0 - sum;
            bool ok = true;
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                if (alphas[i] == 0.0) ok = false;
                for (std::size_t j = i + 1; j < alphas.size(); ++j)
                    if (alphas[i] == alphas[j]) ok = false;
            }
            if (ok) break;
        }

        const CPFactors inflated = lemma1_inflate(f, target, alphas);
        worst = std::max(worst,
                         std::abs(cp_residual(y, inflated) - cp_residual(y, f)));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max residual change %.3e over 50 cases (tol 1e-13)",
                  worst);
    return {worst <= 1e-13, buf};
}

// ---- criterion 6: uniqueness inequality -------------------------------------

Outcome criterion_kruskal() {
    SynthConfig cfg;  // distinct lambdas and gammas with overwhelming probability
    const SynthData data = synth_generate(cfg);
    const CPFactors planted{data.truth.Vbar,
                            vandermonde_matrix(data.truth.lambdas, cfg.N),
                            eigenfunction_factors(data.truth.initial_grid,
                                                  data.truth.gammas)};
    const KruskalReport good = kruskal_check(planted);

    CPFactors deficient = planted;
    deficient.A.col(1) = deficient.A.col(0);
    const KruskalReport bad = kruskal_check(deficient);

    char buf[96];
    std::snprintf(buf, sizeof(buf), "generic rank sum %lld >= 6, duplicated-column sum %lld < 6",
                  static_cast<long long>(good.ranks[0] + good.ranks[1] + good.ranks[2]),
                  static_cast<long long>(bad.ranks[0] + bad.ranks[1] + bad.ranks[2]));
    return {good.satisfied && !bad.satisfied, buf};
}

// ---- criterion 7: linear consistency ----------------------------------------

Outcome criterion_linear_consistency() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SynthConfig cfg;
        cfg.seed = seed;
        const SynthData data = synth_generate(cfg);
        for (Index j = 0; j < cfg.q; ++j) {
            const ConsistencyReport rep =
                linear_consistency_check({data.X.slice(j), data.Y.slice(j)}, 1e-10);
            worst = std::max(worst, rep.worst_violation);
            if (!rep.consistent) return {false, "synthetic slice pair failed"};
        }
    }

    Matrix ones(2, 2);
    ones << Cx(1, 0), Cx(1, 0), Cx(1, 0), Cx(1, 0);
    const ConsistencyReport bad =
        linear_consistency_check({ones, Matrix::Identity(2, 2)}, 1e-10);

    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "worst synthetic violation %.3e, constructed pair violation %.3f", worst,
                  bad.worst_violation);
    return {worst <= 1e-10 && !bad.consistent, buf};
}

// ---- criterion 8: property suites -------------------------------------------

Outcome criterion_properties() {
    std::string failures;

    // ALS monotonicity
    {
        SynthConfig cfg;
        const SynthData data = synth_generate(cfg);
        CPConfig ccfg;
        ccfg.R = 2;
        ccfg.seed = 7;
        ccfg.restarts = 4;
        const CPResult res = cp_als(data.Y, ccfg);
        for (std::size_t i = 1; i < res.residual_history.size(); ++i)
            if (res.residual_history[i] > res.residual_history[i - 1] + 1e-12)
                failures += " als-monotonicity";
    }

    UniformStream stream(911);

    // objective scale and permutation invariance
    {
        const Tensor3 y = random_tensor(stream, 3, 4, 5);
        const CPFactors f{random_matrix(stream, 3, 2), random_matrix(stream, 4, 2),
                          random_matrix(stream, 5, 2)};
        const double base = cp_residual(y, f);
        CPFactors scaled = f;
        scaled.A.col(0) /= 2.5;
        scaled.C.col(0) *= 2.5;
        if (std::abs(cp_residual(y, scaled) - base) > 1e-12) failures += " scale-invariance";
        CPFactors swapped{f.A.rowwise().reverse(), f.B.rowwise().reverse(),
                          f.C.rowwise().reverse()};
        if (cp_residual(y, swapped) != base) failures += " permutation-invariance";
    }

    // Vandermonde shift identity, exact
    {
        Vector lams(3);
        for (Index r = 0; r < 3; ++r)
            lams(r) = Cx(stream.next_signed(), stream.next_signed());
        const Matrix v = vandermonde_matrix(lams, 30);
        for (Index r = 0; r < 3; ++r)
            for (Index k = 0; k + 1 < 30; ++k)
                if (v(k + 1, r) != lams(r) * v(k, r)) failures += " vandermonde-shift";
    }

    // unfold/fold round-trip
    {
        const Tensor3 t = random_tensor(stream, 4, 5, 3);
        for (int mode = 1; mode <= 3; ++mode)
            if (!(fold_mode(unfold_mode(t, mode), mode, t.dims()) == t))
                failures += " unfold-fold";
    }

    // SVD / eig / pinv reconstruction bounds
    {
        const Matrix m = random_matrix(stream, 50, 200);
        const SvdResult s = reduced_svd(m);
        if ((s.Q * s.sigma.asDiagonal() * s.V.adjoint() - m).norm() > 1e-12 * m.norm())
            failures += " svd-bound";

        const Matrix sq = random_matrix(stream, 8, 8);
        const EigResult e = eig(sq);
        if ((e.vectors * e.values.asDiagonal() * e.vectors.inverse() - sq).norm() >
            1e-9 * sq.norm())
            failures += " eig-bound";

        const Matrix p = random_matrix(stream, 6, 4);
        const Matrix pp = pinv(p);
        if ((p * pp * p - p).norm() > 1e-10 * p.norm()) failures += " pinv-bound";
    }

    // IO round-trips
    {
        const auto dir = std::filesystem::temp_directory_path();
        SynthConfig cfg;
        cfg.seed = 31;
        cfg.N = 10;
        const SynthData data = synth_generate(cfg);
        const std::string tpath = (dir / "dmdcp_acceptance_tensor.json").string();
        tensor_io_write(data.Y, tpath);
        if (!(tensor_io_read(tpath) == data.Y)) failures += " tensor-io";

        const CPFactors f{random_matrix(stream, 3, 2), random_matrix(stream, 4, 2),
                          random_matrix(stream, 5, 2)};
        const std::string fpath = (dir / "dmdcp_acceptance_factors.json").string();
        factors_io_write(f, fpath);
        const CPFactors back = factors_io_read(fpath);
        if ((back.A - f.A).norm() != 0.0 || (back.B - f.B).norm() != 0.0 ||
            (back.C - f.C).norm() != 0.0)
            failures += " factors-io";
    }

    if (failures.empty())
        return {true,
                "monotonicity, invariances, shift identity, round-trips, kernel bounds"};
    return {false, "failed:" + failures};
}

// ---- criterion 9: N sweep ----------------------------------------------------

Outcome criterion_sweep() {
    ExperimentConfig cfg;
    cfg.trials = 25;
    cfg.sweep_steps = {25, 100, 400};
    const std::vector<SweepRow> rows = sweep(cfg);

    const auto path =
        std::filesystem::temp_directory_path() / "dmdcp_acceptance_sweep.csv";
    write_sweep_csv(rows, path.string());

    if (rows.size() != 3) return {false, "expected 3 sweep rows"};
    std::string detail = "discrepancy fraction";
    for (const SweepRow& row : rows) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), " N=%lld: %.2f", static_cast<long long>(row.N),
                      row.discrepancy_fraction);
        detail += buf;
    }
    detail += " (observed, not asserted)";
    return {true, detail};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"eigenvalue-recovery", criterion_eigenvalue_recovery},
        {"dmd-reconstruction", criterion_dmd_reconstruction},
        {"planted-cp-recovery", criterion_planted_cp_recovery},
        {"benchmark-median", criterion_benchmark},
        {"rank-inflation", criterion_lemma1_inflation},
        {"kruskal-inequality", criterion_kruskal},
        {"linear-consistency", criterion_linear_consistency},
        {"property-suites", criterion_properties},
        {"n-sweep", criterion_sweep},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failed;
        std::printf("%s  %zu %-22s %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failed;
}
