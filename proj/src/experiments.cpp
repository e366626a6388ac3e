#include "dmdcp/experiments.hpp"

#include "dmdcp/cp.hpp"
#include "dmdcp/tensor_ops.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>

namespace dmdcp {

using nlohmann::json;

SynthConfig ExperimentConfig::synth_config(std::uint64_t trial_seed) const {
    SynthConfig scfg;
    scfg.seed = trial_seed;
    scfg.R = R;
    scfg.n = n;
    scfg.N = N;
    scfg.q = q;
    scfg.K = K;
    return scfg;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    const auto d = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(d).count();
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchSummary summarize(const std::vector<RunRecord>& records) {
    BenchSummary s;
    s.trials = static_cast<int>(records.size());
    std::vector<double> errors;
    for (const RunRecord& r : records) {
        if (r.failed) {
            ++s.failed;
            continue;
        }
        ++s.succeeded;
        if (!r.cp_converged) ++s.cp_nonconverged;
        errors.push_back(r.mean_error);
    }
    if (!errors.empty()) {
        s.median_mean_error = median_of(errors);
        s.mean_mean_error = 0.0;
        for (const double e : errors) s.mean_mean_error += e;
        s.mean_mean_error /= static_cast<double>(errors.size());
        s.min_mean_error = *std::min_element(errors.begin(), errors.end());
        s.max_mean_error = *std::max_element(errors.begin(), errors.end());
    }
    return s;
}

}  // namespace

RunRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    RunRecord rec;
    rec.seed = trial_seed;
    try {
        const SynthData data = synth_generate(cfg.synth_config(trial_seed));

        auto t0 = std::chrono::steady_clock::now();
        const DmdResult dmd = dmd_tensor(data.X, data.Y, cfg.strategy, cfg.tol_rank);
        const CPFactors dmd_factors = dmd_to_cp(dmd, cfg.N);
        rec.wall_ms_dmd = elapsed_ms(t0);

        CPConfig ccfg;
        ccfg.R = cfg.R;
        ccfg.max_iters = cfg.max_iters;
        ccfg.tol_rel_change = cfg.tol_rel_change;
        ccfg.restarts = cfg.restarts;
        ccfg.seed = trial_seed;
        t0 = std::chrono::steady_clock::now();
        const CPResult cp = cp_als(data.Y, ccfg);
        rec.wall_ms_cp = elapsed_ms(t0);

        const MatchReport rep = compare_report(data.Y, dmd_factors, cp.factors);
        rec.mean_error = rep.mean_error;
        rec.dmd_residual = rep.dmd_residual;
        rec.cp_residual = rep.cp_residual;
        rec.cp_converged = cp.converged;
        rec.kruskal_satisfied = rep.kruskal_satisfied;
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.failure_reason = e.what();
    }
    return rec;
}

BenchReport bench(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw DataError("bench: trials must be >= 1");

    BenchReport report;
    report.records.resize(static_cast<std::size_t>(cfg.trials));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < cfg.trials; ++i)
        report.records[static_cast<std::size_t>(i)] =
            run_trial(cfg, cfg.seed + static_cast<std::uint64_t>(i));

    report.summary = summarize(report.records);
    return report;
}

std::vector<SweepRow> sweep(const ExperimentConfig& cfg) {
    if (cfg.sweep_steps.empty()) throw DataError("sweep: sweep_steps must be nonempty");

    std::vector<SweepRow> rows;
    rows.reserve(cfg.sweep_steps.size());
    for (const Index steps : cfg.sweep_steps) {
        ExperimentConfig per_n = cfg;
        per_n.N = steps;
        const BenchReport report = bench(per_n);

        SweepRow row;
        row.N = steps;
        row.median_mean_error = report.summary.median_mean_error;
        int over = 0;
        for (const RunRecord& r : report.records)
            if (!r.failed && r.mean_error > kDiscrepancyThreshold) ++over;
        row.discrepancy_fraction =
            report.summary.succeeded > 0
                ? static_cast<double>(over) / report.summary.succeeded
                : 0.0;
        rows.push_back(row);
    }
    return rows;
}

const char* const kTrialsCsvHeader =
    "seed,mean_error,dmd_residual,cp_residual,cp_converged,kruskal,wall_ms_dmd,wall_ms_cp";
const char* const kSweepCsvHeader = "N,median_mean_error,discrepancy_fraction";

void write_trials_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << kTrialsCsvHeader << '\n';
    for (const RunRecord& r : records) {
        if (r.failed) continue;
        out << r.seed << ',' << format_double(r.mean_error) << ','
            << format_double(r.dmd_residual) << ',' << format_double(r.cp_residual) << ','
            << (r.cp_converged ? 1 : 0) << ',' << (r.kruskal_satisfied ? 1 : 0) << ','
            << format_double(r.wall_ms_dmd) << ',' << format_double(r.wall_ms_cp) << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

void write_summary_json(const BenchReport& report, const std::string& path) {
    const BenchSummary& s = report.summary;
    json failures = json::array();
    for (const RunRecord& r : report.records)
        if (r.failed) failures.push_back({{"seed", r.seed}, {"reason", r.failure_reason}});

    json j{{"trials", s.trials},
           {"succeeded", s.succeeded},
           {"failed", s.failed},
           {"cp_nonconverged", s.cp_nonconverged},
           {"median_mean_error", s.succeeded > 0 ? json(s.median_mean_error) : json()},
           {"mean_mean_error", s.succeeded > 0 ? json(s.mean_mean_error) : json()},
           {"min_mean_error", s.succeeded > 0 ? json(s.min_mean_error) : json()},
           {"max_mean_error", s.succeeded > 0 ? json(s.max_mean_error) : json()},
           {"failures", std::move(failures)}};

    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& row : rows)
        out << row.N << ',' << format_double(row.median_mean_error) << ','
            << format_double(row.discrepancy_fraction) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace dmdcp
