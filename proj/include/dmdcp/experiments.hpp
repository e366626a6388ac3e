#pragma once

#include "dmdcp/correspondence.hpp"
#include "dmdcp/dmd.hpp"
#include "dmdcp/synth.hpp"
#include "dmdcp/types.hpp"

#include <string>
#include <vector>

namespace dmdcp {

/// A trial whose mean matching error exceeds this counts as a
/// DMD/CP discrepancy in the sweep report.
inline constexpr double kDiscrepancyThreshold = 1e-6;

struct ExperimentConfig {
    std::uint64_t seed = 7;
    Index R = 2;
    Index n = 2;
    Index N = 100;
    Index q = 10;
    double K = 3.0;
    int restarts = 10;
    int max_iters = 2000;
    double tol_rel_change = 1e-14;
    double tol_rank = kDefaultRankTol;
    DmdStrategy strategy = DmdStrategy::Stacked;
    int trials = 100;
    std::vector<Index> sweep_steps = {25, 100, 400};
    std::string out_path;

    SynthConfig synth_config(std::uint64_t trial_seed) const;
};

struct RunRecord {
    std::uint64_t seed = 0;
    double mean_error = 0.0;
    double dmd_residual = 0.0;
    double cp_residual = 0.0;
    bool cp_converged = false;
    bool kruskal_satisfied = false;
    double wall_ms_dmd = 0.0;
    double wall_ms_cp = 0.0;
    bool failed = false;
    std::string failure_reason;
};

struct BenchSummary {
    int trials = 0;
    int succeeded = 0;
    int failed = 0;
    int cp_nonconverged = 0;
    double median_mean_error = 0.0;
    double mean_mean_error = 0.0;
    double min_mean_error = 0.0;
    double max_mean_error = 0.0;
};

struct BenchReport {
    std::vector<RunRecord> records;  // one per trial, ordered by trial index
    BenchSummary summary;
};

/// One full pipeline run: generate, DMD (with the configured strategy),
/// CP-ALS, compare. Exceptions are captured in the record, not thrown.
RunRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_seed);

/// Multi-trial benchmark; trial i uses seed cfg.seed + i. Trials run
/// concurrently; the report order is fixed by trial index.
BenchReport bench(const ExperimentConfig& cfg);

struct SweepRow {
    Index N = 0;
    double median_mean_error = 0.0;
    double discrepancy_fraction = 0.0;  // trials with mean_error > 1e-6
};

/// Runs bench once per N in cfg.sweep_steps with the shared base seed.
std::vector<SweepRow> sweep(const ExperimentConfig& cfg);

// Report files. The CSV lists successful trials only; failures are
// counted (with reasons) in the summary JSON.
extern const char* const kTrialsCsvHeader;
extern const char* const kSweepCsvHeader;

void write_trials_csv(const std::vector<RunRecord>& records, const std::string& path);
void write_summary_json(const BenchReport& report, const std::string& path);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace dmdcp
