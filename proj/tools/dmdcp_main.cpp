#include "dmdcp/cp.hpp"
#include "dmdcp/experiments.hpp"
#include "dmdcp/io.hpp"
#include "dmdcp/tensor_ops.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

using namespace dmdcp;

void add_synth_options(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "Base seed");
    cmd->add_option("--rank", cfg.R, "Component count R");
    cmd->add_option("--dim", cfg.n, "State dimension n");
    cmd->add_option("--steps", cfg.N, "Time steps N");
    cmd->add_option("--ics", cfg.q, "Initial condition count q");
    cmd->add_option("--kmax", cfg.K, "Polynomial exponent upper bound K");
}

void add_solver_options(CLI::App* cmd, ExperimentConfig& cfg, std::string& strategy) {
    cmd->add_option("--restarts", cfg.restarts, "ALS restarts");
    cmd->add_option("--max-iters", cfg.max_iters, "ALS sweep limit");
    cmd->add_option("--tol-change", cfg.tol_rel_change, "ALS residual-change tolerance");
    cmd->add_option("--tol-rank", cfg.tol_rank, "Relative singular value cutoff");
    cmd->add_option("--strategy", strategy, "Tensor DMD strategy")
        ->check(CLI::IsMember({"stacked", "per_slice_mean"}));
}

DmdStrategy parse_strategy(const std::string& s) {
    return s == "per_slice_mean" ? DmdStrategy::PerSliceMean : DmdStrategy::Stacked;
}

void warn_inconsistent(const DmdResult& res) {
    for (std::size_t j = 0; j < res.diagnostics.slice_consistent.size(); ++j)
        if (!res.diagnostics.slice_consistent[j])
            std::fprintf(stderr,
                         "warning: slice pair %zu is not linearly consistent "
                         "(violation %.3e)\n",
                         j, res.diagnostics.slice_violation[j]);
}

CPConfig cp_config(const ExperimentConfig& cfg) {
    CPConfig ccfg;
    ccfg.R = cfg.R;
    ccfg.max_iters = cfg.max_iters;
    ccfg.tol_rel_change = cfg.tol_rel_change;
    ccfg.restarts = cfg.restarts;
    ccfg.seed = cfg.seed;
    return ccfg;
}

void print_report(const MatchReport& rep) {
    std::printf("mean_error        %.6e\n", rep.mean_error);
    std::printf("dmd_residual      %.6e\n", rep.dmd_residual);
    std::printf("cp_residual       %.6e\n", rep.cp_residual);
    std::printf("kruskal_satisfied %s\n", rep.kruskal_satisfied ? "yes" : "no");
    std::printf("permutation      ");
    for (const Index p : rep.permutation) std::printf(" %lld", static_cast<long long>(p));
    std::printf("\n");
}

int run(int argc, char** argv) {
    CLI::App app{"Exact DMD and CP decomposition of third-order snapshot tensors"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string strategy = "stacked";
    std::string x_path, y_path, dmd_path, cp_path, out;

    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic tensor pair");
    add_synth_options(synth_cmd, cfg);
    synth_cmd->add_option("--out", out, "Output prefix")->default_val("synth");

    CLI::App* dmd_cmd =
        app.add_subcommand("dmd", "Exact DMD of a tensor pair (files or synthetic)");
    add_synth_options(dmd_cmd, cfg);
    add_solver_options(dmd_cmd, cfg, strategy);
    dmd_cmd->add_option("--x", x_path, "Tensor JSON for X");
    dmd_cmd->add_option("--y", y_path, "Tensor JSON for Y");
    dmd_cmd->add_option("--out", out, "Output path")->default_val("dmd.json");

    CLI::App* cp_cmd =
        app.add_subcommand("cp", "CP decomposition by multi-restart ALS");
    add_synth_options(cp_cmd, cfg);
    add_solver_options(cp_cmd, cfg, strategy);
    cp_cmd->add_option("--y", y_path, "Tensor JSON to decompose");
    cp_cmd->add_option("--out", out, "Output path")->default_val("cp.json");

    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Match DMD factors against CP factors (files or full pipeline)");
    add_synth_options(compare_cmd, cfg);
    add_solver_options(compare_cmd, cfg, strategy);
    compare_cmd->add_option("--y", y_path, "Tensor JSON for Y");
    compare_cmd->add_option("--dmd", dmd_path, "DMD factors JSON");
    compare_cmd->add_option("--cp", cp_path, "CP factors JSON");
    compare_cmd->add_option("--out", out, "Report JSON path");

    CLI::App* bench_cmd =
        app.add_subcommand("bench", "Multi-trial DMD vs CP benchmark");
    add_synth_options(bench_cmd, cfg);
    add_solver_options(bench_cmd, cfg, strategy);
    bench_cmd->add_option("--trials", cfg.trials, "Trial count");
    bench_cmd->add_option("--out", out, "Output prefix")->default_val("bench");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Benchmark across several time-step counts");
    add_synth_options(sweep_cmd, cfg);
    add_solver_options(sweep_cmd, cfg, strategy);
    sweep_cmd->add_option("--trials", cfg.trials, "Trials per N")->default_val(25);
    sweep_cmd->add_option("--sweep", cfg.sweep_steps, "N values")->delimiter(',');
    sweep_cmd->add_option("--out", out, "Output prefix")->default_val("sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    cfg.strategy = parse_strategy(strategy);
    cfg.out_path = out;

    if (synth_cmd->parsed()) {
        const SynthData data = synth_generate(cfg.synth_config(cfg.seed));
        tensor_io_write(data.X, out + "_X.json");
        tensor_io_write(data.Y, out + "_Y.json");
        truth_io_write(data.truth, out + "_truth.json");
        std::printf("wrote %s_X.json, %s_Y.json, %s_truth.json\n", out.c_str(),
                    out.c_str(), out.c_str());
        return 0;
    }

    if (dmd_cmd->parsed()) {
        Tensor3 x, y;
        if (!x_path.empty() || !y_path.empty()) {
            if (x_path.empty() || y_path.empty())
                throw DataError("dmd: --x and --y must be given together");
            x = tensor_io_read(x_path);
            y = tensor_io_read(y_path);
        } else {
            SynthData data = synth_generate(cfg.synth_config(cfg.seed));
            x = std::move(data.X);
            y = std::move(data.Y);
        }
        const DmdResult res = dmd_tensor(x, y, cfg.strategy, cfg.tol_rank);
        warn_inconsistent(res);
        dmd_io_write(res, x.dim(1), out);
        std::printf("rank %lld, wrote %s\n", static_cast<long long>(res.rank_used),
                    out.c_str());
        return 0;
    }

    if (cp_cmd->parsed()) {
        Tensor3 y;
        if (!y_path.empty())
            y = tensor_io_read(y_path);
        else
            y = synth_generate(cfg.synth_config(cfg.seed)).Y;
        const CPResult res = cp_als(y, cp_config(cfg));
        factors_io_write(res.factors, out);
        std::printf("rel_residual %.6e after %d sweeps (restart %d%s), wrote %s\n",
                    res.rel_residual, res.iters, res.restart_index,
                    res.converged ? "" : ", not converged", out.c_str());
        return res.converged ? 0 : 3;
    }

    if (compare_cmd->parsed()) {
        MatchReport rep;
        if (!y_path.empty() || !dmd_path.empty() || !cp_path.empty()) {
            if (y_path.empty() || dmd_path.empty() || cp_path.empty())
                throw DataError("compare: --y, --dmd and --cp must be given together");
            const Tensor3 y = tensor_io_read(y_path);
            rep = compare_report(y, factors_io_read(dmd_path), factors_io_read(cp_path));
        } else {
            const SynthData data = synth_generate(cfg.synth_config(cfg.seed));
            const DmdResult dmd = dmd_tensor(data.X, data.Y, cfg.strategy, cfg.tol_rank);
            warn_inconsistent(dmd);
            const CPResult cp = cp_als(data.Y, cp_config(cfg));
            rep = compare_report(data.Y, dmd_to_cp(dmd, cfg.N), cp.factors);
        }
        print_report(rep);
        if (!out.empty()) report_io_write(rep, out);
        return 0;
    }

    if (bench_cmd->parsed()) {
        const BenchReport report = bench(cfg);
        write_trials_csv(report.records, out + "_trials.csv");
        write_summary_json(report, out + "_summary.json");
        std::printf("trials %d, failed %d, cp_nonconverged %d\n", report.summary.trials,
                    report.summary.failed, report.summary.cp_nonconverged);
        if (report.summary.succeeded > 0)
            std::printf("mean_error median %.6e (min %.6e, max %.6e)\n",
                        report.summary.median_mean_error, report.summary.min_mean_error,
                        report.summary.max_mean_error);
        std::printf("wrote %s_trials.csv, %s_summary.json\n", out.c_str(), out.c_str());
        return 0;
    }

    // sweep
    const std::vector<SweepRow> rows = sweep(cfg);
    write_sweep_csv(rows, out + "_sweep.csv");
    for (const SweepRow& row : rows)
        std::printf("N %5lld  median %.6e  discrepancy fraction %.3f\n",
                    static_cast<long long>(row.N), row.median_mean_error,
                    row.discrepancy_fraction);
    std::printf("wrote %s_sweep.csv\n", out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const dmdcp::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const dmdcp::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
