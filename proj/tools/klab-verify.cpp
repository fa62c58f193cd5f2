// Command-line front end: runs the verification suites, the Monge-Ampere
// solver sweeps, and writes structured reports plus plot-ready data.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "klab/ma_solver.hpp"
#include "klab/suites.hpp"

namespace {

int run_suites(const klab::RunConfig& cfg, const std::vector<std::string>& which)
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, std::vector<klab::VerificationReport>>> all;
    if (which.size() == 1 && which[0] == "all") {
        all = klab::run_all(cfg);
    } else {
        for (const auto& name : which) all.emplace_back(name, klab::run_suite(name, cfg));
    }

    std::vector<klab::VerificationReport> merged;
    for (const auto& [name, reports] : all) {
        for (const auto& r : reports) std::cout << "suite=" << name << " " << r.to_line() << "\n";
        if (!cfg.out_dir.empty()) klab::write_report_file(cfg.out_dir, name, reports);
        merged.insert(merged.end(), reports.begin(), reports.end());
    }
    std::cout << "\n" << klab::summary_table(merged);

    const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - t0);
    std::cout << "# elapsed " << dt.count() << " ms\n";  // footer, not part of report files
    return klab::exit_status(all);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"numerical verification lab for Kahler curvature identities"};
    app.require_subcommand(0, 1);

    klab::RunConfig cfg;
    std::string config_path;
    app.add_option("--suite", cfg.suite,
                   "suite selector: curvature|averages|royden|schwarz|ma|hyperbolicity|all");
    app.add_option("--config", config_path, "JSON config file (unknown keys rejected)");
    app.add_option("--seed", cfg.seed, "base random seed");
    app.add_option("--out", cfg.out_dir, "directory for per-suite report files");
    app.add_flag("--parallel", cfg.parallel, "run suites concurrently");
    app.add_option("--tol-scale", cfg.tol_scale, "scale factor applied to tolerance policy");
    bool show_registry = false;
    app.add_flag("--registry", show_registry, "print the claim registry and exit");

    auto* all_cmd = app.add_subcommand("verify-all", "run every suite");
    all_cmd->fallthrough();

    std::vector<CLI::App*> suite_cmds;
    for (const auto& name : klab::suite_names()) {
        auto* cmd = app.add_subcommand(name, "run the " + name + " suite");
        cmd->fallthrough();
        suite_cmds.push_back(cmd);
    }

    // suite-specific knobs
    auto* royden_cmd = *std::find_if(suite_cmds.begin(), suite_cmds.end(),
                                     [](CLI::App* c) { return c->get_name() == "royden"; });
    royden_cmd->add_option("--trials", cfg.royden_trials, "randomized trials");
    auto* ma_cmd = *std::find_if(suite_cmds.begin(), suite_cmds.end(),
                                 [](CLI::App* c) { return c->get_name() == "ma"; });
    ma_cmd->add_option("--background", cfg.ma_background, "background metric name");
    ma_cmd->add_option("--eps", cfg.ma_eps, "eps for the single solve");
    ma_cmd->add_option("--grid", cfg.ma_grid, "grid points per real axis");
    bool ma_log = false;
    std::string ma_dump;
    ma_cmd->add_flag("--log", ma_log, "print per-iteration solver records");
    ma_cmd->add_option("--dump", ma_dump, "write the solution as a binary grid dump");

    auto* sweep_cmd = app.add_subcommand("sweep", "solve an eps sweep and emit plot data");
    sweep_cmd->fallthrough();
    std::string sweep_background = "flat";
    int sweep_grid = 32;
    std::vector<double> sweep_eps = {0.4, 0.2, 0.1, 0.05};
    std::string sweep_out = "sweep.dat";
    sweep_cmd->add_option("--background", sweep_background, "background metric name");
    sweep_cmd->add_option("--grid", sweep_grid, "grid points per real axis");
    sweep_cmd->add_option("--eps-list", sweep_eps, "decreasing eps values");
    sweep_cmd->add_option("--out-file", sweep_out, "output path for plot columns");

    CLI11_PARSE(app, argc, argv);

    if (show_registry) {
        for (const auto& [id, statement] : klab::claim_registry())
            std::cout << id << ": " << statement << "\n";
        return 0;
    }

    try {
        if (!config_path.empty()) {
            const auto seen_seed = cfg.seed;
            const auto seen_suite = cfg.suite;
            klab::RunConfig loaded = klab::RunConfig::from_json_file(config_path);
            // command-line flags win over the config file
            if (app.count("--seed") == 0) cfg.seed = loaded.seed;
            else cfg.seed = seen_seed;
            if (app.count("--suite") == 0) cfg.suite = loaded.suite;
            else cfg.suite = seen_suite;
            if (app.count("--out") == 0) cfg.out_dir = loaded.out_dir;
            if (app.count("--tol-scale") == 0) cfg.tol_scale = loaded.tol_scale;
            if (app.count("--parallel") == 0) cfg.parallel = loaded.parallel;
            cfg.mc_samples = loaded.mc_samples;
            cfg.averages_tensors = loaded.averages_tensors;
            if (royden_cmd->count("--trials") == 0) cfg.royden_trials = loaded.royden_trials;
            cfg.royden_max_dim = loaded.royden_max_dim;
            cfg.schwarz_points = loaded.schwarz_points;
            cfg.fd_step = loaded.fd_step;
            cfg.trace_lemma_samples = loaded.trace_lemma_samples;
            if (ma_cmd->count("--grid") == 0) cfg.ma_grid = loaded.ma_grid;
            if (ma_cmd->count("--background") == 0) cfg.ma_background = loaded.ma_background;
            if (ma_cmd->count("--eps") == 0) cfg.ma_eps = loaded.ma_eps;
            cfg.ma_eps_list = loaded.ma_eps_list;
        }

        if (sweep_cmd->parsed()) {
            const auto bg = klab::make_model(sweep_background, 1, {});
            const auto rec = klab::eps_sweep(bg, 1, sweep_grid, sweep_eps);
            klab::emit_sweep_plotdata(rec, sweep_out);
            std::cout << "wrote " << sweep_out << " (slope " << rec.slope << ")\n";
            return rec.complete ? 0 : 1;
        }

        if (ma_log || !ma_dump.empty()) {
            const auto bg = klab::make_model(cfg.ma_background, 1, {});
            const auto prob = klab::assemble_problem(bg, 1, cfg.ma_eps, cfg.ma_grid);
            const auto st = klab::solve(prob, 1e-10, 80);
            if (ma_log)
                for (const auto& e : st.log)
                    std::printf("iter=%d residual=%.12e positivity=%.12e step=%.6f\n", e.iter,
                                e.residual, e.positivity, e.step);
            if (!ma_dump.empty()) {
                klab::dump_solution(ma_dump, prob, st);
                std::cout << "wrote " << ma_dump << "\n";
            }
        }

        std::vector<std::string> which;
        if (all_cmd->parsed()) {
            which = {"all"};
        } else {
            for (auto* cmd : suite_cmds)
                if (cmd->parsed()) which.push_back(cmd->get_name());
            if (which.empty()) which = {cfg.suite};
        }
        return run_suites(cfg, which);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
