// Command-line front end: experiment campaigns, the numerical baseline,
// model evaluation, single simulations and dataset export.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "symvf/experiment.hpp"

namespace {

struct CommonOpts {
    std::string preset;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::optional<std::string> method;
    std::optional<int> n_i;
    std::optional<int> n_g;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--preset", opts.preset, "Built-in preset: friction, pend1, pend2, magman");
    cmd->add_option("--config", opts.config_path, "JSON config file (overrides the preset)");
    cmd->add_option("--seed", opts.seed, "Base randomization seed");
    cmd->add_option("--runs", opts.runs, "Number of runs in the campaign");
    cmd->add_option("--threads", opts.threads, "Worker threads");
    cmd->add_option("--out", opts.out, "Output directory");
    cmd->add_option("--method", opts.method, "Solver method: direct, svi, spi");
    cmd->add_option("--ni", opts.n_i, "Solver iterations n_i");
    cmd->add_option("--ng", opts.n_g, "GP generations per iteration n_g");
}

symvf::ExperimentConfig resolve_config(const CommonOpts& opts) {
    symvf::ExperimentConfig cfg;
    if (!opts.config_path.empty())
        cfg = symvf::load_config(opts.config_path);
    else if (!opts.preset.empty())
        cfg = symvf::make_preset(opts.preset);
    else
        throw std::runtime_error("either --preset or --config is required");
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.runs) cfg.runs = *opts.runs;
    if (opts.threads) cfg.threads = *opts.threads;
    if (opts.out) cfg.output_dir = *opts.out;
    if (opts.method) {
        const auto method = symvf::parse_method(*opts.method);
        if (method != cfg.solver.method && !opts.n_i)
            cfg.solver.n_i = method == symvf::SolverMethod::Spi ? 30 : 50;
        cfg.solver.method = method;
    }
    if (opts.n_i) cfg.solver.n_i = *opts.n_i;
    if (opts.n_g) cfg.solver.gp.generations = *opts.n_g;
    cfg.validate();
    return cfg;
}

void print_metrics(const symvf::Metrics& m, int parameters) {
    std::printf("BE       %.6g\n", m.be);
    std::printf("R_gamma  %.6g\n", m.r_gamma);
    std::printf("S        %.6g %%\n", m.s);
    std::printf("params   %d\n", parameters);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic value functions for nonlinear control benchmarks"};
    app.require_subcommand(1);

    CommonOpts run_opts, baseline_opts, eval_opts, sim_opts, data_opts;

    auto* run_cmd = app.add_subcommand("run", "Run a multi-seed solver campaign");
    add_common(run_cmd, run_opts);

    auto* baseline_cmd = app.add_subcommand("baseline", "Fuzzy V-iteration reference solution");
    add_common(baseline_cmd, baseline_opts);

    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a stored V-function");
    std::string eval_model;
    bool eval_traj = false;
    bool eval_surface = false;
    int surface_points = 101;
    eval_cmd->add_option("--model", eval_model, "Model .json or baseline .csv file")->required();
    eval_cmd->add_flag("--trajectories", eval_traj, "Write per-initial-state trajectory CSVs");
    eval_cmd->add_flag("--surface", eval_surface, "Write a V-surface grid CSV");
    eval_cmd->add_option("--surface-points", surface_points, "Surface grid resolution");
    add_common(eval_cmd, eval_opts);

    auto* sim_cmd = app.add_subcommand("simulate", "Closed-loop simulation from one state");
    std::string sim_model;
    std::string sim_x0;
    double sim_tsim = -1.0;
    std::string sim_out = "trajectory.csv";
    sim_cmd->add_option("--model", sim_model, "Model .json or baseline .csv file")->required();
    sim_cmd->add_option("--x0", sim_x0, "Initial state, comma separated")->required();
    sim_cmd->add_option("--tsim", sim_tsim, "Simulation horizon in seconds");
    sim_cmd->add_option("--traj-out", sim_out, "Trajectory CSV path");
    add_common(sim_cmd, sim_opts);

    auto* data_cmd = app.add_subcommand("dataset", "Export the training set as CSV");
    std::string data_out = "dataset.csv";
    data_cmd->add_option("--file", data_out, "Dataset CSV path");
    add_common(data_cmd, data_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto cfg = resolve_config(run_opts);
            const auto result = symvf::run_experiment(cfg);
            int failed = 0;
            for (const auto& run : result.runs) {
                if (run.failed) {
                    ++failed;
                    std::fprintf(stderr, "run %d failed: %s\n", run.run, run.error.c_str());
                }
            }
            if (!result.stats) {
                std::fprintf(stderr, "all %d runs failed\n", cfg.runs);
                return 1;
            }
            const auto& st = *result.stats;
            std::printf("campaign %s: %d/%d runs ok\n", result.directory.c_str(),
                        st.runs - failed, cfg.runs);
            std::printf("BE      med %.6g  [%.6g, %.6g]\n", st.be.median, st.be.min, st.be.max);
            std::printf("R_gamma med %.6g  [%.6g, %.6g]\n", st.r_gamma.median, st.r_gamma.min,
                        st.r_gamma.max);
            std::printf("S       med %.6g  [%.6g, %.6g], S=100%% in %d/%d runs\n", st.s.median,
                        st.s.min, st.s.max, st.runs_with_full_success, st.runs);
            return 0;
        }
        if (baseline_cmd->parsed()) {
            const auto cfg = resolve_config(baseline_opts);
            const auto out = symvf::run_baseline(cfg);
            std::printf("baseline written to %s (%d sweeps, %s)\n", out.file.c_str(), out.sweeps,
                        out.converged ? "converged" : "NOT converged");
            print_metrics(out.metrics, static_cast<int>(out.parameters));
            return 0;
        }
        if (eval_cmd->parsed()) {
            const auto cfg = resolve_config(eval_opts);
            const auto out = symvf::evaluate_model_file(eval_model, cfg);
            print_metrics(out.metrics, out.parameters);
            const auto env = symvf::make_env_from_config(cfg);
            namespace fs = std::filesystem;
            if (eval_traj) {
                fs::create_directories(cfg.output_dir);
                const auto v = symvf::load_vfunction(eval_model);
                for (size_t s = 0; s < cfg.sim.x_init.size(); ++s) {
                    const auto traj = symvf::simulate(env, v, cfg.sim.x_init[s], cfg.sim.T_sim);
                    std::ostringstream name;
                    name << "trajectory_" << s << ".csv";
                    symvf::save_trajectory_csv(traj, (fs::path(cfg.output_dir) / name.str()).string());
                }
                std::printf("wrote %zu trajectories to %s\n", cfg.sim.x_init.size(),
                            cfg.output_dir.c_str());
            }
            if (eval_surface) {
                fs::create_directories(cfg.output_dir);
                const auto v = symvf::load_vfunction(eval_model);
                const auto path = (fs::path(cfg.output_dir) / "surface.csv").string();
                symvf::save_surface_csv(v, env, surface_points, path);
                std::printf("wrote surface to %s\n", path.c_str());
            }
            return 0;
        }
        if (sim_cmd->parsed()) {
            const auto cfg = resolve_config(sim_opts);
            const auto env = symvf::make_env_from_config(cfg);
            symvf::Vec x0;
            std::istringstream xs(sim_x0);
            std::string cell;
            while (std::getline(xs, cell, ',')) x0.push_back(std::stod(cell));
            if (x0.size() != env.state_dim)
                throw std::runtime_error("x0 dimension does not match the environment");
            const auto v = symvf::load_vfunction(sim_model);
            const double horizon = sim_tsim > 0 ? sim_tsim : cfg.sim.T_sim;
            const auto traj = symvf::simulate(env, v, x0, horizon);
            symvf::save_trajectory_csv(traj, sim_out);
            double ret = 0.0, g = 1.0;
            for (double r : traj.rewards) {
                ret += g * r;
                g *= env.gamma;
            }
            std::printf("wrote %s (%zu steps, discounted return %.6g)\n", sim_out.c_str(),
                        traj.rewards.size(), ret);
            return 0;
        }
        if (data_cmd->parsed()) {
            const auto cfg = resolve_config(data_opts);
            const auto env = symvf::make_env_from_config(cfg);
            const auto states = symvf::sample_state_grid(env.state_bounds, cfg.grid);
            const auto d = symvf::build_dataset(env, states, env.actions, cfg.threads);
            symvf::save_dataset_csv(d, data_out);
            std::printf("wrote %s (n_x=%zu, n_u=%zu)\n", data_out.c_str(), d.n_x(), d.n_u());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
