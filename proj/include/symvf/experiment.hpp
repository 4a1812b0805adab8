#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symvf/baseline.hpp"
#include "symvf/dataset.hpp"
#include "symvf/env.hpp"
#include "symvf/evaluation.hpp"
#include "symvf/solvers.hpp"

namespace symvf {

struct BaselineConfig {
    std::vector<int> grid;
    double tol = 1e-8;
    int max_sweeps = 5000;
};

// Everything needed to reproduce a campaign bit for bit.
struct ExperimentConfig {
    std::string preset;
    std::string env_name;
    ParamMap env_params;
    double gamma = 0.95;
    double Ts = 0.0; // 0 keeps the environment default
    int substeps = 1;
    std::vector<int> grid;
    std::vector<std::vector<double>> actions_per_dim; // empty keeps the default action set
    SolverConfig solver;
    SimSpec sim;
    BaselineConfig baseline;
    int runs = 30;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_dir = "out";
    bool cache_dataset = false;

    void validate() const {
        if (env_name.empty()) throw std::invalid_argument("config: environment name missing");
        if (gamma <= 0.0 || gamma >= 1.0)
            throw std::invalid_argument("config: gamma must be in (0, 1)");
        if (Ts < 0.0) throw std::invalid_argument("config: Ts must be positive");
        if (substeps < 1) throw std::invalid_argument("config: substeps must be >= 1");
        if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
        if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
        if (sim.T_end > sim.T_sim)
            throw std::invalid_argument("config: T_end must not exceed T_sim");
        for (int i = 0; i < sim.epsilon.size(); ++i)
            if (sim.epsilon[i] <= 0.0)
                throw std::invalid_argument("config: goal neighborhood must be positive");
        solver.validate();
    }
};

// ---------------------------------------------------------------------------
// Presets (the four benchmark problems with their published settings)

inline ExperimentConfig make_preset(const std::string& name) {
    ExperimentConfig cfg;
    cfg.preset = name;
    cfg.env_name = name;
    cfg.solver.method = SolverMethod::Svi;
    cfg.solver.n_i = 50;
    if (name == "friction") {
        cfg.Ts = 0.001;
        cfg.grid = {121};
        cfg.sim.T_sim = 1.0;
        cfg.sim.T_end = 0.01;
        cfg.sim.epsilon = {0.05};
        for (double v : linspace(-10.0, 10.0, 5)) cfg.sim.x_init.push_back({v});
        cfg.baseline.grid = {241};
    } else if (name == "pend1") {
        cfg.Ts = 0.05;
        cfg.grid = {31, 31};
        cfg.sim.T_sim = 5.0;
        cfg.sim.T_end = 2.0;
        cfg.sim.epsilon = {0.1, 1.0};
        for (double a : {0.0, kPi / 4, -kPi / 4, 3 * kPi / 8, -3 * kPi / 8, kPi / 2, -kPi / 2})
            cfg.sim.x_init.push_back({a, 0.0});
        cfg.baseline.grid = {31, 31};
    } else if (name == "pend2") {
        cfg.Ts = 0.01;
        cfg.grid = {11, 11, 11, 11};
        cfg.sim.T_sim = 10.0;
        cfg.sim.T_end = 2.0;
        cfg.sim.epsilon = {0.1, 1.0, 0.1, 1.0};
        for (double a1 : {-kPi, 0.0, kPi})
            for (double a2 : {-kPi, 0.0, kPi}) {
                if (a1 == 0.0 && a2 == 0.0) continue;
                cfg.sim.x_init.push_back({a1, 0.0, a2, 0.0});
            }
        cfg.sim.x_init.push_back({kPi / 2.0, 0.0, 0.0, 0.0});
        cfg.sim.x_init.push_back({-kPi / 2.0, 0.0, 0.0, 0.0});
        cfg.sim.x_init.push_back({0.0, 0.0, kPi / 2.0, 0.0});
        cfg.sim.x_init.push_back({kPi, 0.0, kPi / 2.0, 0.0});
        cfg.sim.x_init.push_back({kPi / 2.0, 0.0, kPi, 0.0});
        cfg.baseline.grid = {11, 11, 11, 11};
    } else if (name == "magman") {
        cfg.Ts = 0.01;
        cfg.grid = {27, 27};
        cfg.sim.T_sim = 3.0;
        cfg.sim.T_end = 1.0;
        cfg.sim.epsilon = {0.001, 1.0};
        for (double y : linspace(0.0, 0.05, 13)) cfg.sim.x_init.push_back({y, 0.0});
        cfg.baseline.grid = {41, 41};
    } else {
        throw std::invalid_argument("unknown preset '" + name +
                                    "' (expected friction, pend1, pend2 or magman)");
    }
    return cfg;
}

inline EnvModel make_env_from_config(const ExperimentConfig& cfg) {
    EnvModel env = make_env(cfg.env_name, cfg.env_params);
    env.gamma = cfg.gamma;
    if (cfg.Ts > 0.0) env.Ts = cfg.Ts;
    env.substeps = cfg.substeps;
    if (!cfg.actions_per_dim.empty()) {
        if (cfg.actions_per_dim.size() != static_cast<size_t>(env.input_dim))
            throw std::invalid_argument("config: actions_per_dim does not match input dimension");
        env.actions = detail::action_product(cfg.actions_per_dim);
    }
    return env;
}

// ---------------------------------------------------------------------------
// JSON round trip with unknown-key rejection

namespace cfgio {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument("config: unknown key '" + where + it.key() + "'");
    }
}

inline nlohmann::json gp_to_json(const GPConfig& gp) {
    return {{"population_size", gp.population_size},
            {"n_f", gp.n_f},
            {"max_depth", gp.max_depth},
            {"generations", gp.generations},
            {"tournament_size", gp.tournament_size},
            {"crossover_prob", gp.crossover_prob},
            {"mutation_prob", gp.mutation_prob},
            {"reproduction_prob", gp.reproduction_prob},
            {"const_range", {gp.const_lo, gp.const_hi}},
            {"ridge", gp.ridge},
            {"elite_count", gp.elite_count},
            {"function_prob", gp.function_prob},
            {"leaf_var_prob", gp.leaf_var_prob},
            {"const_sigma", gp.const_sigma}};
}

inline void gp_from_json(const nlohmann::json& j, GPConfig& gp) {
    reject_unknown(j,
                   {"population_size", "n_f", "max_depth", "generations", "tournament_size",
                    "crossover_prob", "mutation_prob", "reproduction_prob", "const_range", "ridge",
                    "elite_count", "function_prob", "leaf_var_prob", "const_sigma"},
                   "solver.gp.");
    if (j.contains("population_size")) gp.population_size = j["population_size"].get<int>();
    if (j.contains("n_f")) gp.n_f = j["n_f"].get<int>();
    if (j.contains("max_depth")) gp.max_depth = j["max_depth"].get<int>();
    if (j.contains("generations")) gp.generations = j["generations"].get<int>();
    if (j.contains("tournament_size")) gp.tournament_size = j["tournament_size"].get<int>();
    if (j.contains("crossover_prob")) gp.crossover_prob = j["crossover_prob"].get<double>();
    if (j.contains("mutation_prob")) gp.mutation_prob = j["mutation_prob"].get<double>();
    if (j.contains("reproduction_prob")) gp.reproduction_prob = j["reproduction_prob"].get<double>();
    if (j.contains("const_range")) {
        gp.const_lo = j["const_range"].at(0).get<double>();
        gp.const_hi = j["const_range"].at(1).get<double>();
    }
    if (j.contains("ridge")) gp.ridge = j["ridge"].get<double>();
    if (j.contains("elite_count")) gp.elite_count = j["elite_count"].get<int>();
    if (j.contains("function_prob")) gp.function_prob = j["function_prob"].get<double>();
    if (j.contains("leaf_var_prob")) gp.leaf_var_prob = j["leaf_var_prob"].get<double>();
    if (j.contains("const_sigma")) gp.const_sigma = j["const_sigma"].get<double>();
}

} // namespace cfgio

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json env_params = nlohmann::json::object();
    for (const auto& [k, v] : cfg.env_params) env_params[k] = v;
    nlohmann::json x_init = nlohmann::json::array();
    for (const auto& x : cfg.sim.x_init) x_init.push_back(std::vector<double>(x.begin(), x.end()));
    nlohmann::json j{
        {"environment", {{"name", cfg.env_name}, {"params", env_params}}},
        {"gamma", cfg.gamma},
        {"Ts", cfg.Ts},
        {"substeps", cfg.substeps},
        {"grid", cfg.grid},
        {"solver",
         {{"method", method_name(cfg.solver.method)},
          {"n_i", cfg.solver.n_i},
          {"warm_start", cfg.solver.warm_start},
          {"gp", cfgio::gp_to_json(cfg.solver.gp)}}},
        {"simulation",
         {{"x_init", x_init},
          {"T_sim", cfg.sim.T_sim},
          {"T_end", cfg.sim.T_end},
          {"epsilon", std::vector<double>(cfg.sim.epsilon.begin(), cfg.sim.epsilon.end())}}},
        {"baseline",
         {{"grid", cfg.baseline.grid}, {"tol", cfg.baseline.tol}, {"max_sweeps", cfg.baseline.max_sweeps}}},
        {"runs", cfg.runs},
        {"seed", cfg.seed},
        {"threads", cfg.threads},
        {"output_dir", cfg.output_dir},
        {"cache_dataset", cfg.cache_dataset}};
    if (!cfg.preset.empty()) j["preset"] = cfg.preset;
    if (cfg.solver.epsilon) j["solver"]["epsilon"] = *cfg.solver.epsilon;
    if (!cfg.actions_per_dim.empty()) j["actions_per_dim"] = cfg.actions_per_dim;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    cfgio::reject_unknown(j,
                          {"preset", "environment", "gamma", "Ts", "substeps", "grid",
                           "actions_per_dim", "solver", "simulation", "baseline", "runs", "seed",
                           "threads", "output_dir", "cache_dataset"},
                          "");
    ExperimentConfig cfg;
    if (j.contains("preset")) cfg = make_preset(j["preset"].get<std::string>());

    if (j.contains("environment")) {
        const auto& e = j["environment"];
        cfgio::reject_unknown(e, {"name", "params"}, "environment.");
        if (e.contains("name")) {
            const auto name = e["name"].get<std::string>();
            if (!cfg.preset.empty() && name != cfg.env_name)
                throw std::invalid_argument("config: environment.name conflicts with preset");
            cfg.env_name = name;
        }
        if (e.contains("params"))
            for (auto it = e["params"].begin(); it != e["params"].end(); ++it)
                cfg.env_params[it.key()] = it.value().get<double>();
    }
    if (cfg.preset.empty() && cfg.env_name.empty())
        throw std::invalid_argument("config: either preset or environment.name is required");
    if (cfg.preset.empty()) {
        // sensible generic defaults from the named environment
        ExperimentConfig base = make_preset(cfg.env_name);
        base.preset.clear();
        base.env_params = cfg.env_params;
        cfg = std::move(base);
        if (j.contains("environment") && j["environment"].contains("params"))
            for (auto it = j["environment"]["params"].begin();
                 it != j["environment"]["params"].end(); ++it)
                cfg.env_params[it.key()] = it.value().get<double>();
    }

    if (j.contains("gamma")) cfg.gamma = j["gamma"].get<double>();
    if (j.contains("Ts")) cfg.Ts = j["Ts"].get<double>();
    if (j.contains("substeps")) cfg.substeps = j["substeps"].get<int>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<std::vector<int>>();
    if (j.contains("actions_per_dim"))
        cfg.actions_per_dim = j["actions_per_dim"].get<std::vector<std::vector<double>>>();

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        cfgio::reject_unknown(s, {"method", "n_i", "epsilon", "warm_start", "gp"}, "solver.");
        if (s.contains("method")) {
            cfg.solver.method = parse_method(s["method"].get<std::string>());
            if (!s.contains("n_i")) cfg.solver.n_i = cfg.solver.method == SolverMethod::Spi ? 30 : 50;
        }
        if (s.contains("n_i")) cfg.solver.n_i = s["n_i"].get<int>();
        if (s.contains("epsilon")) cfg.solver.epsilon = s["epsilon"].get<double>();
        if (s.contains("warm_start")) cfg.solver.warm_start = s["warm_start"].get<bool>();
        if (s.contains("gp")) cfgio::gp_from_json(s["gp"], cfg.solver.gp);
    }

    if (j.contains("simulation")) {
        const auto& s = j["simulation"];
        cfgio::reject_unknown(s, {"x_init", "T_sim", "T_end", "epsilon"}, "simulation.");
        if (s.contains("x_init")) {
            cfg.sim.x_init.clear();
            for (const auto& row : s["x_init"])
                cfg.sim.x_init.push_back(Vec::from(row.get<std::vector<double>>()));
        }
        if (s.contains("T_sim")) cfg.sim.T_sim = s["T_sim"].get<double>();
        if (s.contains("T_end")) cfg.sim.T_end = s["T_end"].get<double>();
        if (s.contains("epsilon")) cfg.sim.epsilon = Vec::from(s["epsilon"].get<std::vector<double>>());
    }

    if (j.contains("baseline")) {
        const auto& b = j["baseline"];
        cfgio::reject_unknown(b, {"grid", "tol", "max_sweeps"}, "baseline.");
        if (b.contains("grid")) cfg.baseline.grid = b["grid"].get<std::vector<int>>();
        if (b.contains("tol")) cfg.baseline.tol = b["tol"].get<double>();
        if (b.contains("max_sweeps")) cfg.baseline.max_sweeps = b["max_sweeps"].get<int>();
    }

    if (j.contains("runs")) cfg.runs = j["runs"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("cache_dataset")) cfg.cache_dataset = j["cache_dataset"].get<bool>();

    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config file " + path + ": " + e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Dataset construction (with optional CSV cache keyed by a config hash)

inline std::uint64_t dataset_config_hash(const ExperimentConfig& cfg, const EnvModel& env) {
    nlohmann::json key{{"env", cfg.env_name},
                       {"gamma", env.gamma},
                       {"Ts", env.Ts},
                       {"substeps", env.substeps},
                       {"grid", cfg.grid}};
    for (const auto& [k, v] : cfg.env_params) key["params"][k] = v;
    nlohmann::json acts = nlohmann::json::array();
    for (const auto& u : env.actions) acts.push_back(std::vector<double>(u.begin(), u.end()));
    key["actions"] = acts;
    const std::string dump = key.dump();
    return fnv1a(dump.data(), dump.size());
}

inline TransitionDataset build_dataset_from_config(const ExperimentConfig& cfg, const EnvModel& env) {
    const auto states = sample_state_grid(env.state_bounds, cfg.grid);
    if (!cfg.cache_dataset) return build_dataset(env, states, env.actions, cfg.threads);

    namespace fs = std::filesystem;
    const std::uint64_t hash = dataset_config_hash(cfg, env);
    std::ostringstream name;
    name << "dataset_" << std::hex << hash << ".csv";
    const fs::path cache = fs::path(cfg.output_dir) / name.str();
    if (fs::exists(cache)) return load_dataset_csv(cache.string(), env.state_dim, env.input_dim);
    TransitionDataset d = build_dataset(env, states, env.actions, cfg.threads);
    fs::create_directories(cache.parent_path());
    save_dataset_csv(d, cache.string());
    return d;
}

// ---------------------------------------------------------------------------
// Campaigns

struct RunOutcome {
    int run = 0;
    bool failed = false;
    std::string error;
    std::vector<IterationRecord> records;
};

struct CampaignResult {
    std::string directory;
    std::vector<RunOutcome> runs;
    std::optional<RunStatistics> stats; // absent when every run failed
};

namespace detail {

inline void write_metrics_header(std::ofstream& out) {
    out << "run,iteration,BE,R_gamma,S,params,wall_s\n";
}

inline void write_metrics_row(std::ofstream& out, int run, const IterationRecord& rec) {
    out << run << "," << rec.iteration << "," << format_double(rec.be) << ","
        << format_double(rec.r_gamma) << "," << format_double(rec.s) << ","
        << count_parameters(rec.model) << "," << format_double(rec.wall_s) << "\n";
    out.flush(); // partial results survive interruption
}

inline std::string run_dir_name(int run) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "run_%03d", run);
    return buf;
}

inline std::string model_file_name(int iteration) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "model_%03d.json", iteration);
    return buf;
}

} // namespace detail

// n_r runs with seeds base_seed + r, one directory per run, plus a campaign
// summary. Individual run failures are recorded and the campaign continues.
inline CampaignResult run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    cfg.validate();
    const EnvModel env = make_env_from_config(cfg);
    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    {
        std::ofstream cfg_out(out_dir / "config.json");
        cfg_out << config_to_json(cfg).dump(2) << "\n";
    }
    const TransitionDataset dataset = build_dataset_from_config(cfg, env);

    CampaignResult result;
    result.directory = out_dir.string();
    result.runs.resize(static_cast<size_t>(cfg.runs));

    const int run_workers = std::max(1, std::min(cfg.threads, cfg.runs));
    const int inner_threads = std::max(1, cfg.threads / run_workers);
    parallel_for(static_cast<size_t>(cfg.runs), run_workers, [&](size_t r) {
        RunOutcome& outcome = result.runs[r];
        outcome.run = static_cast<int>(r);
        const fs::path run_dir = out_dir / detail::run_dir_name(static_cast<int>(r));
        fs::create_directories(run_dir);
        std::ofstream metrics(run_dir / "metrics.csv");
        detail::write_metrics_header(metrics);
        try {
            SolverConfig solver = cfg.solver;
            solver.gp.seed = cfg.seed + r;
            solver.gp.threads = inner_threads;
            IterationSink sink = [&](const IterationRecord& rec) {
                save_model(rec.model, (run_dir / detail::model_file_name(rec.iteration)).string());
                detail::write_metrics_row(metrics, static_cast<int>(r), rec);
            };
            outcome.records = run_solver(dataset, env, solver, cfg.sim, sink);
        } catch (const std::exception& e) {
            outcome.failed = true;
            outcome.error = e.what();
        }
    });

    std::vector<std::vector<IterationRecord>> histories;
    for (const auto& run : result.runs)
        if (!run.failed && !run.records.empty()) histories.push_back(run.records);

    std::ofstream failures;
    for (const auto& run : result.runs) {
        if (!run.failed) continue;
        if (!failures.is_open()) {
            failures.open(out_dir / "failures.csv");
            failures << "run,error\n";
        }
        failures << run.run << ",\"" << run.error << "\"\n";
    }

    if (!histories.empty()) {
        result.stats = run_statistics(histories);
        const RunStatistics& st = *result.stats;
        std::ofstream summary(out_dir / "summary.csv");
        summary << "runs,BE_median,BE_min,BE_max,R_median,R_min,R_max,S_median,S_min,S_max,"
                   "runs_with_S100\n";
        summary << st.runs << "," << format_double(st.be.median) << "," << format_double(st.be.min)
                << "," << format_double(st.be.max) << "," << format_double(st.r_gamma.median) << ","
                << format_double(st.r_gamma.min) << "," << format_double(st.r_gamma.max) << ","
                << format_double(st.s.median) << "," << format_double(st.s.min) << ","
                << format_double(st.s.max) << "," << st.runs_with_full_success << "\n";

        std::ofstream winners(out_dir / "winners.csv");
        winners << "run,winner_metric,iteration,BE,R_gamma,S,model_file\n";
        auto write_winner = [&](const char* metric, const WinnerRef& w) {
            winners << w.run << "," << metric << "," << w.iteration << "," << format_double(w.be)
                    << "," << format_double(w.r_gamma) << "," << format_double(w.s) << ","
                    << detail::run_dir_name(w.run) << "/" << detail::model_file_name(w.iteration)
                    << "\n";
        };
        for (const auto& w : st.winners_be) write_winner("BE", w);
        for (const auto& w : st.winners_r) write_winner("R_gamma", w);
        for (const auto& w : st.winners_s) write_winner("S", w);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Baseline and model evaluation entry points

struct BaselineOutcome {
    std::string file;
    Metrics metrics;
    size_t parameters = 0;
    bool converged = false;
    int sweeps = 0;
};

inline BaselineOutcome run_baseline(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    cfg.validate();
    const EnvModel env = make_env_from_config(cfg);
    const TransitionDataset dataset = build_dataset_from_config(cfg, env);
    const FuzzyVIResult vi = fuzzy_v_iteration(env, grid_axes_for(env, cfg.baseline.grid),
                                               cfg.baseline.tol, cfg.baseline.max_sweeps,
                                               cfg.threads);
    fs::create_directories(cfg.output_dir);
    BaselineOutcome out;
    out.file = (fs::path(cfg.output_dir) / ("baseline_" + cfg.env_name + ".csv")).string();
    save_baseline_csv(vi.approx, out.file);
    out.metrics = evaluate_vfunction(env, dataset, as_vfunction(vi.approx), cfg.sim, cfg.threads);
    out.parameters = vi.approx.size();
    out.converged = vi.converged;
    out.sweeps = vi.sweeps;
    return out;
}

// Loads either a symbolic model (.json) or an exported baseline (.csv).
inline VFunction load_vfunction(const std::string& path, int* parameters = nullptr) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        FuzzyApproximator fa = load_baseline_csv(path);
        if (parameters) *parameters = static_cast<int>(fa.size());
        return as_vfunction(fa);
    }
    const SymbolicModel m = load_model(path);
    if (parameters) *parameters = count_parameters(m);
    return as_vfunction(m);
}

struct EvaluationOutcome {
    Metrics metrics;
    int parameters = 0;
};

inline EvaluationOutcome evaluate_model_file(const std::string& path, const ExperimentConfig& cfg) {
    cfg.validate();
    const EnvModel env = make_env_from_config(cfg);
    EvaluationOutcome out;
    VFunction v;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        const SymbolicModel m = load_model(path);
        if (max_var_index(m) >= env.state_dim)
            throw std::runtime_error("model uses variable x" + std::to_string(max_var_index(m)) +
                                     " but '" + env.name + "' has " +
                                     std::to_string(env.state_dim) + " state dimensions");
        out.parameters = count_parameters(m);
        v = as_vfunction(m);
    } else {
        v = load_vfunction(path, &out.parameters);
    }
    const TransitionDataset dataset = build_dataset_from_config(cfg, env);
    out.metrics = evaluate_vfunction(env, dataset, v, cfg.sim, cfg.threads);
    return out;
}

inline void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trajectory file for writing: " + path);
    const int n = traj.states.empty() ? 0 : traj.states[0].size();
    const int m = traj.inputs.empty() ? 0 : traj.inputs[0].size();
    out << "t";
    for (int k = 0; k < n; ++k) out << ",x" << k;
    for (int k = 0; k < m; ++k) out << ",u" << k;
    out << ",r\n";
    for (size_t k = 0; k < traj.states.size(); ++k) {
        out << format_double(static_cast<double>(k) * traj.Ts);
        for (double v : traj.states[k]) out << "," << format_double(v);
        if (k < traj.inputs.size()) {
            for (double v : traj.inputs[k]) out << "," << format_double(v);
            out << "," << format_double(traj.rewards[k]);
        } else {
            for (int c = 0; c < m + 1; ++c) out << ",";
        }
        out << "\n";
    }
}

// V over a grid: (x..., V) rows. For state dimension > 2, the first two
// dimensions sweep and the rest stay at the goal.
inline void save_surface_csv(const VFunction& v, const EnvModel& env, int points_per_dim,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open surface file for writing: " + path);
    const int sweep_dims = std::min(env.state_dim, 2);
    for (int d = 0; d < sweep_dims; ++d) out << "x" << d << ",";
    out << "V\n";
    std::vector<std::vector<double>> axes;
    for (int d = 0; d < sweep_dims; ++d) {
        const DimBound& b = env.state_bounds[static_cast<size_t>(d)];
        axes.push_back(linspace(b.lo, b.hi, points_per_dim, !b.wrap));
    }
    Vec x = env.goal;
    if (sweep_dims == 1) {
        for (double a : axes[0]) {
            x[0] = a;
            out << format_double(a) << "," << format_double(v(x)) << "\n";
        }
    } else {
        for (double a : axes[0])
            for (double b : axes[1]) {
                x[0] = a;
                x[1] = b;
                out << format_double(a) << "," << format_double(b) << "," << format_double(v(x))
                    << "\n";
            }
    }
}

} // namespace symvf
