#pragma once

#include <chrono>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "symvf/dataset.hpp"
#include "symvf/evaluation.hpp"
#include "symvf/gp.hpp"
#include "symvf/model.hpp"

namespace symvf {

enum class SolverMethod { Direct, Svi, Spi };

inline const char* method_name(SolverMethod m) {
    switch (m) {
    case SolverMethod::Direct: return "direct";
    case SolverMethod::Svi: return "svi";
    case SolverMethod::Spi: return "spi";
    }
    return "?";
}

inline SolverMethod parse_method(const std::string& s) {
    if (s == "direct") return SolverMethod::Direct;
    if (s == "svi") return SolverMethod::Svi;
    if (s == "spi") return SolverMethod::Spi;
    throw std::invalid_argument("unknown solver method '" + s + "'");
}

struct SolverConfig {
    SolverMethod method = SolverMethod::Svi;
    int n_i = 50; // 30 for SPI by convention; set by the config layer
    std::optional<double> epsilon; // convergence threshold; absent = run all n_i
    GPConfig gp;
    bool warm_start = true;

    void validate() const {
        if (n_i < 1) throw std::invalid_argument("solver: n_i must be >= 1");
        gp.validate();
    }
};

// ---------------------------------------------------------------------------
// Targets, samples and the three fitness functions

// t_i = max_j ( r_ij + gamma * V_prev(x_ij) ). Non-finite predictions lose the
// max; a state where every action is non-finite is an error.
inline std::vector<double> compute_svi_targets(const TransitionDataset& d, const VFunction& v_prev,
                                               double gamma, int threads = 1) {
    std::vector<double> t(d.n_x());
    parallel_for(d.n_x(), threads, [&](size_t i) {
        double best = -std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < d.n_u(); ++j) {
            const double s = d.rewards[i][j] + gamma * v_prev(d.next_states[i][j]);
            if (std::isfinite(s) && s > best) best = s;
        }
        t[i] = best;
    });
    for (size_t i = 0; i < t.size(); ++i)
        if (!std::isfinite(t[i]))
            throw std::runtime_error("compute_svi_targets: every action non-finite at state " +
                                     std::to_string(i));
    return t;
}

inline std::vector<double> compute_svi_targets(const TransitionDataset& d,
                                               const SymbolicModel& v_prev, double gamma,
                                               int threads = 1) {
    return compute_svi_targets(d, as_vfunction(v_prev), gamma, threads);
}

struct SpiSample {
    Vec x;
    Vec x_star;
    double r_star;
};

// j* = argmax_j ( r_ij + gamma * V_prev(x_ij) ), ties by lowest j.
inline std::vector<SpiSample> select_spi_samples(const TransitionDataset& d,
                                                 const VFunction& v_prev, double gamma,
                                                 int threads = 1) {
    std::vector<SpiSample> out(d.n_x());
    std::vector<char> ok(d.n_x(), 1);
    parallel_for(d.n_x(), threads, [&](size_t i) {
        size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        bool found = false;
        for (size_t j = 0; j < d.n_u(); ++j) {
            const double s = d.rewards[i][j] + gamma * v_prev(d.next_states[i][j]);
            if (std::isfinite(s) && s > best_score) {
                best_score = s;
                best = j;
                found = true;
            }
        }
        ok[i] = found ? 1 : 0;
        out[i] = {d.states[i], d.next_states[i][best], d.rewards[i][best]};
    });
    for (size_t i = 0; i < ok.size(); ++i)
        if (!ok[i])
            throw std::runtime_error("select_spi_samples: every action non-finite at state " +
                                     std::to_string(i));
    return out;
}

inline std::vector<SpiSample> select_spi_samples(const TransitionDataset& d,
                                                 const SymbolicModel& v_prev, double gamma,
                                                 int threads = 1) {
    return select_spi_samples(d, as_vfunction(v_prev), gamma, threads);
}

// J = (1/n_x) sum_i ( t_i - V(x_i) )^2
inline double svi_fitness(const SymbolicModel& m, const std::vector<Vec>& states,
                          std::span<const double> targets) {
    const CompiledModel v(m);
    double acc = 0.0;
    for (size_t i = 0; i < states.size(); ++i) {
        const double e = targets[i] - v(states[i]);
        acc += e * e;
    }
    const double j = acc / static_cast<double>(states.size());
    return std::isfinite(j) ? j : std::numeric_limits<double>::infinity();
}

// J = (1/n_x) sum_i ( r_i* - [V(x_i) - gamma V(x_i*)] )^2
inline double spi_fitness(const SymbolicModel& m, const std::vector<SpiSample>& samples,
                          double gamma) {
    const CompiledModel v(m);
    double acc = 0.0;
    for (const auto& s : samples) {
        const double e = s.r_star - (v(s.x) - gamma * v(s.x_star));
        acc += e * e;
    }
    const double j = acc / static_cast<double>(samples.size());
    return std::isfinite(j) ? j : std::numeric_limits<double>::infinity();
}

// J = (1/n_x) sum_i [ max_j ( r_ij + gamma V(x_ij) ) - V(x_i) ]^2  (= BE^2)
inline double direct_fitness(const SymbolicModel& m, const TransitionDataset& d, double gamma) {
    const CompiledModel v(m);
    double acc = 0.0;
    for (size_t i = 0; i < d.n_x(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < d.n_u(); ++j)
            best = std::max(best, d.rewards[i][j] + gamma * v(d.next_states[i][j]));
        const double e = best - v(d.states[i]);
        acc += e * e;
    }
    const double j = acc / static_cast<double>(d.n_x());
    return std::isfinite(j) ? j : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Solver loops

using IterationSink = std::function<void(const IterationRecord&)>;

namespace detail {

inline IterationRecord make_record(int iteration, const EvolveResult& res, const EnvModel& env,
                                   const TransitionDataset& d, const SimSpec& sim, int threads,
                                   double wall_s) {
    IterationRecord rec;
    rec.iteration = iteration;
    rec.model = res.best;
    rec.fitness = res.best_fitness;
    rec.gp_best_history = res.history;
    const Metrics metrics = evaluate_vfunction(env, d, as_vfunction(res.best), sim, threads);
    rec.be = metrics.be;
    rec.r_gamma = metrics.r_gamma;
    rec.s = metrics.s;
    rec.wall_s = wall_s;
    return rec;
}

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace detail

// Symbolic value iteration: V_0 = 0; each iteration fits the evolved model to
// the Bellman targets computed from the previous iteration's best model.
inline std::vector<IterationRecord> run_svi(const TransitionDataset& d, const EnvModel& env,
                                            const SolverConfig& cfg, const SimSpec& sim,
                                            const IterationSink& sink = nullptr) {
    cfg.validate();
    auto ctx = std::make_shared<RegressionEvaluator>(d.states);
    GPEngine engine(cfg.gp, env.state_dim, ctx);

    std::vector<IterationRecord> records;
    SymbolicModel v_prev = SymbolicModel::zero();
    std::vector<double> prev_pred(d.n_x(), 0.0);
    for (int ell = 1; ell <= cfg.n_i; ++ell) {
        detail::StopWatch watch;
        ctx->set_targets(compute_svi_targets(d, v_prev, env.gamma, cfg.gp.threads));
        if (!cfg.warm_start && ell > 1) engine.reset_population(static_cast<std::uint64_t>(ell));
        const EvolveResult res = engine.evolve(cfg.gp.generations);
        records.push_back(
            detail::make_record(ell, res, env, d, sim, cfg.gp.threads, watch.seconds()));
        if (sink) sink(records.back());

        const CompiledModel v(res.best);
        double sup_change = 0.0;
        std::vector<double> pred(d.n_x());
        for (size_t i = 0; i < d.n_x(); ++i) {
            pred[i] = v(d.states[i]);
            sup_change = std::max(sup_change, std::abs(pred[i] - prev_pred[i]));
        }
        v_prev = res.best;
        prev_pred.swap(pred);
        if (cfg.epsilon && sup_change <= *cfg.epsilon) break;
    }
    return records;
}

// Symbolic policy iteration: targets are the rewards of the currently greedy
// action; the residual couples V at the state and at the greedy next state.
inline std::vector<IterationRecord> run_spi(const TransitionDataset& d, const EnvModel& env,
                                            const SolverConfig& cfg, const SimSpec& sim,
                                            const IterationSink& sink = nullptr) {
    cfg.validate();
    auto ctx = std::make_shared<RegressionEvaluator>(d.states, env.gamma);
    GPEngine engine(cfg.gp, env.state_dim, ctx);

    std::vector<IterationRecord> records;
    SymbolicModel v_prev = SymbolicModel::zero();
    std::vector<double> prev_pred(d.n_x(), 0.0);
    for (int ell = 1; ell <= cfg.n_i; ++ell) {
        detail::StopWatch watch;
        auto samples = select_spi_samples(d, v_prev, env.gamma, cfg.gp.threads);
        std::vector<Vec> x_star(samples.size());
        std::vector<double> r_star(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) {
            x_star[i] = samples[i].x_star;
            r_star[i] = samples[i].r_star;
        }
        ctx->set_samples(std::move(x_star), std::move(r_star));
        if (!cfg.warm_start && ell > 1) engine.reset_population(static_cast<std::uint64_t>(ell));
        const EvolveResult res = engine.evolve(cfg.gp.generations);
        records.push_back(
            detail::make_record(ell, res, env, d, sim, cfg.gp.threads, watch.seconds()));
        if (sink) sink(records.back());

        const CompiledModel v(res.best);
        double sup_change = 0.0;
        std::vector<double> pred(d.n_x());
        for (size_t i = 0; i < d.n_x(); ++i) {
            pred[i] = v(d.states[i]);
            sup_change = std::max(sup_change, std::abs(pred[i] - prev_pred[i]));
        }
        v_prev = res.best;
        prev_pred.swap(pred);
        if (cfg.epsilon && sup_change <= *cfg.epsilon) break;
    }
    return records;
}

// Direct method: one continuous GP run against the squared Bellman residual,
// n_i * n_g generations in total, with a record every n_g generations so the
// history is comparable with the iterative solvers.
inline std::vector<IterationRecord> run_direct(const TransitionDataset& d, const EnvModel& env,
                                               const SolverConfig& cfg, const SimSpec& sim,
                                               const IterationSink& sink = nullptr) {
    cfg.validate();
    auto ctx = std::make_shared<BellmanEvaluator>(d, env.gamma);
    GPEngine engine(cfg.gp, env.state_dim, ctx);

    std::vector<IterationRecord> records;
    detail::StopWatch watch;
    double last_mark = 0.0;
    size_t history_mark = 0;
    engine.evolve_with_checkpoints(
        cfg.n_i * cfg.gp.generations, cfg.gp.generations,
        [&](int gen, const EvolveResult& so_far) {
            EvolveResult window = so_far;
            window.history.assign(so_far.history.begin() + static_cast<long>(history_mark),
                                  so_far.history.end());
            history_mark = so_far.history.size();
            const double now = watch.seconds();
            records.push_back(detail::make_record(gen / cfg.gp.generations, window, env, d, sim,
                                                  cfg.gp.threads, now - last_mark));
            last_mark = now;
            if (sink) sink(records.back());
        });
    return records;
}

inline std::vector<IterationRecord> run_solver(const TransitionDataset& d, const EnvModel& env,
                                               const SolverConfig& cfg, const SimSpec& sim,
                                               const IterationSink& sink = nullptr) {
    switch (cfg.method) {
    case SolverMethod::Direct: return run_direct(d, env, cfg, sim, sink);
    case SolverMethod::Svi: return run_svi(d, env, cfg, sim, sink);
    case SolverMethod::Spi: return run_spi(d, env, cfg, sim, sink);
    }
    throw std::logic_error("run_solver: bad method");
}

} // namespace symvf
