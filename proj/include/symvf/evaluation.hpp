#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "symvf/dataset.hpp"
#include "symvf/env.hpp"
#include "symvf/model.hpp"
#include "symvf/parallel.hpp"

namespace symvf {

// Any deterministic state -> value mapping (symbolic model, numerical
// baseline, ...).
using VFunction = std::function<double(const Vec&)>;

inline VFunction as_vfunction(const SymbolicModel& m) {
    return [compiled = CompiledModel(m)](const Vec& x) { return compiled(x); };
}

struct SimSpec {
    std::vector<Vec> x_init;
    double T_sim = 1.0;
    double T_end = 0.0;
    Vec epsilon;
};

// Greedy action: argmax over U of rho(x,u,f(x,u)) + gamma V(f(x,u)), ties by
// lowest index. Computed with live step() calls.
inline int argmax_action(const VFunction& v, const EnvModel& env, const Vec& x) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < env.actions.size(); ++j) {
        auto [xn, r] = step(env, x, env.actions[j]);
        const double score = r + env.gamma * v(xn);
        if (std::isfinite(score) && score > best_score) {
            best_score = score;
            best = static_cast<int>(j);
        }
    }
    if (best < 0)
        throw std::runtime_error("argmax_policy: value non-finite for every action in '" +
                                 env.name + "'");
    return best;
}

inline Vec argmax_policy(const VFunction& v, const EnvModel& env, const Vec& x) {
    return env.actions[static_cast<size_t>(argmax_action(v, env, x))];
}

// Root mean squared Bellman error over the training set. Non-finite values
// propagate into the result rather than throwing.
inline double bellman_error(const VFunction& v, const TransitionDataset& d, double gamma) {
    double acc = 0.0;
    for (size_t i = 0; i < d.n_x(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < d.n_u(); ++j) {
            const double s = d.rewards[i][j] + gamma * v(d.next_states[i][j]);
            if (std::isnan(s)) return s;
            best = std::max(best, s);
        }
        const double e = best - v(d.states[i]);
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(d.n_x()));
}

struct Trajectory {
    std::vector<Vec> states; // K+1
    std::vector<Vec> inputs; // K
    std::vector<double> rewards; // K
    double Ts = 0.0;
};

inline Trajectory simulate(const EnvModel& env, const VFunction& v, const Vec& x0, double T_sim) {
    const int steps = static_cast<int>(std::llround(T_sim / env.Ts));
    Trajectory traj;
    traj.Ts = env.Ts;
    traj.states.reserve(static_cast<size_t>(steps) + 1);
    traj.inputs.reserve(static_cast<size_t>(steps));
    traj.rewards.reserve(static_cast<size_t>(steps));
    Vec x = env.apply_bounds(x0);
    traj.states.push_back(x);
    for (int k = 0; k < steps; ++k) {
        const Vec u = argmax_policy(v, env, x);
        auto [xn, r] = step(env, x, u);
        traj.inputs.push_back(u);
        traj.rewards.push_back(r);
        traj.states.push_back(xn);
        x = xn;
    }
    return traj;
}

// Mean over trajectories of sum_k gamma^k r_{k+1}.
inline double discounted_return(const std::vector<Trajectory>& trajectories, double gamma) {
    double total = 0.0;
    for (const auto& traj : trajectories) {
        double g = 1.0;
        double acc = 0.0;
        for (double r : traj.rewards) {
            acc += g * r;
            g *= gamma;
        }
        total += acc;
    }
    return total / static_cast<double>(trajectories.size());
}

// A simulation succeeds when every sample in the last T_end seconds stays
// inside the componentwise epsilon-box around the goal (wrapped difference on
// angular dimensions).
inline double success_rate(const std::vector<Trajectory>& trajectories, const EnvModel& env,
                           const Vec& goal, const Vec& epsilon, double T_end) {
    int successes = 0;
    for (const auto& traj : trajectories) {
        const double T_sim = static_cast<double>(traj.states.size() - 1) * traj.Ts;
        bool ok = true;
        for (size_t k = 0; k < traj.states.size() && ok; ++k) {
            if (static_cast<double>(k) * traj.Ts < T_sim - T_end) continue;
            for (int i = 0; i < env.state_dim; ++i) {
                const double diff = bounded_diff(traj.states[k][i], goal[i],
                                                 env.state_bounds[static_cast<size_t>(i)]);
                if (std::abs(diff) > epsilon[i]) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) ++successes;
    }
    return 100.0 * successes / static_cast<double>(trajectories.size());
}

struct Metrics {
    double be = 0.0;
    double r_gamma = 0.0;
    double s = 0.0;
};

// BE over the training set plus R_gamma / S from closed-loop simulations.
// Simulations from different initial states run in parallel.
inline Metrics evaluate_vfunction(const EnvModel& env, const TransitionDataset& d,
                                  const VFunction& v, const SimSpec& sim, int threads = 1) {
    Metrics out;
    out.be = bellman_error(v, d, env.gamma);
    std::vector<Trajectory> trajectories(sim.x_init.size());
    parallel_for(sim.x_init.size(), threads,
                 [&](size_t s) { trajectories[s] = simulate(env, v, sim.x_init[s], sim.T_sim); });
    out.r_gamma = discounted_return(trajectories, env.gamma);
    out.s = success_rate(trajectories, env, env.goal, sim.epsilon, sim.T_end);
    return out;
}

// ---------------------------------------------------------------------------
// Iteration history and multi-run statistics

struct IterationRecord {
    int iteration = 0;
    SymbolicModel model;
    double be = 0.0;
    double r_gamma = 0.0;
    double s = 0.0;
    double fitness = 0.0; // solver fitness of the iteration's best model
    double wall_s = 0.0;
    std::vector<double> gp_best_history; // best-ever fitness per generation
};

struct WinnerRef {
    int run = 0;
    int iteration = 0; // within the run's history
    double be = 0.0, r_gamma = 0.0, s = 0.0;
};

struct MeasureSummary {
    double median = 0.0, min = 0.0, max = 0.0;
};

struct RunStatistics {
    int runs = 0;
    MeasureSummary be;      // per-run best = min over iterations
    MeasureSummary r_gamma; // per-run best = max over iterations
    MeasureSummary s;       // per-run best = max over iterations
    int runs_with_full_success = 0;
    std::vector<WinnerRef> winners_be, winners_r, winners_s; // one entry per run
};

namespace detail {

inline MeasureSummary summarize(std::vector<double> values) {
    MeasureSummary m;
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    m.min = values.front();
    m.max = values.back();
    m.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return m;
}

} // namespace detail

// Per-run winners (best iteration for each measure), then medians/extremes
// across runs.
inline RunStatistics run_statistics(const std::vector<std::vector<IterationRecord>>& histories) {
    if (histories.empty()) throw std::invalid_argument("run_statistics: no runs");
    RunStatistics stats;
    stats.runs = static_cast<int>(histories.size());
    std::vector<double> best_be, best_r, best_s;
    for (size_t r = 0; r < histories.size(); ++r) {
        const auto& hist = histories[r];
        if (hist.empty()) continue;
        size_t ibe = 0, ir = 0, is = 0;
        for (size_t i = 1; i < hist.size(); ++i) {
            if (hist[i].be < hist[ibe].be) ibe = i;
            if (hist[i].r_gamma > hist[ir].r_gamma) ir = i;
            if (hist[i].s > hist[is].s) is = i;
        }
        auto make_ref = [&](size_t i) {
            return WinnerRef{static_cast<int>(r), hist[i].iteration, hist[i].be, hist[i].r_gamma,
                             hist[i].s};
        };
        stats.winners_be.push_back(make_ref(ibe));
        stats.winners_r.push_back(make_ref(ir));
        stats.winners_s.push_back(make_ref(is));
        best_be.push_back(hist[ibe].be);
        best_r.push_back(hist[ir].r_gamma);
        best_s.push_back(hist[is].s);
        if (hist[is].s == 100.0) ++stats.runs_with_full_success;
    }
    if (best_be.empty()) throw std::invalid_argument("run_statistics: all runs empty");
    stats.be = detail::summarize(best_be);
    stats.r_gamma = detail::summarize(best_r);
    stats.s = detail::summarize(best_s);
    return stats;
}

} // namespace symvf
