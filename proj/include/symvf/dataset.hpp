#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "symvf/env.hpp"
#include "symvf/parallel.hpp"

namespace symvf {

// Regular grid over the state space. Non-wrapped dimensions include both
// endpoints; wrapped dimensions exclude the upper endpoint so the wrap point
// has a single representative.
inline std::vector<Vec> sample_state_grid(const std::vector<DimBound>& bounds,
                                          const std::vector<int>& counts) {
    if (bounds.size() != counts.size())
        throw std::invalid_argument("sample_state_grid: counts do not match dimensions");
    std::vector<std::vector<double>> axes;
    size_t total = 1;
    for (size_t d = 0; d < bounds.size(); ++d) {
        if (counts[d] < 1) throw std::invalid_argument("sample_state_grid: count must be >= 1");
        if (counts[d] == 1 && !bounds[d].wrap) {
            axes.push_back({0.5 * (bounds[d].lo + bounds[d].hi)}); // pinned dimension
        } else {
            axes.push_back(linspace(bounds[d].lo, bounds[d].hi, counts[d], !bounds[d].wrap));
        }
        total *= axes.back().size();
    }
    std::vector<Vec> out;
    out.reserve(total);
    for (size_t idx = 0; idx < total; ++idx) {
        Vec x;
        size_t rem = idx;
        size_t block = total;
        for (const auto& axis : axes) {
            block /= axis.size();
            x.push_back(axis[(rem / block) % axis.size()]);
            rem %= block;
        }
        out.push_back(x);
    }
    return out;
}

// The training set D: states, all next states and rewards under every action.
struct TransitionDataset {
    std::string env_name;
    double gamma = 0.95;
    std::vector<Vec> states;                   // n_x
    std::vector<Vec> actions;                  // n_u
    std::vector<std::vector<Vec>> next_states; // n_x x n_u
    std::vector<std::vector<double>> rewards;  // n_x x n_u

    size_t n_x() const { return states.size(); }
    size_t n_u() const { return actions.size(); }

    std::uint64_t content_hash() const {
        std::uint64_t h = fnv1a(env_name.data(), env_name.size());
        h = fnv1a(&gamma, sizeof(gamma), h);
        auto mix_vec = [&h](const Vec& v) {
            h = fnv1a(v.data(), static_cast<size_t>(v.size()) * sizeof(double), h);
        };
        for (const auto& x : states) mix_vec(x);
        for (const auto& u : actions) mix_vec(u);
        for (const auto& row : next_states)
            for (const auto& xn : row) mix_vec(xn);
        for (const auto& row : rewards) h = fnv1a(row, h);
        return h;
    }
};

inline TransitionDataset build_dataset(const EnvModel& env, const std::vector<Vec>& states,
                                       const std::vector<Vec>& actions, int threads = 1) {
    if (actions.empty()) throw std::invalid_argument("build_dataset: empty action set");
    for (const auto& u : actions)
        if (!env.input_ok(u)) throw std::invalid_argument("build_dataset: action outside bounds");

    TransitionDataset d;
    d.env_name = env.name;
    d.gamma = env.gamma;
    d.states = states;
    d.actions = actions;
    d.next_states.resize(states.size());
    d.rewards.resize(states.size());
    parallel_for(states.size(), threads, [&](size_t i) {
        auto& row_x = d.next_states[i];
        auto& row_r = d.rewards[i];
        row_x.reserve(actions.size());
        row_r.reserve(actions.size());
        for (const auto& u : actions) {
            auto [xn, r] = step(env, states[i], u);
            row_x.push_back(xn);
            row_r.push_back(r);
        }
    });
    return d;
}

// CSV cache: one row per (i, j) with x_i, u_j, x_ij, r_ij.
inline void save_dataset_csv(const TransitionDataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path);
    const int n = d.states.empty() ? 0 : d.states[0].size();
    const int m = d.actions.empty() ? 0 : d.actions[0].size();
    out << "# env=" << d.env_name << " gamma=" << format_double(d.gamma) << "\n";
    out << "i,j";
    for (int k = 0; k < n; ++k) out << ",x" << k;
    for (int k = 0; k < m; ++k) out << ",u" << k;
    for (int k = 0; k < n; ++k) out << ",xn" << k;
    out << ",r\n";
    for (size_t i = 0; i < d.n_x(); ++i)
        for (size_t j = 0; j < d.n_u(); ++j) {
            out << i << "," << j;
            for (double v : d.states[i]) out << "," << format_double(v);
            for (double v : d.actions[j]) out << "," << format_double(v);
            for (double v : d.next_states[i][j]) out << "," << format_double(v);
            out << "," << format_double(d.rewards[i][j]) << "\n";
        }
}

inline TransitionDataset load_dataset_csv(const std::string& path, int state_dim, int input_dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    TransitionDataset d;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# env=", 0) != 0)
        throw std::runtime_error("dataset file: missing header comment: " + path);
    {
        std::istringstream hs(line.substr(2));
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("env=", 0) == 0) d.env_name = tok.substr(4);
            if (tok.rfind("gamma=", 0) == 0) d.gamma = std::stod(tok.substr(6));
        }
    }
    std::getline(in, line); // column header
    size_t prev_i = static_cast<size_t>(-1);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        auto next_cell = [&]() {
            if (!std::getline(ls, cell, ',')) throw std::runtime_error("dataset file: short row");
            return cell;
        };
        const size_t i = std::stoul(next_cell());
        const size_t j = std::stoul(next_cell());
        Vec x, u, xn;
        for (int k = 0; k < state_dim; ++k) x.push_back(std::stod(next_cell()));
        for (int k = 0; k < input_dim; ++k) u.push_back(std::stod(next_cell()));
        for (int k = 0; k < state_dim; ++k) xn.push_back(std::stod(next_cell()));
        const double r = std::stod(next_cell());
        if (i != prev_i) {
            d.states.push_back(x);
            d.next_states.emplace_back();
            d.rewards.emplace_back();
            prev_i = i;
        }
        if (i == 0) d.actions.push_back(u);
        if (j != d.next_states[i].size()) throw std::runtime_error("dataset file: rows out of order");
        d.next_states[i].push_back(xn);
        d.rewards[i].push_back(r);
    }
    return d;
}

} // namespace symvf
