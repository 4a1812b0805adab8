#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "symvf/env.hpp"
#include "symvf/parallel.hpp"

namespace symvf {

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    bool wrap = false;

    // Non-wrapped axes place centers on both endpoints; wrapped axes tile the
    // period so the last center neighbors the first.
    double spacing() const {
        return wrap ? (hi - lo) / count : (hi - lo) / (count - 1);
    }
    double center(int i) const { return lo + spacing() * i; }
};

// Wrapped axes are shifted so that one center sits at angle zero: the goal
// angle of both pendulums lands on a basis center, which the hat expansion
// needs to resolve the kink of the value function there.
inline std::vector<GridAxis> grid_axes_for(const EnvModel& env, const std::vector<int>& counts) {
    if (counts.size() != static_cast<size_t>(env.state_dim))
        throw std::invalid_argument("grid_axes_for: counts do not match state dimension");
    std::vector<GridAxis> axes;
    for (int d = 0; d < env.state_dim; ++d) {
        const DimBound& b = env.state_bounds[static_cast<size_t>(d)];
        GridAxis axis{b.lo, b.hi, counts[static_cast<size_t>(d)], b.wrap};
        if (axis.wrap) {
            const double s = (axis.hi - axis.lo) / axis.count;
            axis.lo = -s * (axis.count / 2);
            axis.hi = axis.lo + (b.hi - b.lo);
        }
        axes.push_back(axis);
    }
    return axes;
}

// Triangular (hat) basis functions on a regular grid, combined by product:
// multilinear interpolation. Wrapped axes use circular hats.
class FuzzyApproximator {
public:
    struct Weight {
        size_t index;
        double weight;
    };
    static constexpr int kMaxActive = 16; // 2^n, n <= 4

    FuzzyApproximator() = default;
    FuzzyApproximator(std::vector<GridAxis> axes)
        : axes_(std::move(axes)) {
        size_ = 1;
        for (const auto& a : axes_) {
            if (a.count < (a.wrap ? 1 : 2))
                throw std::invalid_argument("FuzzyApproximator: axis needs at least two centers");
            size_ *= static_cast<size_t>(a.count);
        }
        theta_.assign(size_, 0.0);
    }

    size_t size() const { return size_; }
    const std::vector<GridAxis>& axes() const { return axes_; }
    std::vector<double>& theta() { return theta_; }
    const std::vector<double>& theta() const { return theta_; }

    Vec center(size_t index) const {
        Vec x;
        size_t rem = index;
        size_t block = size_;
        for (const auto& a : axes_) {
            block /= static_cast<size_t>(a.count);
            x.push_back(a.center(static_cast<int>((rem / block) % static_cast<size_t>(a.count))));
            rem %= block;
        }
        return x;
    }

    // At most 2^n nonzero weights; nonnegative and summing to one. Points
    // outside a non-wrapped axis are clipped to the hull.
    int membership(const Vec& x, Weight out[kMaxActive]) const {
        int lo_idx[kMaxDim];
        double frac[kMaxDim];
        const int n = static_cast<int>(axes_.size());
        for (int d = 0; d < n; ++d) {
            const GridAxis& a = axes_[static_cast<size_t>(d)];
            double v = x[d];
            if (a.wrap) {
                v = wrap_into(v, a.lo, a.hi);
                const double u = (v - a.lo) / a.spacing();
                const int i0 = static_cast<int>(u);
                lo_idx[d] = i0 % a.count;
                frac[d] = u - i0;
            } else {
                v = std::clamp(v, a.lo, a.hi);
                double u = (v - a.lo) / a.spacing();
                int i0 = static_cast<int>(u);
                if (i0 >= a.count - 1) i0 = a.count - 2; // v == hi lands on the last cell
                lo_idx[d] = i0;
                frac[d] = u - i0;
            }
        }
        const int combos = 1 << n;
        for (int c = 0; c < combos; ++c) {
            size_t index = 0;
            double w = 1.0;
            for (int d = 0; d < n; ++d) {
                const GridAxis& a = axes_[static_cast<size_t>(d)];
                const bool upper = (c >> d) & 1;
                int i = lo_idx[d] + (upper ? 1 : 0);
                if (a.wrap) i %= a.count;
                w *= upper ? frac[d] : 1.0 - frac[d];
                index = index * static_cast<size_t>(a.count) + static_cast<size_t>(i);
            }
            out[c] = {index, w};
        }
        return combos;
    }

    double predict(const Vec& x) const {
        Weight w[kMaxActive];
        const int k = membership(x, w);
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += w[i].weight * theta_[w[i].index];
        return acc;
    }

private:
    std::vector<GridAxis> axes_;
    std::vector<double> theta_;
    size_t size_ = 0;
};

struct FuzzyVIResult {
    FuzzyApproximator approx;
    int sweeps = 0;
    bool converged = false;
    std::vector<double> sup_changes; // per-sweep sup-norm change
};

// Jacobi-style value iteration over the hat basis: next states and rewards for
// every (center, action) pair are precomputed once, then theta is swept until
// the sup-norm change drops below tol.
inline FuzzyVIResult fuzzy_v_iteration(const EnvModel& env, const std::vector<GridAxis>& axes,
                                       double tol = 1e-8, int max_sweeps = 5000,
                                       int threads = 1) {
    if (tol <= 0.0) throw std::invalid_argument("fuzzy_v_iteration: tol must be positive");
    FuzzyVIResult result;
    result.approx = FuzzyApproximator(axes);
    FuzzyApproximator& fa = result.approx;
    const size_t n_centers = fa.size();
    const size_t n_u = env.actions.size();

    struct Transition {
        double reward;
        int n_active;
        FuzzyApproximator::Weight w[FuzzyApproximator::kMaxActive];
    };
    std::vector<Transition> table(n_centers * n_u);
    parallel_for(n_centers, threads, [&](size_t j) {
        const Vec xi = fa.center(j);
        for (size_t u = 0; u < n_u; ++u) {
            auto [xn, r] = step(env, xi, env.actions[u]);
            Transition& t = table[j * n_u + u];
            t.reward = r;
            t.n_active = fa.membership(xn, t.w);
        }
    });

    std::vector<double> next(n_centers, 0.0);
    const double gamma = env.gamma;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const std::vector<double>& cur = fa.theta();
        parallel_for(n_centers, threads, [&](size_t j) {
            double best = -std::numeric_limits<double>::infinity();
            for (size_t u = 0; u < n_u; ++u) {
                const Transition& t = table[j * n_u + u];
                double v = 0.0;
                for (int k = 0; k < t.n_active; ++k) v += t.w[k].weight * cur[t.w[k].index];
                best = std::max(best, t.reward + gamma * v);
            }
            next[j] = best;
        });
        double change = 0.0;
        for (size_t j = 0; j < n_centers; ++j) change = std::max(change, std::abs(next[j] - cur[j]));
        fa.theta().swap(next);
        result.sup_changes.push_back(change);
        result.sweeps = sweep + 1;
        if (change <= tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

inline double baseline_predict(const FuzzyApproximator& fa, const Vec& x) { return fa.predict(x); }

inline std::function<double(const Vec&)> as_vfunction(const FuzzyApproximator& fa) {
    return [fa](const Vec& x) { return fa.predict(x); };
}

// ---------------------------------------------------------------------------
// CSV export: axis description lines, then one (center..., theta) row per
// grid point.

inline void save_baseline_csv(const FuzzyApproximator& fa, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open baseline file for writing: " + path);
    out << "# fuzzy-vfunction\n";
    for (const auto& a : fa.axes())
        out << "# axis," << format_double(a.lo) << "," << format_double(a.hi) << "," << a.count
            << "," << (a.wrap ? 1 : 0) << "\n";
    const int n = static_cast<int>(fa.axes().size());
    for (int d = 0; d < n; ++d) out << "c" << d << ",";
    out << "theta\n";
    for (size_t j = 0; j < fa.size(); ++j) {
        const Vec c = fa.center(j);
        for (double v : c) out << format_double(v) << ",";
        out << format_double(fa.theta()[j]) << "\n";
    }
}

inline FuzzyApproximator load_baseline_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open baseline file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "# fuzzy-vfunction")
        throw std::runtime_error("baseline file: bad magic line: " + path);
    std::vector<GridAxis> axes;
    while (in.peek() == '#') {
        std::getline(in, line);
        std::istringstream ls(line.substr(std::string("# axis,").size()));
        GridAxis a;
        char comma;
        int wrap_flag;
        ls >> a.lo >> comma >> a.hi >> comma >> a.count >> comma >> wrap_flag;
        a.wrap = wrap_flag != 0;
        axes.push_back(a);
    }
    std::getline(in, line); // column header
    FuzzyApproximator fa(axes);
    size_t j = 0;
    while (std::getline(in, line) && j < fa.size()) {
        const size_t last = line.find_last_of(',');
        fa.theta()[j++] = std::stod(line.substr(last + 1));
    }
    if (j != fa.size()) throw std::runtime_error("baseline file: theta rows missing");
    return fa;
}

} // namespace symvf
