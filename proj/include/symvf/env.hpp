#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "symvf/common.hpp"

namespace symvf {

inline constexpr double kPi = std::numbers::pi_v<double>;

struct DimBound {
    double lo = 0.0;
    double hi = 0.0;
    bool wrap = false;
};

// Maps a to [lo, hi) modulo the period.
inline double wrap_into(double a, double lo, double hi) {
    const double period = hi - lo;
    double y = std::fmod(a - lo, period);
    if (y < 0.0) y += period;
    return lo + y;
}

inline double wrap_pi(double a) { return wrap_into(a, -kPi, kPi); }

// Wrapped difference in (-period/2, period/2]; plain difference otherwise.
inline double bounded_diff(double a, double b, const DimBound& dim) {
    if (!dim.wrap) return a - b;
    const double period = dim.hi - dim.lo;
    double d = std::fmod(a - b, period);
    if (d > 0.5 * period) d -= period;
    if (d <= -0.5 * period) d += period;
    return d;
}

using DynamicsFn = std::function<Vec(const Vec& x, const Vec& u)>;
using RewardFn = std::function<double(const Vec& x, const Vec& u, const Vec& xn)>;

// A benchmark MDP: continuous dynamics integrated with fixed-step RK4, a
// reward, bounded state/input spaces and a discrete action set.
struct EnvModel {
    std::string name;
    int state_dim = 0;
    int input_dim = 0;
    std::vector<DimBound> state_bounds;
    std::vector<DimBound> input_bounds;
    double Ts = 0.0;
    int substeps = 1;
    double gamma = 0.95;
    Vec goal;
    std::vector<Vec> actions;
    DynamicsFn dynamics;
    RewardFn reward;

    Vec apply_bounds(Vec x) const {
        for (int i = 0; i < state_dim; ++i) {
            const DimBound& d = state_bounds[static_cast<size_t>(i)];
            x[i] = d.wrap ? wrap_into(x[i], d.lo, d.hi) : std::clamp(x[i], d.lo, d.hi);
        }
        return x;
    }

    bool input_ok(const Vec& u) const {
        if (u.size() != input_dim) return false;
        for (int i = 0; i < input_dim; ++i) {
            const DimBound& d = input_bounds[static_cast<size_t>(i)];
            if (u[i] < d.lo || u[i] > d.hi) return false;
        }
        return true;
    }
};

// Classical RK4, `substeps` sub-intervals per sampling period, zero-order hold
// on u. Bounds are the caller's business (step() applies them once after the
// full period).
inline Vec rk4_step(const DynamicsFn& dynamics, Vec x, const Vec& u, double Ts, int substeps) {
    const double h = Ts / substeps;
    const int n = x.size();
    for (int s = 0; s < substeps; ++s) {
        const Vec k1 = dynamics(x, u);
        Vec x2 = x;
        for (int i = 0; i < n; ++i) x2[i] = x[i] + 0.5 * h * k1[i];
        const Vec k2 = dynamics(x2, u);
        for (int i = 0; i < n; ++i) x2[i] = x[i] + 0.5 * h * k2[i];
        const Vec k3 = dynamics(x2, u);
        for (int i = 0; i < n; ++i) x2[i] = x[i] + h * k3[i];
        const Vec k4 = dynamics(x2, u);
        for (int i = 0; i < n; ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!all_finite(x)) {
            std::string msg = "rk4_step: non-finite state; x = [";
            for (int i = 0; i < n; ++i) msg += (i ? ", " : "") + format_double(x[i]);
            msg += "], u = [";
            for (int i = 0; i < u.size(); ++i) msg += (i ? ", " : "") + format_double(u[i]);
            msg += "]";
            throw std::runtime_error(msg);
        }
    }
    return x;
}

inline std::pair<Vec, double> step(const EnvModel& env, const Vec& x, const Vec& u) {
    if (!env.input_ok(u)) {
        std::string msg = "step: input outside bounds for '" + env.name + "': [";
        for (int i = 0; i < u.size(); ++i) msg += (i ? ", " : "") + format_double(u[i]);
        throw std::runtime_error(msg + "]");
    }
    Vec xn = env.apply_bounds(rk4_step(env.dynamics, x, u, env.Ts, env.substeps));
    return {xn, env.reward(x, u, xn)};
}

// ---------------------------------------------------------------------------
// Environment factories. Physical parameters can be overridden by name; an
// unknown name is an error.

namespace detail {

class Params {
public:
    Params(std::map<std::string, double> defaults, const std::map<std::string, double>& overrides,
           const std::string& env)
        : values_(std::move(defaults)) {
        for (const auto& [key, value] : overrides) {
            auto it = values_.find(key);
            if (it == values_.end())
                throw std::invalid_argument("unknown parameter '" + key + "' for environment " + env);
            it->second = value;
        }
    }
    double operator()(const std::string& key) const { return values_.at(key); }

private:
    std::map<std::string, double> values_;
};

inline std::vector<Vec> action_product(const std::vector<std::vector<double>>& per_dim) {
    std::vector<Vec> out;
    size_t total = 1;
    for (const auto& axis : per_dim) total *= axis.size();
    out.reserve(total);
    for (size_t idx = 0; idx < total; ++idx) {
        Vec u;
        size_t rem = idx;
        size_t block = total;
        for (const auto& axis : per_dim) { // first dimension slowest
            block /= axis.size();
            u.push_back(axis[(rem / block) % axis.size()]);
            rem %= block;
        }
        out.push_back(u);
    }
    return out;
}

} // namespace detail

using ParamMap = std::map<std::string, double>;

// DC motor velocity control under Coulomb friction. State: angular velocity v.
inline EnvModel make_friction(const ParamMap& overrides = {}) {
    detail::Params p({{"I", 1.8e-4},
                      {"b", 1.9e-5},
                      {"K", 0.0536},
                      {"R", 9.5},
                      {"c", 8.5e-3},
                      {"x_r", 7.0}},
                     overrides, "friction");
    const double I = p("I"), b = p("b"), K = p("K"), R = p("R"), c = p("c");
    const double x_r = p("x_r");

    EnvModel env;
    env.name = "friction";
    env.state_dim = 1;
    env.input_dim = 1;
    env.state_bounds = {{-10.0, 10.0, false}};
    env.input_bounds = {{-4.0, 4.0, false}};
    env.Ts = 0.001;
    env.goal = {x_r};
    env.actions = detail::action_product({linspace(-4.0, 4.0, 41)});
    env.dynamics = [I, b, K, R, c](const Vec& x, const Vec& u) {
        const double v = x[0];
        const double drive = K / R * u[0];
        double fc;
        if (v > 0.0 || (v == 0.0 && drive > c))
            fc = c;
        else if (v < 0.0 || (v == 0.0 && drive < -c))
            fc = -c;
        else
            fc = drive; // stiction: net torque zero
        Vec dx(1);
        dx[0] = (drive - (b + K * K / R) * v - fc) / I;
        return dx;
    };
    env.reward = [x_r](const Vec& x, const Vec&, const Vec&) {
        return -std::sqrt(std::abs(x_r - x[0]));
    };
    return env;
}

// 1-DOF pendulum swing-up. State: [alpha, alpha_dot], alpha = 0 pointing up.
inline EnvModel make_pend1(const ParamMap& overrides = {}) {
    detail::Params p({{"I", 1.91e-4},
                      {"m", 0.055},
                      {"g", 9.81},
                      {"l", 0.042},
                      {"b", 3e-6},
                      {"K", 0.0536},
                      {"R", 9.5}},
                     overrides, "pend1");
    const double I = p("I"), m = p("m"), g = p("g"), l = p("l"), b = p("b"), K = p("K"),
                 R = p("R");

    EnvModel env;
    env.name = "pend1";
    env.state_dim = 2;
    env.input_dim = 1;
    env.state_bounds = {{-kPi, kPi, true}, {-30.0, 30.0, false}};
    env.input_bounds = {{-2.0, 2.0, false}};
    env.Ts = 0.05;
    env.goal = {0.0, 0.0};
    env.actions = detail::action_product({linspace(-2.0, 2.0, 11)});
    env.dynamics = [I, m, g, l, b, K, R](const Vec& x, const Vec& u) {
        Vec dx(2);
        dx[0] = x[1];
        dx[1] = (m * g * l * std::sin(x[0]) - b * x[1] - K * K / R * x[1] + K / R * u[0]) / I;
        return dx;
    };
    env.reward = [](const Vec& x, const Vec&, const Vec&) {
        return -std::abs(wrap_pi(x[0])); // Q = [1, 0]
    };
    return env;
}

// 2-DOF pendulum swing-up. State: [a1, a1_dot, a2, a2_dot].
// The gravity term F1 uses l2 as printed in the source material; pass
// f1_conventional = 1 to use l1 instead (identical for the default geometry).
inline EnvModel make_pend2(const ParamMap& overrides = {}) {
    detail::Params p({{"l1", 0.4},
                      {"l2", 0.4},
                      {"m1", 1.25},
                      {"m2", 0.8},
                      {"I1", 0.0667},
                      {"I2", 0.0427},
                      {"c1", 0.2},
                      {"c2", 0.2},
                      {"b1", 0.08},
                      {"b2", 0.02},
                      {"g", 9.8},
                      {"f1_conventional", 0.0}},
                     overrides, "pend2");
    const double P1 = p("m1") * p("c1") * p("c1") + p("m2") * p("l1") * p("l1") + p("I1");
    const double P2 = p("m2") * p("c2") * p("c2") + p("I2");
    const double P3 = p("m2") * p("l1") * p("c2");
    const double F1 =
        (p("m1") * p("c1") + p("m2") * (p("f1_conventional") != 0.0 ? p("l1") : p("l2"))) * p("g");
    const double F2 = p("m2") * p("c2") * p("g");
    const double b1 = p("b1"), b2 = p("b2");

    EnvModel env;
    env.name = "pend2";
    env.state_dim = 4;
    env.input_dim = 2;
    env.state_bounds = {{-kPi, kPi, true},
                        {-2.0 * kPi, 2.0 * kPi, false},
                        {-kPi, kPi, true},
                        {-2.0 * kPi, 2.0 * kPi, false}};
    env.input_bounds = {{-3.0, 3.0, false}, {-1.0, 1.0, false}};
    env.Ts = 0.01;
    env.goal = {0.0, 0.0, 0.0, 0.0};
    env.actions = detail::action_product({{-3.0, 0.0, 3.0}, {-1.0, 0.0, 1.0}});
    env.dynamics = [P1, P2, P3, F1, F2, b1, b2](const Vec& x, const Vec& u) {
        const double a2 = x[2], w1 = x[1], w2 = x[3];
        const double s2 = std::sin(a2), c2 = std::cos(a2);
        const double m11 = P1 + P2 + 2.0 * P3 * c2;
        const double m12 = P2 + P3 * c2;
        const double m22 = P2;
        // C(alpha, alpha_dot) * alpha_dot
        const double cv1 = (b1 - P3 * w2 * s2) * w1 - P3 * (w1 + w2) * s2 * w2;
        const double cv2 = P3 * w1 * s2 * w1 + b2 * w2;
        const double g1 = -F1 * std::sin(x[0]) - F2 * std::sin(x[0] + a2);
        const double g2 = -F2 * std::sin(x[0] + a2);
        const double r1 = u[0] - cv1 - g1;
        const double r2 = u[1] - cv2 - g2;
        const double det = m11 * m22 - m12 * m12;
        if (std::abs(det) < 1e-12)
            throw std::runtime_error("pend2: mass matrix is singular (det = " +
                                     format_double(det) + ")");
        Vec dx(4);
        dx[0] = w1;
        dx[1] = (m22 * r1 - m12 * r2) / det;
        dx[2] = w2;
        dx[3] = (-m12 * r1 + m11 * r2) / det;
        return dx;
    };
    env.reward = [](const Vec& x, const Vec&, const Vec&) {
        return -(std::abs(wrap_pi(x[0])) + 1.2 * std::abs(wrap_pi(x[2]))); // Q = [1 0 1.2 0]
    };
    return env;
}

// Magnetic manipulation with two coils. State: [y, y_dot].
inline EnvModel make_magman(const ParamMap& overrides = {}) {
    detail::Params p({{"m", 3.2e-2}, {"b", 1.613e-2}, {"c1", 5.52e-10}, {"c2", 1.75e-4}, {"y_r", 0.01}},
                     overrides, "magman");
    const double m = p("m"), b = p("b"), c1 = p("c1"), c2 = p("c2"), y_r = p("y_r");

    EnvModel env;
    env.name = "magman";
    env.state_dim = 2;
    env.input_dim = 2;
    env.state_bounds = {{0.0, 0.05, false}, {-0.4, 0.4, false}};
    env.input_bounds = {{0.0, 0.6, false}, {0.0, 0.6, false}};
    env.Ts = 0.01;
    env.goal = {y_r, 0.0};
    env.actions = detail::action_product({linspace(0.0, 0.6, 5), linspace(0.0, 0.6, 5)});
    env.dynamics = [m, b, c1, c2](const Vec& x, const Vec& u) {
        double force = 0.0;
        for (int i = 1; i <= 2; ++i) {
            const double d = x[0] - 0.025 * i;
            const double g = -c1 * d / std::pow(d * d + c2, 3);
            force += g * u[i - 1];
        }
        Vec dx(2);
        dx[0] = x[1];
        dx[1] = -b / m * x[1] + force / m;
        return dx;
    };
    env.reward = [y_r](const Vec& x, const Vec&, const Vec&) {
        return -5.0 * std::abs(y_r - x[0]); // Q = diag[5, 0]
    };
    return env;
}

// g(y, i): magnetic force on the ball from coil i at unit current.
inline double magman_coil_force(double y, int coil, double c1 = 5.52e-10, double c2 = 1.75e-4) {
    const double d = y - 0.025 * coil;
    return -c1 * d / std::pow(d * d + c2, 3);
}

inline EnvModel make_env(const std::string& name, const ParamMap& overrides = {}) {
    if (name == "friction") return make_friction(overrides);
    if (name == "pend1") return make_pend1(overrides);
    if (name == "pend2") return make_pend2(overrides);
    if (name == "magman") return make_magman(overrides);
    throw std::invalid_argument("unknown environment '" + name +
                                "' (expected friction, pend1, pend2 or magman)");
}

} // namespace symvf
