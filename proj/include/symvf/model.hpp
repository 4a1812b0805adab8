#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "symvf/expr.hpp"

namespace symvf {

// V(x) = intercept + sum_i beta[i] * eval(features[i], x)
struct SymbolicModel {
    std::vector<ExprPtr> features;
    std::vector<double> beta;
    double intercept = 0.0;

    int n_f() const { return static_cast<int>(features.size()); }

    static SymbolicModel zero() { return {}; }
};

inline double predict(const SymbolicModel& m, std::span<const double> x) {
    double acc = m.intercept;
    for (size_t i = 0; i < m.features.size(); ++i) acc += m.beta[i] * eval_expr(*m.features[i], x);
    return acc;
}

inline double predict(const SymbolicModel& m, const Vec& x) { return predict(m, x.span()); }

// Numeric constants in the model: nonzero coefficients, the intercept if
// nonzero, and every constant leaf inside a feature whose coefficient is
// nonzero.
inline int count_parameters(const SymbolicModel& m) {
    int count = m.intercept != 0.0 ? 1 : 0;
    for (size_t i = 0; i < m.features.size(); ++i) {
        if (m.beta[i] == 0.0) continue;
        count += 1 + count_constants(*m.features[i]);
    }
    return count;
}

inline int max_var_index(const SymbolicModel& m) {
    int idx = -1;
    for (const auto& f : m.features) idx = std::max(idx, max_var_index(*f));
    return idx;
}

// Tape-compiled counterpart for hot paths (simulation, grids). Evaluation is
// reentrant: the scratch stack lives on the call stack.
class CompiledModel {
public:
    static constexpr int kMaxStack = 96;

    CompiledModel() = default;
    explicit CompiledModel(const SymbolicModel& m) : beta_(m.beta), intercept_(m.intercept) {
        tapes_.reserve(m.features.size());
        for (const auto& f : m.features) {
            tapes_.emplace_back(*f);
            if (tapes_.back().stack_size() > kMaxStack)
                throw std::runtime_error("CompiledModel: feature nested too deeply");
        }
    }

    double operator()(const Vec& x) const {
        double stack[kMaxStack];
        double acc = intercept_;
        for (size_t i = 0; i < tapes_.size(); ++i) acc += beta_[i] * tapes_[i].eval(x, stack);
        return acc;
    }

private:
    std::vector<Tape> tapes_;
    std::vector<double> beta_;
    double intercept_ = 0.0;
};

// ---------------------------------------------------------------------------
// Model file: {"n_f": ..., "intercept": ..., "terms": [{"beta", "expr"}...]}

inline nlohmann::json model_to_json(const SymbolicModel& m) {
    nlohmann::json terms = nlohmann::json::array();
    for (size_t i = 0; i < m.features.size(); ++i) {
        terms.push_back({{"beta", m.beta[i]}, {"expr", serialize_expr(*m.features[i])}});
    }
    return {{"n_f", m.n_f()}, {"intercept", m.intercept}, {"terms", std::move(terms)}};
}

inline SymbolicModel model_from_json(const nlohmann::json& j) {
    SymbolicModel m;
    m.intercept = j.at("intercept").get<double>();
    for (const auto& term : j.at("terms")) {
        m.beta.push_back(term.at("beta").get<double>());
        m.features.push_back(parse_expr(term.at("expr").get<std::string>()));
    }
    if (j.contains("n_f") && j.at("n_f").get<int>() != m.n_f())
        throw std::runtime_error("model file: n_f does not match the number of terms");
    return m;
}

inline void save_model(const SymbolicModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    out << model_to_json(m).dump(2) << "\n";
}

inline SymbolicModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

} // namespace symvf
