#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "symvf/common.hpp"

namespace symvf {

struct FitResult {
    std::vector<double> beta; // one slot per input column; dropped columns get 0
    double intercept = 0.0;
    double mse = 0.0;
};

namespace detail {

inline bool column_degenerate(std::span<const double> col, bool& finite) {
    finite = true;
    double lo = col[0], hi = col[0];
    for (double v : col) {
        if (!std::isfinite(v)) {
            finite = false;
            return true;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return lo == hi;
}

} // namespace detail

// Ridge least squares for  targets ~ intercept*c0 + sum_k beta_k * columns_k.
// The penalty ridge*||beta||^2 excludes the intercept. Columns that are
// constant or non-finite on the data are dropped (their coefficient is 0).
// If everything degenerates the result is the intercept-only minimizer.
//
// c0 is the value of the intercept column (1 for plain regression; solvers
// may pass a different constant).
inline FitResult fit_coefficients(const std::vector<std::span<const double>>& columns,
                                  std::span<const double> targets, double ridge,
                                  double c0 = 1.0) {
    const size_t rows = targets.size();
    const size_t p = columns.size();
    FitResult out;
    out.beta.assign(p, 0.0);

    std::vector<size_t> kept;
    kept.reserve(p);
    for (size_t k = 0; k < p; ++k) {
        bool finite = true;
        if (!detail::column_degenerate(columns[k], finite)) kept.push_back(k);
    }

    double target_mean = 0.0;
    for (double t : targets) target_mean += t;
    target_mean /= static_cast<double>(rows);

    const size_t q = kept.size();
    bool solved = false;
    if (q > 0) {
        Eigen::MatrixXd design(rows, q + 1);
        for (size_t r = 0; r < rows; ++r) design(static_cast<Eigen::Index>(r), 0) = c0;
        for (size_t j = 0; j < q; ++j)
            for (size_t r = 0; r < rows; ++r)
                design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j + 1)) =
                    columns[kept[j]][r];

        Eigen::Map<const Eigen::VectorXd> t(targets.data(), static_cast<Eigen::Index>(rows));
        Eigen::MatrixXd gram = design.transpose() * design;
        for (size_t j = 1; j <= q; ++j)
            gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += ridge;
        Eigen::VectorXd rhs = design.transpose() * t;

        // Column scaling keeps the solve well conditioned without changing the
        // penalized objective: solve D(G + ridge I)D y = D rhs, beta = D y.
        Eigen::VectorXd scale(q + 1);
        for (size_t j = 0; j <= q; ++j) {
            const double d = std::sqrt(gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
            scale(static_cast<Eigen::Index>(j)) = (d > 0.0 && std::isfinite(d)) ? 1.0 / d : 1.0;
        }
        Eigen::MatrixXd scaled = scale.asDiagonal() * gram * scale.asDiagonal();
        Eigen::VectorXd srhs = scale.asDiagonal() * rhs;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(scaled);
        if (ldlt.info() == Eigen::Success) {
            Eigen::VectorXd y = ldlt.solve(srhs);
            Eigen::VectorXd coef = scale.asDiagonal() * y;
            if (coef.allFinite()) {
                out.intercept = coef(0);
                for (size_t j = 0; j < q; ++j)
                    out.beta[kept[j]] = coef(static_cast<Eigen::Index>(j + 1));
                solved = true;
            }
        }
    }
    if (!solved) {
        out.beta.assign(p, 0.0);
        out.intercept = c0 != 0.0 ? target_mean / c0 : 0.0;
    }

    double sse = 0.0;
    for (size_t r = 0; r < rows; ++r) {
        double pred = out.intercept * c0;
        for (size_t j = 0; j < q; ++j) pred += out.beta[kept[j]] * columns[kept[j]][r];
        const double e = targets[r] - pred;
        sse += e * e;
    }
    out.mse = sse / static_cast<double>(rows);
    return out;
}

inline FitResult fit_coefficients(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> targets, double ridge,
                                  double c0 = 1.0) {
    std::vector<std::span<const double>> views;
    views.reserve(columns.size());
    for (const auto& c : columns) views.emplace_back(c.data(), c.size());
    return fit_coefficients(views, targets, ridge, c0);
}

} // namespace symvf
