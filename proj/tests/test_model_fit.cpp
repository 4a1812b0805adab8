#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "symvf/fit.hpp"
#include "symvf/model.hpp"

using namespace symvf;

namespace {

// Hand-rolled Gaussian elimination with partial pivoting on explicitly formed
// normal equations; the independent check for the library's ridge solve.
std::vector<double> normal_equations_oracle(const std::vector<std::vector<double>>& cols,
                                            const std::vector<double>& t, double ridge) {
    const size_t p = cols.size() + 1; // intercept first
    const size_t n = t.size();
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    auto col = [&](size_t j, size_t r) { return j == 0 ? 1.0 : cols[j - 1][r]; };
    for (size_t i = 0; i < p; ++i) {
        for (size_t j = 0; j < p; ++j) {
            double acc = 0.0;
            for (size_t r = 0; r < n; ++r) acc += col(i, r) * col(j, r);
            if (i == j && i > 0) acc += ridge;
            a[i][j] = acc;
        }
        double acc = 0.0;
        for (size_t r = 0; r < n; ++r) acc += col(i, r) * t[r];
        a[i][p] = acc;
    }
    for (size_t k = 0; k < p; ++k) {
        size_t pivot = k;
        for (size_t i = k + 1; i < p; ++i)
            if (std::abs(a[i][k]) > std::abs(a[pivot][k])) pivot = i;
        std::swap(a[k], a[pivot]);
        for (size_t i = k + 1; i < p; ++i) {
            const double f = a[i][k] / a[k][k];
            for (size_t j = k; j <= p; ++j) a[i][j] -= f * a[k][j];
        }
    }
    std::vector<double> x(p);
    for (size_t k = p; k-- > 0;) {
        double acc = a[k][p];
        for (size_t j = k + 1; j < p; ++j) acc -= a[k][j] * x[j];
        x[k] = acc / a[k][k];
    }
    return x;
}

double penalized_objective(const std::vector<std::vector<double>>& cols,
                           const std::vector<double>& t, const std::vector<double>& beta,
                           double intercept, double ridge) {
    double acc = 0.0;
    for (size_t r = 0; r < t.size(); ++r) {
        double pred = intercept;
        for (size_t k = 0; k < cols.size(); ++k) pred += beta[k] * cols[k][r];
        acc += (t[r] - pred) * (t[r] - pred);
    }
    for (double b : beta) acc += ridge * b * b;
    return acc;
}

// The published 1-DOF V-function evaluated literally, square roots and all.
double printed_v(double x1, double x2) {
    auto sq = [](double v) { return v * v; };
    const double A = 10 * x2 - 12 * x1 + 47;
    const double Bq = 4.3e-2 * x2 - 3.5 * x1 + 11;
    const double C = 0.2 * x1 + 0.3 * x2 - 0.5;
    const double D = 0.4 * x1 + 0.1 * x2 - 1.1;
    const double E = 0.1 * x1 - 1.5;
    const double Z7 = 0.6 * x1 + 6.3e-2 * x2 - 1.7;
    const double Z9 = 1.1 * x1 + 0.4 * x2 - 3.3;
    const double A11 = 1.2 * x1 + 14 * x2 - 10;
    const double W = 9.1e-2 * x2 - 2.9 * x1 + 8.3;
    const double B = 9.1e-2 * x2 - 2.9 * x1 + 0.5 * std::sqrt(sq(W) + 1) + 7.8;
    const double Z13 = 3.6 * x1 + 0.4 * x2 - 11;
    return 1.7e-5 * A * std::pow(Bq, 3) - 7.1e-4 * x2 - 4.6 * x1 -
           8.2e-6 * std::pow(Bq, 3) * std::pow(C, 3) - 9.8e-3 * std::pow(D, 6) +
           11 * std::pow(E, 3) + 11 * std::sqrt(sq(Z7) + 1) +
           8.7e-6 * std::sqrt(sq(A) * std::pow(Bq, 6) + 1) + 0.3 * std::sqrt(sq(Z9) + 1) +
           std::sqrt(3.9e-3 * sq(Bq) * sq(C) + 1) + 6.5e-5 * std::sqrt(sq(A11) * sq(B) + 1) -
           5.5e-2 * Bq * C - 1.7 * std::sqrt(sq(Z13) + 1) - 2 * std::sqrt(sq(x1 - 3.1) + 1) -
           1.3e-4 * A11 * B + 23;
}

} // namespace

TEST_CASE("predict basics") {
    SymbolicModel m;
    m.features = {Expr::variable(0)};
    m.beta = {2.0};
    CHECK(predict(m, Vec{3.0}) == 6.0);

    SymbolicModel zero;
    CHECK(predict(zero, Vec{123.0}) == 0.0);

    SymbolicModel two;
    two.features = {Expr::variable(0), Expr::apply(Func::Square, Expr::variable(0))};
    two.beta = {1.0, 1.0};
    CHECK(predict(two, Vec{2.0}) == 6.0);
}

TEST_CASE("non-finite feature poisons the prediction") {
    SymbolicModel m;
    auto blow = Expr::apply(Func::Cube, Expr::apply(Func::Cube, Expr::constant(1e80)));
    m.features = {blow, Expr::variable(0)};
    m.beta = {0.0, 1.0}; // even a zero-coefficient feature counts
    CHECK_FALSE(std::isfinite(predict(m, Vec{1.0})));
}

TEST_CASE("count_parameters definition") {
    SymbolicModel zero;
    CHECK(count_parameters(zero) == 0);

    SymbolicModel m;
    m.features = {Expr::apply(Func::Add, Expr::variable(0), Expr::constant(1.0)),
                  Expr::variable(1)};
    m.beta = {2.0, 0.0};
    m.intercept = 0.0;
    CHECK(count_parameters(m) == 2); // beta_1 plus the embedded 1
}

TEST_CASE("published 1-DOF V-function fixture: 100 parameters, same values") {
    const std::string path = std::string(SYMVF_DATA_DIR) + "/pend1_printed_v.json";
    REQUIRE(std::filesystem::exists(path));
    const SymbolicModel m = load_model(path);

    CHECK(count_parameters(m) == 100);
    CHECK(max_var_index(m) == 1);
    for (const auto& f : m.features) CHECK(depth(*f) <= 7);

    const CompiledModel v(m);
    double worst = 0.0;
    for (double a = -3.15; a <= 3.15; a += 0.21)
        for (double ad = -30.0; ad <= 30.0; ad += 2.0) {
            const double got = v(Vec{a, ad});
            const double want = printed_v(a, ad);
            worst = std::max(worst, std::abs(got - want) / (1.0 + std::abs(want)));
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("model json round trip") {
    Rng rng(4);
    SymbolicModel m;
    for (int i = 0; i < 5; ++i) {
        m.features.push_back(random_expr(rng, 2, 4));
        m.beta.push_back(rng.uniform(-3, 3));
    }
    m.intercept = 1.0 / 7.0;
    const auto j = model_to_json(m);
    const SymbolicModel back = model_from_json(j);
    CHECK(back.intercept == m.intercept);
    REQUIRE(back.n_f() == m.n_f());
    for (int i = 0; i < m.n_f(); ++i) {
        CHECK(back.beta[static_cast<size_t>(i)] == m.beta[static_cast<size_t>(i)]);
        CHECK(equal_structure(*back.features[static_cast<size_t>(i)],
                              *m.features[static_cast<size_t>(i)]));
    }
}

TEST_CASE("exact recovery of a linear combination") {
    Rng rng(11);
    auto phi1 = parse_expr("(sq x0)");
    auto phi2 = parse_expr("(bent x0)");
    std::vector<std::vector<double>> cols(2, std::vector<double>(50));
    std::vector<double> t(50);
    for (size_t r = 0; r < 50; ++r) {
        const Vec x{rng.uniform(-2, 2)};
        cols[0][r] = eval_expr(*phi1, x);
        cols[1][r] = eval_expr(*phi2, x);
        t[r] = 2.0 * cols[0][r] + 3.0 * cols[1][r];
    }
    const FitResult fit = fit_coefficients(cols, t, 0.0);
    CHECK_THAT(fit.beta[0], Catch::Matchers::WithinAbs(2.0, 1e-9));
    CHECK_THAT(fit.beta[1], Catch::Matchers::WithinAbs(3.0, 1e-9));
    CHECK(fit.mse < 1e-18);
}

TEST_CASE("constant targets are fit exactly by the intercept") {
    Rng rng(12);
    std::vector<std::vector<double>> cols(2, std::vector<double>(30));
    for (auto& c : cols)
        for (auto& v : c) v = rng.uniform(-1, 1);
    std::vector<double> t(30, 4.25);
    const FitResult fit = fit_coefficients(cols, t, 0.0);
    CHECK(fit.mse < 1e-20);
}

TEST_CASE("fit matches the normal-equations oracle") {
    Rng rng(13);
    for (double ridge : {0.0, 1e-3}) {
        std::vector<std::vector<double>> cols(4, std::vector<double>(80));
        std::vector<double> t(80);
        for (size_t r = 0; r < 80; ++r) {
            for (auto& c : cols) c[r] = rng.normal();
            t[r] = rng.normal(0.0, 2.0);
        }
        const FitResult fit = fit_coefficients(cols, t, ridge);
        const auto oracle = normal_equations_oracle(cols, t, ridge);
        CHECK_THAT(fit.intercept, Catch::Matchers::WithinRel(oracle[0], 1e-8));
        for (size_t k = 0; k < 4; ++k)
            CHECK_THAT(fit.beta[k], Catch::Matchers::WithinRel(oracle[k + 1], 1e-8));
    }
}

TEST_CASE("degenerate columns are dropped, never fatal") {
    Rng rng(14);
    std::vector<std::vector<double>> cols(3, std::vector<double>(40));
    std::vector<double> t(40);
    for (size_t r = 0; r < 40; ++r) {
        cols[0][r] = 5.0;                // constant
        cols[1][r] = rng.uniform(-1, 1); // fine
        cols[2][r] = r == 7 ? std::numeric_limits<double>::infinity() : 1.0; // non-finite
        t[r] = 3.0 * cols[1][r] - 1.0;
    }
    const FitResult fit = fit_coefficients(cols, t, 0.0);
    CHECK(fit.beta[0] == 0.0);
    CHECK(fit.beta[2] == 0.0);
    CHECK_THAT(fit.beta[1], Catch::Matchers::WithinAbs(3.0, 1e-9));
    CHECK_THAT(fit.intercept, Catch::Matchers::WithinAbs(-1.0, 1e-9));

    SECTION("all columns degenerate: intercept-only mean") {
        std::vector<std::vector<double>> bad(2, std::vector<double>(10, 1.25));
        std::vector<double> targets(10);
        for (size_t r = 0; r < 10; ++r) targets[r] = static_cast<double>(r);
        const FitResult f = fit_coefficients(bad, targets, 0.0);
        CHECK(f.beta[0] == 0.0);
        CHECK(f.beta[1] == 0.0);
        CHECK_THAT(f.intercept, Catch::Matchers::WithinAbs(4.5, 1e-12));
    }
}

TEST_CASE("reported MSE equals a direct residual recomputation") {
    Rng rng(15);
    std::vector<std::vector<double>> cols(3, std::vector<double>(60));
    std::vector<double> t(60);
    for (size_t r = 0; r < 60; ++r) {
        for (auto& c : cols) c[r] = rng.normal();
        t[r] = rng.normal();
    }
    const FitResult fit = fit_coefficients(cols, t, 1e-8);
    double sse = 0.0;
    for (size_t r = 0; r < 60; ++r) {
        double pred = fit.intercept;
        for (size_t k = 0; k < 3; ++k) pred += fit.beta[k] * cols[k][r];
        sse += (t[r] - pred) * (t[r] - pred);
    }
    CHECK_THAT(fit.mse, Catch::Matchers::WithinAbs(sse / 60.0, 1e-12));
}

TEST_CASE("least-squares optimality under coefficient perturbation") {
    Rng rng(16);
    for (int inst = 0; inst < 20; ++inst) {
        const double ridge = inst % 2 ? 1e-4 : 0.0;
        std::vector<std::vector<double>> cols(3, std::vector<double>(50));
        std::vector<double> t(50);
        for (size_t r = 0; r < 50; ++r) {
            for (auto& c : cols) c[r] = rng.normal();
            t[r] = rng.normal(0.0, 3.0);
        }
        const FitResult fit = fit_coefficients(cols, t, ridge);
        const double base = penalized_objective(cols, t, fit.beta, fit.intercept, ridge);
        for (size_t k = 0; k < 3; ++k) {
            for (double d : {-1e-3, 1e-3}) {
                auto beta = fit.beta;
                beta[k] += d;
                CHECK(penalized_objective(cols, t, beta, fit.intercept, ridge) >= base - 1e-9);
            }
        }
    }
}

TEST_CASE("ridge monotonicity of the coefficient norm") {
    Rng rng(17);
    std::vector<std::vector<double>> cols(4, std::vector<double>(50));
    std::vector<double> t(50);
    for (size_t r = 0; r < 50; ++r) {
        for (auto& c : cols) c[r] = rng.normal();
        t[r] = rng.normal(0.0, 2.0);
    }
    double prev = std::numeric_limits<double>::infinity();
    for (double ridge : {0.0, 1e-6, 1e-3, 1e-1, 10.0}) {
        const FitResult fit = fit_coefficients(cols, t, ridge);
        double norm = 0.0;
        for (double b : fit.beta) norm += b * b;
        CHECK(norm <= prev + 1e-12);
        prev = norm;
    }
}
