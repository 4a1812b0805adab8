#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "symvf/baseline.hpp"
#include "symvf/rng.hpp"

using namespace symvf;

TEST_CASE("membership weights") {
    FuzzyApproximator fa({{0.0, 10.0, 11, false}});
    FuzzyApproximator::Weight w[FuzzyApproximator::kMaxActive];

    SECTION("at a center: weight 1 there, 0 elsewhere") {
        const int k = fa.membership({3.0}, w);
        double at3 = 0.0, sum = 0.0;
        for (int i = 0; i < k; ++i) {
            sum += w[i].weight;
            if (w[i].index == 3) at3 += w[i].weight;
        }
        CHECK_THAT(at3, Catch::Matchers::WithinAbs(1.0, 1e-15));
        CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-15));
    }
    SECTION("midpoint between adjacent centers: 0.5 / 0.5") {
        const int k = fa.membership({3.5}, w);
        REQUIRE(k == 2);
        CHECK_THAT(w[0].weight, Catch::Matchers::WithinAbs(0.5, 1e-15));
        CHECK_THAT(w[1].weight, Catch::Matchers::WithinAbs(0.5, 1e-15));
    }
    SECTION("outside the hull: clipped") {
        fa.theta().assign(fa.size(), 0.0);
        fa.theta()[0] = 7.0;
        CHECK(fa.predict({-5.0}) == 7.0);
    }
}

TEST_CASE("partition of unity on a wrapped 2-D grid") {
    FuzzyApproximator fa({{-kPi, kPi, 9, true}, {-30.0, 30.0, 7, false}});
    FuzzyApproximator::Weight w[FuzzyApproximator::kMaxActive];
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
        const Vec x{rng.uniform(-2 * kPi, 2 * kPi), rng.uniform(-30, 30)};
        const int k = fa.membership(x, w);
        double sum = 0.0;
        for (int j = 0; j < k; ++j) {
            CHECK(w[j].weight >= 0.0);
            sum += w[j].weight;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("wrapped axis: the last center neighbors the first") {
    FuzzyApproximator fa({{-kPi, kPi, 8, true}});
    fa.theta().assign(fa.size(), 0.0);
    fa.theta()[0] = 1.0; // center at -pi
    // halfway between the last center and -pi (across the seam)
    const double seam = -kPi + 7.5 * fa.axes()[0].spacing();
    CHECK_THAT(fa.predict({seam}), Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("prediction matches an independent bilinear interpolation") {
    FuzzyApproximator fa({{0.0, 0.05, 6, false}, {-0.4, 0.4, 5, false}});
    Rng rng(4);
    for (auto& t : fa.theta()) t = rng.uniform(-10, 10);
    const auto& ax = fa.axes();
    auto oracle = [&](double x, double y) {
        const double sx = (x - ax[0].lo) / ax[0].spacing();
        const double sy = (y - ax[1].lo) / ax[1].spacing();
        const int i = std::min(static_cast<int>(sx), ax[0].count - 2);
        const int j = std::min(static_cast<int>(sy), ax[1].count - 2);
        const double fx = sx - i, fy = sy - j;
        auto th = [&](int a, int b) { return fa.theta()[static_cast<size_t>(a * ax[1].count + b)]; };
        return (1 - fx) * (1 - fy) * th(i, j) + fx * (1 - fy) * th(i + 1, j) +
               (1 - fx) * fy * th(i, j + 1) + fx * fy * th(i + 1, j + 1);
    };
    for (int k = 0; k < 10000; ++k) {
        const double x = rng.uniform(0.0, 0.05), y = rng.uniform(-0.4, 0.4);
        CHECK(std::abs(fa.predict({x, y}) - oracle(x, y)) < 1e-12);
    }
    SECTION("constant theta predicts the constant everywhere") {
        for (auto& t : fa.theta()) t = 3.25;
        for (int k = 0; k < 100; ++k)
            CHECK_THAT(fa.predict({rng.uniform(0, 0.05), rng.uniform(-0.4, 0.4)}),
                       Catch::Matchers::WithinAbs(3.25, 1e-12));
    }
}

TEST_CASE("value iteration with gamma = 0 reduces to the best reward") {
    EnvModel env = make_friction();
    env.gamma = 0.0;
    const FuzzyVIResult vi = fuzzy_v_iteration(env, grid_axes_for(env, {21}), 1e-10, 10);
    REQUIRE(vi.converged);
    const FuzzyApproximator& fa = vi.approx;
    for (size_t j = 0; j < fa.size(); ++j) {
        const Vec c = fa.center(j);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& u : env.actions) best = std::max(best, step(env, c, u).second);
        CHECK_THAT(fa.theta()[j], Catch::Matchers::WithinAbs(best, 1e-14));
    }
}

TEST_CASE("sweeps contract at roughly the discount rate") {
    const EnvModel env = make_friction();
    const FuzzyVIResult vi = fuzzy_v_iteration(env, grid_axes_for(env, {41}), 1e-8, 5000);
    REQUIRE(vi.converged);
    const auto& ch = vi.sup_changes;
    REQUIRE(ch.size() > 60);
    // least-squares slope of log(change) over the middle of the history
    const size_t lo = ch.size() / 2, hi = ch.size() - 5;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t k = lo; k < hi; ++k) {
        if (ch[k] <= 0) continue;
        const double x = static_cast<double>(k), y = std::log(ch[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    REQUIRE(n > 20);
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope <= std::log(env.gamma) + 0.01);
}

TEST_CASE("converged theta is a fixed point of the sweep") {
    const EnvModel env = make_friction();
    const double tol = 1e-9;
    const FuzzyVIResult vi = fuzzy_v_iteration(env, grid_axes_for(env, {41}), tol, 5000);
    REQUIRE(vi.converged);
    const FuzzyApproximator& fa = vi.approx;
    // independent re-application of one sweep through live step() calls
    for (size_t j = 0; j < fa.size(); ++j) {
        const Vec c = fa.center(j);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& u : env.actions) {
            auto [xn, r] = step(env, c, u);
            best = std::max(best, r + env.gamma * fa.predict(xn));
        }
        CHECK(std::abs(best - fa.theta()[j]) <= 2 * tol);
    }
}

TEST_CASE("non-convergence is flagged, not fatal") {
    const EnvModel env = make_friction();
    const FuzzyVIResult vi = fuzzy_v_iteration(env, grid_axes_for(env, {21}), 1e-12, 3);
    CHECK_FALSE(vi.converged);
    CHECK(vi.sweeps == 3);
}

TEST_CASE("the published 1-DOF baseline grid has 961 parameters") {
    const EnvModel env = make_pend1();
    CHECK(FuzzyApproximator(grid_axes_for(env, {31, 31})).size() == 961);
}

TEST_CASE("baseline csv round trip") {
    FuzzyApproximator fa({{-kPi, kPi, 5, true}, {-2.0, 2.0, 4, false}});
    Rng rng(9);
    for (auto& t : fa.theta()) t = rng.normal(0, 10);
    const std::string path =
        (std::filesystem::temp_directory_path() / "symvf_baseline_test.csv").string();
    save_baseline_csv(fa, path);
    const FuzzyApproximator back = load_baseline_csv(path);
    REQUIRE(back.size() == fa.size());
    REQUIRE(back.axes().size() == 2);
    CHECK(back.axes()[0].wrap);
    CHECK_FALSE(back.axes()[1].wrap);
    for (size_t j = 0; j < fa.size(); ++j) CHECK(back.theta()[j] == fa.theta()[j]);
    std::remove(path.c_str());
}
