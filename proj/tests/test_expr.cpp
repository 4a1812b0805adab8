#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "symvf/expr.hpp"

using namespace symvf;

TEST_CASE("eval on leaves and simple compositions") {
    const double x[] = {2.0, -1.0};
    CHECK(eval_expr(*Expr::constant(3.5), std::span<const double>(x)) == 3.5);

    auto sq_cube = Expr::apply(Func::Square, Expr::apply(Func::Cube, Expr::variable(0)));
    CHECK(eval_expr(*sq_cube, std::span<const double>(x)) == 64.0); // (2^3)^2

    CHECK(eval_expr(*Expr::apply(Func::Bent, Expr::constant(0.0)), std::span<const double>(x)) ==
          0.0);
    const double bent1 = eval_expr(*Expr::apply(Func::Bent, Expr::constant(1.0)),
                                   std::span<const double>(x));
    CHECK_THAT(bent1, Catch::Matchers::WithinAbs((std::sqrt(2.0) - 1.0) / 2.0 + 1.0, 1e-15));
}

TEST_CASE("bent identity against its closed form") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform(-100.0, 100.0);
        const double expected = (std::sqrt(x * x + 1.0) - 1.0) / 2.0 + x;
        CHECK(std::abs(bent(x) - expected) < 1e-12);
    }
}

TEST_CASE("depth convention: leaf is 0") {
    CHECK(depth(*Expr::variable(0)) == 0);
    auto add = Expr::apply(Func::Add, Expr::variable(0), Expr::constant(1.0));
    CHECK(depth(*add) == 1);
    CHECK(depth(*Expr::apply(Func::Square, add)) == 2);
}

TEST_CASE("random generation respects the depth bound") {
    Rng rng(42);
    SECTION("depth 0 forces a leaf") {
        for (int i = 0; i < 100; ++i) {
            auto e = random_expr(rng, 2, 0);
            CHECK(depth(*e) == 0);
        }
    }
    SECTION("10k draws at depth 4") {
        for (int i = 0; i < 10000; ++i) {
            auto e = random_expr(rng, 3, 4);
            CHECK(depth(*e) <= 4);
            CHECK(max_var_index(*e) < 3);
        }
    }
}

TEST_CASE("random generation is deterministic for a fixed seed") {
    Rng a(123), b(123);
    for (int i = 0; i < 50; ++i) {
        auto ea = random_expr(a, 2, 5);
        auto eb = random_expr(b, 2, 5);
        CHECK(serialize_expr(*ea) == serialize_expr(*eb));
    }
}

TEST_CASE("mutation keeps trees valid and leaves the input alone") {
    Rng rng(99);
    const int max_depth = 5;
    for (int i = 0; i < 2000; ++i) {
        auto original = random_expr(rng, 2, max_depth);
        const std::string before = serialize_expr(*original);
        auto mutated = mutate_expr(original, rng, 2, max_depth);
        CHECK(depth(*mutated) <= max_depth);
        CHECK(serialize_expr(*original) == before);
    }
}

TEST_CASE("constant perturbation only changes the value") {
    // operator selector in [0.5, 0.75) picks the constant jitter
    auto tree = Expr::constant(2.0);
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        Rng rng(seed);
        auto m = mutate_expr(tree, rng, 1, 3);
        if (m->kind == Expr::Kind::Constant && m->value != 2.0) {
            SUCCEED();
            return;
        }
    }
    FAIL("no seed produced a constant perturbation");
}

TEST_CASE("mutation is deterministic for a fixed seed") {
    Rng setup(5);
    auto tree = random_expr(setup, 2, 5);
    Rng a(77), b(77);
    auto ma = mutate_expr(tree, a, 2, 5);
    auto mb = mutate_expr(tree, b, 2, 5);
    CHECK(serialize_expr(*ma) == serialize_expr(*mb));
}

TEST_CASE("serialization grammar") {
    CHECK(serialize_expr(*Expr::variable(1)) == "x1");
    auto parsed = parse_expr("x1");
    REQUIRE(parsed->kind == Expr::Kind::Variable);
    CHECK(parsed->var == 1);

    auto b = parse_expr("(bent (mul x0 x0))");
    REQUIRE(b->kind == Expr::Kind::Function);
    CHECK(b->fn == Func::Bent);
    CHECK(b->a->fn == Func::Mul);

    CHECK_THROWS_AS(parse_expr("(add x0)"), ParseError);
    CHECK_THROWS_AS(parse_expr("(frob x0 x1)"), ParseError);
    CHECK_THROWS_AS(parse_expr("(add x0 x1"), ParseError);
    CHECK_THROWS_AS(parse_expr("x"), ParseError);
    CHECK_THROWS_AS(parse_expr("(add x0 x1) junk"), ParseError);
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_expr("(add x0 &)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position == 8);
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}

TEST_CASE("round trip is the identity on structure and exact on constants") {
    Rng rng(2024);
    for (int i = 0; i < 2000; ++i) {
        auto e = random_expr(rng, 4, 6);
        auto back = parse_expr(serialize_expr(*e));
        CHECK(equal_structure(*e, *back));
    }
    // constants that need all 17 digits
    auto c = Expr::constant(1.0 / 3.0);
    auto back = parse_expr(serialize_expr(*c));
    CHECK(back->value == 1.0 / 3.0);
}

TEST_CASE("tape evaluation matches recursive evaluation") {
    Rng rng(31337);
    double stack[64];
    for (int i = 0; i < 500; ++i) {
        auto e = random_expr(rng, 3, 6);
        Tape tape(*e);
        for (int s = 0; s < 10; ++s) {
            const Vec x{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
            const double a = eval_expr(*e, x);
            const double b = tape.eval(x, stack);
            if (std::isfinite(a) || std::isfinite(b))
                CHECK(a == b);
        }
    }
}

TEST_CASE("non-finite results propagate instead of throwing") {
    // cube(cube(cube(...))) of a large constant overflows
    auto e = Expr::constant(1e100);
    for (int i = 0; i < 4; ++i) e = Expr::apply(Func::Cube, e);
    const Vec x{0.0};
    CHECK_FALSE(std::isfinite(eval_expr(*e, x)));
}
