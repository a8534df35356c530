// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "hwl/normal_form.hpp"
#include "hwl/odecert.hpp"
#include "support.hpp"

using namespace hwl;
using hwl::test::E;
using hwl::test::P;

namespace {

bool same_poly(const Expr& a, const Expr& b) { return (normalize(a) - normalize(b)).is_zero(); }

std::set<std::string> names_with_time(const Expr& e) { return free_names(e); }

}  // namespace

TEST_CASE("eval") {
    CHECK(eval(Expr::constant(5), {}) == 5);
    CHECK(std::fabs(eval(E("sin(t)^2 + cos(t)^2"), {{"t", 0.37}}) - 1.0) <= 1e-12);
    CHECK(eval(E("g*t^2/2 + v*t + x"), {{"g", -1}, {"t", 2}, {"v", 3}, {"x", 0}}) == doctest::Approx(4.0));
    CHECK_THROWS_AS(eval(E("x + y"), {{"x", 1}}), EvalError);
    CHECK_THROWS_AS(eval(E("1/(x - 1)"), {{"x", 1}}), EvalError);
    CHECK_THROWS_AS(Expr::div(Expr::var("x"), Expr::constant(0)), Error);
}

TEST_CASE("diff: closed forms") {
    CHECK(same_poly(diff(E("t^2"), kTimeName), E("2*t")));
    const std::set<std::string> k{"a0", "a1", "a2", "a3", "a5", "c"};
    const Expr poly = E("a5*t^5 + a3*(t^3/c) - a2*exp(t^2) + a1*cos(t) + a0", k);
    const Expr expected = E("5*a5*t^4 + 3*a3*(t^2/c) - 2*a2*t*exp(t^2) - a1*sin(t)", k);
    CHECK(same_poly(diff(poly, kTimeName), expected));
    CHECK(same_poly(diff(E("x*cos(t) + y*sin(t)"), kTimeName), E("-x*sin(t) + y*cos(t)")));
    CHECK(diff(Expr::sym("g"), "g").is_const(0));
}

TEST_CASE("diff agrees with central differences") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (const auto& s : test::regression_set()) {
        const Expr e = E(s);
        const auto names = names_with_time(e);
        for (const auto& w : names) {
            const Expr d = diff(e, w);
            for (int i = 0; i < 50; ++i) {
                const Valuation v = test::random_valuation(names, rng);
                double exact = 0, approx = 0;
                try {
                    exact = eval(d, v);
                    approx = test::central_diff(e, w, v);
                } catch (const EvalError&) {
                    continue;
                }
                if (std::fabs(exact) > 1e6 || std::fabs(eval(e, v)) > 1e6) {
                    continue;
                }
                INFO(s << " d/d" << w);
                CHECK(std::fabs(exact - approx) <= 1e-5 * (1 + std::fabs(exact)));
                ++checked;
            }
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("lie derivative") {
    const FieldMap ball{{"x", E("v")}, {"v", E("-g")}};
    CHECK(same_poly(lie_derivative(E("v^2/2"), ball), E("-g*v")));
    const FieldMap rot{{"x", E("y")}, {"y", E("-x")}};
    CHECK(normalize(lie_derivative(E("x^2 + y^2"), rot)).is_zero());
    CHECK(normalize(lie_derivative(Expr::constant(7), rot)).is_zero());
    CHECK_THROWS_AS(lie_derivative(E("x*t"), rot), Error);
}

TEST_CASE("lie derivative matches the slope along an RK4 trajectory") {
    const VectorField f{{{"x", E("y")}, {"y", E("-x + x*y/4")}}};
    const Expr mu = E("x^2*y + sin(x)");
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const Valuation s = test::random_valuation({"x", "y"}, rng, -2, 2);
        const double h = 1e-3;
        const Trajectory fwd = rk4_integrate(f, s, h, 1);
        const VectorField back{{{"x", E("-y")}, {"y", E("x - x*y/4")}}};
        const Trajectory bwd = rk4_integrate(back, s, h, 1);
        const double slope = (eval(mu, fwd.points.back().second) - eval(mu, bwd.points.back().second)) / (2 * h);
        CHECK(std::fabs(eval(lie_derivative(mu, f.components), s) - slope) <= 1e-4 * (1 + std::fabs(slope)));
    }
}

TEST_CASE("normalize") {
    CHECK(normalize(E("x + x")) == normalize(E("2*x")));
    CHECK(normalize(E("(x*cos(t) + y*sin(t))^2 + (y*cos(t) - x*sin(t))^2")) == normalize(E("x^2 + y^2")));
    CHECK(normalize(E("2*(x + 1)*(x - 1) - 2*x^2 + 2")).is_zero());
    CHECK(normalize(E("x/(y + 1)")).has_opaque());
    CHECK_FALSE(normalize(E("x/c", {"c"})).has_opaque());
}

TEST_CASE("normalize is idempotent and preserves values") {
    std::mt19937_64 rng(5);
    for (const auto& s : test::regression_set()) {
        const Expr e = E(s);
        const Polynomial p = normalize(e);
        CHECK(normalize(p.to_expr()) == p);
        const auto names = free_names(e);
        int agree = 0;
        for (int i = 0; i < 1000; ++i) {
            const Valuation v = test::random_valuation(names, rng);
            double a = 0, b = 0;
            try {
                a = eval(e, v);
                b = p.eval(v);
            } catch (const EvalError&) {
                continue;
            }
            if (std::fabs(a) > 1e6) {
                continue;
            }
            INFO(s);
            CHECK(test::close(a, b, 1e-9));
            ++agree;
        }
        CHECK(agree > 900);
    }
}

TEST_CASE("expr_eq") {
    const auto dbl = expr_eq(E("sin(2*t)"), E("2*sin(t)*cos(t)"));
    CHECK(dbl.verdict == Equality::Unknown);
    CHECK(dbl.note == "likely-equal");
    CHECK(expr_eq(E("x^2"), E("x*x")).verdict == Equality::Equal);
    const auto ne = expr_eq(E("x^2"), E("x^3"));
    REQUIRE(ne.verdict == Equality::NotEqual);
    REQUIRE(ne.witness);
    const double x = ne.witness->at("x");
    CHECK(std::fabs(x * x - x * x * x) > 1e-9);
}

TEST_CASE("expr_eq Equal implies numeric agreement") {
    std::mt19937_64 rng(9);
    for (const auto& s : test::regression_set()) {
        const Expr a = E(s);
        const Expr b = normalize(a).to_expr();
        REQUIRE(expr_eq(a, b).verdict == Equality::Equal);
        for (int i = 0; i < 100; ++i) {
            const Valuation v = test::random_valuation(free_names(a), rng);
            try {
                const double x = eval(a, v), y = eval(b, v);
                if (std::fabs(x) < 1e6) {
                    CHECK(test::close(x, y, 1e-9));
                }
            } catch (const EvalError&) {
            }
        }
    }
}

TEST_CASE("nnf") {
    CHECK(nnf(P("!(a < b)")) == P("a >= b"));
    CHECK(nnf(P("!(x > 0 & y = 1)")) == P("x <= 0 | y != 1"));
    CHECK(nnf(P("!!(a = b)")) == P("a = b"));
    std::mt19937_64 rng(2);
    const std::vector<std::string> preds{"!(x < y | !(y = 0 & x >= 1))", "!(x*y > 1 -> x != y)", "!!(x <= y) & !(x > 2)"};
    for (const auto& s : preds) {
        const Pred p = P(s);
        const Pred q = nnf(p);
        for (int i = 0; i < 200; ++i) {
            Valuation v = test::random_valuation({"x", "y"}, rng);
            if (i % 4 == 0) {
                v["y"] = 0;  // hit the equality atoms
            }
            CHECK(eval(p, v) == eval(q, v));
        }
    }
}

TEST_CASE("substitute") {
    CHECK(substitute(P("v^2 = c"), Binding{{"v", E("-v")}}) == P("(-v)^2 = c"));
    CHECK(substitute(E("x + y"), Binding{}) == E("x + y"));
    CHECK(substitute(E("x + y"), Binding{{"x", E("y")}, {"y", E("x")}}) == E("y + x"));
    std::mt19937_64 rng(4);
    const Expr e = E("x^2*sin(y) - x/(2 + y^2)");
    const Expr u = E("y*cos(x) + 1");
    for (int i = 0; i < 200; ++i) {
        Valuation v = test::random_valuation({"x", "y"}, rng);
        const double lhs = eval(substitute(e, Binding{{"x", u}}), v);
        v["x"] = eval(u, v);
        CHECK(test::close(lhs, eval(e, v), 1e-12));
    }
}

TEST_CASE("substitution under a quantifier avoids capture") {
    const Pred p = P("forall t in [0, 1]. x + t >= 0");
    const Pred q = substitute(p, Binding{{"x", Expr::var("t")}});
    REQUIRE(q.kind() == PredKind::Forall);
    CHECK(q.bound() != "t");
    CHECK(eval(q, {{"t", -0.5}}) == false);
    CHECK(eval(q, {{"t", 0.5}}) == true);
}

TEST_CASE("printing re-parses to the same term") {
    for (const auto& s : test::regression_set()) {
        const Expr e = E(s);
        CHECK(E(to_string(e)) == e);
    }
    const Expr tricky = Expr::sub(Expr::var("a"), Expr::mul(Expr::neg(Expr::var("b")), Expr::neg(Expr::constant(3))));
    CHECK(E(to_string(tricky)) == tricky);
}
