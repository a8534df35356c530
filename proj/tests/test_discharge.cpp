// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "hwl/discharge.hpp"
#include "support.hpp"

using namespace hwl;
using hwl::test::E;
using hwl::test::P;

namespace {

const std::set<std::string> kConsts{"g", "h", "r", "c"};

Pred Q(std::string_view s) { return P(s, kConsts); }

std::vector<Pred> hyps_of(std::initializer_list<const char*> hs) {
    std::vector<Pred> out;
    for (const auto* h : hs) {
        out.push_back(Q(h));
    }
    return out;
}

Verdict run(std::initializer_list<const char*> hs, const char* concl, const LemmaDB& db = {}) {
    return prove(hyps_of(hs), Q(concl), db);
}

bool witness_violates(const std::vector<Pred>& hyps, const Pred& concl, const Valuation& w) {
    PredEvalOptions o;
    o.eq_tol = 1e-6;
    for (const auto& h : hyps) {
        if (!eval(h, w, o)) {
            return false;
        }
    }
    return !eval(concl, w);
}

LinearConstraint lc(std::map<std::string, Rational> coeffs, Rational constant, bool strict = false) {
    return {std::move(coeffs), constant, strict};
}

bool holds(const LinearConstraint& c, const std::map<std::string, Rational>& v) {
    Rational sum = c.constant;
    for (const auto& [x, k] : c.coeffs) {
        sum += k * v.at(x);
    }
    return c.strict ? sum < 0 : sum <= 0;
}

struct Case {
    std::vector<std::string> hyps;
    std::string concl;
};

// Satisfiable hypothesis sets with conclusions of mixed validity.
const std::vector<Case>& regression_obligations() {
    static const std::vector<Case> cases{
        {{"0 > g", "2*g*x - 2*g*h = v*v"}, "x <= h"},
        {{"x^2 + y^2 = r^2"}, "(x*cos(t) + y*sin(t))^2 + (y*cos(t) - x*sin(t))^2 = r^2"},
        {{"x >= 0"}, "x >= 1"},
        {{"x <= y", "y <= z"}, "x <= z"},
        {{"x + y <= 2", "x - y <= 0"}, "x <= 1"},
        {{"x + y <= 2", "x - y <= 0"}, "y <= 1"},
        {{}, "x^2 + 1 > 0"},
        {{}, "(x - y)^2 >= 0"},
        {{"x > 0", "y > 0"}, "x*y > 0"},
        {{"x > 0"}, "x^3 > x"},
        {{"g < 0", "x >= 0"}, "g*x <= 0"},
        {{"x = 2*y + 1", "y >= 0"}, "x >= 1"},
        {{"x = y"}, "sin(x)^2 + cos(y)^2 = 1"},
        {{"x = y", "v = w"}, "x*v = y*w"},
        {{}, "x*y <= x^2"},
        {{"c > 0", "x >= 0"}, "forall t in [0, 3]. x + c*t >= 0"},
        {{"c > 0", "x <= 5"}, "forall t in [0, 3]. x + c*t <= 5"},
    };
    return cases;
}

}  // namespace

TEST_CASE("discharge examples") {
    const auto bb = run({"0 > g", "2*g*x - 2*g*h = v*v"}, "x <= h");
    CHECK(bb.is_proved());
    CHECK(bb.method.find("square-rule") != std::string::npos);

    const auto rot = run({"x^2 + y^2 = r^2"}, "(x*cos(t) + y*sin(t))^2 + (y*cos(t) - x*sin(t))^2 = r^2");
    CHECK(rot.is_proved());
    CHECK(rot.method.find("poly-identity") != std::string::npos);

    const auto bad = run({"x >= 0"}, "x >= 1");
    REQUIRE(bad.is_refuted());
    CHECK(bad.witness.at("x") >= 0);
    CHECK(bad.witness.at("x") < 1);

    CHECK(run({"x <= y", "y <= z"}, "x <= z").is_proved());
    CHECK(run({"x + y <= 2", "x - y <= 0"}, "x <= 1").is_proved());
    CHECK(run({}, "x^2 >= 0").is_proved());
    CHECK(run({"x > 1 | x < -1"}, "x != 0").is_proved());
    CHECK(run({"x >= 0 & y >= 0"}, "x + y >= 0 & !(x + y < 0)").is_proved());
    CHECK(run({"x > 0"}, "x^3 > x").kind != VerdictKind::Proved);
}

TEST_CASE("refuted witnesses violate their obligation") {
    for (const auto& c : regression_obligations()) {
        std::vector<Pred> hyps;
        for (const auto& h : c.hyps) {
            hyps.push_back(Q(h));
        }
        const auto v = prove(hyps, Q(c.concl), {});
        if (v.is_refuted()) {
            INFO(c.concl);
            CHECK(witness_violates(hyps, Q(c.concl), v.witness));
        }
    }
}

TEST_CASE("proved identities survive re-evaluation") {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(-5, 5), neg(-10, -0.1);
    const Pred rot = Q("(x*cos(t) + y*sin(t))^2 + (y*cos(t) - x*sin(t))^2 = r^2");
    const Pred bb = Q("x <= h");
    PredEvalOptions o;
    o.eq_tol = 1e-9;
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng), y = u(rng), t = u(rng);
        CHECK(eval(rot, {{"x", x}, {"y", y}, {"t", t}, {"r", std::hypot(x, y)}}, o));
        const double g = neg(rng), v = u(rng), xx = u(rng);
        // h chosen so the hypothesis 2gx - 2gh = v^2 holds
        CHECK(eval(bb, {{"x", xx}, {"g", g}, {"h", xx - v * v / (2 * g)}, {"v", v}}, o));
    }
}

TEST_CASE("lemma validation") {
    CHECK(validate_lemma({"zero", {}, Q("0 = 0")}, 100, 1).status == LemmaStatus::Accepted);
    const auto sq = validate_lemma({"sq", {}, Q("x^2 >= 0")}, 10000, 1);
    CHECK(sq.status == LemmaStatus::Accepted);
    CHECK(sq.trials == 10000);
    const auto cube = validate_lemma({"cube", {}, Q("x^3 >= 0")}, 10000, 1);
    REQUIRE(cube.status == LemmaStatus::Rejected);
    REQUIRE(cube.witness);
    CHECK(cube.witness->at("x") < 0);
    CHECK(validate_lemma({"never", {Q("x > 1"), Q("x < 0")}, Q("x = 3")}, 100, 1).status == LemmaStatus::Inconclusive);

    const Lemma bb{"bb", hyps_of({"g < 0", "2*g*x - 2*g*h = v*v"}), Q("x <= h")};
    const auto vb = validate_lemma(bb, 2000, 1);
    CHECK(vb.status == LemmaStatus::Accepted);
    CHECK(vb.trials == 2000);
}

TEST_CASE("lemmas are used only after validation") {
    LemmaDB db;
    db.add({"cube", {}, Q("x^3 >= 0")}, 1000);
    db.add({"fake", {Q("y > 0")}, Q("y > 100")}, 1000);
    db.add({"mono", {Q("x > 1")}, Q("x^3 > x")}, 1000);
    REQUIRE(db.entries().size() == 3);
    CHECK(db.entries()[0].validation.status == LemmaStatus::Rejected);
    CHECK(db.entries()[1].validation.status == LemmaStatus::Rejected);
    CHECK(db.entries()[2].validation.status == LemmaStatus::Accepted);
    REQUIRE(db.usable().size() == 1);
    CHECK(db.usable()[0]->name == "mono");

    CHECK_FALSE(prove({}, Q("x^3 >= 0"), db).is_proved());
    const auto v = prove({Q("x > 1")}, Q("x^3 > x"), db);
    CHECK(v.is_proved());
    CHECK(v.method.find("lemma:mono") != std::string::npos);
}

TEST_CASE("fourier-motzkin examples") {
    using S = FmResult::Status;
    // x >= 0, x <= -1
    CHECK(fourier_motzkin({lc({{"x", -1}}, 0), lc({{"x", 1}}, 1)}).status == S::Infeasible);
    const auto feas = fourier_motzkin({lc({{"x", -1}}, 0), lc({{"x", 1}, {"y", 1}}, -3)});
    REQUIRE(feas.status == S::Feasible);
    CHECK(feas.witness.at("x") >= 0);

    // x <= y, y <= z => x <= z
    const std::vector<LinearConstraint> chain{lc({{"x", 1}, {"y", -1}}, 0), lc({{"y", 1}, {"z", -1}}, 0)};
    CHECK(fm_entails(chain, lc({{"x", 1}, {"z", -1}}, 0)).status == Entailment::Valid);
    const auto inv = fm_entails(chain, lc({{"z", 1}, {"x", -1}}, 0));
    REQUIRE(inv.status == Entailment::Invalid);
    CHECK(holds(chain[0], inv.witness));
    CHECK(holds(chain[1], inv.witness));
    CHECK_FALSE(holds(lc({{"z", 1}, {"x", -1}}, 0), inv.witness));

    // x + y <= 2, x - y <= 0 => x <= 1
    const std::vector<LinearConstraint> two{lc({{"x", 1}, {"y", 1}}, -2), lc({{"x", 1}, {"y", -1}}, 0)};
    CHECK(fm_entails(two, lc({{"x", 1}}, -1)).status == Entailment::Valid);
    CHECK(fm_entails(two, lc({{"x", 1}}, -1, true)).status == Entailment::Invalid);

    // strictness: x < 0, x >= 0
    CHECK(fourier_motzkin({lc({{"x", 1}}, 0, true), lc({{"x", -1}}, 0)}).status == S::Infeasible);
    CHECK(fourier_motzkin({lc({}, 1)}).status == S::Infeasible);
    CHECK(fourier_motzkin({lc({}, 0)}).status == S::Feasible);
    CHECK(fourier_motzkin({lc({}, 0, true)}).status == S::Infeasible);
}

TEST_CASE("fourier-motzkin agrees with a grid search") {
    std::mt19937_64 rng(89);
    std::uniform_int_distribution<int> coef(-3, 3), count(2, 5);
    const std::vector<std::string> names{"x", "y", "z"};
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<LinearConstraint> cs;
        for (int i = count(rng); i > 0; --i) {
            LinearConstraint c;
            for (const auto& n : names) {
                if (const int k = coef(rng); k != 0) {
                    c.coeffs[n] = k;
                }
            }
            c.constant = coef(rng);
            c.strict = (rng() & 3U) == 0;
            cs.push_back(c);
        }
        // keep every variable inside [-3, 3]
        for (const auto& n : names) {
            cs.push_back(lc({{n, 1}}, -3));
            cs.push_back(lc({{n, -1}}, -3));
        }
        bool grid = false;
        for (int x = -3; x <= 3 && !grid; ++x) {
            for (int y = -3; y <= 3 && !grid; ++y) {
                for (int z = -3; z <= 3 && !grid; ++z) {
                    const std::map<std::string, Rational> v{{"x", x}, {"y", y}, {"z", z}};
                    grid = std::all_of(cs.begin(), cs.end(), [&](const auto& c) { return holds(c, v); });
                }
            }
        }
        const auto r = fourier_motzkin(cs);
        REQUIRE(r.status != FmResult::Status::TooLarge);
        if (r.status == FmResult::Status::Feasible) {
            ++feasible;
            std::map<std::string, Rational> v = r.witness;
            for (const auto& n : names) {
                v.emplace(n, 0);
            }
            for (const auto& c : cs) {
                CHECK(holds(c, v));
            }
        } else {
            ++infeasible;
            CHECK_FALSE(grid);
        }
    }
    CHECK(feasible > 50);
    CHECK(infeasible > 50);
}

TEST_CASE("discharge is deterministic") {
    for (const auto& c : regression_obligations()) {
        std::vector<Pred> hyps;
        for (const auto& h : c.hyps) {
            hyps.push_back(Q(h));
        }
        const auto a = prove(hyps, Q(c.concl), {});
        const auto b = prove(hyps, Q(c.concl), {});
        CHECK(a.kind == b.kind);
        CHECK(a.method == b.method);
        CHECK(a.witness == b.witness);
        CHECK(a.reason == b.reason);
    }
}

TEST_CASE("never proves both an obligation and its negation") {
    int proved = 0;
    for (const auto& c : regression_obligations()) {
        std::vector<Pred> hyps;
        for (const auto& h : c.hyps) {
            hyps.push_back(Q(h));
        }
        const auto pos = prove(hyps, Q(c.concl), {});
        const auto neg = prove(hyps, Pred::negation(Q(c.concl)), {});
        INFO(c.concl);
        CHECK_FALSE((pos.is_proved() && neg.is_proved()));
        if (pos.is_proved()) {
            ++proved;
            CHECK(neg.is_refuted());
        }
    }
    CHECK(proved >= 10);
}

TEST_CASE("non-arithmetic obligations are left to the certifier") {
    Obligation ob;
    ob.concl = Q("x = 0");
    ob.kind = ObligationKind::DiffInvariant;
    CHECK(discharge(ob, {}).kind == VerdictKind::Unknown);
    ob.kind = ObligationKind::Arithmetic;
    ob.hyps = {Q("x = 0")};
    CHECK(discharge(ob, {}).is_proved());
}

TEST_CASE("sampling respects equations") {
    std::mt19937_64 rng(97);
    const auto hyps = hyps_of({"g < 0", "2*g*x - 2*g*h = v*v"});
    PredEvalOptions o;
    o.eq_tol = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const auto v = sample_satisfying(hyps, {"g", "h", "x", "v"}, {}, rng);
        REQUIRE(v);
        for (const auto& h : hyps) {
            CHECK(eval(h, *v, o));
        }
    }
    CHECK_FALSE(sample_satisfying(hyps_of({"x > 1", "x < 0"}), {"x"}, {}, rng, 50));
}
