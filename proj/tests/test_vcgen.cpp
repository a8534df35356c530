// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "hwl/vcgen.hpp"
#include "random_programs.hpp"

using namespace hwl;
using hwl::test::E;
using hwl::test::P;

namespace {

const std::string kModels = HWL_MODELS_DIR;

bool all_satisfy(const Program& p, const Store& s, const Pred& q) {
    const auto r = run_sampled(p, s, RunConfig{});
    return std::all_of(r.stores.begin(), r.stores.end(), [&](const Store& t) { return eval(q, t); });
}

// Evaluates quantifiers over the integer grid {k*h} only, so a wlp formula can be
// compared with grid-sampled orbits point for point.
bool grid_eval(const Pred& p, Valuation v, double h, int steps) {
    switch (p.kind()) {
    case PredKind::And: return grid_eval(p.left(), v, h, steps) && grid_eval(p.right(), v, h, steps);
    case PredKind::Or: return grid_eval(p.left(), v, h, steps) || grid_eval(p.right(), v, h, steps);
    case PredKind::Implies: return !grid_eval(p.left(), v, h, steps) || grid_eval(p.right(), v, h, steps);
    case PredKind::Not: return !grid_eval(p.left(), v, h, steps);
    case PredKind::Forall: {
        const double lo = p.lower() ? eval(*p.lower(), v) : 0.0;
        const double hi = p.upper() ? eval(*p.upper(), v) : steps * h;
        for (int k = 0; k <= steps; ++k) {
            const double t = k * h;
            if (t < lo - 1e-9 || t > hi + 1e-9) {
                continue;
            }
            v[p.bound()] = t;
            if (!grid_eval(p.body(), v, h, steps)) {
                return false;
            }
        }
        return true;
    }
    default: return eval(p, v);
    }
}

bool orbit_satisfies(const Flow& flow, const Pred& guard, const Store& s, const Pred& q, double h, int steps,
                     const Valuation& k) {
    const auto orbit = guarded_orbit_flow(flow, guard, TimeInterval::non_negative(), s, h, steps * h + h / 2, k);
    return std::all_of(orbit.begin(), orbit.end(), [&](const auto& pt) {
        Valuation v = pt.second;
        v.insert(k.begin(), k.end());
        return eval(q, v);
    });
}

struct EvolveCase {
    std::string name;
    EvolveCommand cmd;
    Pred q;
    std::set<std::string> vars;
    Valuation constants;
};

std::vector<EvolveCase> evolve_cases() {
    const std::set<std::string> g{"g"};
    EvolveCase ball{"ball",
                    {{{{"x", E("v")}, {"v", E("g", g)}}},
                     P("x >= 0"),
                     {TimeInterval::non_negative(), {}},
                     Flow{{{"x", E("g*t^2/2 + v*t + x", g)}, {"v", E("g*t + v", g)}}, {TimeInterval::non_negative(), {}}},
                     {}},
                    P("x <= 1.5 & v >= -2", g),
                    {"x", "v"},
                    {{"g", -1}}};
    EvolveCase pend{"pendulum",
                    {{{{"x", E("y")}, {"y", E("-x")}}},
                     P("y >= -1"),
                     {TimeInterval::all_reals(), TimeInterval::non_negative()},
                     Flow{{{"x", E("x*cos(t) + y*sin(t)")}, {"y", E("y*cos(t) - x*sin(t)")}}, {TimeInterval::all_reals(), {}}},
                     {}},
                    P("x <= 1"),
                    {"x", "y"},
                    {}};
    return {ball, pend};
}

}  // namespace

TEST_CASE("wlp examples") {
    const std::set<std::string> k{"g", "h"};
    const auto asg = wlp(Program::assign("v", E("-v")), P("v^2/2 = g*(h - x)", k));
    CHECK(asg.pre == P("(-v)^2/2 = g*(h - x)", k));
    CHECK(asg.obligations.empty());

    const auto skip = wlp(Program::skip(), P("x > 0"));
    CHECK(skip.pre == P("x > 0"));
    CHECK(skip.obligations.empty());

    CHECK(wlp(Program::test(P("x > 1")), P("x > 0")).pre == P("x > 1 -> x > 0"));
    CHECK(wlp(Program::abort(), P("x > 0")).pre == Pred::truth());

    const std::set<std::string> c{"c"};
    EvolveCommand ds{{{{"x", E("c", c)}}},
                     P("x <= 5"),
                     {TimeInterval::non_negative(), {}},
                     Flow{{{"x", E("x + c*t", c)}}, {TimeInterval::non_negative(), {}}},
                     {}};
    const auto ev = wlp(Program::evolve(ds), P("x >= 0"));
    CHECK(ev.pre == P("forall t in [0, inf). (forall tau in [0, t]. x + c*tau <= 5) -> x + c*t >= 0", c));
    REQUIRE(ev.obligations.size() == 1);
    CHECK(ev.obligations[0].kind == ObligationKind::FlowCertificate);
    CHECK(ev.obligations[0].provenance.rule == "evolve-flow");

    const auto fl = wlp(Program::evol({*ds.flow, ds.guard, ds.dom}), P("x >= 0"));
    CHECK(fl.pre == ev.pre);
    CHECK(fl.obligations.empty());

    ds.flow.reset();
    const auto opaque = wlp(Program::evolve(ds), P("x >= 0"));
    REQUIRE(opaque.obligations.size() == 1);
    CHECK(opaque.obligations[0].kind == ObligationKind::Opaque);
}

TEST_CASE("wlp of loops and invariant-annotated evolutions") {
    const auto loop = Program::loop(Program::assign("x", E("x + 1")), P("x >= 0"));
    const auto r = wlp(loop, P("x >= -1"));
    CHECK(r.pre == P("x >= 0"));
    REQUIRE(r.obligations.size() == 2);
    CHECK(r.obligations[0].provenance.rule == "loop-body");
    CHECK(r.obligations[0].concl == P("x + 1 >= 0"));
    CHECK(r.obligations[1].provenance.rule == "loop-post");
    CHECK(r.obligations[1].provenance.path == "program");

    EvolveCommand d{{{{"x", E("y")}, {"y", E("-x")}}}, P("x > -3"), {TimeInterval::all_reals(), {}}, {}, P("x^2 + y^2 = 4")};
    const auto dv = wlp(Program::seq({Program::skip(), Program::evolve(d)}), P("x <= 2"));
    CHECK(dv.pre == P("x^2 + y^2 = 4"));
    REQUIRE(dv.obligations.size() == 2);
    CHECK(dv.obligations[0].kind == ObligationKind::DiffInvariant);
    CHECK(dv.obligations[0].hyps == std::vector<Pred>{P("x > -3")});
    CHECK(dv.obligations[0].provenance.path == "program.seq[1]");
    CHECK(dv.obligations[1].provenance.rule == "evolve-dinv-post");
    CHECK(dv.obligations[1].as_pred() == P("x^2 + y^2 = 4 & x > -3 -> x <= 2"));
}

TEST_CASE("wlp is exact on discrete programs") {
    test::ProgramGen gen(31, false);
    const auto stores = test::small_stores();
    int nontrivial = 0;
    for (int i = 0; i < 500; ++i) {
        const Program p = gen.program(3);
        const Pred q = gen.pred();
        const auto r = wlp(p, q);
        CHECK(r.obligations.empty());
        int holds = 0;
        for (const auto& s : stores) {
            INFO(to_string(p) << "  post " << to_string(q));
            const bool w = eval(r.pre, s);
            CHECK(w == all_satisfy(p, s, q));
            holds += w;
        }
        nontrivial += holds > 0 && holds < static_cast<int>(stores.size());
    }
    CHECK(nontrivial > 100);
}

TEST_CASE("wlp of a sequence composes") {
    test::ProgramGen gen(37, false);
    for (int i = 0; i < 200; ++i) {
        const Program p = gen.program(2), q = gen.program(2);
        const Pred post = gen.pred();
        CHECK(wlp(Program::seq({p, q}), post).pre == wlp(p, wlp(q, post).pre).pre);
    }
}

TEST_CASE("wlp is monotone") {
    test::ProgramGen gen(41, false);
    const auto stores = test::small_stores();
    for (int i = 0; i < 300; ++i) {
        const Program p = gen.program(3);
        const Pred q2 = gen.pred();
        const Pred q1 = Pred::conj(q2, gen.pred());
        const Pred w1 = wlp(p, q1).pre, w2 = wlp(p, q2).pre;
        for (const auto& s : stores) {
            CHECK((!eval(w1, s) || eval(w2, s)));
        }
    }
}

TEST_CASE("evolution wlp agrees with guarded orbits") {
    const double h = 0.05;
    const int steps = 60;
    std::mt19937_64 rng(43);
    for (const auto& c : evolve_cases()) {
        const Pred w = wlp(Program::evolve(c.cmd), c.q).pre;
        int holds = 0;
        for (int i = 0; i < 1000; ++i) {
            Valuation s = test::random_valuation(c.vars, rng, -2, 2);
            const bool orbit = orbit_satisfies(*c.cmd.flow, c.cmd.guard, s, c.q, h, steps, c.constants);
            s.insert(c.constants.begin(), c.constants.end());
            INFO(c.name);
            CHECK(grid_eval(w, s, h, steps) == orbit);
            holds += orbit;
        }
        CHECK(holds > 100);
        CHECK(holds < 900);
    }
}

TEST_CASE("strengthening the postcondition by the guard changes nothing") {
    const double h = 0.05;
    const int steps = 60;
    std::mt19937_64 rng(47);
    for (const auto& c : evolve_cases()) {
        const Program ev = Program::evolve(c.cmd);
        const Pred w = wlp(ev, c.q).pre;
        const Pred wg = wlp(ev, Pred::conj(c.cmd.guard, c.q)).pre;
        for (int i = 0; i < 1000; ++i) {
            Valuation s = test::random_valuation(c.vars, rng, -2, 2);
            s.insert(c.constants.begin(), c.constants.end());
            CHECK(grid_eval(w, s, h, steps) == grid_eval(wg, s, h, steps));
        }
    }
}

TEST_CASE("verify") {
    VerifySpec trivial;
    trivial.vars = {"x"};
    trivial.pre = P("x > 0");
    trivial.post = P("x > 0");
    const auto obs = verify(trivial);
    REQUIRE(obs.size() == 1);
    CHECK(obs[0].hyps == std::vector<Pred>{P("x > 0")});
    CHECK(obs[0].concl == P("x > 0"));
    CHECK(obs[0].id == "ob-1");

    const auto ball = load_spec(kModels + "/bouncing_ball.hwl");
    const auto bo = verify(ball.spec);
    std::vector<std::string> rules;
    for (const auto& o : bo) {
        rules.push_back(o.provenance.rule);
        // every free name is quantified or a declared constant
        auto names = free_names(o.as_pred());
        for (const auto& n : o.forall) {
            names.erase(n);
        }
        for (const auto& n : ball.spec.const_names()) {
            names.erase(n);
        }
        CHECK(names.empty());
    }
    CHECK(rules == std::vector<std::string>{"main", "evolve-flow", "loop-body", "loop-post"});
    CHECK(bo[0].concl == ball.spec.program.pred());
    for (const auto& part : conjuncts(ball.spec.program.pred())) {
        CHECK(std::find(bo[3].hyps.begin(), bo[3].hyps.end(), part) != bo[3].hyps.end());
    }
    CHECK(bo[3].concl == ball.spec.post);

    const auto pend = load_spec(kModels + "/pendulum.hwl");
    const auto po = verify(pend.spec);
    REQUIRE(po.size() == 3);
    const Pred inv = P("x^2 + y^2 = r^2", {"r"});
    CHECK(po[0].as_pred() == Pred::implies(inv, inv));
    CHECK(po[1].kind == ObligationKind::DiffInvariant);
    CHECK(po[1].concl == inv);
    CHECK(po[2].as_pred() == Pred::implies(inv, inv));
}

TEST_CASE("differential cut, weakening and solution") {
    const std::set<std::string> k{"g", "h"};
    const auto ball = load_spec(kModels + "/bouncing_ball_dinv.hwl");
    EvolveCommand cmd{{{{"x", E("v")}, {"v", E("g", k)}}}, P("x >= 0"), {TimeInterval::non_negative(), {}}, {}, {}};
    const Program ev = Program::evolve(cmd);
    const Pred c = P("2*g*x - 2*g*h - v^2 = 0", k);
    const auto dc = dc_split(ev, c);
    CHECK(dc.program.evolve_cmd().guard == Pred::conj(P("x >= 0"), c));
    CHECK(dc.invariance.kind == ObligationKind::DiffInvariant);
    CHECK(dc.invariance.concl == c);
    CHECK(dc.invariance.provenance.rule == "dC");
    CHECK_THROWS_AS(dc_split(Program::skip(), c), Error);

    const auto dw = dw_check(ev, P("x >= 0"));
    CHECK(dw.as_pred() == P("x >= 0 -> x >= 0"));
    CHECK(dw.provenance.rule == "dW");
    CHECK_THROWS_AS(dw_check(Program::assign("x", E("0")), P("x >= 0")), Error);

    const FieldMap cf{{"x", E("a", {"a"})}, {"y", E("2")}};
    const Pred q = P("x + y >= 0");
    CHECK(ds_closed_form(cf, Pred::truth(), q, TimeInterval::non_negative()) ==
          P("forall t in [0, inf). x + a*t + (y + 2*t) >= 0", {"a"}));
    CHECK(ds_closed_form(cf, P("y <= 3"), q, TimeInterval::closed(0, 1)) ==
          P("forall t in [0, 1]. (forall tau in [0, t]. y + 2*tau <= 3) -> x + a*t + (y + 2*t) >= 0", {"a"}));
    CHECK_THROWS_AS(ds_closed_form({{"x", E("x")}}, Pred::truth(), q, TimeInterval::non_negative()), Error);

    std::vector<Obligation> cuts;
    const auto cut = apply_dc(ball.spec, c, cuts);
    CHECK(cuts.size() == 1);
    CHECK(cut.program != ball.spec.program);
}
