// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include "random_programs.hpp"

using namespace hwl;
using hwl::test::E;
using hwl::test::P;

namespace {

const std::string kModels = HWL_MODELS_DIR;

std::vector<std::string> model_files() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(kModels)) {
        if (e.path().extension() == ".hwl") {
            out.push_back(e.path().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void check_same(const SpecFile& a, const SpecFile& b) {
    CHECK(a.problem == b.problem);
    CHECK(a.spec.vars == b.spec.vars);
    REQUIRE(a.spec.consts.size() == b.spec.consts.size());
    for (std::size_t i = 0; i < a.spec.consts.size(); ++i) {
        CHECK(a.spec.consts[i].name == b.spec.consts[i].name);
        CHECK(a.spec.consts[i].range == b.spec.consts[i].range);
    }
    CHECK(a.spec.assumptions == b.spec.assumptions);
    CHECK(a.spec.pre == b.spec.pre);
    CHECK(a.spec.post == b.spec.post);
    CHECK(a.spec.program == b.spec.program);
    REQUIRE(a.lemmas.size() == b.lemmas.size());
    for (std::size_t i = 0; i < a.lemmas.size(); ++i) {
        CHECK(a.lemmas[i].name == b.lemmas[i].name);
        CHECK(a.lemmas[i].hyps == b.lemmas[i].hyps);
        CHECK(a.lemmas[i].concl == b.lemmas[i].concl);
    }
    CHECK(a.config == b.config);
}

}  // namespace

TEST_CASE("minimal problem") {
    const auto f = parse_spec("problem p vars x pre x=0 post x=0 program skip");
    CHECK(f.problem == "p");
    CHECK(f.spec.vars == std::vector<std::string>{"x"});
    CHECK(f.spec.pre == P("x = 0"));
    CHECK(f.spec.program == Program::skip());
}

TEST_CASE("bouncing ball parses to loop, evolve and conditional") {
    const auto f = load_spec(kModels + "/bouncing_ball.hwl");
    const Program& p = f.spec.program;
    REQUIRE(p.kind() == ProgramKind::Loop);
    const Program& body = p.children()[0];
    REQUIRE(body.kind() == ProgramKind::Seq);
    REQUIRE(body.children().size() == 2);
    const Program& ev = body.children()[0];
    REQUIRE(ev.kind() == ProgramKind::Evolve);
    CHECK(ev.evolve_cmd().flow.has_value());
    CHECK_FALSE(ev.evolve_cmd().dinv.has_value());
    CHECK(ev.evolve_cmd().dom.domain == TimeInterval::non_negative());
    const std::set<std::string> k{"g", "h"};
    CHECK(ev.evolve_cmd().flow->components.at("x") == E("g*t^2/2 + v*t + x", k));
    CHECK(body.children()[1].kind() == ProgramKind::IfThenElse);
    CHECK(f.spec.const_names() == k);
    REQUIRE(f.lemmas.size() == 1);
    CHECK(f.lemmas[0].name == "bb_real_arith");
    CHECK(f.spec.consts[0].range == std::pair<double, double>{-20, -1});
}

TEST_CASE("program grammar") {
    // ';' binds tighter than '++'
    const Program p = parse_program("x := 1; y := 2 ++ skip");
    REQUIRE(p.kind() == ProgramKind::Choice);
    CHECK(p.children()[0].kind() == ProgramKind::Seq);
    CHECK(parse_program("x := 1; (y := 2 ++ skip)").kind() == ProgramKind::Seq);
    CHECK(parse_program("?x > 0").kind() == ProgramKind::Test);
    CHECK(parse_program("abort").kind() == ProgramKind::Abort);

    const Program ev = parse_program("evolve x' = v, v' = -1 & x >= 0 on [-1, 2] dinv v <= 3");
    REQUIRE(ev.kind() == ProgramKind::Evolve);
    CHECK(ev.evolve_cmd().dom.domain == TimeInterval::closed(-1, 2));
    CHECK(ev.evolve_cmd().dinv == P("v <= 3"));

    const Program fl = parse_program("evol x := x + t & true on R");
    REQUIRE(fl.kind() == ProgramKind::EvolFlow);
    CHECK(fl.evol_cmd().flow.components.at("x") == Expr::add(Expr::var("x"), Expr::time()));
    CHECK(fl.evol_cmd().dom.domain == TimeInterval::all_reals());
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_spec("problem p\nvars x\npre x = 0\npost x = 0\nprogram evolve x' =");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
        CHECK(e.column() >= 20);
    }
    CHECK_THROWS_AS(parse_spec("problem p vars x pre x = 0 post x = z program skip"), ParseError);
    CHECK_THROWS_AS(parse_spec("problem p vars x pre x = 0 post x = 0 program y := 1"), ParseError);
    CHECK_THROWS_AS(parse_spec("problem p vars x pre x = 0 program skip"), ParseError);
    CHECK_THROWS_AS(parse_spec("problem p vars x pre x = 0 post x = 0 program evolve x' = 1 on [1, 2]"), Error);
    CHECK_THROWS_AS(parse_spec("problem p vars x consts c pre x = 0 post x = 0 program skip assume x > 0"), ParseError);
    CHECK_THROWS_AS(
        parse_program("evolve x' = 1 & true on R flow x := x + t dinv x > 0"), Error);
    CHECK_THROWS_AS(load_spec(kModels + "/no_such_file.hwl"), Error);
}

TEST_CASE("shipped models survive a format round trip") {
    const auto files = model_files();
    CHECK(files.size() >= 8);
    for (const auto& path : files) {
        INFO(path);
        const auto f = load_spec(path);
        const std::string text = format_spec(f);
        const auto g = parse_spec(text);
        check_same(f, g);
        CHECK(format_spec(g) == text);
    }
}

TEST_CASE("random programs survive both printers") {
    test::ProgramGen gen(113, false);
    for (int i = 0; i < 500; ++i) {
        const Program p = i % 5 == 0 ? Program::loop(gen.program(2), gen.pred()) : gen.program(4);
        INFO(to_string(p));
        CHECK(parse_program(to_string(p)) == p);
        CHECK(parse_program(format_program(p)) == p);
    }
}

TEST_CASE("predicates round trip") {
    for (const auto* s : {"x > 0 & (y < 1 | !(x = y))", "forall t in [0, inf). x + t >= 0",
                          "exists s in [-1, 2]. x*s = 1", "x <= y -> y >= x", "true", "!false",
                          "forall t in [0, 1]. (forall tau in [0, t]. y + 2*tau <= 3) -> x >= 0"}) {
        const Pred p = P(s);
        CHECK(P(to_string(p)) == p);
    }
}
