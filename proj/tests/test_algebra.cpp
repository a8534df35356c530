// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <set>

#include "hwl/algebra.hpp"

using namespace hwl;

namespace {

// Pair-set relations, written directly from the set-builder definitions.
using Pairs = std::set<std::pair<int, int>>;

Pairs pairs_of(const FiniteRel& r) {
    Pairs p;
    for (int i = 0; i < r.n(); ++i) {
        for (int j = 0; j < r.n(); ++j) {
            if (r.at(i, j)) {
                p.insert({i, j});
            }
        }
    }
    return p;
}

Pairs compose(const Pairs& r, const Pairs& s) {
    Pairs out;
    for (auto [x, y] : r) {
        for (auto [y2, z] : s) {
            if (y == y2) {
                out.insert({x, z});
            }
        }
    }
    return out;
}

Pairs star(const Pairs& r, int n) {
    Pairs acc;
    for (int i = 0; i < n; ++i) {
        acc.insert({i, i});
    }
    Pairs power = acc;
    for (int k = 0; k < n; ++k) {
        power = compose(power, r);
        acc.insert(power.begin(), power.end());
    }
    return acc;
}

std::set<int> fbox(const Pairs& r, const std::set<int>& p, int n) {
    std::set<int> out;
    for (int x = 0; x < n; ++x) {
        bool all = true;
        for (auto [a, b] : r) {
            if (a == x && !p.count(b)) {
                all = false;
            }
        }
        if (all) {
            out.insert(x);
        }
    }
    return out;
}

std::set<int> members(const FinitePred& p) {
    std::set<int> out;
    for (int i = 0; i < p.n(); ++i) {
        if (p.contains(i)) {
            out.insert(i);
        }
    }
    return out;
}

FiniteRel random_rel(int n, std::mt19937_64& rng) {
    FiniteRel r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            r.set(i, j, (rng() & 3U) == 0);
        }
    }
    return r;
}

FinitePred random_pred(int n, std::mt19937_64& rng) {
    return {n, rng() & ((std::uint64_t{1} << n) - 1)};
}

}  // namespace

TEST_CASE("composition") {
    const auto r = FiniteRel::of(3, {{0, 1}, {1, 2}});
    const auto s = FiniteRel::of(3, {{1, 2}, {2, 0}});
    CHECK(rel_compose(r, s) == FiniteRel::of(3, {{0, 2}, {1, 0}}));
    CHECK(rel_compose(FiniteRel::identity(3), r) == r);
    CHECK(rel_compose(r, FiniteRel::empty(3)) == FiniteRel::empty(3));
    CHECK_THROWS_AS(rel_compose(r, FiniteRel::identity(2)), Error);
}

TEST_CASE("star") {
    CHECK(rel_star(FiniteRel::empty(3)) == FiniteRel::identity(3));
    CHECK(rel_star(FiniteRel::identity(3)) == FiniteRel::identity(3));
    const auto expected = rel_union(FiniteRel::identity(3), FiniteRel::of(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(rel_star(FiniteRel::of(3, {{0, 1}, {1, 2}})) == expected);
}

TEST_CASE("antidomain and boxes") {
    CHECK(rel_antidomain(FiniteRel::empty(2)) == FiniteRel::identity(2));
    CHECK(rel_antidomain(FiniteRel::identity(2)) == FiniteRel::empty(2));
    CHECK(rel_antidomain(FiniteRel::of(2, {{0, 1}})) == FiniteRel::of(2, {{1, 1}}));
    const auto p = FinitePred::of(2, {0});
    CHECK(rel_fbox(FiniteRel::identity(2), p) == p);
    CHECK(rel_fbox(FiniteRel::empty(2), p) == FinitePred::full(2));
    CHECK(rel_fbox(FiniteRel::of(2, {{0, 0}, {0, 1}}), p) == FinitePred::of(2, {1}));
    CHECK_THROWS_AS(rel_fbox(FiniteRel::identity(3), p), Error);
}

TEST_CASE("operations agree with the pair-set oracle") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const auto r = random_rel(n, rng), s = random_rel(n, rng);
        const auto p = random_pred(n, rng);
        CHECK(pairs_of(rel_compose(r, s)) == compose(pairs_of(r), pairs_of(s)));
        CHECK(pairs_of(rel_star(r)) == star(pairs_of(r), n));
        CHECK(members(rel_fbox(r, p)) == fbox(pairs_of(r), members(p), n));
        // |R]P = ad(R ; ad P)
        const auto ad_p = FiniteRel::test(p.complement());
        CHECK(rel_fbox(r, p) == rel_antidomain(rel_compose(r, ad_p)).domain_pred());
        CHECK(rel_antidomain(r).is_subidentity());
    }
}

TEST_CASE("state transformers mirror relations") {
    const auto eta = FiniteSta::eta(3);
    CHECK(sta_of_rel(FiniteRel::identity(3)) == eta);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = random_rel(4, rng), s = random_rel(4, rng);
        const auto f = sta_of_rel(r), g = sta_of_rel(s);
        const auto p = random_pred(4, rng);
        CHECK(sta_kleisli(FiniteSta::eta(4), f) == f);
        CHECK(sta_of_rel(rel_compose(r, s)) == sta_kleisli(f, g));
        CHECK(sta_of_rel(rel_star(r)) == sta_star(f));
        CHECK(sta_of_rel(rel_antidomain(r)) == sta_antidomain(f));
        CHECK(sta_fbox(sta_kleisli(f, g), p) == sta_fbox(f, sta_fbox(g, p)));
        CHECK(sta_fbox(f, p) == rel_fbox(r, p));
    }
    CHECK(sta_fbox(FiniteSta(3), FinitePred::empty(3)) == FinitePred::full(3));
    for (std::uint64_t code = 0; code < 16; ++code) {
        const auto r = FiniteRel::from_code(2, code);
        CHECK(rel_of_sta(sta_of_rel(r)) == r);
    }
}

TEST_CASE("law harness") {
    LawMode ex;
    const auto dioid = check_laws(LawModel::Rel, 2, resolve_laws({"dioid"}), ex);
    CHECK(dioid.all_pass());
    CHECK(dioid.results.size() == 9);
    for (const auto& r : dioid.results) {
        CHECK(r.mode == "exhaustive");
    }

    const auto wrong = check_laws(LawModel::Rel, 2, {"wrong.mul-comm"}, ex);
    REQUIRE(wrong.results.size() == 1);
    CHECK_FALSE(wrong.results[0].pass);
    CHECK(wrong.results[0].counterexample.has_value());

    LawMode rnd;
    rnd.exhaustive = false;
    rnd.trials = 10000;
    rnd.seed = 42;
    const auto induct = check_laws(LawModel::Rel, 3, {"star.induct-left", "star.induct-right"}, rnd);
    CHECK(induct.all_pass());
    CHECK(induct.results[0].cases == 10000);

    const auto inv = check_laws(LawModel::Sta, 3, resolve_laws({"inv"}), ex);
    CHECK(inv.all_pass());

    CHECK_THROWS_AS(resolve_laws({"no.such-law"}), Error);
    CHECK_THROWS_AS(check_laws(LawModel::Rel, 4, {"dioid.add-assoc"}, ex), Error);
}

TEST_CASE("random law runs are reproducible") {
    LawMode m;
    m.exhaustive = false;
    m.trials = 500;
    m.seed = 7;
    const auto a = check_laws(LawModel::Rel, 4, {"wrong.mul-comm"}, m);
    const auto b = check_laws(LawModel::Rel, 4, {"wrong.mul-comm"}, m);
    CHECK(a.results[0].counterexample == b.results[0].counterexample);
}
