// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/algebra.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <random>
#include <sstream>

namespace hwl {

namespace {

std::uint64_t mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

void check_size(int n) {
    if (n < 1 || n > 64) {
        throw Error("finite models need 1 <= n <= 64, got " + std::to_string(n));
    }
}

void same_size(int a, int b) {
    if (a != b) {
        throw Error("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

std::string members(std::uint64_t bits, int n) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < n; ++i) {
        if ((bits >> i) & 1U) {
            s += (first ? "" : ",") + std::to_string(i);
            first = false;
        }
    }
    return s + "}";
}

}  // namespace

// ---------------------------------------------------------------------------

FinitePred::FinitePred(int n, std::uint64_t bits) : n_(n), bits_(bits) {
    check_size(n);
    if (bits & ~mask(n)) {
        throw Error("predicate mentions states outside {0.." + std::to_string(n - 1) + "}");
    }
}

FinitePred FinitePred::full(int n) { return {n, mask(n)}; }

FinitePred FinitePred::of(int n, const std::vector<int>& ms) {
    std::uint64_t b = 0;
    for (int i : ms) {
        if (i < 0 || i >= n) {
            throw Error("state " + std::to_string(i) + " out of range");
        }
        b |= std::uint64_t{1} << i;
    }
    return {n, b};
}

FinitePred FinitePred::complement() const { return {n_, ~bits_ & mask(n_)}; }
FinitePred FinitePred::meet(const FinitePred& o) const {
    same_size(n_, o.n_);
    return {n_, bits_ & o.bits_};
}
FinitePred FinitePred::join(const FinitePred& o) const {
    same_size(n_, o.n_);
    return {n_, bits_ | o.bits_};
}
bool FinitePred::leq(const FinitePred& o) const {
    same_size(n_, o.n_);
    return (bits_ & ~o.bits_) == 0;
}
std::string FinitePred::to_string() const { return members(bits_, n_); }

// ---------------------------------------------------------------------------

FiniteRel::FiniteRel(int n) : n_(n), rows_(static_cast<size_t>(std::max(n, 0)), 0) { check_size(n); }

FiniteRel FiniteRel::identity(int n) {
    FiniteRel r(n);
    for (int i = 0; i < n; ++i) {
        r.rows_[i] = std::uint64_t{1} << i;
    }
    return r;
}

FiniteRel FiniteRel::full(int n) {
    FiniteRel r(n);
    for (auto& row : r.rows_) {
        row = mask(n);
    }
    return r;
}

FiniteRel FiniteRel::of(int n, const std::vector<std::pair<int, int>>& pairs) {
    FiniteRel r(n);
    for (auto [i, j] : pairs) {
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw Error("pair out of range");
        }
        r.set(i, j);
    }
    return r;
}

FiniteRel FiniteRel::from_code(int n, std::uint64_t code) {
    if (n * n > 64) {
        throw Error("relation codes need n*n <= 64");
    }
    FiniteRel r(n);
    for (int i = 0; i < n; ++i) {
        r.rows_[i] = (code >> (i * n)) & mask(n);
    }
    return r;
}

FiniteRel FiniteRel::test(const FinitePred& p) {
    FiniteRel r(p.n());
    for (int i = 0; i < p.n(); ++i) {
        if (p.contains(i)) {
            r.rows_[i] = std::uint64_t{1} << i;
        }
    }
    return r;
}

void FiniteRel::set(int i, int j, bool value) {
    if (value) {
        rows_[i] |= std::uint64_t{1} << j;
    } else {
        rows_[i] &= ~(std::uint64_t{1} << j);
    }
}

bool FiniteRel::leq(const FiniteRel& o) const {
    same_size(n_, o.n_);
    for (int i = 0; i < n_; ++i) {
        if (rows_[i] & ~o.rows_[i]) {
            return false;
        }
    }
    return true;
}

bool FiniteRel::is_subidentity() const { return leq(identity(n_)); }

FinitePred FiniteRel::domain_pred() const {
    std::uint64_t b = 0;
    for (int i = 0; i < n_; ++i) {
        if (at(i, i)) {
            b |= std::uint64_t{1} << i;
        }
    }
    return {n_, b};
}

std::string FiniteRel::to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (at(i, j)) {
                s += (first ? "(" : ",(") + std::to_string(i) + "," + std::to_string(j) + ")";
                first = false;
            }
        }
    }
    return s + "}";
}

// ---------------------------------------------------------------------------

FiniteSta::FiniteSta(int n) : n_(n), succ_(static_cast<size_t>(std::max(n, 0)), 0) { check_size(n); }

FiniteSta FiniteSta::eta(int n) {
    FiniteSta f(n);
    for (int i = 0; i < n; ++i) {
        f.succ_[i] = std::uint64_t{1} << i;
    }
    return f;
}

FiniteSta FiniteSta::test(const FinitePred& p) {
    FiniteSta f(p.n());
    for (int i = 0; i < p.n(); ++i) {
        if (p.contains(i)) {
            f.succ_[i] = std::uint64_t{1} << i;
        }
    }
    return f;
}

void FiniteSta::set_image(int i, std::uint64_t bits) {
    if (bits & ~mask(n_)) {
        throw Error("image outside the state set");
    }
    succ_.at(static_cast<size_t>(i)) = bits;
}

bool FiniteSta::leq(const FiniteSta& o) const {
    same_size(n_, o.n_);
    for (int i = 0; i < n_; ++i) {
        if (succ_[i] & ~o.succ_[i]) {
            return false;
        }
    }
    return true;
}

std::string FiniteSta::to_string() const {
    std::string s = "[";
    for (int i = 0; i < n_; ++i) {
        s += (i ? "," : "") + members(succ_[i], n_);
    }
    return s + "]";
}

// ---------------------------------------------------------------------------
// Relations

FiniteRel rel_union(const FiniteRel& r, const FiniteRel& s) {
    same_size(r.n(), s.n());
    FiniteRel out(r.n());
    for (int i = 0; i < r.n(); ++i) {
        for (int j = 0; j < r.n(); ++j) {
            if (r.at(i, j) || s.at(i, j)) {
                out.set(i, j);
            }
        }
    }
    return out;
}

FiniteRel rel_compose(const FiniteRel& r, const FiniteRel& s) {
    same_size(r.n(), s.n());
    FiniteRel out(r.n());
    for (int x = 0; x < r.n(); ++x) {
        for (int y = 0; y < r.n(); ++y) {
            if (!r.at(x, y)) {
                continue;
            }
            for (int z = 0; z < r.n(); ++z) {
                if (s.at(y, z)) {
                    out.set(x, z);
                }
            }
        }
    }
    return out;
}

FiniteRel rel_star(const FiniteRel& r) {
    const FiniteRel id = FiniteRel::identity(r.n());
    FiniteRel x = id;
    for (;;) {
        FiniteRel next = rel_union(id, rel_compose(r, x));
        if (next == x) {
            return x;
        }
        x = next;
    }
}

FiniteRel rel_converse(const FiniteRel& r) {
    FiniteRel out(r.n());
    for (int i = 0; i < r.n(); ++i) {
        for (int j = 0; j < r.n(); ++j) {
            if (r.at(i, j)) {
                out.set(j, i);
            }
        }
    }
    return out;
}

FiniteRel rel_antidomain(const FiniteRel& r) {
    FiniteRel out(r.n());
    for (int i = 0; i < r.n(); ++i) {
        if (r.row(i) == 0) {
            out.set(i, i);
        }
    }
    return out;
}

FiniteRel rel_antirange(const FiniteRel& r) { return rel_antidomain(rel_converse(r)); }

FinitePred rel_fbox(const FiniteRel& r, const FinitePred& p) {
    same_size(r.n(), p.n());
    std::uint64_t b = 0;
    for (int x = 0; x < r.n(); ++x) {
        bool all = true;
        for (int y = 0; y < r.n(); ++y) {
            if (r.at(x, y) && !p.contains(y)) {
                all = false;
            }
        }
        if (all) {
            b |= std::uint64_t{1} << x;
        }
    }
    return {r.n(), b};
}

FinitePred rel_fdia(const FiniteRel& r, const FinitePred& p) {
    same_size(r.n(), p.n());
    std::uint64_t b = 0;
    for (int x = 0; x < r.n(); ++x) {
        for (int y = 0; y < r.n(); ++y) {
            if (r.at(x, y) && p.contains(y)) {
                b |= std::uint64_t{1} << x;
            }
        }
    }
    return {r.n(), b};
}

FinitePred rel_bdia(const FiniteRel& r, const FinitePred& p) {
    same_size(r.n(), p.n());
    std::uint64_t b = 0;
    for (int x = 0; x < r.n(); ++x) {
        for (int y = 0; y < r.n(); ++y) {
            if (r.at(x, y) && p.contains(x)) {
                b |= std::uint64_t{1} << y;
            }
        }
    }
    return {r.n(), b};
}

FinitePred rel_bbox(const FiniteRel& r, const FinitePred& p) {
    same_size(r.n(), p.n());
    std::uint64_t b = 0;
    for (int y = 0; y < r.n(); ++y) {
        bool all = true;
        for (int x = 0; x < r.n(); ++x) {
            if (r.at(x, y) && !p.contains(x)) {
                all = false;
            }
        }
        if (all) {
            b |= std::uint64_t{1} << y;
        }
    }
    return {r.n(), b};
}

// ---------------------------------------------------------------------------
// State transformers

FiniteSta sta_union(const FiniteSta& f, const FiniteSta& g) {
    same_size(f.n(), g.n());
    FiniteSta out(f.n());
    for (int x = 0; x < f.n(); ++x) {
        out.set_image(x, f.image(x).bits() | g.image(x).bits());
    }
    return out;
}

FiniteSta sta_kleisli(const FiniteSta& f, const FiniteSta& g) {
    same_size(f.n(), g.n());
    FiniteSta out(f.n());
    for (int x = 0; x < f.n(); ++x) {
        std::uint64_t acc = 0;
        const std::uint64_t fx = f.image(x).bits();
        for (int y = 0; y < f.n(); ++y) {
            if ((fx >> y) & 1U) {
                acc |= g.image(y).bits();
            }
        }
        out.set_image(x, acc);
    }
    return out;
}

FiniteSta sta_star(const FiniteSta& f) {
    const FiniteSta eta = FiniteSta::eta(f.n());
    FiniteSta x = eta;
    for (;;) {
        FiniteSta next = sta_union(eta, sta_kleisli(f, x));
        if (next == x) {
            return x;
        }
        x = next;
    }
}

FiniteSta sta_antidomain(const FiniteSta& f) {
    FiniteSta out(f.n());
    for (int x = 0; x < f.n(); ++x) {
        if (f.image(x).bits() == 0) {
            out.set_image(x, std::uint64_t{1} << x);
        }
    }
    return out;
}

FinitePred sta_fbox(const FiniteSta& f, const FinitePred& p) {
    same_size(f.n(), p.n());
    std::uint64_t b = 0;
    for (int x = 0; x < f.n(); ++x) {
        if (f.image(x).leq(p)) {
            b |= std::uint64_t{1} << x;
        }
    }
    return {f.n(), b};
}

FinitePred sta_fdia(const FiniteSta& f, const FinitePred& p) {
    same_size(f.n(), p.n());
    std::uint64_t b = 0;
    for (int x = 0; x < f.n(); ++x) {
        if (f.image(x).bits() & p.bits()) {
            b |= std::uint64_t{1} << x;
        }
    }
    return {f.n(), b};
}

FinitePred sta_bdia(const FiniteSta& f, const FinitePred& p) {
    same_size(f.n(), p.n());
    std::uint64_t b = 0;
    for (int x = 0; x < f.n(); ++x) {
        if (p.contains(x)) {
            b |= f.image(x).bits();
        }
    }
    return {f.n(), b};
}

FinitePred sta_bbox(const FiniteSta& f, const FinitePred& p) { return sta_bdia(f, p.complement()).complement(); }

FiniteSta sta_of_rel(const FiniteRel& r) {
    FiniteSta f(r.n());
    for (int x = 0; x < r.n(); ++x) {
        f.set_image(x, r.row(x));
    }
    return f;
}

FiniteRel rel_of_sta(const FiniteSta& f) {
    FiniteRel r(f.n());
    for (int x = 0; x < f.n(); ++x) {
        for (int y = 0; y < f.n(); ++y) {
            if (f.image(x).contains(y)) {
                r.set(x, y);
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Law harness

namespace {

struct RelOps {
    using E = FiniteRel;
    using Other = FiniteSta;
    static E one(int n) { return FiniteRel::identity(n); }
    static E zero(int n) { return FiniteRel::empty(n); }
    static E plus(const E& a, const E& b) { return rel_union(a, b); }
    static E times(const E& a, const E& b) { return rel_compose(a, b); }
    static E star(const E& a) { return rel_star(a); }
    static E ad(const E& a) { return rel_antidomain(a); }
    static E test(const FinitePred& p) { return FiniteRel::test(p); }
    static FinitePred pred_of(const E& a) { return a.domain_pred(); }
    static FinitePred fbox(const E& a, const FinitePred& p) { return rel_fbox(a, p); }
    static FinitePred fdia(const E& a, const FinitePred& p) { return rel_fdia(a, p); }
    static FinitePred bdia(const E& a, const FinitePred& p) { return rel_bdia(a, p); }
    static FinitePred bbox(const E& a, const FinitePred& p) { return rel_bbox(a, p); }
    static E from_rel(const FiniteRel& r) { return r; }
    static Other to_other(const E& a) { return sta_of_rel(a); }
    static E from_other(const Other& o) { return rel_of_sta(o); }
    static Other other_plus(const Other& a, const Other& b) { return sta_union(a, b); }
    static Other other_times(const Other& a, const Other& b) { return sta_kleisli(a, b); }
    static Other other_star(const Other& a) { return sta_star(a); }
    static Other other_ad(const Other& a) { return sta_antidomain(a); }
    static FinitePred other_fbox(const Other& a, const FinitePred& p) { return sta_fbox(a, p); }
    static const char* letter() { return "R"; }
};

struct StaOps {
    using E = FiniteSta;
    using Other = FiniteRel;
    static E one(int n) { return FiniteSta::eta(n); }
    static E zero(int n) { return FiniteSta(n); }
    static E plus(const E& a, const E& b) { return sta_union(a, b); }
    static E times(const E& a, const E& b) { return sta_kleisli(a, b); }
    static E star(const E& a) { return sta_star(a); }
    static E ad(const E& a) { return sta_antidomain(a); }
    static E test(const FinitePred& p) { return FiniteSta::test(p); }
    static FinitePred pred_of(const E& a) {
        std::uint64_t b = 0;
        for (int x = 0; x < a.n(); ++x) {
            if (a.image(x).contains(x)) {
                b |= std::uint64_t{1} << x;
            }
        }
        return {a.n(), b};
    }
    static FinitePred fbox(const E& a, const FinitePred& p) { return sta_fbox(a, p); }
    static FinitePred fdia(const E& a, const FinitePred& p) { return sta_fdia(a, p); }
    static FinitePred bdia(const E& a, const FinitePred& p) { return sta_bdia(a, p); }
    static FinitePred bbox(const E& a, const FinitePred& p) { return sta_bbox(a, p); }
    static E from_rel(const FiniteRel& r) { return sta_of_rel(r); }
    static Other to_other(const E& a) { return rel_of_sta(a); }
    static E from_other(const Other& o) { return sta_of_rel(o); }
    static Other other_plus(const Other& a, const Other& b) { return rel_union(a, b); }
    static Other other_times(const Other& a, const Other& b) { return rel_compose(a, b); }
    static Other other_star(const Other& a) { return rel_star(a); }
    static Other other_ad(const Other& a) { return rel_antidomain(a); }
    static FinitePred other_fbox(const Other& a, const FinitePred& p) { return rel_fbox(a, p); }
    static const char* letter() { return "f"; }
};

template <typename E>
using LawFn = std::function<bool(const std::vector<E>&, const std::vector<FinitePred>&, int)>;

struct LawEntry {
    LawInfo info;
    LawFn<FiniteRel> rel;
    LawFn<FiniteSta> sta;
};

template <typename F>
LawEntry make_law(std::string id, int rels, int preds, std::string desc, F f, bool sound = true) {
    LawEntry e;
    e.info = {std::move(id), rels, preds, std::move(desc), sound};
    e.rel = [f](const std::vector<FiniteRel>& a, const std::vector<FinitePred>& p, int n) {
        return f(RelOps{}, a, p, n);
    };
    e.sta = [f](const std::vector<FiniteSta>& a, const std::vector<FinitePred>& p, int n) {
        return f(StaOps{}, a, p, n);
    };
    return e;
}

bool implies_(bool a, bool b) { return !a || b; }

const std::vector<LawEntry>& registry() {
    static const std::vector<LawEntry> laws = [] {
        std::vector<LawEntry> v;
        // Dioid
        v.push_back(make_law("dioid.add-assoc", 3, 0, "a + (b + c) = (a + b) + c", [](auto m, auto& a, auto&, int) {
            return m.plus(a[0], m.plus(a[1], a[2])) == m.plus(m.plus(a[0], a[1]), a[2]);
        }));
        v.push_back(make_law("dioid.add-comm", 2, 0, "a + b = b + a",
                             [](auto m, auto& a, auto&, int) { return m.plus(a[0], a[1]) == m.plus(a[1], a[0]); }));
        v.push_back(make_law("dioid.add-idem", 1, 0, "a + a = a",
                             [](auto m, auto& a, auto&, int) { return m.plus(a[0], a[0]) == a[0]; }));
        v.push_back(make_law("dioid.add-zero", 1, 0, "a + 0 = a",
                             [](auto m, auto& a, auto&, int n) { return m.plus(a[0], m.zero(n)) == a[0]; }));
        v.push_back(make_law("dioid.mul-assoc", 3, 0, "a(bc) = (ab)c", [](auto m, auto& a, auto&, int) {
            return m.times(a[0], m.times(a[1], a[2])) == m.times(m.times(a[0], a[1]), a[2]);
        }));
        v.push_back(make_law("dioid.mul-one", 1, 0, "1a = a1 = a", [](auto m, auto& a, auto&, int n) {
            return m.times(m.one(n), a[0]) == a[0] && m.times(a[0], m.one(n)) == a[0];
        }));
        v.push_back(make_law("dioid.distrib-left", 3, 0, "a(b + c) = ab + ac", [](auto m, auto& a, auto&, int) {
            return m.times(a[0], m.plus(a[1], a[2])) == m.plus(m.times(a[0], a[1]), m.times(a[0], a[2]));
        }));
        v.push_back(make_law("dioid.distrib-right", 3, 0, "(a + b)c = ac + bc", [](auto m, auto& a, auto&, int) {
            return m.times(m.plus(a[0], a[1]), a[2]) == m.plus(m.times(a[0], a[2]), m.times(a[1], a[2]));
        }));
        v.push_back(make_law("dioid.annihil", 1, 0, "0a = a0 = 0", [](auto m, auto& a, auto&, int n) {
            return m.times(m.zero(n), a[0]) == m.zero(n) && m.times(a[0], m.zero(n)) == m.zero(n);
        }));
        // Star
        v.push_back(make_law("star.unfold-left", 1, 0, "1 + a a* <= a*", [](auto m, auto& a, auto&, int n) {
            return m.plus(m.one(n), m.times(a[0], m.star(a[0]))).leq(m.star(a[0]));
        }));
        v.push_back(make_law("star.unfold-right", 1, 0, "1 + a* a <= a*", [](auto m, auto& a, auto&, int n) {
            return m.plus(m.one(n), m.times(m.star(a[0]), a[0])).leq(m.star(a[0]));
        }));
        v.push_back(make_law("star.induct-left", 3, 0, "c + ab <= b -> a* c <= b", [](auto m, auto& a, auto&, int) {
            return implies_(m.plus(a[2], m.times(a[0], a[1])).leq(a[1]), m.times(m.star(a[0]), a[2]).leq(a[1]));
        }));
        v.push_back(make_law("star.induct-right", 3, 0, "c + ba <= b -> c a* <= b", [](auto m, auto& a, auto&, int) {
            return implies_(m.plus(a[2], m.times(a[1], a[0])).leq(a[1]), m.times(a[2], m.star(a[0])).leq(a[1]));
        }));
        // Antidomain
        v.push_back(make_law("ad.annihil", 1, 0, "ad a . a = 0",
                             [](auto m, auto& a, auto&, int n) { return m.times(m.ad(a[0]), a[0]) == m.zero(n); }));
        v.push_back(make_law("ad.compl", 1, 0, "ad a + ad ad a = 1", [](auto m, auto& a, auto&, int n) {
            return m.plus(m.ad(a[0]), m.ad(m.ad(a[0]))) == m.one(n);
        }));
        v.push_back(make_law("ad.local", 2, 0, "ad(ab) <= ad(a . ad ad b)", [](auto m, auto& a, auto&, int) {
            return m.ad(m.times(a[0], a[1])).leq(m.ad(m.times(a[0], m.ad(m.ad(a[1])))));
        }));
        v.push_back(make_law("ad.subid", 1, 0, "ad a <= 1",
                             [](auto m, auto& a, auto&, int n) { return m.ad(a[0]).leq(m.one(n)); }));
        v.push_back(make_law("ad.retraction", 1, 0, "d d a = d a and d a <= 1", [](auto m, auto& a, auto&, int n) {
            auto d = [&](const auto& x) { return m.ad(m.ad(x)); };
            return d(d(a[0])) == d(a[0]) && d(a[0]).leq(m.one(n));
        }));
        // Modal operators
        v.push_back(make_law("box.def", 1, 1, "|a]p = ad(a . ad p)", [](auto m, auto& a, auto& p, int) {
            return m.fbox(a[0], p[0]) == m.pred_of(m.ad(m.times(a[0], m.ad(m.test(p[0])))));
        }));
        v.push_back(make_law("box.dia-def", 1, 1, "|a>p = d(a . p)", [](auto m, auto& a, auto& p, int) {
            return m.fdia(a[0], p[0]) == m.pred_of(m.ad(m.ad(m.times(a[0], m.test(p[0])))));
        }));
        v.push_back(make_law("box.demorgan", 1, 1, "|a]p = !|a>!p", [](auto m, auto& a, auto& p, int) {
            return m.fbox(a[0], p[0]) == m.fdia(a[0], p[0].complement()).complement();
        }));
        v.push_back(make_law("box.demorgan-back", 1, 1, "[a|p = !<a|!p", [](auto m, auto& a, auto& p, int) {
            return m.bbox(a[0], p[0]) == m.bdia(a[0], p[0].complement()).complement();
        }));
        v.push_back(make_law("adjunction.fdia-bbox", 1, 2, "|a>p <= q iff p <= [a|q", [](auto m, auto& a, auto& p, int) {
            return m.fdia(a[0], p[0]).leq(p[1]) == p[0].leq(m.bbox(a[0], p[1]));
        }));
        v.push_back(make_law("adjunction.bdia-fbox", 1, 2, "<a|p <= q iff p <= |a]q", [](auto m, auto& a, auto& p, int) {
            return m.bdia(a[0], p[0]).leq(p[1]) == p[0].leq(m.fbox(a[0], p[1]));
        }));
        // wlp laws
        v.push_back(make_law("wlp.seq", 2, 1, "|ab]q = |a]|b]q", [](auto m, auto& a, auto& p, int) {
            return m.fbox(m.times(a[0], a[1]), p[0]) == m.fbox(a[0], m.fbox(a[1], p[0]));
        }));
        v.push_back(make_law("wlp.choice", 2, 1, "|a + b]q = |a]q . |b]q", [](auto m, auto& a, auto& p, int) {
            return m.fbox(m.plus(a[0], a[1]), p[0]) == m.fbox(a[0], p[0]).meet(m.fbox(a[1], p[0]));
        }));
        v.push_back(make_law("wlp.test", 0, 2, "|p]q = !p + q", [](auto m, auto&, auto& p, int) {
            return m.fbox(m.test(p[0]), p[1]) == p[0].complement().join(p[1]);
        }));
        v.push_back(make_law("wlp.cond", 2, 2, "|if p then a else b]q = p.|a]q + !p.|b]q",
                             [](auto m, auto& a, auto& p, int) {
                                 auto prog = m.plus(m.times(m.test(p[0]), a[0]),
                                                    m.times(m.test(p[0].complement()), a[1]));
                                 return m.fbox(prog, p[1]) == p[0].meet(m.fbox(a[0], p[1]))
                                                                  .join(p[0].complement().meet(m.fbox(a[1], p[1])));
                             }));
        v.push_back(make_law("wlp.star", 1, 1, "|a*]q = q . |a]|a*]q", [](auto m, auto& a, auto& p, int) {
            return m.fbox(m.star(a[0]), p[0]) == p[0].meet(m.fbox(a[0], m.fbox(m.star(a[0]), p[0])));
        }));
        v.push_back(make_law("wlp.loop", 1, 1, "i <= |a]i -> i <= |a*]i", [](auto m, auto& a, auto& p, int) {
            return implies_(p[0].leq(m.fbox(a[0], p[0])), p[0].leq(m.fbox(m.star(a[0]), p[0])));
        }));
        v.push_back(make_law("wlp.while", 1, 2, "i.p <= |a]i -> i <= |while p do a](i.!p)",
                             [](auto m, auto& a, auto& p, int) {
                                 const auto& i = p[0];
                                 const auto& c = p[1];
                                 auto loop = m.times(m.star(m.times(m.test(c), a[0])), m.test(c.complement()));
                                 return implies_(i.meet(c).leq(m.fbox(a[0], i)),
                                                 i.leq(m.fbox(loop, i.meet(c.complement()))));
                             }));
        // Invariant algebra
        v.push_back(make_law("inv.meet", 1, 2, "i, j in Inv a -> i.j in Inv a", [](auto m, auto& a, auto& p, int) {
            const bool inv_i = p[0].leq(m.fbox(a[0], p[0]));
            const bool inv_j = p[1].leq(m.fbox(a[0], p[1]));
            auto ij = p[0].meet(p[1]);
            return implies_(inv_i && inv_j, ij.leq(m.fbox(a[0], ij)));
        }));
        v.push_back(make_law("inv.join", 1, 2, "i, j in Inv a -> i + j in Inv a", [](auto m, auto& a, auto& p, int) {
            const bool inv_i = p[0].leq(m.fbox(a[0], p[0]));
            const bool inv_j = p[1].leq(m.fbox(a[0], p[1]));
            auto ij = p[0].join(p[1]);
            return implies_(inv_i && inv_j, ij.leq(m.fbox(a[0], ij)));
        }));
        // Isomorphism between the models
        v.push_back(make_law("iso.roundtrip", 1, 0, "R(F a) = a",
                             [](auto m, auto& a, auto&, int) { return m.from_other(m.to_other(a[0])) == a[0]; }));
        v.push_back(make_law("iso.union", 2, 0, "F(a + b) = F a + F b", [](auto m, auto& a, auto&, int) {
            return m.to_other(m.plus(a[0], a[1])) == m.other_plus(m.to_other(a[0]), m.to_other(a[1]));
        }));
        v.push_back(make_law("iso.compose", 2, 0, "F(ab) = F a . F b", [](auto m, auto& a, auto&, int) {
            return m.to_other(m.times(a[0], a[1])) == m.other_times(m.to_other(a[0]), m.to_other(a[1]));
        }));
        v.push_back(make_law("iso.star", 1, 0, "F(a*) = (F a)*", [](auto m, auto& a, auto&, int) {
            return m.to_other(m.star(a[0])) == m.other_star(m.to_other(a[0]));
        }));
        v.push_back(make_law("iso.ad", 1, 0, "F(ad a) = ad(F a)", [](auto m, auto& a, auto&, int) {
            return m.to_other(m.ad(a[0])) == m.other_ad(m.to_other(a[0]));
        }));
        v.push_back(make_law("iso.fbox", 1, 1, "|a]p = |F a]p", [](auto m, auto& a, auto& p, int) {
            return m.fbox(a[0], p[0]) == m.other_fbox(m.to_other(a[0]), p[0]);
        }));
        // Control: not a law of either model.
        v.push_back(make_law(
            "wrong.mul-comm", 2, 0, "ab = ba (not valid)",
            [](auto m, auto& a, auto&, int) { return m.times(a[0], a[1]) == m.times(a[1], a[0]); }, false));
        return v;
    }();
    return laws;
}

const LawEntry& find_law(const std::string& id) {
    for (const auto& l : registry()) {
        if (l.info.id == id) {
            return l;
        }
    }
    throw Error("unknown law '" + id + "'");
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

template <typename M>
std::string describe(const std::vector<typename M::E>& a, const std::vector<FinitePred>& p) {
    std::ostringstream os;
    for (size_t i = 0; i < a.size(); ++i) {
        os << (i ? "; " : "") << M::letter() << i << " = " << a[i].to_string();
    }
    for (size_t i = 0; i < p.size(); ++i) {
        os << (a.empty() && i == 0 ? "" : "; ") << "P" << i << " = " << p[i].to_string();
    }
    return os.str();
}

template <typename M>
LawResult run_law(const LawEntry& law, const LawFn<typename M::E>& fn, int n, const LawMode& mode) {
    using E = typename M::E;
    LawResult res;
    res.law = law.info.id;
    res.mode = mode.exhaustive ? "exhaustive" : "random";
    const int nr = law.info.relations;
    const int np = law.info.predicates;
    std::vector<E> a;
    std::vector<FinitePred> p;
    auto check = [&]() {
        ++res.cases;
        if (!fn(a, p, n)) {
            res.pass = false;
            res.counterexample = describe<M>(a, p);
            return false;
        }
        return true;
    };
    if (mode.exhaustive) {
        const std::uint64_t rel_count = std::uint64_t{1} << (n * n);
        const std::uint64_t pred_count = std::uint64_t{1} << n;
        std::vector<E> all;
        all.reserve(rel_count);
        for (std::uint64_t c = 0; c < rel_count; ++c) {
            all.push_back(M::from_rel(FiniteRel::from_code(n, c)));
        }
        std::vector<std::uint64_t> idx(static_cast<size_t>(nr + np), 0);
        for (;;) {
            a.clear();
            p.clear();
            for (int i = 0; i < nr; ++i) {
                a.push_back(all[idx[i]]);
            }
            for (int i = 0; i < np; ++i) {
                p.emplace_back(n, idx[nr + i]);
            }
            if (!check()) {
                return res;
            }
            // mixed-radix increment
            int k = 0;
            for (; k < nr + np; ++k) {
                const std::uint64_t radix = k < nr ? rel_count : pred_count;
                if (++idx[k] < radix) {
                    break;
                }
                idx[k] = 0;
            }
            if (k == nr + np) {
                return res;
            }
        }
    }
    std::mt19937_64 rng(mode.seed ^ fnv1a(law.info.id) ^ (static_cast<std::uint64_t>(n) << 40));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    static const double densities[] = {0.2, 0.35, 0.5};
    for (int trial = 0; trial < mode.trials; ++trial) {
        a.clear();
        p.clear();
        for (int i = 0; i < nr; ++i) {
            const double d = densities[rng() % 3];
            FiniteRel r(n);
            for (int x = 0; x < n; ++x) {
                for (int y = 0; y < n; ++y) {
                    if (unit(rng) < d) {
                        r.set(x, y);
                    }
                }
            }
            a.push_back(M::from_rel(r));
        }
        for (int i = 0; i < np; ++i) {
            p.emplace_back(n, rng() & mask(n));
        }
        if (!check()) {
            return res;
        }
    }
    return res;
}

}  // namespace

const std::vector<LawInfo>& law_catalog() {
    static const std::vector<LawInfo> infos = [] {
        std::vector<LawInfo> v;
        for (const auto& l : registry()) {
            v.push_back(l.info);
        }
        return v;
    }();
    return infos;
}

std::vector<std::string> resolve_laws(const std::vector<std::string>& ids) {
    std::vector<std::string> out;
    auto add = [&](const std::string& id) {
        if (std::find(out.begin(), out.end(), id) == out.end()) {
            out.push_back(id);
        }
    };
    if (ids.empty()) {
        for (const auto& l : registry()) {
            if (l.info.sound) {
                add(l.info.id);
            }
        }
        return out;
    }
    for (const auto& id : ids) {
        bool found = false;
        for (const auto& l : registry()) {
            if (l.info.id == id || l.info.id.rfind(id + ".", 0) == 0) {
                add(l.info.id);
                found = true;
            }
        }
        if (!found) {
            throw Error("unknown law identifier '" + id + "'");
        }
    }
    return out;
}

bool LawReport::all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const LawResult& r) { return r.pass; });
}

LawReport check_laws(LawModel model, int n, const std::vector<std::string>& law_ids, const LawMode& mode) {
    check_size(n);
    const auto ids = resolve_laws(law_ids);
    if (mode.exhaustive) {
        if (n > 3) {
            throw Error("exhaustive law checking is limited to n <= 3");
        }
        for (const auto& id : ids) {
            const auto& law = find_law(id);
            if (n == 3) {
                const int bits = 9 * law.info.relations + 3 * law.info.predicates;
                if (bits > 20) {
                    throw Error("law '" + id + "' has too many cases for exhaustive checking at n = 3");
                }
            }
        }
    } else if (mode.trials < 1) {
        throw Error("random mode needs at least one trial");
    }
    LawReport report;
    report.model = model;
    report.n = n;
    std::vector<std::future<LawResult>> jobs;
    for (const auto& id : ids) {
        const LawEntry& law = find_law(id);
        jobs.push_back(std::async(std::launch::async, [&law, model, n, mode] {
            return model == LawModel::Rel ? run_law<RelOps>(law, law.rel, n, mode)
                                          : run_law<StaOps>(law, law.sta, n, mode);
        }));
    }
    for (auto& j : jobs) {
        report.results.push_back(j.get());
    }
    return report;
}

}  // namespace hwl
