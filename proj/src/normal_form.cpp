// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hwl {

Polynomial Polynomial::constant(const Rational& c) {
    Polynomial p;
    if (c != 0) {
        p.terms_[Monomial{}] = c;
    }
    return p;
}

Polynomial Polynomial::atom(const std::string& key, Atom a) {
    Polynomial p;
    p.terms_[Monomial{{key, 1}}] = 1;
    p.atoms_.emplace(key, std::move(a));
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

bool Polynomial::has_opaque() const {
    for (const auto& [m, c] : terms_) {
        for (const auto& [k, e] : m) {
            if (atoms_.at(k).kind == AtomKind::Opaque) {
                return true;
            }
        }
    }
    return false;
}

int Polynomial::degree_in(const std::string& atom_key) const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(atom_key);
        if (it != m.end()) {
            d = std::max(d, it->second);
        }
    }
    return d;
}

int Polynomial::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
        int s = 0;
        for (const auto& [k, e] : m) {
            s += e;
        }
        d = std::max(d, s);
    }
    return d;
}

bool Polynomial::is_affine() const {
    for (const auto& [m, c] : terms_) {
        int s = 0;
        for (const auto& [k, e] : m) {
            if (e < 0) {
                return false;
            }
            s += e;
        }
        if (s > 1) {
            return false;
        }
    }
    return true;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) {
        return;
    }
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

void Polynomial::merge_atoms(const Polynomial& o) {
    for (const auto& [k, a] : o.atoms_) {
        atoms_.emplace(k, a);
    }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    r.merge_atoms(o);
    for (const auto& [m, c] : o.terms_) {
        r.add_term(m, c);
    }
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r;
    r.atoms_ = atoms_;
    if (c == 0) {
        return r;
    }
    for (const auto& [m, k] : terms_) {
        r.terms_.emplace(m, k * c);
    }
    return r;
}

namespace {

Polynomial::Monomial monomial_product(const Polynomial::Monomial& a, const Polynomial::Monomial& b) {
    Polynomial::Monomial r = a;
    for (const auto& [k, e] : b) {
        int& slot = r[k];
        slot += e;
        if (slot == 0) {
            r.erase(k);
        }
    }
    return r;
}

}  // namespace

Polynomial Polynomial::multiplied(const Monomial& m, const Rational& c) const {
    Polynomial r;
    r.atoms_ = atoms_;
    for (const auto& [mm, k] : terms_) {
        r.add_term(monomial_product(mm, m), k * c);
    }
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r;
    r.atoms_ = atoms_;
    r.merge_atoms(o);
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : o.terms_) {
            r.add_term(monomial_product(m1, m2), c1 * c2);
        }
    }
    return r;
}

Polynomial Polynomial::pow(unsigned n) const {
    Polynomial r = constant(1);
    r.atoms_ = atoms_;
    Polynomial base = *this;
    while (n > 0) {
        if (n & 1u) {
            r = r * base;
        }
        n >>= 1u;
        if (n > 0) {
            base = base * base;
        }
    }
    return r;
}

Polynomial Polynomial::reduce_trig() const {
    Polynomial cur = *this;
    for (;;) {
        bool changed = false;
        Polynomial next;
        next.atoms_ = cur.atoms_;
        for (const auto& [m, c] : cur.terms_) {
            std::string sin_key;
            for (const auto& [k, e] : m) {
                if (e >= 2 && cur.atoms_.at(k).kind == AtomKind::Sin) {
                    sin_key = k;
                    break;
                }
            }
            if (sin_key.empty()) {
                next.add_term(m, c);
                continue;
            }
            changed = true;
            const std::string cos_key = "cos" + sin_key.substr(3);
            next.atoms_.emplace(cos_key, Atom{AtomKind::Cos, Expr::cos(cur.atoms_.at(sin_key).expr.arg())});
            Monomial rest = m;
            rest[sin_key] -= 2;
            if (rest[sin_key] == 0) {
                rest.erase(sin_key);
            }
            next.add_term(rest, c);
            Monomial with_cos = rest;
            with_cos[cos_key] += 2;
            next.add_term(with_cos, -c);
        }
        cur = std::move(next);
        if (!changed) {
            return cur;
        }
    }
}

int Polynomial::compare_grlex(const Monomial& a, const Monomial& b) {
    int da = 0, db = 0;
    for (const auto& [k, e] : a) {
        da += e;
    }
    for (const auto& [k, e] : b) {
        db += e;
    }
    if (da != db) {
        return da < db ? -1 : 1;
    }
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        // Walk keys in ascending order; the first differing exponent decides.
        std::string key;
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            key = ia->first;
        } else {
            key = ib->first;
        }
        const int ea = (ia != a.end() && ia->first == key) ? ia->second : 0;
        const int eb = (ib != b.end() && ib->first == key) ? ib->second : 0;
        if (ea != eb) {
            return ea < eb ? -1 : 1;
        }
        if (ia != a.end() && ia->first == key) {
            ++ia;
        }
        if (ib != b.end() && ib->first == key) {
            ++ib;
        }
    }
    return 0;
}

std::pair<Polynomial::Monomial, Rational> Polynomial::leading_term() const {
    if (terms_.empty()) {
        return {Monomial{}, Rational(0)};
    }
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
        if (compare_grlex(it->first, best->first) > 0) {
            best = it;
        }
    }
    return *best;
}

namespace {

bool divides(const Polynomial::Monomial& d, const Polynomial::Monomial& m) {
    for (const auto& [k, e] : d) {
        auto it = m.find(k);
        const int em = it == m.end() ? 0 : it->second;
        if (e > 0 ? em < e : em > e) {
            return false;
        }
    }
    return true;
}

Polynomial::Monomial quotient(const Polynomial::Monomial& m, const Polynomial::Monomial& d) {
    Polynomial::Monomial r = m;
    for (const auto& [k, e] : d) {
        int& slot = r[k];
        slot -= e;
        if (slot == 0) {
            r.erase(k);
        }
    }
    return r;
}

}  // namespace

Polynomial Polynomial::remainder(const Polynomial& divisor) const {
    if (divisor.is_zero()) {
        return *this;
    }
    const auto [lead_m, lead_c] = divisor.leading_term();
    Polynomial p = *this;
    p.merge_atoms(divisor);
    Polynomial r;
    r.atoms_ = p.atoms_;
    // Standard division: move non-divisible leading terms to the remainder.
    for (int guard = 0; !p.is_zero() && guard < 100000; ++guard) {
        const auto [m, c] = p.leading_term();
        if (divides(lead_m, m)) {
            p = p - divisor.multiplied(quotient(m, lead_m), c / lead_c);
        } else {
            r.add_term(m, c);
            p.terms_.erase(m);
        }
    }
    return r;
}

Polynomial Polynomial::substituted(const std::string& atom_key, const Polynomial& value) const {
    Polynomial out;
    out.atoms_ = atoms_;
    out.atoms_.erase(atom_key);
    for (const auto& [m, c] : terms_) {
        auto it = m.find(atom_key);
        if (it == m.end()) {
            out.add_term(m, c);
            continue;
        }
        if (it->second < 0) {
            throw Error("cannot substitute a negative power of " + atom_key);
        }
        Monomial rest = m;
        rest.erase(atom_key);
        Polynomial unit;
        unit.atoms_ = out.atoms_;
        unit.add_term(rest, c);
        out = out + unit * value.pow(static_cast<unsigned>(it->second));
    }
    return out.reduce_trig();
}

std::optional<std::pair<Polynomial, Polynomial>> Polynomial::linear_in(const std::string& atom_key) const {
    Polynomial coef, rest;
    coef.atoms_ = atoms_;
    rest.atoms_ = atoms_;
    for (const auto& [m, c] : terms_) {
        auto it = m.find(atom_key);
        if (it == m.end()) {
            rest.add_term(m, c);
        } else if (it->second == 1) {
            Monomial r = m;
            r.erase(atom_key);
            coef.add_term(r, c);
        } else {
            return std::nullopt;
        }
    }
    if (coef.is_zero()) {
        return std::nullopt;
    }
    return std::make_pair(coef, rest);
}

std::optional<std::vector<Polynomial>> Polynomial::coefficients_in(const std::string& atom_key, int max_degree) const {
    std::vector<Polynomial> coefs(static_cast<size_t>(max_degree) + 1);
    for (auto& c : coefs) {
        c.atoms_ = atoms_;
    }
    for (const auto& [m, c] : terms_) {
        auto it = m.find(atom_key);
        const int e = it == m.end() ? 0 : it->second;
        if (e < 0 || e > max_degree) {
            return std::nullopt;
        }
        Monomial r = m;
        r.erase(atom_key);
        coefs[static_cast<size_t>(e)].add_term(r, c);
    }
    return coefs;
}

Expr Polynomial::to_expr() const {
    std::vector<std::pair<Monomial, Rational>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return compare_grlex(a.first, b.first) > 0; });
    Expr out;
    bool first = true;
    for (const auto& [m, c] : ordered) {
        Expr num, den = Expr::constant(1);
        bool have_num = false;
        for (const auto& [k, e] : m) {
            const Expr& a = atoms_.at(k).expr;
            if (e > 0) {
                num = have_num ? num * power(a, static_cast<unsigned>(e)) : power(a, static_cast<unsigned>(e));
                have_num = true;
            } else {
                den = den * power(a, static_cast<unsigned>(-e));
            }
        }
        const Rational mag = c < 0 ? Rational(-c) : c;
        Expr term;
        if (!have_num) {
            term = Expr::constant(mag);
        } else {
            term = Expr::constant(mag) * num;
        }
        if (!den.is_const(1)) {
            term = term / den;
        }
        if (first) {
            out = c < 0 ? -term : term;
            first = false;
        } else {
            out = c < 0 ? Expr::sub(out, term) : Expr::add(out, term);
        }
    }
    return out;
}

std::string Polynomial::key() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) {
            os << " + ";
        }
        first = false;
        os << c.str();
        for (const auto& [k, e] : m) {
            os << '*' << k;
            if (e != 1) {
                os << '^' << e;
            }
        }
    }
    return os.str();
}

double Polynomial::eval(const Valuation& v) const {
    std::map<std::string, double> atom_values;
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
        double term = c.convert_to<double>();
        for (const auto& [k, e] : m) {
            auto it = atom_values.find(k);
            if (it == atom_values.end()) {
                it = atom_values.emplace(k, hwl::eval(atoms_.at(k).expr, v)).first;
            }
            term *= std::pow(it->second, e);
        }
        sum += term;
    }
    return sum;
}

// ---------------------------------------------------------------------------

namespace {

/// Flip the argument's sign so its leading coefficient is positive.
bool canonical_sign(Polynomial& arg) {
    if (arg.is_zero()) {
        return false;
    }
    if (arg.leading_term().second < 0) {
        arg = -arg;
        return true;
    }
    return false;
}

Polynomial transcendental(AtomKind kind, const Expr& e) {
    Polynomial arg = normalize(e.arg());
    if (arg.is_zero()) {
        return Polynomial::constant(kind == AtomKind::Sin ? 0 : 1);
    }
    bool flipped = false;
    if (kind != AtomKind::Exp) {
        flipped = canonical_sign(arg);
    }
    const Expr arg_expr = arg.to_expr();
    const char* prefix = kind == AtomKind::Sin ? "sin(" : kind == AtomKind::Cos ? "cos(" : "exp(";
    const std::string key = prefix + arg.key() + ")";
    Expr atom_expr = kind == AtomKind::Sin ? Expr::sin(arg_expr)
                     : kind == AtomKind::Cos ? Expr::cos(arg_expr)
                                             : Expr::exp(arg_expr);
    Polynomial p = Polynomial::atom(key, Atom{kind, atom_expr});
    return (flipped && kind == AtomKind::Sin) ? -p : p;
}

bool symbolic_monomial(const Polynomial& p) {
    if (p.terms().size() != 1) {
        return false;
    }
    for (const auto& [k, e] : p.terms().begin()->first) {
        if (p.atoms().at(k).kind != AtomKind::Sym) {
            return false;
        }
    }
    return true;
}

}  // namespace

Polynomial normalize(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Const: return Polynomial::constant(e.value());
    case ExprKind::Var: return Polynomial::atom(e.name(), Atom{AtomKind::Var, e});
    case ExprKind::SymConst: return Polynomial::atom(e.name(), Atom{AtomKind::Sym, e});
    case ExprKind::Time: return Polynomial::atom(std::string("$") + kTimeName, Atom{AtomKind::Time, e});
    case ExprKind::Neg: return -normalize(e.arg());
    case ExprKind::Add: return normalize(e.lhs()) + normalize(e.rhs());
    case ExprKind::Sub: return normalize(e.lhs()) - normalize(e.rhs());
    case ExprKind::Mul: return (normalize(e.lhs()) * normalize(e.rhs())).reduce_trig();
    case ExprKind::Pow: return normalize(e.arg()).pow(e.exponent()).reduce_trig();
    case ExprKind::Div: {
        Polynomial num = normalize(e.lhs());
        Polynomial den = normalize(e.rhs());
        if (den.is_constant() && !den.is_zero()) {
            return num.scaled(1 / den.constant_term());
        }
        if (symbolic_monomial(den)) {
            const auto& [m, c] = *den.terms().begin();
            Polynomial::Monomial inv;
            for (const auto& [k, x] : m) {
                inv[k] = -x;
            }
            Polynomial r = num.multiplied(inv, 1 / c);
            return r + den.scaled(0);  // carry atom table for the inverted constants
        }
        const std::string key = "div(" + num.key() + " | " + den.key() + ")";
        return Polynomial::atom(key, Atom{AtomKind::Opaque, Expr::div(num.to_expr(), den.to_expr())});
    }
    case ExprKind::Sin: return transcendental(AtomKind::Sin, e);
    case ExprKind::Cos: return transcendental(AtomKind::Cos, e);
    case ExprKind::Exp: return transcendental(AtomKind::Exp, e);
    }
    return {};
}

EqualityResult expr_eq(const Expr& a, const Expr& b, const SamplingOptions& opts) {
    EqualityResult res;
    const Polynomial diff_nf = normalize(Expr::sub(a, b));
    if (diff_nf.is_zero()) {
        res.verdict = Equality::Equal;
        res.note = "normal form";
        return res;
    }
    std::set<std::string> names = free_names(a);
    const auto nb = free_names(b);
    names.insert(nb.begin(), nb.end());
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> dist(opts.lo, opts.hi);
    int agreed = 0;
    for (int i = 0; i < opts.samples; ++i) {
        Valuation v;
        for (const auto& n : names) {
            v[n] = dist(rng);
        }
        double x = 0, y = 0;
        try {
            x = eval(a, v);
            y = eval(b, v);
        } catch (const EvalError&) {
            continue;
        }
        if (!std::isfinite(x) || !std::isfinite(y)) {
            continue;
        }
        const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
        if (std::fabs(x - y) > opts.rel_tol * scale) {
            res.verdict = Equality::NotEqual;
            res.witness = v;
            res.note = "sampled disagreement";
            return res;
        }
        ++agreed;
    }
    res.verdict = Equality::Unknown;
    res.note = agreed > 0 ? "likely-equal" : "no evaluable samples";
    return res;
}

Expr lie_derivative(const Expr& mu, const FieldMap& field) {
    if (mentions_time(mu)) {
        throw Error("Lie derivative of a time-dependent term '" + to_string(mu) + "'");
    }
    Expr out;
    for (const auto& [x, fx] : field) {
        out = out + diff(mu, x) * fx;
    }
    return out;
}

}  // namespace hwl
