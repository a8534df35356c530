// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/discharge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "hwl/normal_form.hpp"

namespace hwl {

const char* to_string(VerdictKind k) {
    switch (k) {
    case VerdictKind::Proved: return "Proved";
    case VerdictKind::Refuted: return "Refuted";
    case VerdictKind::Unknown: return "Unknown";
    }
    return "?";
}

const char* to_string(LemmaStatus s) {
    switch (s) {
    case LemmaStatus::Unvalidated: return "unvalidated";
    case LemmaStatus::Accepted: return "accepted";
    case LemmaStatus::Rejected: return "rejected";
    case LemmaStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict Verdict::proved(std::string method) {
    Verdict v;
    v.kind = VerdictKind::Proved;
    v.method = std::move(method);
    return v;
}

Verdict Verdict::refuted(Valuation witness, std::string note) {
    Verdict v;
    v.kind = VerdictKind::Refuted;
    v.witness = std::move(witness);
    v.reason = std::move(note);
    return v;
}

Verdict Verdict::unknown(std::string reason) {
    Verdict v;
    v.kind = VerdictKind::Unknown;
    v.reason = std::move(reason);
    return v;
}

namespace {

// p op 0 with op in {Eq, Ne, Lt, Le}
struct Fact {
    Polynomial p;
    CmpOp op = CmpOp::Le;
};

/// Normalizing leaves the term's shape alone: no products of sums, no powers of
/// compound terms, no transcendental functions.
bool expansion_free(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::SymConst:
    case ExprKind::Var:
    case ExprKind::Time: return true;
    case ExprKind::Neg: return expansion_free(e.arg());
    case ExprKind::Add:
    case ExprKind::Sub: return expansion_free(e.lhs()) && expansion_free(e.rhs());
    case ExprKind::Mul: {
        const auto sum = [](const Expr& x) { return x.kind() == ExprKind::Add || x.kind() == ExprKind::Sub; };
        return !sum(e.lhs()) && !sum(e.rhs()) && expansion_free(e.lhs()) && expansion_free(e.rhs());
    }
    case ExprKind::Div: return e.rhs().is_const() && expansion_free(e.lhs());
    case ExprKind::Pow: {
        const ExprKind b = e.lhs().kind();
        return b == ExprKind::Var || b == ExprKind::SymConst || b == ExprKind::Time;
    }
    default: return false;
    }
}

Fact canonical(const Pred& cmp) {
    Polynomial p = normalize(cmp.lhs()) - normalize(cmp.rhs());
    switch (cmp.op()) {
    case CmpOp::Gt: return {-p, CmpOp::Lt};
    case CmpOp::Ge: return {-p, CmpOp::Le};
    default: return {p, cmp.op()};
    }
}

/// k with a = k * b, if any.
std::optional<Rational> ratio(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero() || a.terms().size() != b.terms().size()) {
        return std::nullopt;
    }
    const auto& [m, cb] = *b.terms().begin();
    auto it = a.terms().find(m);
    if (it == a.terms().end()) {
        return std::nullopt;
    }
    const Rational k = it->second / cb;
    if (a != b.scaled(k)) {
        return std::nullopt;
    }
    return k;
}

/// Does hyp (q op_h 0) entail goal (p op_g 0)?
bool entails(const Fact& hyp, const Fact& goal) {
    if (goal.p.is_zero()) {
        return goal.op != CmpOp::Ne && goal.op != CmpOp::Lt;
    }
    auto k = ratio(goal.p, hyp.p);
    if (!k) {
        return false;
    }
    const bool pos = *k > 0;
    switch (goal.op) {
    case CmpOp::Eq: return hyp.op == CmpOp::Eq;
    case CmpOp::Ne: return hyp.op == CmpOp::Ne || hyp.op == CmpOp::Lt;
    case CmpOp::Le: return pos ? (hyp.op == CmpOp::Le || hyp.op == CmpOp::Lt || hyp.op == CmpOp::Eq) : hyp.op == CmpOp::Eq;
    case CmpOp::Lt: return pos && hyp.op == CmpOp::Lt;
    default: return false;
    }
}

bool constant_holds(const Fact& f) {
    const Rational c = f.p.constant_term();
    switch (f.op) {
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    default: return false;
    }
}

std::string monomial_key(const Polynomial::Monomial& m) {
    std::string s;
    for (const auto& [k, e] : m) {
        if (!s.empty()) {
            s += "*";
        }
        s += k;
        if (e != 1) {
            s += "^" + std::to_string(e);
        }
    }
    return s;
}

LinearConstraint linearize(const Polynomial& p, bool strict) {
    LinearConstraint c;
    c.strict = strict;
    for (const auto& [m, coef] : p.terms()) {
        if (m.empty()) {
            c.constant += coef;
        } else {
            c.coeffs[monomial_key(m)] += coef;
        }
    }
    return c;
}

std::set<std::string> columns(const Polynomial& p) {
    std::set<std::string> out;
    for (const auto& [m, c] : p.terms()) {
        if (!m.empty()) {
            out.insert(monomial_key(m));
        }
    }
    return out;
}

struct Sign {
    bool pos = false, neg = false, nonneg = false, nonpos = false;
};

/// Signs of single atoms read off hypotheses of the form c * a op 0.
std::map<std::string, Sign> atom_signs(const std::vector<Fact>& facts) {
    std::map<std::string, Sign> out;
    for (const auto& f : facts) {
        if (f.p.terms().size() != 1 || (f.op != CmpOp::Lt && f.op != CmpOp::Le)) {
            continue;
        }
        const auto& [m, c] = *f.p.terms().begin();
        if (m.size() != 1 || m.begin()->second != 1) {
            continue;
        }
        Sign& s = out[m.begin()->first];
        const bool up = c < 0;  // c * a <= 0 with c < 0 bounds a from below
        if (f.op == CmpOp::Lt) {
            (up ? s.pos : s.neg) = true;
        }
        (up ? s.nonneg : s.nonpos) = true;
    }
    return out;
}

/// Every term is nonnegative: even powers, or odd powers of atoms with a known sign.
/// Returns 0 on failure, 1 when only even powers were needed, 2 when signs were used.
int nonnegative_by_signs(const Polynomial& p, bool strict, const std::map<std::string, Sign>& signs) {
    if (p.is_zero()) {
        return strict ? 0 : 1;
    }
    bool any_strict = false, used = false;
    for (const auto& [m, c] : p.terms()) {
        int sign = c > 0 ? 1 : -1;
        bool term_strict = true;
        for (const auto& [k, e] : m) {
            auto it = signs.find(k);
            const Sign s = it != signs.end() ? it->second : Sign{};
            if (e % 2 == 0) {
                term_strict = term_strict && (s.pos || s.neg);
                continue;
            }
            used = true;
            if (s.pos || s.neg) {
                sign *= s.pos ? 1 : -1;
            } else if (s.nonneg || s.nonpos) {
                sign *= s.nonneg ? 1 : -1;
                term_strict = false;
            } else {
                return 0;
            }
        }
        if (sign < 0) {
            return 0;
        }
        any_strict = any_strict || term_strict;
    }
    if (strict && !any_strict) {
        return 0;
    }
    return used ? 2 : 1;
}

Polynomial reduce(Polynomial p, const std::vector<Fact>& facts) {
    for (int round = 0; round < 3; ++round) {
        const Polynomial before = p;
        for (const auto& f : facts) {
            if (f.op == CmpOp::Eq && !f.p.is_constant()) {
                p = p.remainder(f.p);
            }
        }
        if (p == before) {
            break;
        }
    }
    return p;
}

class Prover {
  public:
    Prover(const LemmaDB& db, const DischargeOptions& opts) : db_(db), opts_(opts) {}

    bool prove(std::vector<Pred> hyps, Pred goal, int depth) {
        if (depth > 24) {
            return false;
        }
        // goal-directed introduction
        for (;;) {
            switch (goal.kind()) {
            case PredKind::True: return true;
            case PredKind::And: return prove(hyps, goal.left(), depth + 1) && prove(hyps, goal.right(), depth + 1);
            case PredKind::Implies:
                hyps.push_back(goal.left());
                goal = goal.right();
                continue;
            case PredKind::Not: goal = nnf(goal); continue;
            case PredKind::Or:
                hyps.push_back(nnf(Pred::negation(goal.left())));
                goal = goal.right();
                continue;
            case PredKind::Forall: {
                std::set<std::string> taken = names_of(hyps);
                auto gn = free_names(goal);
                taken.insert(gn.begin(), gn.end());
                taken.insert(goal.bound());
                taken.insert(kTimeName);
                const std::string x = fresh_name(goal.bound(), taken);
                const Expr xv = Expr::var(x);
                if (goal.lower()) {
                    hyps.push_back(Pred::cmp(CmpOp::Le, *goal.lower(), xv));
                }
                if (goal.upper()) {
                    hyps.push_back(Pred::cmp(CmpOp::Le, xv, *goal.upper()));
                }
                goal = substitute(goal.body(), Binding{{goal.bound(), xv}});
                continue;
            }
            case PredKind::Exists:
                note("existential conclusions are not supported");
                return false;
            case PredKind::Cmp:
            case PredKind::False: break;
            }
            break;
        }
        // hypothesis elimination
        std::vector<Pred> atoms, ors;
        bool absurd = false;
        flatten(hyps, atoms, ors, absurd);
        if (absurd) {
            methods_.insert("hypothesis");
            return true;
        }
        if (!ors.empty()) {
            if (++splits_ > 64) {
                note("case split budget exhausted");
                return false;
            }
            const Pred split = ors.front();
            std::vector<Pred> base = atoms;
            base.insert(base.end(), ors.begin() + 1, ors.end());
            std::vector<Pred> left = base, right = base;
            left.push_back(split.left());
            right.push_back(split.right());
            return prove(left, goal, depth + 1) && prove(right, goal, depth + 1);
        }
        std::vector<Fact> facts;
        for (const auto& a : atoms) {
            facts.push_back(canonical(a));
        }
        Fact g = goal.kind() == PredKind::False ? Fact{Polynomial::constant(1), CmpOp::Le} : canonical(goal);
        literal_goal_ = goal.kind() != PredKind::Cmp || (expansion_free(goal.lhs()) && expansion_free(goal.rhs()));
        return prove_atom(facts, g);
    }

    [[nodiscard]] std::string method() const {
        std::string s;
        for (const auto& m : methods_) {
            s += (s.empty() ? "" : "+") + m;
        }
        return s;
    }

    [[nodiscard]] const std::string& reason() const { return reason_; }

  private:
    void note(const std::string& r) {
        if (reason_.empty()) {
            reason_ = r;
        }
    }

    static std::set<std::string> names_of(const std::vector<Pred>& ps) {
        std::set<std::string> out;
        for (const auto& p : ps) {
            auto n = free_names(p);
            out.insert(n.begin(), n.end());
        }
        return out;
    }

    void flatten(const std::vector<Pred>& hyps, std::vector<Pred>& atoms, std::vector<Pred>& ors, bool& absurd) {
        std::vector<Pred> work(hyps.rbegin(), hyps.rend());
        std::set<std::string> taken = names_of(hyps);
        int instantiations = 0;
        while (!work.empty()) {
            Pred h = work.back();
            work.pop_back();
            switch (h.kind()) {
            case PredKind::True: break;
            case PredKind::False: absurd = true; return;
            case PredKind::Cmp: atoms.push_back(h); break;
            case PredKind::And:
                work.push_back(h.right());
                work.push_back(h.left());
                break;
            case PredKind::Or: ors.push_back(h); break;
            case PredKind::Not:
            case PredKind::Implies: work.push_back(nnf(h)); break;
            case PredKind::Forall:
                // instantiate at the interval end points
                if (++instantiations > 32) {
                    break;
                }
                if (h.lower()) {
                    work.push_back(substitute(h.body(), Binding{{h.bound(), *h.lower()}}));
                }
                if (h.upper()) {
                    work.push_back(substitute(h.body(), Binding{{h.bound(), *h.upper()}}));
                }
                break;
            case PredKind::Exists: {
                const std::string x = fresh_name(h.bound(), taken);
                taken.insert(x);
                const Expr xv = Expr::var(x);
                if (h.lower()) {
                    work.push_back(Pred::cmp(CmpOp::Le, *h.lower(), xv));
                }
                if (h.upper()) {
                    work.push_back(Pred::cmp(CmpOp::Le, xv, *h.upper()));
                }
                work.push_back(substitute(h.body(), Binding{{h.bound(), xv}}));
                break;
            }
            }
        }
    }

    /// Eliminates Var atoms defined by unit-coefficient equalities.
    static void substitute_units(std::vector<Fact>& facts, Fact& goal) {
        for (int guard = 0; guard < 64; ++guard) {
            bool changed = false;
            for (size_t i = 0; i < facts.size() && !changed; ++i) {
                if (facts[i].op != CmpOp::Eq) {
                    continue;
                }
                const Polynomial& p = facts[i].p;
                std::string pick;
                Polynomial value;
                for (auto it = p.atoms().rbegin(); it != p.atoms().rend(); ++it) {
                    if (it->second.kind != AtomKind::Var) {
                        continue;
                    }
                    auto lin = p.linear_in(it->first);
                    if (!lin || !lin->first.is_constant()) {
                        continue;
                    }
                    const Rational c = lin->first.constant_term();
                    if (c != 1 && c != -1) {
                        continue;
                    }
                    pick = it->first;
                    value = lin->second.scaled(-1 / c);
                    break;
                }
                if (pick.empty()) {
                    continue;
                }
                std::vector<Fact> next;
                for (size_t j = 0; j < facts.size(); ++j) {
                    if (j != i) {
                        next.push_back({facts[j].p.substituted(pick, value), facts[j].op});
                    }
                }
                goal.p = goal.p.substituted(pick, value);
                facts = std::move(next);
                changed = true;
            }
            if (!changed) {
                return;
            }
        }
    }

    bool by_hypothesis(const std::vector<Fact>& facts, const Fact& goal) {
        for (const auto& f : facts) {
            if (entails(f, goal)) {
                return true;
            }
        }
        return false;
    }

    bool by_lemma(const std::vector<Fact>& facts, const Fact& goal) {
        for (const Lemma* l : db_.usable()) {
            if (l->concl.kind() != PredKind::Cmp) {
                continue;
            }
            const Fact c = canonical(l->concl);
            if (!entails(c, goal)) {
                continue;
            }
            bool all = true;
            for (const auto& h : l->hyps) {
                if (h.kind() != PredKind::Cmp || !by_hypothesis(facts, canonical(h))) {
                    all = false;
                    break;
                }
            }
            if (all) {
                methods_.insert("lemma:" + l->name);
                return true;
            }
        }
        return false;
    }

    /// Shows -goal >= 0 termwise, optionally after multiplying by a hypothesis of known strict sign.
    bool by_square_rule(const std::vector<Fact>& facts, const Fact& goal) {
        if (goal.op != CmpOp::Le && goal.op != CmpOp::Lt) {
            return false;
        }
        const bool strict = goal.op == CmpOp::Lt;
        const Polynomial r = -goal.p;
        const auto signs = atom_signs(facts);
        std::vector<Polynomial> multipliers{Polynomial::constant(1)};
        for (const auto& f : facts) {
            if (f.op == CmpOp::Lt && f.p.terms().size() == 1 && !f.p.is_constant()) {
                multipliers.push_back(-f.p);  // strictly positive
            }
        }
        for (const auto& m : multipliers) {
            const Polynomial scaled = (m * r).reduce_trig();
            for (const auto& candidate : {scaled, reduce(scaled, facts)}) {
                if (int how = nonnegative_by_signs(candidate, strict, signs)) {
                    methods_.insert(how == 1 ? "square-rule" : "sign-rule");
                    return true;
                }
            }
        }
        return false;
    }

    bool fm_valid(const std::vector<Fact>& facts, const Polynomial& p, bool strict) {
        std::set<std::string> cols = columns(p);
        std::vector<bool> used(facts.size(), false);
        for (bool grew = true; grew;) {
            grew = false;
            for (size_t i = 0; i < facts.size(); ++i) {
                if (used[i] || facts[i].op == CmpOp::Ne) {
                    continue;
                }
                auto fc = columns(facts[i].p);
                const bool touches =
                    fc.empty() || std::any_of(fc.begin(), fc.end(), [&](const std::string& c) { return cols.count(c); });
                if (touches) {
                    used[i] = true;
                    cols.insert(fc.begin(), fc.end());
                    grew = true;
                }
            }
        }
        if (cols.size() > opts_.fm_max_columns) {
            note("linear reasoning skipped: more than " + std::to_string(opts_.fm_max_columns) + " columns");
            return false;
        }
        std::vector<LinearConstraint> hyps;
        for (size_t i = 0; i < facts.size(); ++i) {
            if (!used[i]) {
                continue;
            }
            const auto& f = facts[i];
            if (f.op == CmpOp::Eq) {
                hyps.push_back(linearize(f.p, false));
                hyps.push_back(linearize(-f.p, false));
            } else {
                hyps.push_back(linearize(f.p, f.op == CmpOp::Lt));
            }
        }
        return fm_entails(hyps, linearize(p, strict), opts_.fm_max_rows).status == Entailment::Valid;
    }

    bool by_fourier_motzkin(const std::vector<Fact>& facts, const Fact& goal) {
        auto one = [&](const Polynomial& p) {
            switch (goal.op) {
            case CmpOp::Le: return fm_valid(facts, p, false);
            case CmpOp::Lt: return fm_valid(facts, p, true);
            case CmpOp::Eq: return fm_valid(facts, p, false) && fm_valid(facts, -p, false);
            case CmpOp::Ne: return fm_valid(facts, p, true) || fm_valid(facts, -p, true);
            default: return false;
            }
        };
        if (one(goal.p)) {
            return true;
        }
        const Polynomial reduced = reduce(goal.p, facts);
        return reduced != goal.p && one(reduced);
    }

    bool prove_atom(const std::vector<Fact>& original, const Fact& original_goal) {
        if (original_goal.p.is_constant() && constant_holds(original_goal)) {
            methods_.insert("arith");
            return true;
        }
        if (by_hypothesis(original, original_goal)) {
            // a goal that only matches after expansion or trig reduction is an identity
            methods_.insert(literal_goal_ ? "hypothesis" : "poly-identity");
            return true;
        }
        if (by_lemma(original, original_goal)) {
            return true;
        }
        std::vector<Fact> facts = original;
        Fact goal = original_goal;
        try {
            substitute_units(facts, goal);
        } catch (const Error&) {
            facts = original;
            goal = original_goal;
        }
        for (const auto& f : facts) {
            if (f.p.is_constant() && !constant_holds(f)) {
                methods_.insert("arith");
                return true;  // contradictory hypothesis
            }
        }
        if (goal.p.is_constant() && constant_holds(goal)) {
            methods_.insert(facts.size() == original.size() ? "arith" : "poly-identity");
            return true;
        }
        if (by_hypothesis(facts, goal)) {
            methods_.insert("hypothesis");
            return true;
        }
        if (goal.op == CmpOp::Eq || goal.op == CmpOp::Le) {
            if (reduce(goal.p, facts).is_zero()) {
                methods_.insert("poly-identity");
                return true;
            }
        }
        if (by_square_rule(facts, goal)) {
            return true;
        }
        if (by_fourier_motzkin(facts, goal)) {
            methods_.insert("fourier-motzkin");
            return true;
        }
        note("no method proves " + to_string(goal.p.to_expr()) + " " + to_string(goal.op) + " 0");
        return false;
    }

    const LemmaDB& db_;
    const DischargeOptions& opts_;
    std::set<std::string> methods_;
    std::string reason_;
    int splits_ = 0;
    bool literal_goal_ = true;
};

bool holds(const Pred& p, const Valuation& v, double tol) {
    PredEvalOptions o;
    o.eq_tol = tol;
    o.order_slack = false;
    return eval(nnf(p), v, o);
}

std::optional<Valuation> try_sample(const std::vector<Pred>& flat, const std::vector<Polynomial>& eqs,
                                    const std::set<std::string>& names, const Ranges& ranges,
                                    std::mt19937_64& rng, double widen, double eq_tol) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Valuation v;
    for (const auto& n : names) {
        auto it = ranges.find(n);
        if (it != ranges.end()) {
            v[n] = it->second.first + (it->second.second - it->second.first) * unit(rng);
        } else if (unit(rng) < 0.1) {
            v[n] = static_cast<double>(static_cast<int>(rng() % 5) - 2);
        } else {
            v[n] = -10.0 * widen + 20.0 * widen * unit(rng);
        }
    }
    std::set<std::string> solved;
    for (const auto& e : eqs) {
        std::vector<std::string> cands;
        for (const auto& [k, a] : e.atoms()) {
            if ((a.kind == AtomKind::Var || a.kind == AtomKind::Sym) && names.count(k) && !solved.count(k)) {
                cands.push_back(k);
            }
        }
        // unconstrained names first, then lexicographically last
        std::sort(cands.begin(), cands.end(), [&](const std::string& a, const std::string& b) {
            const bool ra = ranges.count(a) > 0, rb = ranges.count(b) > 0;
            if (ra != rb) {
                return !ra;
            }
            return a > b;
        });
        for (const auto& k : cands) {
            try {
                if (auto lin = e.linear_in(k)) {
                    const double c = lin->first.eval(v);
                    if (std::fabs(c) < 1e-12 || !std::isfinite(c)) {
                        continue;
                    }
                    v[k] = -lin->second.eval(v) / c;
                    solved.insert(k);
                    break;
                }
                if (auto q = e.coefficients_in(k, 2)) {
                    const double a = (*q)[2].eval(v), b = (*q)[1].eval(v), c = (*q)[0].eval(v);
                    if (std::fabs(a) < 1e-12) {
                        continue;
                    }
                    const double disc = b * b - 4 * a * c;
                    if (disc < 0) {
                        return std::nullopt;
                    }
                    const double sign = (rng() & 1U) ? 1.0 : -1.0;
                    v[k] = (-b + sign * std::sqrt(disc)) / (2 * a);
                    solved.insert(k);
                    break;
                }
            } catch (const EvalError&) {
                return std::nullopt;
            }
        }
    }
    try {
        for (const auto& h : flat) {
            if (!holds(h, v, eq_tol)) {
                return std::nullopt;
            }
        }
    } catch (const EvalError&) {
        return std::nullopt;
    }
    return v;
}

struct SamplePlan {
    std::vector<Pred> flat;
    std::vector<Polynomial> eqs;
};

SamplePlan plan(const std::vector<Pred>& hyps) {
    SamplePlan s;
    for (const auto& h : hyps) {
        for (const auto& c : conjuncts(h)) {
            s.flat.push_back(c);
            if (c.kind() == PredKind::Cmp && c.op() == CmpOp::Eq) {
                try {
                    Polynomial p = normalize(c.lhs()) - normalize(c.rhs());
                    if (!p.is_constant()) {
                        s.eqs.push_back(p);
                    }
                } catch (const Error&) {
                }
            }
        }
    }
    return s;
}

double widen_factor(int attempt, int attempts) {
    const int quarter = std::max(1, attempts / 4);
    return std::pow(2.0, std::min(attempt / quarter, 3));
}

std::optional<Valuation> refute(const std::vector<Pred>& hyps, const Pred& concl, const DischargeOptions& opts) {
    std::set<std::string> names = free_names(concl);
    for (const auto& h : hyps) {
        auto n = free_names(h);
        names.insert(n.begin(), n.end());
    }
    const SamplePlan sp = plan(hyps);
    std::mt19937_64 rng(opts.seed);
    PredEvalOptions robust = opts.eval;
    robust.eq_tol = std::max(1e-6, opts.eval.eq_tol);
    const Pred target = nnf(concl);
    for (int i = 0; i < opts.refute_trials; ++i) {
        auto v = try_sample(sp.flat, sp.eqs, names, opts.ranges, rng, widen_factor(i, opts.refute_trials), 1e-7);
        if (!v) {
            continue;
        }
        try {
            if (!eval(target, *v, robust)) {
                return v;
            }
        } catch (const EvalError&) {
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Valuation> sample_satisfying(const std::vector<Pred>& hyps, const std::set<std::string>& names,
                                           const Ranges& ranges, std::mt19937_64& rng, int attempts, double eq_tol) {
    const SamplePlan sp = plan(hyps);
    for (int i = 0; i < attempts; ++i) {
        if (auto v = try_sample(sp.flat, sp.eqs, names, ranges, rng, widen_factor(i, attempts), eq_tol)) {
            return v;
        }
    }
    return std::nullopt;
}

Verdict prove(const std::vector<Pred>& hyps, const Pred& concl, const LemmaDB& db, const DischargeOptions& opts) {
    Prover prover(db, opts);
    bool ok = false;
    try {
        ok = prover.prove(hyps, concl, 0);
    } catch (const Error&) {
        ok = false;
    }
    if (ok) {
        return Verdict::proved(prover.method());
    }
    if (auto w = refute(hyps, concl, opts)) {
        return Verdict::refuted(*w, "conclusion fails at a sampled point satisfying the hypotheses");
    }
    std::string reason = prover.reason().empty() ? "no method applies" : prover.reason();
    return Verdict::unknown(reason + "; no counterexample in " + std::to_string(opts.refute_trials) + " samples");
}

Verdict discharge(const Obligation& ob, const LemmaDB& db, const DischargeOptions& opts) {
    if (ob.kind != ObligationKind::Arithmetic) {
        return Verdict::unknown(std::string(to_string(ob.kind)) + " obligations are not arithmetic");
    }
    return prove(ob.hyps, ob.concl, db, opts);
}

// ---------------------------------------------------------------------------
// Lemmas

LemmaValidation validate_lemma(const Lemma& l, int trials, std::uint64_t seed, const Ranges& ranges) {
    LemmaValidation out;
    std::set<std::string> names = free_names(l.concl);
    for (const auto& h : l.hyps) {
        auto n = free_names(h);
        names.insert(n.begin(), n.end());
    }
    const SamplePlan sp = plan(l.hyps);
    std::mt19937_64 rng(seed);
    PredEvalOptions robust;
    robust.eq_tol = 1e-6;
    const Pred target = nnf(l.concl);
    int satisfying = 0;
    for (int i = 0; i < trials * 4 && satisfying < trials; ++i) {
        auto v = try_sample(sp.flat, sp.eqs, names, ranges, rng, widen_factor(i, trials * 4), 1e-7);
        if (!v) {
            continue;
        }
        ++satisfying;
        try {
            if (!eval(target, *v, robust)) {
                out.status = LemmaStatus::Rejected;
                out.trials = satisfying;
                out.witness = *v;
                return out;
            }
        } catch (const EvalError&) {
        }
    }
    out.trials = satisfying;
    out.status = satisfying == 0 ? LemmaStatus::Inconclusive : LemmaStatus::Accepted;
    return out;
}

const LemmaDB::Entry& LemmaDB::add(Lemma l, int trials, std::uint64_t seed, const Ranges& ranges) {
    Entry e;
    e.validation = validate_lemma(l, trials, seed, ranges);
    e.lemma = std::move(l);
    entries_.push_back(std::move(e));
    return entries_.back();
}

std::vector<const Lemma*> LemmaDB::usable() const {
    std::vector<const Lemma*> out;
    for (const auto& e : entries_) {
        if (e.validation.status == LemmaStatus::Accepted) {
            out.push_back(&e.lemma);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin

namespace {

void simplify(LinearConstraint& c) {
    for (auto it = c.coeffs.begin(); it != c.coeffs.end();) {
        it = it->second == 0 ? c.coeffs.erase(it) : std::next(it);
    }
}

bool constant_ok(const LinearConstraint& c) { return c.strict ? c.constant < 0 : c.constant <= 0; }

std::string signature(const LinearConstraint& c) {
    std::string s = c.strict ? "<" : "<=";
    for (const auto& [k, v] : c.coeffs) {
        s += "|" + k + ":" + v.str();
    }
    return s + "|" + c.constant.str();
}

/// Scales so the first coefficient has magnitude one; used for deduplication.
LinearConstraint scaled_canonical(LinearConstraint c) {
    if (c.coeffs.empty()) {
        return c;
    }
    Rational m = abs(c.coeffs.begin()->second);
    for (auto& [k, v] : c.coeffs) {
        v /= m;
    }
    c.constant /= m;
    return c;
}

}  // namespace

FmResult fourier_motzkin(const std::vector<LinearConstraint>& input, std::size_t max_rows) {
    FmResult res;
    std::vector<LinearConstraint> cur;
    std::set<std::string> vars;
    for (auto c : input) {
        simplify(c);
        for (const auto& [k, v] : c.coeffs) {
            vars.insert(k);
        }
        cur.push_back(scaled_canonical(c));
    }
    std::vector<std::pair<std::string, std::vector<LinearConstraint>>> stages;
    while (!vars.empty()) {
        // eliminate the variable producing the fewest new rows
        std::string best;
        size_t best_cost = SIZE_MAX;
        for (const auto& x : vars) {
            size_t pos = 0, neg = 0;
            for (const auto& c : cur) {
                auto it = c.coeffs.find(x);
                if (it != c.coeffs.end()) {
                    (it->second > 0 ? pos : neg)++;
                }
            }
            const size_t cost = pos * neg;
            if (cost < best_cost) {
                best_cost = cost;
                best = x;
            }
        }
        std::vector<LinearConstraint> pos, neg, rest, with_x;
        for (const auto& c : cur) {
            auto it = c.coeffs.find(best);
            if (it == c.coeffs.end()) {
                rest.push_back(c);
            } else {
                with_x.push_back(c);
                (it->second > 0 ? pos : neg).push_back(c);
            }
        }
        stages.emplace_back(best, with_x);
        std::set<std::string> seen;
        for (const auto& c : rest) {
            seen.insert(signature(c));
        }
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                const Rational a = p.coeffs.at(best);
                const Rational b = -n.coeffs.at(best);
                LinearConstraint c;
                c.strict = p.strict || n.strict;
                c.constant = b * p.constant + a * n.constant;
                for (const auto& [k, v] : p.coeffs) {
                    c.coeffs[k] += b * v;
                }
                for (const auto& [k, v] : n.coeffs) {
                    c.coeffs[k] += a * v;
                }
                c.coeffs.erase(best);
                simplify(c);
                c = scaled_canonical(c);
                if (seen.insert(signature(c)).second) {
                    rest.push_back(c);
                }
                if (rest.size() > max_rows) {
                    res.status = FmResult::Status::TooLarge;
                    return res;
                }
            }
        }
        cur = std::move(rest);
        vars.erase(best);
    }
    for (const auto& c : cur) {
        if (!constant_ok(c)) {
            res.status = FmResult::Status::Infeasible;
            return res;
        }
    }
    // back-substitution
    std::map<std::string, Rational> w;
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        const std::string& x = it->first;
        std::optional<Rational> lo, hi;
        bool lo_strict = false, hi_strict = false;
        for (const auto& c : it->second) {
            Rational rest = c.constant;
            Rational a = 0;
            for (const auto& [k, v] : c.coeffs) {
                if (k == x) {
                    a = v;
                } else {
                    rest += v * w.at(k);
                }
            }
            const Rational bound = -rest / a;
            if (a > 0) {
                if (!hi || bound < *hi || (bound == *hi && c.strict)) {
                    hi = bound;
                    hi_strict = c.strict;
                }
            } else {
                if (!lo || bound > *lo || (bound == *lo && c.strict)) {
                    lo = bound;
                    lo_strict = c.strict;
                }
            }
        }
        Rational value = 0;
        if (lo && hi) {
            value = (*lo == *hi && !lo_strict && !hi_strict) ? *lo : (*lo + *hi) / 2;
        } else if (lo) {
            value = *lo + 1;
        } else if (hi) {
            value = *hi - 1;
        }
        w[x] = value;
    }
    res.status = FmResult::Status::Feasible;
    res.witness = std::move(w);
    return res;
}

EntailResult fm_entails(const std::vector<LinearConstraint>& hyps, const LinearConstraint& goal, std::size_t max_rows) {
    std::vector<LinearConstraint> cs = hyps;
    LinearConstraint neg;
    for (const auto& [k, v] : goal.coeffs) {
        neg.coeffs[k] = -v;
    }
    neg.constant = -goal.constant;
    neg.strict = !goal.strict;
    cs.push_back(neg);
    const FmResult r = fourier_motzkin(cs, max_rows);
    EntailResult out;
    switch (r.status) {
    case FmResult::Status::Infeasible: out.status = Entailment::Valid; break;
    case FmResult::Status::Feasible:
        out.status = Entailment::Invalid;
        out.witness = r.witness;
        break;
    case FmResult::Status::TooLarge: out.status = Entailment::TooLarge; break;
    }
    return out;
}

}  // namespace hwl
