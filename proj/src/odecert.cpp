// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/odecert.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "hwl/normal_form.hpp"

namespace hwl {

namespace {

Valuation merged(const Store& s, const Valuation& constants) {
    Valuation v = constants;
    for (const auto& [k, x] : s) {
        v[k] = x;
    }
    return v;
}

double sup_distance(const Store& a, const Store& b, const std::vector<std::string>& vars) {
    double d = 0;
    for (const auto& x : vars) {
        d = std::max(d, std::fabs(a.at(x) - b.at(x)));
    }
    return d;
}

double sup_norm(const Store& a, const std::vector<std::string>& vars) {
    double d = 0;
    for (const auto& x : vars) {
        d = std::max(d, std::fabs(a.at(x)));
    }
    return d;
}

std::string describe(const Valuation& v) {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& [k, x] : v) {
        os << (first ? "" : ", ") << k << "=" << x;
        first = false;
    }
    return os.str();
}

}  // namespace

Trajectory rk4_integrate(const VectorField& field, const Store& s0, double h, int n, const Valuation& constants) {
    if (!(h > 0)) {
        throw Error("rk4 step must be positive");
    }
    const auto vars = field.variables();
    Trajectory out;
    out.points.emplace_back(0.0, s0);
    Store s = s0;
    auto deriv = [&](const Store& st) {
        const Valuation v = merged(st, constants);
        std::vector<double> d(vars.size());
        for (size_t i = 0; i < vars.size(); ++i) {
            d[i] = eval(field.components.at(vars[i]), v);
        }
        return d;
    };
    auto shifted = [&](const std::vector<double>& k, double c) {
        Store st = s;
        for (size_t i = 0; i < vars.size(); ++i) {
            st[vars[i]] += c * k[i];
        }
        return st;
    };
    for (int step = 1; step <= n; ++step) {
        try {
            const auto k1 = deriv(s);
            const auto k2 = deriv(shifted(k1, h / 2));
            const auto k3 = deriv(shifted(k2, h / 2));
            const auto k4 = deriv(shifted(k3, h));
            bool finite = true;
            for (size_t i = 0; i < vars.size(); ++i) {
                s[vars[i]] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
                finite = finite && std::isfinite(s[vars[i]]);
            }
            if (!finite) {
                out.divergent = true;
                break;
            }
        } catch (const EvalError&) {
            out.divergent = true;
            break;
        }
        out.points.emplace_back(step * h, s);
    }
    return out;
}

const char* to_string(LipschitzMethod m) { return m == LipschitzMethod::ExactAffine ? "exact-affine" : "sampled"; }

namespace {

/// Coefficient matrix of an affine field; nullopt when some component is not affine in the field variables.
std::optional<std::vector<std::vector<double>>> affine_matrix(const VectorField& field, const Valuation& constants) {
    const auto vars = field.variables();
    const std::set<std::string> var_set(vars.begin(), vars.end());
    std::vector<std::vector<double>> a;
    for (const auto& x : vars) {
        const Polynomial p = normalize(field.components.at(x));
        for (const auto& [key, atom] : p.atoms()) {
            if (atom.kind == AtomKind::Var && var_set.count(key)) {
                continue;
            }
            for (const auto& n : free_names(atom.expr)) {
                if (var_set.count(n)) {
                    return std::nullopt;  // nonlinear occurrence inside an opaque atom
                }
            }
        }
        std::vector<double> row;
        for (const auto& y : vars) {
            if (p.degree_in(y) == 0) {
                row.push_back(0);
                continue;
            }
            auto lin = p.linear_in(y);
            if (!lin) {
                return std::nullopt;
            }
            for (const auto& z : vars) {
                if (lin->first.degree_in(z) != 0) {
                    return std::nullopt;
                }
            }
            try {
                row.push_back(lin->first.eval(constants));
            } catch (const EvalError&) {
                return std::nullopt;
            }
        }
        a.push_back(std::move(row));
    }
    return a;
}

}  // namespace

LipschitzEstimate lipschitz_estimate(const VectorField& field, const Region& region, int samples, std::uint64_t seed,
                                     const Valuation& constants) {
    const auto vars = field.variables();
    for (const auto& x : vars) {
        auto it = region.find(x);
        if (it != region.end() && !(it->second.second > it->second.first)) {
            throw Error("degenerate region for " + x);
        }
    }
    if (auto a = affine_matrix(field, constants)) {
        double ell = 0;
        for (const auto& row : *a) {
            double sum = 0;
            for (double c : row) {
                sum += std::fabs(c);
            }
            ell = std::max(ell, sum);
        }
        return {ell, LipschitzMethod::ExactAffine};
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
        Store s;
        for (const auto& x : vars) {
            auto it = region.find(x);
            const auto [lo, hi] = it != region.end() ? it->second : std::make_pair(-1.0, 1.0);
            s[x] = lo + (hi - lo) * unit(rng);
        }
        return s;
    };
    double ell = 0;
    for (int i = 0; i < std::max(samples, 2); ++i) {
        const Store s1 = draw(), s2 = draw();
        const double d = sup_distance(s1, s2, vars);
        if (d < 1e-12) {
            continue;
        }
        try {
            const Store f1 = field.apply(s1, constants), f2 = field.apply(s2, constants);
            const double r = sup_distance(f1, f2, vars) / d;
            if (std::isfinite(r)) {
                ell = std::max(ell, r);
            }
        } catch (const EvalError&) {
        }
    }
    return {ell, LipschitzMethod::Sampled};
}

// ---------------------------------------------------------------------------
// Flow certification

namespace {

struct NumericContext {
    std::vector<std::string> vars;
    std::vector<std::string> consts;  // other names the field or flow mentions
    const CertifyOptions& opts;
    std::mt19937_64 rng;

    Valuation draw_constants() {
        Valuation c;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (const auto& k : consts) {
            auto it = opts.ranges.find(k);
            const auto [lo, hi] = it != opts.ranges.end() ? it->second : std::make_pair(-opts.sample_box, opts.sample_box);
            c[k] = lo + (hi - lo) * unit(rng);
        }
        return c;
    }

    Store draw_store() {
        std::uniform_real_distribution<double> box(-opts.sample_box, opts.sample_box);
        Store s;
        for (const auto& x : vars) {
            s[x] = box(rng);
        }
        return s;
    }
};

double time_span(const TimeInterval& u) {
    if (u.kind == TimeInterval::Kind::Closed) {
        return std::min(1.0, u.hi.convert_to<double>());
    }
    return 1.0;
}

bool contains(const TimeInterval& outer, const TimeInterval& inner) {
    using K = TimeInterval::Kind;
    switch (outer.kind) {
    case K::AllReals: return true;
    case K::NonNegative: return inner.kind == K::NonNegative || (inner.kind == K::Closed && inner.lo >= 0);
    case K::Closed: return inner.kind == K::Closed && inner.lo >= outer.lo && inner.hi <= outer.hi;
    }
    return false;
}

}  // namespace

FlowCertificate certify_flow(const VectorField& field, const Flow& flow, const TimeDomain& dom,
                             const CertifyOptions& opts) {
    FlowCertificate cert;
    cert.field = field;
    cert.flow = flow;
    cert.domain = dom;
    field.validate();
    const auto vars = field.variables();

    std::vector<std::string> flow_vars;
    for (const auto& [x, e] : flow.components) {
        flow_vars.push_back(x);
    }
    if (flow_vars != vars) {
        cert.derivative = {false, "flow and field are over different variables", std::nullopt};
        cert.initial = {false, "not checked", std::nullopt};
        cert.domain_check = {false, "not checked", std::nullopt};
        return cert;
    }

    Binding at_flow, at_zero{{kTimeName, Expr::constant(0)}};
    for (const auto& x : vars) {
        at_flow[x] = flow.components.at(x);
    }

    // symbolic derivative identity
    cert.derivative.passed = true;
    std::vector<std::string> notes;
    SamplingOptions so;
    so.lo = -opts.sample_box;
    so.hi = opts.sample_box;
    so.seed = opts.seed;
    for (const auto& x : vars) {
        const Expr lhs = diff(flow.components.at(x), kTimeName);
        const Expr rhs = substitute(field.components.at(x), at_flow);
        const EqualityResult r = expr_eq(lhs, rhs, so);
        if (r.verdict == Equality::Equal) {
            notes.push_back(x + ": identity");
            continue;
        }
        if (r.verdict == Equality::Unknown && opts.accept_likely_equal && r.note == "likely-equal") {
            cert.warnings.push_back("derivative of " + x + " only agrees numerically");
            notes.push_back(x + ": likely-equal");
            continue;
        }
        cert.derivative.passed = false;
        cert.derivative.witness = r.witness;
        notes.push_back(x + ": d/dt " + to_string(flow.components.at(x)) + " = " + to_string(lhs) + " differs from " +
                        to_string(rhs) + (r.witness ? " at " + describe(*r.witness) : ""));
        break;
    }
    for (const auto& n : notes) {
        cert.derivative.detail += (cert.derivative.detail.empty() ? "" : "; ") + n;
    }

    // phi 0 = id
    cert.initial.passed = true;
    for (const auto& x : vars) {
        const Expr at0 = substitute(flow.components.at(x), at_zero);
        if (!(normalize(at0) - normalize(Expr::var(x))).is_zero()) {
            cert.initial.passed = false;
            cert.initial.detail = "flow at time 0 maps " + x + " to " + to_string(at0);
            const EqualityResult r = expr_eq(at0, Expr::var(x), so);
            cert.initial.witness = r.witness;
            break;
        }
    }
    if (cert.initial.passed) {
        cert.initial.detail = "identity at time 0";
    }

    // query domain inside the interval of existence
    cert.domain_check.passed = !dom.query || contains(dom.domain, *dom.query);
    cert.domain_check.detail = cert.domain_check.passed ? "query within " + dom.domain.to_string()
                                                        : "query " + dom.query->to_string() + " leaves " +
                                                              dom.domain.to_string();
    if (dom.domain.kind != TimeInterval::Kind::AllReals) {
        cert.warnings.push_back("interval of existence " + dom.domain.to_string() + " is not open");
    }

    std::set<std::string> others;
    for (const auto& x : vars) {
        for (const auto& n : free_names(field.components.at(x))) {
            others.insert(n);
        }
        for (const auto& n : free_names(flow.components.at(x))) {
            others.insert(n);
        }
    }
    others.erase(kTimeName);
    for (const auto& x : vars) {
        others.erase(x);
    }
    NumericContext ctx{vars, {others.begin(), others.end()}, opts, std::mt19937_64(opts.seed)};

    // monoid action
    {
        const TimeInterval& u = dom.effective();
        const double span = time_span(u);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const bool two_sided = u.has_negative_times() && u.kind == TimeInterval::Kind::AllReals;
        double worst = 0;
        cert.monoid.passed = true;
        for (int i = 0; i < opts.monoid_trials; ++i) {
            const Valuation c = ctx.draw_constants();
            const Store s = ctx.draw_store();
            double t1 = unit(ctx.rng) * span / 2, t2 = unit(ctx.rng) * span / 2;
            if (two_sided) {
                t1 = 2 * t1 - span / 2;
                t2 = 2 * t2 - span / 2;
            }
            try {
                const Store a = flow.at(t1 + t2, s, c);
                const Store b = flow.at(t1, flow.at(t2, s, c), c);
                const double d = sup_distance(a, b, vars) / (1 + std::max(sup_norm(a, vars), sup_norm(b, vars)));
                worst = std::max(worst, d);
                if (d > opts.monoid_tol) {
                    Valuation w = merged(s, c);
                    w["t1"] = t1;
                    w["t2"] = t2;
                    cert.monoid.passed = false;
                    cert.monoid.witness = w;
                    break;
                }
            } catch (const EvalError&) {
            }
        }
        std::ostringstream os;
        os << "max residual " << worst << " over " << opts.monoid_trials << " samples";
        cert.monoid.detail = os.str();
    }

    // agreement with RK4
    {
        const double span = time_span(dom.effective());
        const int n = static_cast<int>(std::lround(span / opts.rk4_step));
        double worst = 0;
        cert.uniqueness.passed = true;
        for (int i = 0; i < opts.rk4_trials && n > 0; ++i) {
            const Valuation c = ctx.draw_constants();
            const Store s = ctx.draw_store();
            const Trajectory tr = rk4_integrate(field, s, opts.rk4_step, n, c);
            if (tr.divergent) {
                continue;
            }
            for (const auto& [t, st] : tr.points) {
                try {
                    const Store f = flow.at(t, s, c);
                    const double d = sup_distance(f, st, vars) / (1 + sup_norm(f, vars));
                    worst = std::max(worst, d);
                    if (d > opts.rk4_tol) {
                        Valuation w = merged(s, c);
                        w[kTimeName] = t;
                        cert.uniqueness.passed = false;
                        cert.uniqueness.witness = w;
                        break;
                    }
                } catch (const EvalError&) {
                }
            }
            if (!cert.uniqueness.passed) {
                break;
            }
        }
        std::ostringstream os;
        os << "max deviation " << worst << " from RK4 at h=" << opts.rk4_step;
        cert.uniqueness.detail = os.str();
    }

    try {
        Region region;
        for (const auto& x : vars) {
            region[x] = {-opts.sample_box, opts.sample_box};
        }
        cert.lipschitz = lipschitz_estimate(field, region, 2000, opts.seed, ctx.draw_constants());
        if (cert.lipschitz->method == LipschitzMethod::Sampled) {
            cert.warnings.push_back("Lipschitz constant is a sampled lower bound");
        }
    } catch (const Error& e) {
        cert.warnings.push_back(std::string("no Lipschitz estimate: ") + e.what());
    }

    cert.certified = cert.derivative.passed && cert.initial.passed && cert.domain_check.passed &&
                     cert.monoid.passed && cert.uniqueness.passed;
    return cert;
}

// ---------------------------------------------------------------------------
// Differential invariants

namespace {

class InvariantChecker {
  public:
    InvariantChecker(const VectorField& field, const TimeDomain& dom, const std::vector<Pred>& hyps,
                     const LemmaDB& db, const DischargeOptions& opts)
        : field_(field), dom_(dom), hyps_(hyps), db_(db), opts_(opts) {}

    Verdict walk(const Pred& p, std::vector<AtomRuling>& out) {
        switch (p.kind()) {
        case PredKind::True:
        case PredKind::False: {
            // both the empty and the full state set are invariant
            Verdict v = Verdict::proved("const");
            out.push_back({p, "const", {}, v});
            return v;
        }
        case PredKind::And:
        case PredKind::Or: {
            const Verdict a = walk(p.left(), out);
            const Verdict b = walk(p.right(), out);
            Verdict v = a.is_proved() && b.is_proved() ? Verdict::proved(join(a.method, b.method))
                                                       : Verdict::unknown("a component is not shown invariant");
            out.push_back({p, p.kind() == PredKind::And ? "conj" : "disj", {}, v});
            return v;
        }
        case PredKind::Cmp: return atom(p, out);
        default: {
            Verdict v = Verdict::unknown("unsupported invariant shape: " + to_string(p));
            out.push_back({p, "unsupported", {}, v});
            return v;
        }
        }
    }

  private:
    static std::string join(const std::string& a, const std::string& b) {
        std::set<std::string> tags;
        for (const auto* s : {&a, &b}) {
            std::stringstream ss(*s);
            std::string tok;
            while (std::getline(ss, tok, '+')) {
                if (!tok.empty() && tok != "const") {
                    tags.insert(tok);
                }
            }
        }
        std::string out;
        for (const auto& t : tags) {
            out += (out.empty() ? "" : "+") + t;
        }
        return out.empty() ? "const" : out;
    }

    Verdict atom(const Pred& p, std::vector<AtomRuling>& out) {
        AtomRuling r;
        r.atom = p;
        if (mentions_time(p)) {
            r.rule = "unsupported";
            r.verdict = Verdict::unknown("atom mentions time");
            out.push_back(r);
            return r.verdict;
        }
        Expr d;  // the atom reads d op 0 with op in {=, !=, <, <=}
        CmpOp op = p.op();
        switch (p.op()) {
        case CmpOp::Gt:
        case CmpOp::Ge:
            d = Expr::sub(p.rhs(), p.lhs());
            op = p.op() == CmpOp::Gt ? CmpOp::Lt : CmpOp::Le;
            break;
        default: d = Expr::sub(p.lhs(), p.rhs()); break;
        }
        try {
            if (normalize(d).has_opaque()) {
                r.rule = "unsupported";
                r.verdict = Verdict::unknown("atom compares opaque quotients");
                out.push_back(r);
                return r.verdict;
            }
            const Expr ld = lie_derivative(d, field_.components);
            const Expr zero = Expr::constant(0);
            switch (op) {
            case CmpOp::Eq:
                r.rule = "eq-rule";
                r.conditions.push_back(Pred::cmp(CmpOp::Eq, ld, zero));
                break;
            case CmpOp::Ne:
                r.rule = "neq-rule";
                r.conditions.push_back(Pred::cmp(CmpOp::Le, ld, zero));
                r.conditions.push_back(Pred::cmp(CmpOp::Ge, ld, zero));
                break;
            default:
                r.rule = "lt-rule";
                r.conditions.push_back(Pred::cmp(CmpOp::Le, ld, zero));
                if (dom_.effective().has_negative_times()) {
                    r.conditions.push_back(Pred::cmp(CmpOp::Ge, ld, zero));
                }
                break;
            }
        } catch (const Error& e) {
            r.rule = "unsupported";
            r.verdict = Verdict::unknown(e.what());
            out.push_back(r);
            return r.verdict;
        }
        std::string methods;
        for (const auto& c : r.conditions) {
            const Verdict v = condition(c);
            if (!v.is_proved()) {
                r.verdict = Verdict::unknown("Lie condition " + to_string(c) + " not established" +
                                             (v.is_refuted() ? " (fails at " + describe(v.witness) + ")" : ""));
                out.push_back(r);
                return r.verdict;
            }
            methods = methods.empty() ? v.method : join(methods, v.method);
        }
        r.verdict = Verdict::proved(methods);
        out.push_back(r);
        return r.verdict;
    }

    Verdict condition(const Pred& c) {
        const Polynomial p = normalize(c.lhs()) - normalize(c.rhs());
        if (p.is_constant()) {
            const Rational k = p.constant_term();
            const bool ok = c.op() == CmpOp::Eq ? k == 0 : c.op() == CmpOp::Le ? k <= 0 : k >= 0;
            if (ok) {
                return Verdict::proved("lie-normalize");
            }
        }
        return prove(hyps_, c, db_, opts_);
    }

    const VectorField& field_;
    const TimeDomain& dom_;
    const std::vector<Pred>& hyps_;
    const LemmaDB& db_;
    const DischargeOptions& opts_;
};

/// Integrates forward from states satisfying hyps and I; a robust violation of I refutes invariance.
std::optional<Valuation> numeric_counterexample(const Pred& inv, const VectorField& field,
                                                const std::vector<Pred>& hyps, const DischargeOptions& opts) {
    std::vector<Pred> all = hyps;
    all.push_back(inv);
    std::set<std::string> names = free_names(inv);
    for (const auto& h : hyps) {
        auto n = free_names(h);
        names.insert(n.begin(), n.end());
    }
    for (const auto& x : field.variables()) {
        names.insert(x);
        for (const auto& n : free_names(field.components.at(x))) {
            names.insert(n);
        }
    }
    names.erase(kTimeName);
    const auto vars = field.variables();
    std::mt19937_64 rng(opts.seed ^ 0xd1ffULL);
    PredEvalOptions robust;
    robust.eq_tol = 1e-6;
    const Pred target = nnf(inv);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = sample_satisfying(all, names, opts.ranges, rng, 20, 1e-9);
        if (!v) {
            continue;
        }
        Store s;
        Valuation consts = *v;
        for (const auto& x : vars) {
            s[x] = v->at(x);
            consts.erase(x);
        }
        const Trajectory tr = rk4_integrate(field, s, 1e-2, 100, consts);
        for (const auto& [t, st] : tr.points) {
            const Valuation at = merged(st, consts);
            try {
                bool inside = true;
                for (const auto& h : hyps) {
                    inside = inside && eval(nnf(h), at, robust);
                }
                if (!inside) {
                    break;  // left the evolution domain
                }
                if (!eval(target, at, robust)) {
                    return v;
                }
            } catch (const EvalError&) {
                break;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

DiffInvariantReport check_diff_invariant(const Pred& inv, const VectorField& field, const TimeDomain& dom,
                                         const std::vector<Pred>& hyps, const LemmaDB* db,
                                         const DischargeOptions& opts) {
    static const LemmaDB empty;
    DiffInvariantReport rep;
    rep.invariant = nnf(inv);
    InvariantChecker checker(field, dom, hyps, db ? *db : empty, opts);
    const Verdict v = checker.walk(rep.invariant, rep.rulings);
    if (v.is_proved()) {
        rep.overall = v;
        return rep;
    }
    if (auto w = numeric_counterexample(inv, field, hyps, opts)) {
        rep.overall = Verdict::refuted(*w, "invariant fails along the numeric trajectory from this state");
        return rep;
    }
    rep.overall = v;
    return rep;
}

// ---------------------------------------------------------------------------
// Falsification

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::optional<Counterexample> run_trial(const VerifySpec& spec, const FalsifyBudget& budget, int trial,
                                        const std::vector<Pred>& hyps, const std::set<std::string>& names,
                                        const Ranges& ranges, const Pred& post) {
    const std::uint64_t seed = splitmix(budget.seed ^ splitmix(static_cast<std::uint64_t>(trial)));
    std::mt19937_64 rng(seed);
    auto v = sample_satisfying(hyps, names, ranges, rng, 50, 1e-9);
    if (!v) {
        return std::nullopt;
    }
    const auto consts = spec.const_names();
    Store s;
    Valuation c;
    for (const auto& [k, x] : *v) {
        (consts.count(k) ? c : s)[k] = x;
    }
    for (const auto& x : spec.vars) {
        s.emplace(x, 0.0);
    }
    RunConfig cfg;
    cfg.fuel = budget.fuel;
    cfg.step = budget.step;
    cfg.horizon = budget.horizon;
    cfg.seed = seed;
    cfg.max_states = budget.max_states;
    cfg.constants = c;
    RunResult r;
    try {
        r = run_sampled(spec.program, s, cfg);
    } catch (const EvalError&) {
        return std::nullopt;
    }
    PredEvalOptions robust;
    robust.eq_tol = budget.eq_tol;
    for (const auto& end : r.stores) {
        try {
            if (!eval(post, merged(end, c), robust)) {
                Counterexample cx;
                cx.trial = trial;
                cx.constants = c;
                cx.initial = s;
                cx.violating = end;
                cx.trace = {s, end};
                cx.incomplete = r.incomplete;
                return cx;
            }
        } catch (const EvalError&) {
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Counterexample> falsify(const VerifySpec& spec, const FalsifyBudget& budget) {
    std::vector<Pred> hyps = spec.assumptions;
    hyps.push_back(spec.pre);
    std::set<std::string> names = spec.var_names();
    Ranges ranges;
    for (const auto& c : spec.consts) {
        names.insert(c.name);
        if (c.range) {
            ranges[c.name] = *c.range;
        }
    }
    const Pred post = nnf(spec.post);

    unsigned threads = budget.threads ? budget.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max(1, budget.trials));
    std::atomic<int> next{0};
    std::atomic<int> best{budget.trials};
    std::mutex mu;
    std::optional<Counterexample> found;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= budget.trials || i >= best.load()) {
                return;
            }
            auto cx = run_trial(spec, budget, i, hyps, names, ranges, post);
            if (!cx) {
                continue;
            }
            std::lock_guard<std::mutex> lock(mu);
            if (!found || cx->trial < found->trial) {
                found = std::move(cx);
                best.store(found->trial);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    return found;
}

}  // namespace hwl
