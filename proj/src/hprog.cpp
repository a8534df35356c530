// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/hprog.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "hwl/odecert.hpp"

namespace hwl {

TimeInterval TimeInterval::closed(Rational lo, Rational hi) {
    if (lo > 0 || hi < 0) {
        throw Error("time interval [" + lo.str() + ", " + hi.str() + "] must contain 0");
    }
    return {Kind::Closed, std::move(lo), std::move(hi)};
}

bool TimeInterval::contains(double t) const {
    switch (kind) {
    case Kind::AllReals: return true;
    case Kind::NonNegative: return t >= 0;
    case Kind::Closed: return t >= lo.convert_to<double>() && t <= hi.convert_to<double>();
    }
    return false;
}

bool TimeInterval::has_negative_times() const {
    return kind == Kind::AllReals || (kind == Kind::Closed && lo < 0);
}

std::optional<Expr> TimeInterval::lower() const {
    switch (kind) {
    case Kind::AllReals: return std::nullopt;
    case Kind::NonNegative: return Expr::constant(0);
    case Kind::Closed: return Expr::constant(lo);
    }
    return std::nullopt;
}

std::optional<Expr> TimeInterval::upper() const {
    if (kind == Kind::Closed) {
        return Expr::constant(hi);
    }
    return std::nullopt;
}

std::string TimeInterval::to_string() const {
    switch (kind) {
    case Kind::AllReals: return "R";
    case Kind::NonNegative: return "[0, inf)";
    case Kind::Closed: return "[" + hwl::to_string(Expr::constant(lo)) + ", " + hwl::to_string(Expr::constant(hi)) + "]";
    }
    return "?";
}

std::string to_string(const TimeDomain& d) {
    std::string s = d.domain.to_string();
    if (d.query) {
        s += " query " + d.query->to_string();
    }
    return s;
}

std::vector<std::string> VectorField::variables() const {
    std::vector<std::string> out;
    for (const auto& [x, fx] : components) {
        out.push_back(x);
    }
    return out;
}

void VectorField::validate() const {
    for (const auto& [x, fx] : components) {
        if (mentions_time(fx)) {
            throw Error("vector field component for '" + x + "' mentions time: " + to_string(fx));
        }
    }
}

namespace {

Valuation merged(const Store& s, const Valuation& constants) {
    Valuation v = constants;
    for (const auto& [k, x] : s) {
        v[k] = x;
    }
    return v;
}

}  // namespace

Store VectorField::apply(const Store& s, const Valuation& constants) const {
    const Valuation v = merged(s, constants);
    Store out = s;
    for (const auto& [x, fx] : components) {
        out[x] = eval(fx, v);
    }
    return out;
}

Store Flow::at(double t, const Store& s, const Valuation& constants) const {
    Valuation v = merged(s, constants);
    v[kTimeName] = t;
    Store out = s;
    for (const auto& [x, phi] : components) {
        out[x] = eval(phi, v);
    }
    return out;
}

// ---------------------------------------------------------------------------

struct Program::Node {
    ProgramKind kind = ProgramKind::Skip;
    std::string var;
    Expr expr;
    Pred pred;
    std::vector<Program> children;
    std::optional<EvolveCommand> evolve;
    std::optional<EvolFlowCommand> evol;
};

Program::Program() {
    static const auto skip_node = std::make_shared<const Node>();
    node_ = skip_node;
}

Program Program::skip() { return Program(); }

Program Program::abort() {
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::Abort;
    return Program(std::move(n));
}

Program Program::assign(std::string var, Expr e) {
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::Assign;
    n->var = std::move(var);
    n->expr = std::move(e);
    return Program(std::move(n));
}

Program Program::test(Pred p) {
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::Test;
    n->pred = std::move(p);
    return Program(std::move(n));
}

Program Program::seq(std::vector<Program> items) {
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::Seq;
    n->children = std::move(items);
    return Program(std::move(n));
}

Program Program::choice(std::vector<Program> items) {
    if (items.empty()) {
        throw Error("choice needs at least one branch");
    }
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::Choice;
    n->children = std::move(items);
    return Program(std::move(n));
}

Program Program::ite(Pred cond, Program then_branch, Program else_branch) {
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::IfThenElse;
    n->pred = std::move(cond);
    n->children = {std::move(then_branch), std::move(else_branch)};
    return Program(std::move(n));
}

Program Program::loop(Program body, Pred inv) {
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::Loop;
    n->pred = std::move(inv);
    n->children = {std::move(body)};
    return Program(std::move(n));
}

Program Program::evolve(EvolveCommand cmd) {
    if (cmd.flow && cmd.dinv) {
        throw Error("an evolution command carries at most one of a flow certificate and a differential invariant");
    }
    if (cmd.field.components.empty()) {
        throw Error("evolution command without ODEs");
    }
    cmd.field.validate();
    if (cmd.flow) {
        for (const auto& [x, fx] : cmd.field.components) {
            if (!cmd.flow->components.count(x)) {
                throw Error("flow certificate has no component for '" + x + "'");
            }
        }
        if (cmd.flow->components.size() != cmd.field.components.size()) {
            throw Error("flow certificate and vector field have different variables");
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::Evolve;
    n->evolve = std::move(cmd);
    return Program(std::move(n));
}

Program Program::evol(EvolFlowCommand cmd) {
    if (cmd.flow.components.empty()) {
        throw Error("flow evolution without components");
    }
    auto n = std::make_shared<Node>();
    n->kind = ProgramKind::EvolFlow;
    n->evol = std::move(cmd);
    return Program(std::move(n));
}

ProgramKind Program::kind() const { return node_->kind; }
const std::string& Program::var() const { return node_->var; }
const Expr& Program::expr() const { return node_->expr; }
const Pred& Program::pred() const { return node_->pred; }
const std::vector<Program>& Program::children() const { return node_->children; }

const EvolveCommand& Program::evolve_cmd() const {
    if (!node_->evolve) {
        throw Error("not an evolution command");
    }
    return *node_->evolve;
}

const EvolFlowCommand& Program::evol_cmd() const {
    if (!node_->evol) {
        throw Error("not a flow evolution command");
    }
    return *node_->evol;
}

bool Program::is_discrete() const {
    if (kind() == ProgramKind::Evolve || kind() == ProgramKind::EvolFlow) {
        return false;
    }
    return std::all_of(children().begin(), children().end(), [](const Program& c) { return c.is_discrete(); });
}

bool operator==(const Program& a, const Program& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case ProgramKind::Skip:
    case ProgramKind::Abort: return true;
    case ProgramKind::Assign: return a.var() == b.var() && a.expr() == b.expr();
    case ProgramKind::Test: return a.pred() == b.pred();
    case ProgramKind::Seq:
    case ProgramKind::Choice: return a.children() == b.children();
    case ProgramKind::IfThenElse:
    case ProgramKind::Loop: return a.pred() == b.pred() && a.children() == b.children();
    case ProgramKind::Evolve: {
        const auto& x = a.evolve_cmd();
        const auto& y = b.evolve_cmd();
        return x.field == y.field && x.guard == y.guard && x.dom == y.dom && x.flow == y.flow && x.dinv == y.dinv;
    }
    case ProgramKind::EvolFlow: {
        const auto& x = a.evol_cmd();
        const auto& y = b.evol_cmd();
        return x.flow == y.flow && x.guard == y.guard && x.dom == y.dom;
    }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_simple_pred(const Pred& p) {
    return p.kind() == PredKind::Cmp || p.kind() == PredKind::True || p.kind() == PredKind::False;
}

void print(std::ostream& os, const Program& p, int ctx);

// ctx: 0 = choice level, 1 = sequence item, 2 = primary position
void print_child(std::ostream& os, const Program& p, int ctx) {
    const bool needs_parens = (p.kind() == ProgramKind::Choice && ctx >= 1) ||
                              (p.kind() == ProgramKind::Seq && ctx >= 1) ||
                              ((p.kind() == ProgramKind::IfThenElse || p.kind() == ProgramKind::Loop) && ctx >= 2);
    if (needs_parens) {
        os << '(';
        print(os, p, 0);
        os << ')';
    } else {
        print(os, p, ctx);
    }
}

void print_assignments(std::ostream& os, const FieldMap& m, bool primed) {
    bool first = true;
    for (const auto& [x, e] : m) {
        if (!first) {
            os << ", ";
        }
        first = false;
        os << x << (primed ? "' = " : " := ") << to_string(e);
    }
}

void print(std::ostream& os, const Program& p, int ctx) {
    switch (p.kind()) {
    case ProgramKind::Skip: os << "skip"; break;
    case ProgramKind::Abort: os << "abort"; break;
    case ProgramKind::Assign: os << p.var() << " := " << to_string(p.expr()); break;
    case ProgramKind::Test:
        if (is_simple_pred(p.pred())) {
            os << "?" << to_string(p.pred());
        } else {
            os << "?(" << to_string(p.pred()) << ")";
        }
        break;
    case ProgramKind::Seq:
        if (p.children().empty()) {
            os << "()";
            break;
        }
        for (size_t i = 0; i < p.children().size(); ++i) {
            if (i) {
                os << "; ";
            }
            print_child(os, p.children()[i], 1);
        }
        break;
    case ProgramKind::Choice:
        for (size_t i = 0; i < p.children().size(); ++i) {
            if (i) {
                os << " ++ ";
            }
            print_child(os, p.children()[i], 1);
        }
        break;
    case ProgramKind::IfThenElse:
        os << "if " << to_string(p.pred()) << " then ";
        print_child(os, p.children()[0], 2);
        os << " else ";
        print_child(os, p.children()[1], 2);
        break;
    case ProgramKind::Loop:
        os << "loop ";
        print_child(os, p.children()[0], 0);
        os << " inv " << to_string(p.pred());
        break;
    case ProgramKind::Evolve: {
        const auto& e = p.evolve_cmd();
        os << "evolve ";
        print_assignments(os, e.field.components, true);
        os << " & " << to_string(e.guard) << " on " << to_string(e.dom);
        if (e.flow) {
            os << " flow ";
            print_assignments(os, e.flow->components, false);
        }
        if (e.dinv) {
            os << " dinv " << to_string(*e.dinv);
        }
        break;
    }
    case ProgramKind::EvolFlow: {
        const auto& e = p.evol_cmd();
        os << "evol ";
        print_assignments(os, e.flow.components, false);
        os << " & " << to_string(e.guard) << " on " << to_string(e.dom);
        break;
    }
    }
    (void)ctx;
}

}  // namespace

std::string to_string(const Program& p) {
    std::ostringstream os;
    print(os, p, 0);
    return os.str();
}

namespace {

bool is_atomic(const Program& p) {
    switch (p.kind()) {
    case ProgramKind::Skip:
    case ProgramKind::Abort:
    case ProgramKind::Assign:
    case ProgramKind::Test: return true;
    default: return false;
    }
}

void layout(std::ostream& os, const Program& p, int ctx, int indent);

void layout_child(std::ostream& os, const Program& p, int ctx, int indent) {
    const bool needs_parens = (p.kind() == ProgramKind::Choice && ctx >= 1) ||
                              (p.kind() == ProgramKind::Seq && ctx >= 1) ||
                              ((p.kind() == ProgramKind::IfThenElse || p.kind() == ProgramKind::Loop) && ctx >= 2);
    if (!needs_parens) {
        layout(os, p, ctx, indent);
        return;
    }
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    os << "(\n" << pad << "  ";
    layout(os, p, 0, indent + 2);
    os << "\n" << pad << ")";
}

void layout(std::ostream& os, const Program& p, int ctx, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    switch (p.kind()) {
    case ProgramKind::Seq:
        for (size_t i = 0; i < p.children().size(); ++i) {
            if (i) {
                os << ";\n" << pad;
            }
            layout_child(os, p.children()[i], 1, indent);
        }
        break;
    case ProgramKind::Choice:
        for (size_t i = 0; i < p.children().size(); ++i) {
            if (i) {
                os << "\n" << pad << "++ ";
            }
            layout_child(os, p.children()[i], 1, indent + 3);
        }
        break;
    case ProgramKind::IfThenElse:
        if (is_atomic(p.children()[0]) && is_atomic(p.children()[1])) {
            print(os, p, ctx);
            break;
        }
        os << "if " << to_string(p.pred()) << " then ";
        layout_child(os, p.children()[0], 2, indent);
        os << " else ";
        layout_child(os, p.children()[1], 2, indent);
        break;
    case ProgramKind::Loop:
        os << "loop\n" << pad << "  ";
        layout_child(os, p.children()[0], 0, indent + 2);
        os << "\n" << pad << "inv " << to_string(p.pred());
        break;
    case ProgramKind::Evolve: {
        const auto& e = p.evolve_cmd();
        os << "evolve ";
        print_assignments(os, e.field.components, true);
        os << " & " << to_string(e.guard) << " on " << to_string(e.dom);
        if (e.flow) {
            os << "\n" << pad << "  flow ";
            print_assignments(os, e.flow->components, false);
        }
        if (e.dinv) {
            os << "\n" << pad << "  dinv " << to_string(*e.dinv);
        }
        break;
    }
    default: print(os, p, ctx);
    }
}

}  // namespace

std::string format_program(const Program& p, int indent) {
    std::ostringstream os;
    os << std::string(static_cast<std::size_t>(indent), ' ');
    layout(os, p, 0, indent);
    return os.str();
}

// ---------------------------------------------------------------------------
// Sampling semantics

Store store_update(const Store& s, const std::string& v, const Expr& e, const Valuation& constants) {
    auto it = s.find(v);
    if (it == s.end()) {
        throw Error("assignment to unknown variable '" + v + "'");
    }
    Store out = s;
    out[v] = eval(e, merged(s, constants));
    return out;
}

std::vector<std::pair<double, Store>> guarded_orbit_flow(const Flow& flow, const Pred& guard, const TimeInterval& u,
                                                         const Store& s, double h, double horizon,
                                                         const Valuation& constants) {
    if (!(h > 0)) {
        throw Error("orbit sampling step must be positive");
    }
    double bound = horizon;
    if (u.kind == TimeInterval::Kind::Closed) {
        bound = std::min(bound, u.hi.convert_to<double>());
    }
    std::vector<std::pair<double, Store>> out;
    const auto n = static_cast<long>(std::floor(bound / h + 1e-9));
    for (long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * h;
        Store st;
        try {
            st = flow.at(t, s, constants);
            if (!eval(guard, merged(st, constants))) {
                break;
            }
        } catch (const EvalError& err) {
            throw EvalError(std::string(err.what()) + " at t = " + std::to_string(t));
        }
        out.emplace_back(t, std::move(st));
    }
    return out;
}

namespace {

class Runner {
  public:
    explicit Runner(const RunConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

    std::vector<Store> run(const Program& p, const std::vector<Store>& in) {
        switch (p.kind()) {
        case ProgramKind::Skip: return in;
        case ProgramKind::Abort: return {};
        case ProgramKind::Assign: {
            std::vector<Store> out;
            out.reserve(in.size());
            for (const auto& s : in) {
                out.push_back(store_update(s, p.var(), p.expr(), cfg_.constants));
            }
            return out;
        }
        case ProgramKind::Test: {
            std::vector<Store> out;
            for (const auto& s : in) {
                if (eval(p.pred(), merged(s, cfg_.constants))) {
                    out.push_back(s);
                }
            }
            return out;
        }
        case ProgramKind::Seq: {
            std::vector<Store> cur = in;
            for (const auto& c : p.children()) {
                cur = cap(run(c, cur));
            }
            return cur;
        }
        case ProgramKind::Choice: {
            std::vector<Store> out;
            for (const auto& c : p.children()) {
                auto part = run(c, in);
                out.insert(out.end(), part.begin(), part.end());
            }
            return cap(dedup(std::move(out)));
        }
        case ProgramKind::IfThenElse: {
            std::vector<Store> yes, no;
            for (const auto& s : in) {
                (eval(p.pred(), merged(s, cfg_.constants)) ? yes : no).push_back(s);
            }
            auto a = run(p.children()[0], yes);
            auto b = run(p.children()[1], no);
            a.insert(a.end(), b.begin(), b.end());
            return dedup(std::move(a));
        }
        case ProgramKind::Loop: {
            std::set<Store> seen(in.begin(), in.end());
            std::vector<Store> all = dedup(in);
            std::vector<Store> frontier = all;
            for (int k = 0; k < cfg_.fuel && !frontier.empty(); ++k) {
                auto next = cap(run(p.children()[0], frontier));
                frontier.clear();
                for (auto& s : next) {
                    if (seen.insert(s).second) {
                        frontier.push_back(s);
                        all.push_back(s);
                    }
                }
            }
            if (!frontier.empty()) {
                incomplete_ = true;
            }
            return cap(std::move(all));
        }
        case ProgramKind::Evolve: {
            const auto& cmd = p.evolve_cmd();
            std::vector<Store> out;
            for (const auto& s : in) {
                if (cmd.flow) {
                    for (auto& [t, st] : guarded_orbit_flow(*cmd.flow, cmd.guard, cmd.dom.effective(), s, cfg_.step,
                                                            cfg_.horizon, cfg_.constants)) {
                        out.push_back(std::move(st));
                    }
                } else {
                    integrate(cmd, s, out);
                }
            }
            return cap(dedup(std::move(out)));
        }
        case ProgramKind::EvolFlow: {
            const auto& cmd = p.evol_cmd();
            std::vector<Store> out;
            for (const auto& s : in) {
                for (auto& [t, st] :
                     guarded_orbit_flow(cmd.flow, cmd.guard, cmd.dom.effective(), s, cfg_.step, cfg_.horizon,
                                        cfg_.constants)) {
                    out.push_back(std::move(st));
                }
            }
            return cap(dedup(std::move(out)));
        }
        }
        return {};
    }

    [[nodiscard]] bool incomplete() const { return incomplete_; }

  private:
    void integrate(const EvolveCommand& cmd, const Store& s, std::vector<Store>& out) {
        double bound = cfg_.horizon;
        const auto& u = cmd.dom.effective();
        if (u.kind == TimeInterval::Kind::Closed) {
            bound = std::min(bound, u.hi.convert_to<double>());
        }
        const auto steps = static_cast<int>(std::floor(bound / cfg_.step + 1e-9));
        const Trajectory traj = rk4_integrate(cmd.field, s, cfg_.step, steps, cfg_.constants);
        for (const auto& [t, st] : traj.points) {
            if (!eval(cmd.guard, merged(st, cfg_.constants))) {
                break;
            }
            out.push_back(st);
        }
        if (traj.divergent) {
            incomplete_ = true;
        }
    }

    static std::vector<Store> dedup(std::vector<Store> v) {
        std::set<Store> seen;
        std::vector<Store> out;
        out.reserve(v.size());
        for (auto& s : v) {
            if (seen.insert(s).second) {
                out.push_back(std::move(s));
            }
        }
        return out;
    }

    std::vector<Store> cap(std::vector<Store> v) {
        if (v.size() <= cfg_.max_states) {
            return v;
        }
        incomplete_ = true;
        std::shuffle(v.begin(), v.end(), rng_);
        v.resize(cfg_.max_states);
        return v;
    }

    const RunConfig& cfg_;
    std::mt19937_64 rng_;
    bool incomplete_ = false;
};

}  // namespace

RunResult run_sampled(const Program& p, const Store& s, const RunConfig& cfg) {
    Runner r(cfg);
    RunResult res;
    res.stores = r.run(p, {s});
    res.incomplete = r.incomplete();
    return res;
}

}  // namespace hwl
