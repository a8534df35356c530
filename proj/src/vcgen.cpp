// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/vcgen.hpp"

#include <algorithm>

namespace hwl {

std::set<std::string> VerifySpec::var_names() const { return {vars.begin(), vars.end()}; }

std::set<std::string> VerifySpec::const_names() const {
    std::set<std::string> out;
    for (const auto& c : consts) {
        out.insert(c.name);
    }
    return out;
}

const char* to_string(ObligationKind k) {
    switch (k) {
    case ObligationKind::Arithmetic: return "arithmetic";
    case ObligationKind::DiffInvariant: return "diff-invariant";
    case ObligationKind::FlowCertificate: return "flow-certificate";
    case ObligationKind::Opaque: return "opaque";
    }
    return "?";
}

Pred Obligation::as_pred() const { return implies(conjunction(hyps), concl); }

namespace {

Obligation make(std::vector<Pred> hyps, Pred concl, std::string rule, std::string path,
                ObligationKind kind = ObligationKind::Arithmetic) {
    Obligation ob;
    ob.hyps = std::move(hyps);
    ob.concl = std::move(concl);
    ob.provenance = {std::move(rule), std::move(path)};
    ob.kind = kind;
    return ob;
}

std::set<std::string> names_in(const FieldMap& m) {
    std::set<std::string> out;
    for (const auto& [k, e] : m) {
        out.insert(k);
        auto n = free_names(e);
        out.insert(n.begin(), n.end());
    }
    return out;
}

Binding flow_at(const FieldMap& flow, const Expr& time) {
    Binding b;
    for (const auto& [x, e] : flow) {
        b[x] = substitute(e, Binding{{kTimeName, time}});
    }
    return b;
}

const EvolveCommand& require_evolve(const Program& p) {
    if (p.kind() != ProgramKind::Evolve) {
        throw Error("differential rule applied to a node that is not an evolution command");
    }
    return p.evolve_cmd();
}

}  // namespace

Pred evolution_wlp(const FieldMap& flow, const Pred& guard, const Pred& q, const TimeInterval& u) {
    std::set<std::string> taken = names_in(flow);
    for (const auto& n : free_names(guard)) {
        taken.insert(n);
    }
    for (const auto& n : free_names(q)) {
        taken.insert(n);
    }
    taken.erase(kTimeName);  // time inside the flow is replaced by the bound variable
    const std::string t = fresh_name("t", taken);
    taken.insert(t);
    const std::string tau = fresh_name("tau", taken);
    const Expr tv = Expr::var(t), tauv = Expr::var(tau);

    const Pred post = substitute(q, flow_at(flow, tv));
    if (post.kind() == PredKind::True) {
        return Pred::truth();
    }
    Pred inner = substitute(guard, flow_at(flow, tauv));
    if (inner.kind() != PredKind::True) {
        inner = Pred::forall(tau, u.lower(), tv, inner);
    }
    return Pred::forall(t, u.lower(), u.upper(), implies(inner, post));
}

WlpResult wlp(const Program& p, const Pred& q, const std::string& path) {
    switch (p.kind()) {
    case ProgramKind::Skip: return {q, {}};
    case ProgramKind::Abort: return {Pred::truth(), {}};
    case ProgramKind::Assign: return {substitute(q, Binding{{p.var(), p.expr()}}), {}};
    case ProgramKind::Test: return {implies(p.pred(), q), {}};
    case ProgramKind::Seq: {
        WlpResult acc{q, {}};
        const auto& items = p.children();
        for (size_t i = items.size(); i-- > 0;) {
            WlpResult r = wlp(items[i], acc.pre, path + ".seq[" + std::to_string(i) + "]");
            r.obligations.insert(r.obligations.end(), acc.obligations.begin(), acc.obligations.end());
            acc = std::move(r);
        }
        return acc;
    }
    case ProgramKind::Choice: {
        WlpResult acc{Pred::truth(), {}};
        const auto& items = p.children();
        for (size_t i = 0; i < items.size(); ++i) {
            WlpResult r = wlp(items[i], q, path + ".choice[" + std::to_string(i) + "]");
            acc.pre = acc.pre && r.pre;
            acc.obligations.insert(acc.obligations.end(), r.obligations.begin(), r.obligations.end());
        }
        return acc;
    }
    case ProgramKind::IfThenElse: {
        WlpResult a = wlp(p.children()[0], q, path + ".then");
        WlpResult b = wlp(p.children()[1], q, path + ".else");
        WlpResult out;
        out.pre = implies(p.pred(), a.pre) && implies(nnf(Pred::negation(p.pred())), b.pre);
        out.obligations = std::move(a.obligations);
        out.obligations.insert(out.obligations.end(), b.obligations.begin(), b.obligations.end());
        return out;
    }
    case ProgramKind::Loop: {
        const Pred& inv = p.pred();
        WlpResult body = wlp(p.children()[0], inv, path + ".body");
        WlpResult out{inv, std::move(body.obligations)};
        out.obligations.push_back(make(conjuncts(inv), body.pre, "loop-body", path));
        out.obligations.push_back(make(conjuncts(inv), q, "loop-post", path));
        return out;
    }
    case ProgramKind::Evolve: {
        const EvolveCommand& cmd = p.evolve_cmd();
        WlpResult out;
        if (cmd.flow) {
            Obligation cert = make({}, Pred::truth(), "evolve-flow", path, ObligationKind::FlowCertificate);
            cert.field = cmd.field;
            cert.flow = cmd.flow;
            cert.dom = cmd.dom;
            out.obligations.push_back(std::move(cert));
            out.pre = evolution_wlp(cmd.flow->components, cmd.guard, q, cmd.dom.effective());
            return out;
        }
        if (cmd.dinv) {
            Obligation inv = make(conjuncts(cmd.guard), *cmd.dinv, "evolve-dinv", path, ObligationKind::DiffInvariant);
            inv.field = cmd.field;
            inv.dom = cmd.dom;
            out.obligations.push_back(std::move(inv));
            std::vector<Pred> hyps = conjuncts(*cmd.dinv);
            for (const auto& g : conjuncts(cmd.guard)) {
                if (g.kind() != PredKind::True) {
                    hyps.push_back(g);
                }
            }
            out.obligations.push_back(make(std::move(hyps), q, "evolve-dinv-post", path));
            out.pre = *cmd.dinv;
            return out;
        }
        Obligation opaque = make(conjuncts(cmd.guard), q, "evolve-opaque", path, ObligationKind::Opaque);
        opaque.field = cmd.field;
        opaque.dom = cmd.dom;
        out.obligations.push_back(std::move(opaque));
        out.pre = q;
        return out;
    }
    case ProgramKind::EvolFlow: {
        const EvolFlowCommand& cmd = p.evol_cmd();
        return {evolution_wlp(cmd.flow.components, cmd.guard, q, cmd.dom.effective()), {}};
    }
    }
    throw Error("malformed program");
}

std::vector<Obligation> verify(const VerifySpec& spec) {
    WlpResult r = wlp(spec.program, spec.post);
    std::vector<Obligation> out;
    std::vector<Pred> main_hyps = spec.assumptions;
    for (const auto& c : conjuncts(spec.pre)) {
        if (c.kind() != PredKind::True) {
            main_hyps.push_back(c);
        }
    }
    out.push_back(make(main_hyps, r.pre, "main", "program"));
    for (auto& ob : r.obligations) {
        std::vector<Pred> hyps = spec.assumptions;
        hyps.insert(hyps.end(), ob.hyps.begin(), ob.hyps.end());
        ob.hyps = std::move(hyps);
        out.push_back(std::move(ob));
    }
    const auto consts = spec.const_names();
    int k = 0;
    for (auto& ob : out) {
        ob.id = "ob-" + std::to_string(++k);
        std::set<std::string> names = free_names(ob.concl);
        for (const auto& h : ob.hyps) {
            auto n = free_names(h);
            names.insert(n.begin(), n.end());
        }
        if (ob.field) {
            for (const auto& v : ob.field->variables()) {
                names.insert(v);
            }
        }
        ob.forall.clear();
        for (const auto& n : names) {
            if (!consts.count(n)) {
                ob.forall.push_back(n);
            }
        }
    }
    return out;
}

DcResult dc_split(const Program& evolve, const Pred& c, const std::string& path) {
    EvolveCommand cmd = require_evolve(evolve);
    Obligation inv = make(conjuncts(cmd.guard), c, "dC", path, ObligationKind::DiffInvariant);
    inv.field = cmd.field;
    inv.dom = cmd.dom;
    cmd.guard = cmd.guard && c;
    return {Program::evolve(std::move(cmd)), std::move(inv)};
}

Obligation dw_check(const Program& evolve, const Pred& q, const std::string& path) {
    const EvolveCommand& cmd = require_evolve(evolve);
    return make(conjuncts(cmd.guard), q, "dW", path);
}

Pred ds_closed_form(const FieldMap& c, const Pred& guard, const Pred& q, const TimeInterval& u) {
    FieldMap flow;
    for (const auto& [x, e] : c) {
        if (mentions_time(e)) {
            throw Error("constant field component for " + x + " mentions time");
        }
        for (const auto& n : free_names(e)) {
            if (c.count(n)) {
                throw Error("field component for " + x + " depends on the evolving variable " + n);
            }
        }
        flow[x] = Expr::var(x) + e * Expr::time();
    }
    return evolution_wlp(flow, guard, q, u);
}

namespace {

// The cut only holds for runs starting inside C; other runs keep the original node.
Program cut_all(const Program& p, const Pred& c, const std::string& path, std::vector<Obligation>& cuts) {
    auto map_children = [&](const std::string& tag) {
        std::vector<Program> out;
        for (size_t i = 0; i < p.children().size(); ++i) {
            out.push_back(cut_all(p.children()[i], c, path + "." + tag + "[" + std::to_string(i) + "]", cuts));
        }
        return out;
    };
    switch (p.kind()) {
    case ProgramKind::Seq: return Program::seq(map_children("seq"));
    case ProgramKind::Choice: return Program::choice(map_children("choice"));
    case ProgramKind::IfThenElse:
        return Program::ite(p.pred(), cut_all(p.children()[0], c, path + ".then", cuts),
                            cut_all(p.children()[1], c, path + ".else", cuts));
    case ProgramKind::Loop: return Program::loop(cut_all(p.children()[0], c, path + ".body", cuts), p.pred());
    case ProgramKind::Evolve: {
        DcResult r = dc_split(p, c, path);
        cuts.push_back(std::move(r.invariance));
        return Program::ite(c, r.program, p);
    }
    default: return p;
    }
}

}  // namespace

VerifySpec apply_dc(const VerifySpec& spec, const Pred& c, std::vector<Obligation>& cuts) {
    VerifySpec out = spec;
    out.program = cut_all(spec.program, c, "program", cuts);
    return out;
}

}  // namespace hwl
