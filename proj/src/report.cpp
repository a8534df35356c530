// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/report.hpp"

#include <cmath>
#include <sstream>

namespace hwl {

using nlohmann::json;

void Settings::apply(const std::map<std::string, double>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "seed") {
            seed = static_cast<std::uint64_t>(v);
        } else if (k == "trials") {
            trials = static_cast<int>(v);
        } else if (k == "step") {
            step = v;
        } else if (k == "horizon") {
            horizon = v;
        } else if (k == "fuel") {
            fuel = static_cast<int>(v);
        } else if (k == "eq_tol") {
            eq_tol = v;
        } else if (k == "lemma_trials") {
            lemma_trials = static_cast<int>(v);
        } else if (k == "refute_trials") {
            refute_trials = static_cast<int>(v);
        } else {
            throw Error("unknown setting '" + k + "'");
        }
    }
    if (!(step > 0) || !(horizon >= 0) || trials < 0 || fuel < 0 || refute_trials < 0 || lemma_trials < 0) {
        throw Error("settings out of range");
    }
}

Settings resolve_settings(const SpecFile& f, const std::map<std::string, double>& cli) {
    Settings s;
    s.apply(f.config);
    s.apply(cli);
    return s;
}

int VerifyReport::count(VerdictKind k) const {
    int n = 0;
    for (const auto& r : results) {
        n += r.verdict.kind == k ? 1 : 0;
    }
    return n;
}

int VerifyReport::exit_code() const {
    if (count(VerdictKind::Refuted) > 0) {
        return 2;
    }
    return count(VerdictKind::Unknown) > 0 ? 1 : 0;
}

Ranges const_ranges(const VerifySpec& spec) {
    Ranges r;
    for (const auto& c : spec.consts) {
        if (c.range) {
            r[c.name] = *c.range;
        }
    }
    return r;
}

LemmaDB build_lemmas(const SpecFile& f, const Settings& s) {
    LemmaDB db;
    const Ranges ranges = const_ranges(f.spec);
    for (const auto& l : f.lemmas) {
        db.add(l, s.lemma_trials, s.seed, ranges);
    }
    return db;
}

namespace {

DischargeOptions discharge_options(const Settings& s, const Ranges& ranges) {
    DischargeOptions o;
    o.seed = s.seed;
    o.refute_trials = s.refute_trials;
    o.ranges = ranges;
    return o;
}

Verdict certificate_verdict(const FlowCertificate& c) {
    if (c.certified) {
        return Verdict::proved(c.warnings.empty() ? "flow-certificate" : "flow-certificate(with warnings)");
    }
    for (const CheckOutcome* o : {&c.derivative, &c.initial, &c.monoid, &c.uniqueness}) {
        if (!o->passed && o->witness) {
            return Verdict::refuted(*o->witness, o->detail);
        }
    }
    for (const CheckOutcome* o : {&c.derivative, &c.initial, &c.domain_check, &c.monoid, &c.uniqueness}) {
        if (!o->passed) {
            return Verdict::unknown(o->detail);
        }
    }
    return Verdict::unknown("certificate refused");
}

}  // namespace

ObligationResult check_obligation(const Obligation& ob, const LemmaDB& db, const Settings& s, const Ranges& ranges) {
    ObligationResult r;
    r.obligation = ob;
    const DischargeOptions opts = discharge_options(s, ranges);
    try {
        switch (ob.kind) {
        case ObligationKind::Arithmetic: r.verdict = discharge(ob, db, opts); break;
        case ObligationKind::FlowCertificate: {
            CertifyOptions co;
            co.ranges = ranges;
            co.seed = s.seed;
            r.certificate = certify_flow(*ob.field, *ob.flow, *ob.dom, co);
            r.verdict = certificate_verdict(*r.certificate);
            break;
        }
        case ObligationKind::DiffInvariant:
            r.invariant = check_diff_invariant(ob.concl, *ob.field, *ob.dom, ob.hyps, &db, opts);
            r.verdict = r.invariant->overall;
            break;
        case ObligationKind::Opaque:
            r.verdict = Verdict::unknown("evolution command without a flow or a differential invariant");
            break;
        }
    } catch (const Error& e) {
        r.verdict = Verdict::unknown(std::string("checker failed: ") + e.what());
    }
    return r;
}

VerifyReport run_verify(const SpecFile& f, const Settings& s) {
    VerifyReport rep;
    rep.problem = f.problem;
    rep.settings = s;
    const LemmaDB db = build_lemmas(f, s);
    rep.lemmas = db.entries();
    const Ranges ranges = const_ranges(f.spec);
    for (const auto& ob : verify(f.spec)) {
        rep.results.push_back(check_obligation(ob, db, s, ranges));
    }
    return rep;
}

VerifyReport run_certify(const SpecFile& f, const Settings& s, CertifyFilter filter) {
    VerifyReport rep;
    rep.problem = f.problem;
    rep.settings = s;
    const LemmaDB db = build_lemmas(f, s);
    rep.lemmas = db.entries();
    const Ranges ranges = const_ranges(f.spec);
    for (const auto& ob : verify(f.spec)) {
        const bool flow = ob.kind == ObligationKind::FlowCertificate;
        const bool dinv = ob.kind == ObligationKind::DiffInvariant;
        if ((flow && filter != CertifyFilter::DinvOnly) || (dinv && filter != CertifyFilter::FlowOnly)) {
            rep.results.push_back(check_obligation(ob, db, s, ranges));
        }
    }
    return rep;
}

FalsifyBudget make_budget(const Settings& s) {
    FalsifyBudget b;
    b.trials = s.trials;
    b.horizon = s.horizon;
    b.step = s.step;
    b.fuel = s.fuel;
    b.seed = s.seed;
    b.eq_tol = s.eq_tol;
    return b;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const Valuation& v) {
    json j = json::object();
    for (const auto& [k, x] : v) {
        j[k] = std::isfinite(x) ? json(x) : json(std::to_string(x));
    }
    return j;
}

json to_json(const Verdict& v) {
    json j;
    j["verdict"] = to_string(v.kind);
    switch (v.kind) {
    case VerdictKind::Proved: j["method"] = v.method; break;
    case VerdictKind::Refuted:
        j["witness"] = to_json(v.witness);
        if (!v.reason.empty()) {
            j["note"] = v.reason;
        }
        break;
    case VerdictKind::Unknown: j["reason"] = v.reason; break;
    }
    return j;
}

json to_json(const Obligation& ob) {
    json j;
    j["id"] = ob.id;
    j["kind"] = to_string(ob.kind);
    j["provenance"] = ob.provenance.to_string();
    j["forall"] = ob.forall;
    json hyps = json::array();
    for (const auto& h : ob.hyps) {
        hyps.push_back(to_string(h));
    }
    j["hyps"] = hyps;
    j["concl"] = to_string(ob.concl);
    return j;
}

namespace {

json outcome(const CheckOutcome& o) {
    json j{{"passed", o.passed}, {"detail", o.detail}};
    if (o.witness) {
        j["witness"] = to_json(*o.witness);
    }
    return j;
}

json field_json(const FieldMap& m) {
    json j = json::object();
    for (const auto& [k, e] : m) {
        j[k] = to_string(e);
    }
    return j;
}

}  // namespace

json to_json(const FlowCertificate& c) {
    json j;
    j["field"] = field_json(c.field.components);
    j["flow"] = field_json(c.flow.components);
    j["domain"] = to_string(c.domain);
    j["checks"] = {{"derivative", outcome(c.derivative)},
                   {"initial", outcome(c.initial)},
                   {"domain", outcome(c.domain_check)},
                   {"monoid", outcome(c.monoid)},
                   {"uniqueness", outcome(c.uniqueness)}};
    if (c.lipschitz) {
        j["lipschitz"] = {{"ell", c.lipschitz->ell}, {"method", to_string(c.lipschitz->method)}};
    }
    j["warnings"] = c.warnings;
    j["certified"] = c.certified;
    return j;
}

json to_json(const DiffInvariantReport& r) {
    json j;
    j["invariant"] = to_string(r.invariant);
    json rulings = json::array();
    for (const auto& a : r.rulings) {
        json conds = json::array();
        for (const auto& c : a.conditions) {
            conds.push_back(to_string(c));
        }
        json x = to_json(a.verdict);
        x["atom"] = to_string(a.atom);
        x["rule"] = a.rule;
        x["conditions"] = conds;
        rulings.push_back(x);
    }
    j["rulings"] = rulings;
    j["overall"] = to_json(r.overall);
    return j;
}

json to_json(const VerifyReport& r) {
    json j;
    j["problem"] = r.problem;
    j["seed"] = r.settings.seed;
    json lemmas = json::array();
    for (const auto& e : r.lemmas) {
        json l{{"name", e.lemma.name}, {"status", to_string(e.validation.status)}, {"trials", e.validation.trials}};
        if (e.validation.witness) {
            l["witness"] = to_json(*e.validation.witness);
        }
        lemmas.push_back(l);
    }
    j["lemmas"] = lemmas;
    json obs = json::array();
    for (const auto& res : r.results) {
        json o = to_json(res.obligation);
        o.update(to_json(res.verdict));
        if (res.certificate) {
            o["certificate"] = to_json(*res.certificate);
        }
        if (res.invariant) {
            o["invariant"] = to_json(*res.invariant);
        }
        obs.push_back(o);
    }
    j["obligations"] = obs;
    j["summary"] = {{"total", r.results.size()},
                    {"proved", r.count(VerdictKind::Proved)},
                    {"refuted", r.count(VerdictKind::Refuted)},
                    {"unknown", r.count(VerdictKind::Unknown)},
                    {"exit_code", r.exit_code()}};
    return j;
}

json to_json(const std::optional<Counterexample>& cx, const std::string& problem, const Settings& s) {
    json j;
    j["problem"] = problem;
    j["seed"] = s.seed;
    j["trials"] = s.trials;
    j["found"] = cx.has_value();
    if (cx) {
        json trace = json::array();
        for (const auto& st : cx->trace) {
            trace.push_back(to_json(st));
        }
        j["counterexample"] = {{"trial", cx->trial},
                               {"constants", to_json(cx->constants)},
                               {"initial", to_json(cx->initial)},
                               {"violating", to_json(cx->violating)},
                               {"trace", trace},
                               {"incomplete", cx->incomplete}};
    }
    return j;
}

json to_json(const LawReport& r) {
    json j;
    j["model"] = r.model == LawModel::Rel ? "rel" : "sta";
    j["n"] = r.n;
    json laws = json::array();
    for (const auto& l : r.results) {
        json x{{"law", l.law}, {"mode", l.mode}, {"pass", l.pass}, {"cases", l.cases}};
        if (l.counterexample) {
            x["counterexample"] = *l.counterexample;
        }
        laws.push_back(x);
    }
    j["laws"] = laws;
    j["all_pass"] = r.all_pass();
    return j;
}

std::string render_text(const VerifyReport& r) {
    std::ostringstream os;
    os << "problem " << r.problem << " (seed " << r.settings.seed << ")\n";
    for (const auto& e : r.lemmas) {
        os << "  lemma " << e.lemma.name << ": " << to_string(e.validation.status) << " after "
           << e.validation.trials << " samples\n";
    }
    for (const auto& res : r.results) {
        const auto& ob = res.obligation;
        os << "  " << ob.id << " [" << ob.provenance.to_string() << "] " << to_string(res.verdict.kind);
        switch (res.verdict.kind) {
        case VerdictKind::Proved: os << " by " << res.verdict.method; break;
        case VerdictKind::Refuted: {
            os << " at {";
            bool first = true;
            for (const auto& [k, x] : res.verdict.witness) {
                os << (first ? "" : ", ") << k << " = " << x;
                first = false;
            }
            os << "}";
            break;
        }
        case VerdictKind::Unknown: os << ": " << res.verdict.reason; break;
        }
        os << "\n";
        if (ob.kind == ObligationKind::Arithmetic) {
            os << "      " << to_string(ob.as_pred()) << "\n";
        }
    }
    os << "summary: " << r.count(VerdictKind::Proved) << " proved, " << r.count(VerdictKind::Refuted) << " refuted, "
       << r.count(VerdictKind::Unknown) << " unknown\n";
    return os.str();
}

}  // namespace hwl
