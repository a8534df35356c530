// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hwl/expr.hpp"
#include "hwl/hprog.hpp"

namespace hwl {

struct ConstDecl {
    std::string name;
    std::optional<std::pair<double, double>> range;  // sampling hint
};

/// Partial correctness specification pre -> |program] post under assumptions on the constants.
struct VerifySpec {
    std::vector<std::string> vars;
    std::vector<ConstDecl> consts;
    std::vector<Pred> assumptions;
    Pred pre;
    Pred post;
    Program program;

    [[nodiscard]] std::set<std::string> var_names() const;
    [[nodiscard]] std::set<std::string> const_names() const;
};

enum class ObligationKind { Arithmetic, DiffInvariant, FlowCertificate, Opaque };
const char* to_string(ObligationKind k);

struct Provenance {
    std::string rule;  // e.g. "loop-body", "evolve-flow"
    std::string path;  // AST path of the node that produced the obligation
    [[nodiscard]] std::string to_string() const { return rule + " @ " + path; }
};

/// forall names. hyps -> concl. Non-arithmetic kinds carry the payload their checker needs.
struct Obligation {
    std::string id;
    std::vector<std::string> forall;
    std::vector<Pred> hyps;
    Pred concl;
    Provenance provenance;
    ObligationKind kind = ObligationKind::Arithmetic;

    std::optional<VectorField> field;  // DiffInvariant, FlowCertificate
    std::optional<Flow> flow;          // FlowCertificate
    std::optional<TimeDomain> dom;     // DiffInvariant, FlowCertificate

    /// hyps -> concl as a single formula.
    [[nodiscard]] Pred as_pred() const;
};

struct WlpResult {
    Pred pre;
    std::vector<Obligation> obligations;  // ids and quantified names are filled in by verify
};

WlpResult wlp(const Program& p, const Pred& q, const std::string& path = "program");

/// forall t in U. (forall tau in U, tau <= t. G(phi tau)) -> Q(phi t), with constant folding.
Pred evolution_wlp(const FieldMap& flow, const Pred& guard, const Pred& q, const TimeInterval& u);

std::vector<Obligation> verify(const VerifySpec& spec);

/// Differential cut: strengthen the guard of an Evolve node with C and emit dI for C.
struct DcResult {
    Program program;
    Obligation invariance;
};
DcResult dc_split(const Program& evolve, const Pred& c, const std::string& path = "program");

/// Differential weakening premise G -> Q.
Obligation dw_check(const Program& evolve, const Pred& q, const std::string& path = "program");

/// Closed form for a constant field x' = c: evolution_wlp with phi(t) = x + c t.
Pred ds_closed_form(const FieldMap& c, const Pred& guard, const Pred& q, const TimeInterval& u);

/// Applies dc_split to every Evolve node of the program; the cut obligations are appended to `cuts`.
VerifySpec apply_dc(const VerifySpec& spec, const Pred& c, std::vector<Obligation>& cuts);

}  // namespace hwl
