// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hwl/expr.hpp"
#include "hwl/normal_form.hpp"

namespace hwl {

/// Hybrid store s : V -> R. Same representation as a Valuation restricted to V.
using Store = Valuation;

/// One time interval: the whole line, [0, inf), or a closed [lo, hi] with lo <= 0 <= hi.
struct TimeInterval {
    enum class Kind { AllReals, NonNegative, Closed };
    Kind kind = Kind::AllReals;
    Rational lo = 0;
    Rational hi = 0;

    static TimeInterval all_reals() { return {}; }
    static TimeInterval non_negative() { return {Kind::NonNegative, 0, 0}; }
    /// Throws Error unless lo <= 0 <= hi.
    static TimeInterval closed(Rational lo, Rational hi);

    [[nodiscard]] bool contains(double t) const;
    [[nodiscard]] bool has_negative_times() const;
    [[nodiscard]] std::optional<Expr> lower() const;
    [[nodiscard]] std::optional<Expr> upper() const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Claimed interval of existence T plus an optional query sub-domain U with 0 in U.
struct TimeDomain {
    TimeInterval domain;
    std::optional<TimeInterval> query;

    [[nodiscard]] const TimeInterval& effective() const { return query ? *query : domain; }
    friend bool operator==(const TimeDomain&, const TimeDomain&) = default;
};

/// Autonomous vector field x' = f(x); components never mention the time symbol.
struct VectorField {
    FieldMap components;

    [[nodiscard]] std::vector<std::string> variables() const;
    /// Throws Error if some component mentions time.
    void validate() const;
    [[nodiscard]] Store apply(const Store& s, const Valuation& constants) const;
    friend bool operator==(const VectorField& a, const VectorField& b) { return a.components == b.components; }
};

/// Time-dependent flow phi(t, s): each component is an Expr over the store and t.
struct Flow {
    FieldMap components;
    TimeDomain domain;

    [[nodiscard]] Store at(double t, const Store& s, const Valuation& constants) const;
    friend bool operator==(const Flow& a, const Flow& b) {
        return a.components == b.components && a.domain == b.domain;
    }
};

enum class ProgramKind { Skip, Abort, Assign, Test, Seq, Choice, IfThenElse, Loop, Evolve, EvolFlow };

struct EvolveCommand {
    VectorField field;
    Pred guard;
    TimeDomain dom;
    std::optional<Flow> flow;  // flow certificate
    std::optional<Pred> dinv;  // differential invariant annotation
};

struct EvolFlowCommand {
    Flow flow;
    Pred guard;
    TimeDomain dom;
};

/// Immutable hybrid-program AST.
class Program {
  public:
    Program();  // skip

    static Program skip();
    static Program abort();
    static Program assign(std::string var, Expr e);
    static Program test(Pred p);
    static Program seq(std::vector<Program> items);
    static Program choice(std::vector<Program> items);
    static Program ite(Pred cond, Program then_branch, Program else_branch);
    static Program loop(Program body, Pred inv);
    /// Throws Error when both a flow certificate and a differential invariant are given.
    static Program evolve(EvolveCommand cmd);
    static Program evol(EvolFlowCommand cmd);

    [[nodiscard]] ProgramKind kind() const;
    [[nodiscard]] const std::string& var() const;
    [[nodiscard]] const Expr& expr() const;
    /// Test condition, if-condition, or loop invariant.
    [[nodiscard]] const Pred& pred() const;
    [[nodiscard]] const std::vector<Program>& children() const;
    [[nodiscard]] const EvolveCommand& evolve_cmd() const;
    [[nodiscard]] const EvolFlowCommand& evol_cmd() const;

    [[nodiscard]] bool is_discrete() const;

    friend bool operator==(const Program& a, const Program& b);
    friend bool operator!=(const Program& a, const Program& b) { return !(a == b); }

  private:
    struct Node;
    explicit Program(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

std::string to_string(const Program& p);
/// Multi-line layout of the same surface syntax, every line prefixed by `indent` spaces.
std::string format_program(const Program& p, int indent = 2);
std::string to_string(const TimeDomain& d);

/// s[v := eval(e, s)]. Throws Error when v is not a store variable.
Store store_update(const Store& s, const std::string& v, const Expr& e, const Valuation& constants = {});

/// Grid points {0, h, 2h, ...} of U (both directions are not sampled: t >= 0 only)
/// up to `horizon`, truncated at the first point violating the guard.
std::vector<std::pair<double, Store>> guarded_orbit_flow(const Flow& flow, const Pred& guard, const TimeInterval& u,
                                                         const Store& s, double h, double horizon,
                                                         const Valuation& constants = {});

struct RunConfig {
    int fuel = 4;              // loop unrollings
    double step = 0.01;        // time grid for evolution commands
    double horizon = 5.0;      // evolution time bound
    std::uint64_t seed = 1;    // subsampling when the frontier overflows
    std::size_t max_states = 4096;
    Valuation constants;
};

struct RunResult {
    std::vector<Store> stores;
    bool incomplete = false;
};

/// Executable approximation of the state-transformer semantics.
RunResult run_sampled(const Program& p, const Store& s, const RunConfig& cfg);

}  // namespace hwl
