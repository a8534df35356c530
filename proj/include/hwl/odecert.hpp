// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hwl/discharge.hpp"
#include "hwl/hprog.hpp"
#include "hwl/vcgen.hpp"

namespace hwl {

struct Trajectory {
    std::vector<std::pair<double, Store>> points;  // (t, state), starting at (0, s0)
    bool divergent = false;                        // stopped at a non-finite value
};

/// Classical fixed-step fourth order Runge-Kutta.
Trajectory rk4_integrate(const VectorField& field, const Store& s0, double h, int n, const Valuation& constants = {});

enum class LipschitzMethod { ExactAffine, Sampled };
const char* to_string(LipschitzMethod m);

struct LipschitzEstimate {
    double ell = 0;
    LipschitzMethod method = LipschitzMethod::Sampled;
};

/// Per-variable box.
using Region = std::map<std::string, std::pair<double, double>>;

/// Sup-norm Lipschitz constant on `region`: the max-row-sum norm of the coefficient
/// matrix for affine fields, a sampled lower bound otherwise.
LipschitzEstimate lipschitz_estimate(const VectorField& field, const Region& region, int samples = 2000,
                                     std::uint64_t seed = 1, const Valuation& constants = {});

struct CheckOutcome {
    bool passed = false;
    std::string detail;
    std::optional<Valuation> witness;
};

struct CertifyOptions {
    bool accept_likely_equal = true;  // Unknown(likely-equal) derivative checks become warnings
    int monoid_trials = 200;
    int rk4_trials = 100;
    double rk4_step = 1e-3;
    double monoid_tol = 1e-9;
    double rk4_tol = 1e-6;
    double sample_box = 2.0;  // numeric checks draw states and constants from [-box, box]
    Ranges ranges;            // overrides for symbolic constants
    std::uint64_t seed = 7;
};

struct FlowCertificate {
    VectorField field;
    Flow flow;
    TimeDomain domain;
    std::optional<LipschitzEstimate> lipschitz;
    CheckOutcome derivative;  // phi' = f o phi
    CheckOutcome initial;     // phi 0 = id
    CheckOutcome domain_check;
    CheckOutcome monoid;      // phi(t1 + t2) = phi t1 o phi t2
    CheckOutcome uniqueness;  // agreement with RK4 on [0, 1]
    std::vector<std::string> warnings;
    bool certified = false;
};

FlowCertificate certify_flow(const VectorField& field, const Flow& flow, const TimeDomain& dom,
                             const CertifyOptions& opts = {});

struct AtomRuling {
    Pred atom;
    std::string rule;  // eq-rule, lt-rule, neq-rule, conj, disj, const
    std::vector<Pred> conditions;
    Verdict verdict;
};

struct DiffInvariantReport {
    Pred invariant;  // NNF
    std::vector<AtomRuling> rulings;
    Verdict overall;
};

/// Lie-derivative rules for invariants of x' = f. `hyps` are facts about the constants.
DiffInvariantReport check_diff_invariant(const Pred& inv, const VectorField& field, const TimeDomain& dom,
                                         const std::vector<Pred>& hyps = {}, const LemmaDB* db = nullptr,
                                         const DischargeOptions& opts = {});

struct FalsifyBudget {
    int trials = 1000;
    double horizon = 5.0;
    double step = 0.01;
    int fuel = 4;
    std::uint64_t seed = 1;
    double eq_tol = 1e-6;  // relative tolerance for equalities in the postcondition
    std::size_t max_states = 256;  // frontier cap per run
    unsigned threads = 0;  // 0: hardware concurrency
};

struct Counterexample {
    int trial = -1;
    Valuation constants;
    Store initial;
    Store violating;
    std::vector<Store> trace;  // initial store followed by the violating end store
    bool incomplete = false;   // run hit fuel or state caps
};

std::optional<Counterexample> falsify(const VerifySpec& spec, const FalsifyBudget& budget = {});

}  // namespace hwl
