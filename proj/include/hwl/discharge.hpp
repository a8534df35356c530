// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hwl/expr.hpp"
#include "hwl/vcgen.hpp"

namespace hwl {

enum class VerdictKind { Proved, Refuted, Unknown };
const char* to_string(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::string method;  // Proved
    Valuation witness;   // Refuted
    std::string reason;  // Unknown, or a note on Refuted

    static Verdict proved(std::string method);
    static Verdict refuted(Valuation witness, std::string note = {});
    static Verdict unknown(std::string reason);

    [[nodiscard]] bool is_proved() const { return kind == VerdictKind::Proved; }
    [[nodiscard]] bool is_refuted() const { return kind == VerdictKind::Refuted; }
};

/// Sampling boxes per name; names without an entry use the default box.
using Ranges = std::map<std::string, std::pair<double, double>>;

struct Lemma {
    std::string name;
    std::vector<Pred> hyps;
    Pred concl;
};

enum class LemmaStatus { Unvalidated, Accepted, Rejected, Inconclusive };
const char* to_string(LemmaStatus s);

struct LemmaValidation {
    LemmaStatus status = LemmaStatus::Unvalidated;
    int trials = 0;  // satisfying samples checked
    std::optional<Valuation> witness;
};

LemmaValidation validate_lemma(const Lemma& l, int trials, std::uint64_t seed, const Ranges& ranges = {});

class LemmaDB {
  public:
    struct Entry {
        Lemma lemma;
        LemmaValidation validation;
    };

    const Entry& add(Lemma l, int trials = 10000, std::uint64_t seed = 1, const Ranges& ranges = {});
    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
    [[nodiscard]] std::vector<const Lemma*> usable() const;

  private:
    std::vector<Entry> entries_;
};

struct DischargeOptions {
    std::uint64_t seed = 0x5eed;
    int refute_trials = 2000;
    double eq_tol = 1e-9;
    std::size_t fm_max_columns = 6;
    std::size_t fm_max_rows = 4000;
    Ranges ranges;
    PredEvalOptions eval;
};

/// Arithmetic obligations only; other kinds belong to odecert and yield Unknown here.
Verdict discharge(const Obligation& ob, const LemmaDB& db, const DischargeOptions& opts = {});

/// forall free names. hyps -> concl.
Verdict prove(const std::vector<Pred>& hyps, const Pred& concl, const LemmaDB& db, const DischargeOptions& opts = {});

// ---------------------------------------------------------------------------
// Linear arithmetic over the rationals

/// sum coeffs[x] * x + constant <= 0, or < 0 when strict.
struct LinearConstraint {
    std::map<std::string, Rational> coeffs;
    Rational constant = 0;
    bool strict = false;
};

struct FmResult {
    enum class Status { Feasible, Infeasible, TooLarge };
    Status status = Status::TooLarge;
    std::map<std::string, Rational> witness;  // Feasible only
};

/// Decides feasibility by eliminating every variable; a witness is rebuilt by back-substitution.
FmResult fourier_motzkin(const std::vector<LinearConstraint>& cs, std::size_t max_rows = 4000);

enum class Entailment { Valid, Invalid, TooLarge };
struct EntailResult {
    Entailment status = Entailment::TooLarge;
    std::map<std::string, Rational> witness;  // Invalid: satisfies hyps, violates goal
};

/// hyps entail goal iff hyps with the negated goal are infeasible.
EntailResult fm_entails(const std::vector<LinearConstraint>& hyps, const LinearConstraint& goal,
                        std::size_t max_rows = 4000);

// ---------------------------------------------------------------------------
// Sampling

/// Draws a valuation of `names` satisfying every hypothesis (within eq_tol). Equalities
/// are solved for a variable occurring linearly or quadratically; the remaining
/// hypotheses are enforced by rejection. The box widens after repeated failures.
std::optional<Valuation> sample_satisfying(const std::vector<Pred>& hyps, const std::set<std::string>& names,
                                           const Ranges& ranges, std::mt19937_64& rng, int attempts = 200,
                                           double eq_tol = 1e-9);

}  // namespace hwl
