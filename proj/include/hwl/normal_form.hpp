// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hwl/expr.hpp"

namespace hwl {

enum class AtomKind { Var, Sym, Time, Sin, Cos, Exp, Opaque };

struct Atom {
    AtomKind kind = AtomKind::Var;
    Expr expr;  // the term this atom stands for
};

/// Canonical multivariate (Laurent in symbolic constants) polynomial with exact
/// rational coefficients over atoms: variables, symbolic constants, the time
/// symbol, and opaque transcendental or division subterms keyed by their
/// normalized arguments.
class Polynomial {
  public:
    /// Atom key -> exponent. Negative exponents only occur on symbolic constants.
    using Monomial = std::map<std::string, int>;
    using Terms = std::map<Monomial, Rational>;

    Polynomial() = default;
    static Polynomial constant(const Rational& c);
    static Polynomial atom(const std::string& key, Atom a);

    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] const std::map<std::string, Atom>& atoms() const { return atoms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] Rational constant_term() const;
    /// True when some opaque division atom was introduced.
    [[nodiscard]] bool has_opaque() const;
    [[nodiscard]] int degree_in(const std::string& atom_key) const;
    [[nodiscard]] int total_degree() const;
    /// Every monomial has total degree <= 1 and no negative exponents.
    [[nodiscard]] bool is_affine() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial scaled(const Rational& c) const;
    Polynomial multiplied(const Monomial& m, const Rational& c) const;
    Polynomial pow(unsigned n) const;

    /// Rewrites sin(u)^2 -> 1 - cos(u)^2 until no sin atom has exponent >= 2.
    Polynomial reduce_trig() const;

    /// Leading monomial under graded lexicographic order (atom keys ascending).
    [[nodiscard]] std::pair<Monomial, Rational> leading_term() const;
    /// Multivariate division remainder by a single divisor under grlex.
    [[nodiscard]] Polynomial remainder(const Polynomial& divisor) const;
    /// Replaces the atom `atom_key` (non-negative exponents only) by `value`.
    [[nodiscard]] Polynomial substituted(const std::string& atom_key, const Polynomial& value) const;

    /// Splits this = coef * atom^1 + rest where neither part mentions `atom_key`;
    /// returns nullopt when the atom occurs with any other exponent.
    [[nodiscard]] std::optional<std::pair<Polynomial, Polynomial>> linear_in(const std::string& atom_key) const;
    /// Coefficients (c0, c1, c2) when this is quadratic in `atom_key`.
    [[nodiscard]] std::optional<std::vector<Polynomial>> coefficients_in(const std::string& atom_key, int max_degree) const;

    [[nodiscard]] Expr to_expr() const;
    [[nodiscard]] std::string key() const;
    [[nodiscard]] double eval(const Valuation& v) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    static int compare_grlex(const Monomial& a, const Monomial& b);

  private:
    void add_term(const Monomial& m, const Rational& c);
    void merge_atoms(const Polynomial& o);
    Terms terms_;
    std::map<std::string, Atom> atoms_;
};

Polynomial normalize(const Expr& e);

/// Outcome of comparing two expressions.
enum class Equality { Equal, NotEqual, Unknown };

struct EqualityResult {
    Equality verdict = Equality::Unknown;
    std::optional<Valuation> witness;  // set for NotEqual
    std::string note;
};

struct SamplingOptions {
    int samples = 64;
    double rel_tol = 1e-9;
    double lo = -10.0;
    double hi = 10.0;
    std::uint64_t seed = 0x5eed;
};

EqualityResult expr_eq(const Expr& a, const Expr& b, const SamplingOptions& opts = {});

/// Variable -> component map of an autonomous vector field.
using FieldMap = std::map<std::string, Expr>;

/// Sum over field variables of d(mu)/d(x_i) * f_i. Throws Error on time-dependent mu.
Expr lie_derivative(const Expr& mu, const FieldMap& field);

}  // namespace hwl
