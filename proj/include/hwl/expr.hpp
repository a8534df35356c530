// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hwl {

using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class EvalError : public Error {
  public:
    using Error::Error;
};

/// Name of the distinguished time symbol inside flows and valuations.
inline constexpr const char* kTimeName = "t";

/// Numeric instantiation of store variables, symbolic constants and time.
using Valuation = std::map<std::string, double>;

enum class ExprKind { Const, SymConst, Var, Time, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

/// Immutable symbolic real-valued term. Copies share structure.
class Expr {
  public:
    Expr();  // Const 0

    static Expr constant(const Rational& value);
    static Expr constant(long long value) { return constant(Rational(value)); }
    static Expr var(std::string name);
    static Expr sym(std::string name);
    static Expr time();

    static Expr neg(Expr a);
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    /// Throws Error when the denominator is the literal constant zero.
    static Expr div(Expr a, Expr b);
    static Expr pow(Expr base, unsigned exponent);
    static Expr sin(Expr a);
    static Expr cos(Expr a);
    static Expr exp(Expr a);

    [[nodiscard]] ExprKind kind() const;
    [[nodiscard]] const Rational& value() const;
    [[nodiscard]] const std::string& name() const;
    [[nodiscard]] unsigned exponent() const;
    [[nodiscard]] const Expr& lhs() const;
    [[nodiscard]] const Expr& rhs() const;
    [[nodiscard]] const Expr& arg() const { return lhs(); }

    [[nodiscard]] bool is_const() const { return kind() == ExprKind::Const; }
    [[nodiscard]] bool is_const(long long v) const;
    [[nodiscard]] bool is_leaf() const;

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Smart constructors that fold units and zeros; used by generated terms.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr power(const Expr& base, unsigned exponent);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

CmpOp negate(CmpOp op);
CmpOp mirror(CmpOp op);  // a op b  <=>  b mirror(op) a
const char* to_string(CmpOp op);
bool compare(double a, CmpOp op, double b, double eq_tol = 0.0, bool order_slack = true);

enum class PredKind { True, False, Cmp, And, Or, Not, Implies, Forall, Exists };

/// Boolean formula over Exprs. Quantifiers bind a real variable ranging over
/// an optionally bounded closed interval; the bound variable occurs as a Var.
class Pred {
  public:
    Pred();  // True

    static Pred truth();
    static Pred falsity();
    static Pred cmp(CmpOp op, Expr lhs, Expr rhs);
    static Pred conj(Pred a, Pred b);
    static Pred disj(Pred a, Pred b);
    static Pred negation(Pred a);
    static Pred implies(Pred a, Pred b);
    static Pred forall(std::string var, std::optional<Expr> lo, std::optional<Expr> hi, Pred body);
    static Pred exists(std::string var, std::optional<Expr> lo, std::optional<Expr> hi, Pred body);

    [[nodiscard]] PredKind kind() const;
    [[nodiscard]] CmpOp op() const;
    [[nodiscard]] const Expr& lhs() const;
    [[nodiscard]] const Expr& rhs() const;
    [[nodiscard]] const Pred& left() const;
    [[nodiscard]] const Pred& right() const;
    [[nodiscard]] const Pred& body() const { return left(); }
    [[nodiscard]] const std::string& bound() const;
    [[nodiscard]] const std::optional<Expr>& lower() const;
    [[nodiscard]] const std::optional<Expr>& upper() const;

    friend bool operator==(const Pred& a, const Pred& b);
    friend bool operator!=(const Pred& a, const Pred& b) { return !(a == b); }

  private:
    struct Node;
    explicit Pred(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Folding connectives (drop True/False units).
Pred operator&&(const Pred& a, const Pred& b);
Pred operator||(const Pred& a, const Pred& b);
Pred operator!(const Pred& a);
Pred implies(const Pred& a, const Pred& b);
Pred conjunction(const std::vector<Pred>& ps);

/// Flattens nested And nodes.
std::vector<Pred> conjuncts(const Pred& p);

// Printing uses the same surface syntax the parser accepts.
std::string to_string(const Expr& e);
std::string to_string(const Pred& p);
std::ostream& operator<<(std::ostream& os, const Expr& e);
std::ostream& operator<<(std::ostream& os, const Pred& p);

/// Free names (variables, symbolic constants, and kTimeName for the time symbol).
std::set<std::string> free_names(const Expr& e);
std::set<std::string> free_names(const Pred& p);
bool mentions_time(const Expr& e);
bool mentions_time(const Pred& p);

double eval(const Expr& e, const Valuation& v);

struct PredEvalOptions {
    /// Equality atoms hold when |a-b| <= eq_tol * (1 + max(|a|,|b|)).
    double eq_tol = 0.0;
    /// Order atoms get the same slack (violation checks); off when testing hypotheses.
    bool order_slack = true;
    /// Quantifiers are checked on this many evenly spaced points plus the bounds.
    int quantifier_samples = 48;
    /// Unbounded quantifier ranges are truncated to this half-width.
    double quantifier_horizon = 5.0;
};

bool eval(const Pred& p, const Valuation& v, const PredEvalOptions& opts = {});

/// Symbolic derivative. `wrt` names a variable or kTimeName for the time symbol.
Expr diff(const Expr& e, const std::string& wrt);

using Binding = std::map<std::string, Expr>;

/// Simultaneous substitution for variables (and the time symbol under kTimeName).
Expr substitute(const Expr& e, const Binding& b);
/// Capture-avoiding: bound names are renamed when a replacement would be captured.
Pred substitute(const Pred& p, const Binding& b);

Pred nnf(const Pred& p);

/// Returns `base` or `base<k>` for the smallest k making it distinct from `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace hwl
