// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hwl {

struct Expr::Node {
    ExprKind kind = ExprKind::Const;
    Rational value;
    std::string name;
    unsigned exponent = 0;
    std::vector<Expr> kids;
};

Expr::Expr() {
    static const auto zero = std::make_shared<const Node>();
    node_ = zero;
}

Expr Expr::constant(const Rational& value) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Const;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Var;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::sym(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::SymConst;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::time() {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Time;
    n->name = kTimeName;
    return Expr(std::move(n));
}

namespace {

template <typename Node>
std::shared_ptr<Node> make_node(ExprKind k, Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids.push_back(std::move(a));
    return n;
}

template <typename Node>
std::shared_ptr<Node> make_node(ExprKind k, Expr a, Expr b) {
    auto n = make_node<Node>(k, std::move(a));
    n->kids.push_back(std::move(b));
    return n;
}

}  // namespace

Expr Expr::neg(Expr a) { return Expr(make_node<Node>(ExprKind::Neg, std::move(a))); }
Expr Expr::add(Expr a, Expr b) { return Expr(make_node<Node>(ExprKind::Add, std::move(a), std::move(b))); }
Expr Expr::sub(Expr a, Expr b) { return Expr(make_node<Node>(ExprKind::Sub, std::move(a), std::move(b))); }
Expr Expr::mul(Expr a, Expr b) { return Expr(make_node<Node>(ExprKind::Mul, std::move(a), std::move(b))); }

Expr Expr::div(Expr a, Expr b) {
    if (b.is_const(0)) {
        throw Error("division by the constant zero in '" + to_string(a) + " / 0'");
    }
    return Expr(make_node<Node>(ExprKind::Div, std::move(a), std::move(b)));
}

Expr Expr::pow(Expr base, unsigned exponent) {
    auto n = make_node<Node>(ExprKind::Pow, std::move(base));
    n->exponent = exponent;
    return Expr(std::move(n));
}

Expr Expr::sin(Expr a) { return Expr(make_node<Node>(ExprKind::Sin, std::move(a))); }
Expr Expr::cos(Expr a) { return Expr(make_node<Node>(ExprKind::Cos, std::move(a))); }
Expr Expr::exp(Expr a) { return Expr(make_node<Node>(ExprKind::Exp, std::move(a))); }

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
unsigned Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->kids.at(0); }
const Expr& Expr::rhs() const { return node_->kids.at(1); }

bool Expr::is_const(long long v) const { return kind() == ExprKind::Const && value() == v; }

bool Expr::is_leaf() const {
    switch (kind()) {
    case ExprKind::Const:
    case ExprKind::SymConst:
    case ExprKind::Var:
    case ExprKind::Time: return true;
    default: return false;
    }
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case ExprKind::Const: return a.value() == b.value();
    case ExprKind::SymConst:
    case ExprKind::Var: return a.name() == b.name();
    case ExprKind::Time: return true;
    case ExprKind::Pow: return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    case ExprKind::Neg:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp: return a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) {
        return Expr::constant(a.value() + b.value());
    }
    if (a.is_const(0)) {
        return b;
    }
    if (b.is_const(0)) {
        return a;
    }
    if (b.kind() == ExprKind::Neg) {
        return Expr::sub(a, b.arg());
    }
    return Expr::add(a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) {
        return Expr::constant(a.value() - b.value());
    }
    if (b.is_const(0)) {
        return a;
    }
    if (a.is_const(0)) {
        return -b;
    }
    return Expr::sub(a, b);
}

Expr operator-(const Expr& a) {
    if (a.is_const()) {
        return Expr::constant(-a.value());
    }
    if (a.kind() == ExprKind::Neg) {
        return a.arg();
    }
    return Expr::neg(a);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) {
        return Expr::constant(a.value() * b.value());
    }
    if (a.is_const(0) || b.is_const(0)) {
        return Expr();
    }
    if (a.is_const(1)) {
        return b;
    }
    if (b.is_const(1)) {
        return a;
    }
    if (a.is_const(-1)) {
        return -b;
    }
    if (b.is_const(-1)) {
        return -a;
    }
    return Expr::mul(a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_const(1)) {
        return a;
    }
    if (a.is_const(0) && !b.is_const(0)) {
        return Expr();
    }
    if (a.is_const() && b.is_const() && !b.is_const(0)) {
        return Expr::constant(a.value() / b.value());
    }
    return Expr::div(a, b);
}

Expr power(const Expr& base, unsigned exponent) {
    if (exponent == 0) {
        return Expr::constant(1);
    }
    if (exponent == 1) {
        return base;
    }
    if (base.is_const()) {
        Rational r = 1;
        for (unsigned i = 0; i < exponent; ++i) {
            r *= base.value();
        }
        return Expr::constant(r);
    }
    return Expr::pow(base, exponent);
}

// ---------------------------------------------------------------------------
// Predicates

struct Pred::Node {
    PredKind kind = PredKind::True;
    CmpOp op = CmpOp::Eq;
    std::vector<Expr> terms;
    std::vector<Pred> parts;
    std::string bound;
    std::optional<Expr> lo, hi;
};

Pred::Pred() {
    static const auto t = std::make_shared<const Node>();
    node_ = t;
}

Pred Pred::truth() { return Pred(); }

Pred Pred::falsity() {
    static const auto f = [] {
        auto n = std::make_shared<Node>();
        n->kind = PredKind::False;
        return n;
    }();
    return Pred(f);
}

Pred Pred::cmp(CmpOp op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = PredKind::Cmp;
    n->op = op;
    n->terms = {std::move(lhs), std::move(rhs)};
    return Pred(std::move(n));
}

Pred Pred::conj(Pred a, Pred b) {
    auto n = std::make_shared<Node>();
    n->kind = PredKind::And;
    n->parts = {std::move(a), std::move(b)};
    return Pred(std::move(n));
}

Pred Pred::disj(Pred a, Pred b) {
    auto n = std::make_shared<Node>();
    n->kind = PredKind::Or;
    n->parts = {std::move(a), std::move(b)};
    return Pred(std::move(n));
}

Pred Pred::negation(Pred a) {
    auto n = std::make_shared<Node>();
    n->kind = PredKind::Not;
    n->parts = {std::move(a)};
    return Pred(std::move(n));
}

Pred Pred::implies(Pred a, Pred b) {
    auto n = std::make_shared<Node>();
    n->kind = PredKind::Implies;
    n->parts = {std::move(a), std::move(b)};
    return Pred(std::move(n));
}

Pred Pred::forall(std::string var, std::optional<Expr> lo, std::optional<Expr> hi, Pred body) {
    auto n = std::make_shared<Node>();
    n->kind = PredKind::Forall;
    n->bound = std::move(var);
    n->lo = std::move(lo);
    n->hi = std::move(hi);
    n->parts = {std::move(body)};
    return Pred(std::move(n));
}

Pred Pred::exists(std::string var, std::optional<Expr> lo, std::optional<Expr> hi, Pred body) {
    auto n = std::make_shared<Node>();
    n->kind = PredKind::Exists;
    n->bound = std::move(var);
    n->lo = std::move(lo);
    n->hi = std::move(hi);
    n->parts = {std::move(body)};
    return Pred(std::move(n));
}

PredKind Pred::kind() const { return node_->kind; }
CmpOp Pred::op() const { return node_->op; }
const Expr& Pred::lhs() const { return node_->terms.at(0); }
const Expr& Pred::rhs() const { return node_->terms.at(1); }
const Pred& Pred::left() const { return node_->parts.at(0); }
const Pred& Pred::right() const { return node_->parts.at(1); }
const std::string& Pred::bound() const { return node_->bound; }
const std::optional<Expr>& Pred::lower() const { return node_->lo; }
const std::optional<Expr>& Pred::upper() const { return node_->hi; }

bool operator==(const Pred& a, const Pred& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case PredKind::True:
    case PredKind::False: return true;
    case PredKind::Cmp: return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case PredKind::Not: return a.left() == b.left();
    case PredKind::Forall:
    case PredKind::Exists:
        return a.bound() == b.bound() && a.lower() == b.lower() && a.upper() == b.upper() && a.body() == b.body();
    default: return a.left() == b.left() && a.right() == b.right();
    }
}

Pred operator&&(const Pred& a, const Pred& b) {
    if (a.kind() == PredKind::True) {
        return b;
    }
    if (b.kind() == PredKind::True) {
        return a;
    }
    if (a.kind() == PredKind::False || b.kind() == PredKind::False) {
        return Pred::falsity();
    }
    return Pred::conj(a, b);
}

Pred operator||(const Pred& a, const Pred& b) {
    if (a.kind() == PredKind::False) {
        return b;
    }
    if (b.kind() == PredKind::False) {
        return a;
    }
    if (a.kind() == PredKind::True || b.kind() == PredKind::True) {
        return Pred::truth();
    }
    return Pred::disj(a, b);
}

Pred operator!(const Pred& a) {
    switch (a.kind()) {
    case PredKind::True: return Pred::falsity();
    case PredKind::False: return Pred::truth();
    case PredKind::Not: return a.left();
    default: return Pred::negation(a);
    }
}

Pred implies(const Pred& a, const Pred& b) {
    if (a.kind() == PredKind::True) {
        return b;
    }
    if (a.kind() == PredKind::False || b.kind() == PredKind::True) {
        return Pred::truth();
    }
    return Pred::implies(a, b);
}

Pred conjunction(const std::vector<Pred>& ps) {
    Pred out;
    for (const auto& p : ps) {
        out = out && p;
    }
    return out;
}

std::vector<Pred> conjuncts(const Pred& p) {
    std::vector<Pred> out;
    std::vector<Pred> stack{p};
    while (!stack.empty()) {
        Pred q = stack.back();
        stack.pop_back();
        if (q.kind() == PredKind::And) {
            stack.push_back(q.right());
            stack.push_back(q.left());
        } else if (q.kind() != PredKind::True) {
            out.push_back(q);
        }
    }
    return out;
}

CmpOp negate(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
    }
    return op;
}

CmpOp mirror(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
    }
}

const char* to_string(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

bool compare(double a, CmpOp op, double b, double eq_tol, bool order_slack) {
    const double tol = eq_tol * (1.0 + std::max(std::fabs(a), std::fabs(b)));
    const double slack = order_slack ? tol : 0.0;
    switch (op) {
    case CmpOp::Eq: return std::fabs(a - b) <= tol;
    case CmpOp::Ne: return std::fabs(a - b) > tol;
    case CmpOp::Lt: return a < b + slack;
    case CmpOp::Le: return a <= b + slack;
    case CmpOp::Gt: return a + slack > b;
    case CmpOp::Ge: return a + slack >= b;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    case ExprKind::Const: return e.value() < 0 || denominator(e.value()) != 1 ? 0 : 5;
    default: return 5;
    }
}

std::string rational_text(const Rational& r) {
    if (denominator(r) == 1) {
        return numerator(r).str();
    }
    // Exact decimal when the denominator only has factors 2 and 5.
    boost::multiprecision::cpp_int d = denominator(r);
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d == 1) {
        const int digits = std::max(twos, fives);
        boost::multiprecision::cpp_int scale = 1;
        for (int i = 0; i < digits; ++i) {
            scale *= 10;
        }
        boost::multiprecision::cpp_int scaled = numerator(r) * scale / denominator(r);
        const bool negative = scaled < 0;
        if (negative) {
            scaled = -scaled;
        }
        std::string s = scaled.str();
        if (static_cast<int>(s.size()) <= digits) {
            s.insert(0, static_cast<size_t>(digits + 1 - static_cast<int>(s.size())), '0');
        }
        s.insert(s.size() - static_cast<size_t>(digits), ".");
        return negative ? "-" + s : s;
    }
    return numerator(r).str() + "/" + denominator(r).str();
}

void print(std::ostream& os, const Expr& e, int ctx);

void print_operand(std::ostream& os, const Expr& e, int min_prec) {
    if (precedence(e) < min_prec) {
        os << '(';
        print(os, e, 0);
        os << ')';
    } else {
        print(os, e, min_prec);
    }
}

void print(std::ostream& os, const Expr& e, int ctx) {
    (void)ctx;
    switch (e.kind()) {
    case ExprKind::Const: os << rational_text(e.value()); break;
    case ExprKind::SymConst:
    case ExprKind::Var: os << e.name(); break;
    case ExprKind::Time: os << kTimeName; break;
    case ExprKind::Neg:
        os << '-';
        // keep -(3) distinct from the literal -3
        print_operand(os, e.arg(), e.arg().is_const() ? 6 : 3);
        break;
    case ExprKind::Add:
    case ExprKind::Sub:
        print_operand(os, e.lhs(), 1);
        os << (e.kind() == ExprKind::Add ? " + " : " - ");
        print_operand(os, e.rhs(), 2);
        break;
    case ExprKind::Mul:
    case ExprKind::Div:
        print_operand(os, e.lhs(), 2);
        os << (e.kind() == ExprKind::Mul ? "*" : "/");
        print_operand(os, e.rhs(), 3);
        break;
    case ExprKind::Pow:
        print_operand(os, e.lhs(), 5);
        os << '^' << e.exponent();
        break;
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
        os << (e.kind() == ExprKind::Sin ? "sin(" : e.kind() == ExprKind::Cos ? "cos(" : "exp(");
        print(os, e.arg(), 0);
        os << ')';
        break;
    }
}

int precedence(const Pred& p) {
    switch (p.kind()) {
    case PredKind::Forall:
    case PredKind::Exists: return 0;
    case PredKind::Implies: return 1;
    case PredKind::Or: return 2;
    case PredKind::And: return 3;
    case PredKind::Not: return 4;
    default: return 5;
    }
}

void print(std::ostream& os, const Pred& p);

void print_operand(std::ostream& os, const Pred& p, int min_prec) {
    if (precedence(p) < min_prec) {
        os << '(';
        print(os, p);
        os << ')';
    } else {
        print(os, p);
    }
}

void print_interval(std::ostream& os, const std::optional<Expr>& lo, const std::optional<Expr>& hi) {
    if (!lo && !hi) {
        os << 'R';
        return;
    }
    os << (lo ? "[" : "(");
    if (lo) {
        print(os, *lo, 0);
    } else {
        os << "-inf";
    }
    os << ", ";
    if (hi) {
        print(os, *hi, 0);
    } else {
        os << "inf";
    }
    os << (hi ? "]" : ")");
}

void print(std::ostream& os, const Pred& p) {
    switch (p.kind()) {
    case PredKind::True: os << "true"; break;
    case PredKind::False: os << "false"; break;
    case PredKind::Cmp:
        print(os, p.lhs(), 0);
        os << ' ' << to_string(p.op()) << ' ';
        print(os, p.rhs(), 0);
        break;
    case PredKind::And:
        print_operand(os, p.left(), 3);
        os << " & ";
        print_operand(os, p.right(), 4);
        break;
    case PredKind::Or:
        print_operand(os, p.left(), 2);
        os << " | ";
        print_operand(os, p.right(), 3);
        break;
    case PredKind::Implies:
        print_operand(os, p.left(), 2);
        os << " -> ";
        print_operand(os, p.right(), 1);
        break;
    case PredKind::Not:
        os << '!';
        print_operand(os, p.left(), 4);
        break;
    case PredKind::Forall:
    case PredKind::Exists:
        os << (p.kind() == PredKind::Forall ? "forall " : "exists ") << p.bound() << " in ";
        print_interval(os, p.lower(), p.upper());
        os << ". ";
        print(os, p.body());
        break;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

std::string to_string(const Pred& p) {
    std::ostringstream os;
    print(os, p);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }
std::ostream& operator<<(std::ostream& os, const Pred& p) { return os << to_string(p); }

// ---------------------------------------------------------------------------
// Free names

namespace {

void collect(const Expr& e, std::set<std::string>& out) {
    switch (e.kind()) {
    case ExprKind::Const: return;
    case ExprKind::SymConst:
    case ExprKind::Var: out.insert(e.name()); return;
    case ExprKind::Time: out.insert(kTimeName); return;
    case ExprKind::Neg:
    case ExprKind::Pow:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp: collect(e.arg(), out); return;
    default:
        collect(e.lhs(), out);
        collect(e.rhs(), out);
        return;
    }
}

void collect(const Pred& p, std::set<std::string>& out) {
    switch (p.kind()) {
    case PredKind::True:
    case PredKind::False: return;
    case PredKind::Cmp:
        collect(p.lhs(), out);
        collect(p.rhs(), out);
        return;
    case PredKind::Not: collect(p.left(), out); return;
    case PredKind::Forall:
    case PredKind::Exists: {
        std::set<std::string> inner;
        collect(p.body(), inner);
        inner.erase(p.bound());
        if (p.lower()) {
            collect(*p.lower(), inner);
        }
        if (p.upper()) {
            collect(*p.upper(), inner);
        }
        out.insert(inner.begin(), inner.end());
        return;
    }
    default:
        collect(p.left(), out);
        collect(p.right(), out);
        return;
    }
}

}  // namespace

std::set<std::string> free_names(const Expr& e) {
    std::set<std::string> out;
    collect(e, out);
    return out;
}

std::set<std::string> free_names(const Pred& p) {
    std::set<std::string> out;
    collect(p, out);
    return out;
}

bool mentions_time(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Time: return true;
    case ExprKind::Const:
    case ExprKind::SymConst:
    case ExprKind::Var: return false;
    case ExprKind::Neg:
    case ExprKind::Pow:
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp: return mentions_time(e.arg());
    default: return mentions_time(e.lhs()) || mentions_time(e.rhs());
    }
}

bool mentions_time(const Pred& p) {
    switch (p.kind()) {
    case PredKind::True:
    case PredKind::False: return false;
    case PredKind::Cmp: return mentions_time(p.lhs()) || mentions_time(p.rhs());
    case PredKind::Not: return mentions_time(p.left());
    case PredKind::Forall:
    case PredKind::Exists:
        return mentions_time(p.body()) || (p.lower() && mentions_time(*p.lower())) ||
               (p.upper() && mentions_time(*p.upper()));
    default: return mentions_time(p.left()) || mentions_time(p.right());
    }
}

// ---------------------------------------------------------------------------
// Evaluation

double eval(const Expr& e, const Valuation& v) {
    switch (e.kind()) {
    case ExprKind::Const: return e.value().convert_to<double>();
    case ExprKind::SymConst:
    case ExprKind::Var:
    case ExprKind::Time: {
        const std::string& n = e.kind() == ExprKind::Time ? std::string(kTimeName) : e.name();
        auto it = v.find(n);
        if (it == v.end()) {
            throw EvalError("unbound name '" + n + "'");
        }
        return it->second;
    }
    case ExprKind::Neg: return -eval(e.arg(), v);
    case ExprKind::Add: return eval(e.lhs(), v) + eval(e.rhs(), v);
    case ExprKind::Sub: return eval(e.lhs(), v) - eval(e.rhs(), v);
    case ExprKind::Mul: return eval(e.lhs(), v) * eval(e.rhs(), v);
    case ExprKind::Div: {
        const double d = eval(e.rhs(), v);
        if (d == 0.0) {
            throw EvalError("division by zero in '" + to_string(e) + "'");
        }
        return eval(e.lhs(), v) / d;
    }
    case ExprKind::Pow: {
        const double b = eval(e.arg(), v);
        double r = 1.0;
        for (unsigned i = 0; i < e.exponent(); ++i) {
            r *= b;
        }
        return r;
    }
    case ExprKind::Sin: return std::sin(eval(e.arg(), v));
    case ExprKind::Cos: return std::cos(eval(e.arg(), v));
    case ExprKind::Exp: return std::exp(eval(e.arg(), v));
    }
    return 0.0;
}

namespace {

template <typename F>
bool over_range(const Pred& p, const Valuation& v, const PredEvalOptions& opts, bool want_all, F&& body) {
    double lo = p.lower() ? eval(*p.lower(), v) : -opts.quantifier_horizon;
    double hi = p.upper() ? eval(*p.upper(), v) : opts.quantifier_horizon;
    if (!p.lower() && p.upper()) {
        lo = std::min(lo, hi - opts.quantifier_horizon);
    }
    if (p.lower() && !p.upper()) {
        hi = std::max(hi, lo + opts.quantifier_horizon);
    }
    if (lo > hi) {
        return want_all;  // empty range
    }
    const int n = std::max(1, opts.quantifier_samples);
    Valuation inner = v;
    for (int i = 0; i <= n; ++i) {
        const double x = i == n ? hi : lo + (hi - lo) * i / n;
        inner[p.bound()] = x;
        if (body(inner) != want_all) {
            return !want_all;
        }
    }
    return want_all;
}

}  // namespace

bool eval(const Pred& p, const Valuation& v, const PredEvalOptions& opts) {
    switch (p.kind()) {
    case PredKind::True: return true;
    case PredKind::False: return false;
    case PredKind::Cmp: return compare(eval(p.lhs(), v), p.op(), eval(p.rhs(), v), opts.eq_tol, opts.order_slack);
    case PredKind::And: return eval(p.left(), v, opts) && eval(p.right(), v, opts);
    case PredKind::Or: return eval(p.left(), v, opts) || eval(p.right(), v, opts);
    case PredKind::Not: return !eval(p.left(), v, opts);
    case PredKind::Implies: return !eval(p.left(), v, opts) || eval(p.right(), v, opts);
    case PredKind::Forall:
        return over_range(p, v, opts, true, [&](const Valuation& w) { return eval(p.body(), w, opts); });
    case PredKind::Exists:
        return over_range(p, v, opts, false, [&](const Valuation& w) { return eval(p.body(), w, opts); });
    }
    return false;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr diff(const Expr& e, const std::string& wrt) {
    switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::SymConst: return Expr();
    case ExprKind::Var: return Expr::constant(e.name() == wrt ? 1 : 0);
    case ExprKind::Time: return Expr::constant(wrt == kTimeName ? 1 : 0);
    case ExprKind::Neg: return -diff(e.arg(), wrt);
    case ExprKind::Add: return diff(e.lhs(), wrt) + diff(e.rhs(), wrt);
    case ExprKind::Sub: return diff(e.lhs(), wrt) - diff(e.rhs(), wrt);
    case ExprKind::Mul:
        return diff(e.lhs(), wrt) * e.rhs() + e.lhs() * diff(e.rhs(), wrt);
    case ExprKind::Div: {
        const Expr& num = e.lhs();
        const Expr& den = e.rhs();
        const Expr dden = diff(den, wrt);
        if (dden.is_const(0)) {
            return diff(num, wrt) / den;
        }
        return (diff(num, wrt) * den - num * dden) / power(den, 2);
    }
    case ExprKind::Pow: {
        if (e.exponent() == 0) {
            return Expr();
        }
        const Expr inner = diff(e.arg(), wrt);
        return Expr::constant(static_cast<long long>(e.exponent())) * power(e.arg(), e.exponent() - 1) * inner;
    }
    case ExprKind::Sin: return Expr::cos(e.arg()) * diff(e.arg(), wrt);
    case ExprKind::Cos: return -(Expr::sin(e.arg()) * diff(e.arg(), wrt));
    case ExprKind::Exp: return e * diff(e.arg(), wrt);
    }
    return Expr();
}

// ---------------------------------------------------------------------------
// Substitution

Expr substitute(const Expr& e, const Binding& b) {
    if (b.empty()) {
        return e;
    }
    switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::SymConst: return e;
    case ExprKind::Var: {
        auto it = b.find(e.name());
        return it == b.end() ? e : it->second;
    }
    case ExprKind::Time: {
        auto it = b.find(kTimeName);
        return it == b.end() ? e : it->second;
    }
    case ExprKind::Neg: return Expr::neg(substitute(e.arg(), b));
    case ExprKind::Add: return Expr::add(substitute(e.lhs(), b), substitute(e.rhs(), b));
    case ExprKind::Sub: return Expr::sub(substitute(e.lhs(), b), substitute(e.rhs(), b));
    case ExprKind::Mul: return Expr::mul(substitute(e.lhs(), b), substitute(e.rhs(), b));
    case ExprKind::Div: return Expr::div(substitute(e.lhs(), b), substitute(e.rhs(), b));
    case ExprKind::Pow: return Expr::pow(substitute(e.arg(), b), e.exponent());
    case ExprKind::Sin: return Expr::sin(substitute(e.arg(), b));
    case ExprKind::Cos: return Expr::cos(substitute(e.arg(), b));
    case ExprKind::Exp: return Expr::exp(substitute(e.arg(), b));
    }
    return e;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) {
        return base;
    }
    for (int k = 1;; ++k) {
        std::string candidate = base + std::to_string(k);
        if (!taken.count(candidate)) {
            return candidate;
        }
    }
}

Pred substitute(const Pred& p, const Binding& b) {
    if (b.empty()) {
        return p;
    }
    switch (p.kind()) {
    case PredKind::True:
    case PredKind::False: return p;
    case PredKind::Cmp: return Pred::cmp(p.op(), substitute(p.lhs(), b), substitute(p.rhs(), b));
    case PredKind::And: return Pred::conj(substitute(p.left(), b), substitute(p.right(), b));
    case PredKind::Or: return Pred::disj(substitute(p.left(), b), substitute(p.right(), b));
    case PredKind::Implies: return Pred::implies(substitute(p.left(), b), substitute(p.right(), b));
    case PredKind::Not: return Pred::negation(substitute(p.left(), b));
    case PredKind::Forall:
    case PredKind::Exists: {
        std::optional<Expr> lo, hi;
        if (p.lower()) {
            lo = substitute(*p.lower(), b);
        }
        if (p.upper()) {
            hi = substitute(*p.upper(), b);
        }
        Binding inner = b;
        inner.erase(p.bound());
        std::string var = p.bound();
        // Rename the binder if some replacement mentions it.
        std::set<std::string> incoming;
        for (const auto& [name, repl] : inner) {
            auto fn = free_names(repl);
            incoming.insert(fn.begin(), fn.end());
        }
        if (!inner.empty() && incoming.count(var)) {
            std::set<std::string> taken = incoming;
            auto body_names = free_names(p.body());
            taken.insert(body_names.begin(), body_names.end());
            for (const auto& [name, repl] : inner) {
                taken.insert(name);
            }
            var = fresh_name(p.bound(), taken);
            inner[p.bound()] = Expr::var(var);
        }
        Pred body = substitute(p.body(), inner);
        return p.kind() == PredKind::Forall ? Pred::forall(var, lo, hi, body) : Pred::exists(var, lo, hi, body);
    }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace {

Pred nnf_signed(const Pred& p, bool negated) {
    switch (p.kind()) {
    case PredKind::True: return negated ? Pred::falsity() : p;
    case PredKind::False: return negated ? Pred::truth() : p;
    case PredKind::Cmp: return negated ? Pred::cmp(negate(p.op()), p.lhs(), p.rhs()) : p;
    case PredKind::Not: return nnf_signed(p.left(), !negated);
    case PredKind::And:
        return negated ? Pred::disj(nnf_signed(p.left(), true), nnf_signed(p.right(), true))
                       : Pred::conj(nnf_signed(p.left(), false), nnf_signed(p.right(), false));
    case PredKind::Or:
        return negated ? Pred::conj(nnf_signed(p.left(), true), nnf_signed(p.right(), true))
                       : Pred::disj(nnf_signed(p.left(), false), nnf_signed(p.right(), false));
    case PredKind::Implies:
        return negated ? Pred::conj(nnf_signed(p.left(), false), nnf_signed(p.right(), true))
                       : Pred::disj(nnf_signed(p.left(), true), nnf_signed(p.right(), false));
    case PredKind::Forall:
    case PredKind::Exists: {
        const bool universal = (p.kind() == PredKind::Forall) != negated;
        Pred body = nnf_signed(p.body(), negated);
        return universal ? Pred::forall(p.bound(), p.lower(), p.upper(), body)
                         : Pred::exists(p.bound(), p.lower(), p.upper(), body);
    }
    }
    return p;
}

}  // namespace

Pred nnf(const Pred& p) { return nnf_signed(p, false); }

}  // namespace hwl
