// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#include "hwl/syntax.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hwl/normal_form.hpp"

namespace hwl {

ParseError::ParseError(const std::string& msg, int line, int column, const std::string& file)
    : Error((file.empty() ? "" : file + ": ") + "line " + std::to_string(line) + ", column " + std::to_string(column) +
            ": " + msg),
      message_(msg),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Rational number = 0;
    int line = 1;
    int col = 1;
};

const std::set<std::string> kKeywords = {
    "skip",  "abort", "if",     "then",    "else", "loop",   "inv",   "evolve", "evol",   "on",
    "query", "flow",  "dinv",   "true",    "false", "forall", "exists", "in",    "R",      "inf",
    "sin",   "cos",   "exp",    "problem", "vars", "consts", "assume", "pre",   "post",   "program",
    "lemma", "config"};

const std::set<std::string> kSectionKeywords = {"problem", "vars",    "consts", "assume", "pre",
                                                "post",    "program", "lemma",  "config"};

Rational decimal_value(const std::string& s) {
    using boost::multiprecision::cpp_int;
    cpp_int mantissa = 0;
    int scale = 0;
    size_t i = 0;
    bool frac = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '.') {
            frac = true;
            continue;
        }
        if (c == 'e' || c == 'E') {
            break;
        }
        mantissa = mantissa * 10 + (c - '0');
        if (frac) {
            --scale;
        }
    }
    if (i < s.size()) {
        scale += std::stoi(s.substr(i + 1));
    }
    Rational r(mantissa);
    cpp_int ten = 1;
    for (int k = 0; k < std::abs(scale); ++k) {
        ten *= 10;
    }
    return scale >= 0 ? r * Rational(ten) : r / Rational(ten);
}

std::vector<Token> lex(std::string_view text) {
    static const char* kSymbols[] = {":=", "!=", "<=", ">=", "++", "->", "=>", "&&", "||", "==", "'", "=", "<",
                                     ">",  "+",  "-",  "*",  "/",  "^",  "(",  ")",  "[",  "]",  ",", ";", ".",
                                     "&",  "|",  "!",  "?",  ":"};
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
            while (i < text.size() && text[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token tok;
        tok.line = line;
        tok.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(i, j - i));
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                    ++j;
                }
            }
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
                    ++k;
                }
                if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
                    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
                        ++k;
                    }
                    j = k;
                }
            }
            tok.kind = Tok::Number;
            tok.text = std::string(text.substr(i, j - i));
            tok.number = decimal_value(tok.text);
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        bool matched = false;
        for (const char* sym : kSymbols) {
            const std::string_view sv(sym);
            if (text.substr(i, sv.size()) == sv) {
                tok.kind = Tok::Sym;
                tok.text = std::string(sv);
                if (tok.text == "&&") {
                    tok.text = "&";
                } else if (tok.text == "||") {
                    tok.text = "|";
                } else if (tok.text == "==") {
                    tok.text = "=";
                }
                advance(sv.size());
                out.push_back(std::move(tok));
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    Token end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

class Parser {
  public:
    Parser(std::string_view text, SymbolTable syms) : toks_(lex(text)), syms_(std::move(syms)) {}

    // --- token helpers -----------------------------------------------------
    const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool is_sym(const char* s, size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
    bool is_kw(const char* s, size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }
    bool at_end() const { return peek().kind == Tok::End; }
    bool accept_sym(const char* s) {
        if (is_sym(s)) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_kw(const char* s) {
        if (is_kw(s)) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + " at " + got, t.line, t.col);
    }

    void expect_sym(const char* s) {
        if (!accept_sym(s)) {
            fail(std::string("expected '") + s + "'");
        }
    }
    void expect_kw(const char* s) {
        if (!accept_kw(s)) {
            fail(std::string("expected '") + s + "'");
        }
    }
    void expect_end() {
        if (!at_end()) {
            fail("unexpected trailing input");
        }
    }

    std::string plain_ident(const char* what) {
        const Token& t = peek();
        if (t.kind != Tok::Ident || kKeywords.count(t.text)) {
            fail(std::string("expected ") + what);
        }
        ++pos_;
        return t.text;
    }

    std::string variable(const char* what) {
        const Token t = peek();
        std::string name = plain_ident(what);
        if (syms_.strict && !syms_.vars.count(name)) {
            throw ParseError("'" + name + "' is not a declared variable", t.line, t.col);
        }
        return name;
    }

    SymbolTable& symbols() { return syms_; }

    // --- expressions -------------------------------------------------------
    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept_sym("+")) {
                e = Expr::add(e, term());
            } else if (is_sym("-")) {
                ++pos_;
                e = Expr::sub(e, term());
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept_sym("*")) {
                e = Expr::mul(e, unary());
            } else if (is_sym("/")) {
                const Token at = peek();
                ++pos_;
                const bool literal_lhs = e.is_const() && last_was_literal_;
                Expr rhs = unary();
                const bool literal_rhs = rhs.is_const() && last_was_literal_;
                if (rhs.is_const(0)) {
                    throw ParseError("division by literal zero", at.line, at.col);
                }
                if (literal_lhs && literal_rhs) {
                    e = Expr::constant(e.value() / rhs.value());
                    last_was_literal_ = true;
                    continue;
                }
                e = Expr::div(e, rhs);
            } else {
                return e;
            }
            last_was_literal_ = false;
        }
    }

    Expr unary() {
        if (is_sym("-")) {
            ++pos_;
            if (peek().kind == Tok::Number && !is_sym("^", 1)) {
                Rational v = -peek().number;
                ++pos_;
                last_was_literal_ = true;
                return Expr::constant(v);
            }
            Expr a = unary();
            last_was_literal_ = false;
            return Expr::neg(a);
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (accept_sym("^")) {
            const Token& t = peek();
            if (t.kind != Tok::Number || denominator(t.number) != 1 || t.number < 0 || t.number > 1000) {
                fail("expected a natural exponent");
            }
            const auto n = numerator(t.number).convert_to<unsigned>();
            ++pos_;
            last_was_literal_ = false;
            return Expr::pow(base, n);
        }
        return base;
    }

    Expr atom() {
        const Token t = peek();
        last_was_literal_ = false;
        if (t.kind == Tok::Number) {
            ++pos_;
            last_was_literal_ = true;
            return Expr::constant(t.number);
        }
        if (accept_sym("(")) {
            Expr e = expr();
            expect_sym(")");
            last_was_literal_ = e.is_const();
            return e;
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "sin" || t.text == "cos" || t.text == "exp") {
                ++pos_;
                expect_sym("(");
                Expr a = expr();
                expect_sym(")");
                last_was_literal_ = false;
                return t.text == "sin" ? Expr::sin(a) : t.text == "cos" ? Expr::cos(a) : Expr::exp(a);
            }
            if (kKeywords.count(t.text)) {
                fail("expected an expression");
            }
            ++pos_;
            return resolve(t);
        }
        fail("expected an expression");
    }

    Expr resolve(const Token& t) {
        const std::string& n = t.text;
        for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
            if (*it == n) {
                return Expr::var(n);
            }
        }
        if (syms_.vars.count(n)) {
            return Expr::var(n);
        }
        if (syms_.consts.count(n)) {
            return Expr::sym(n);
        }
        if (n == kTimeName) {
            return Expr::time();
        }
        if (syms_.strict) {
            throw ParseError("unknown identifier '" + n + "'", t.line, t.col);
        }
        return Expr::var(n);
    }

    // --- predicates --------------------------------------------------------
    Pred pred() { return implication(); }

    Pred implication() {
        Pred a = disjunction();
        if (accept_sym("->")) {
            return Pred::implies(a, implication());
        }
        return a;
    }

    Pred disjunction() {
        Pred a = conjunction();
        while (accept_sym("|")) {
            a = Pred::disj(a, conjunction());
        }
        return a;
    }

    Pred conjunction() {
        Pred a = unary_pred();
        while (accept_sym("&")) {
            a = Pred::conj(a, unary_pred());
        }
        return a;
    }

    Pred unary_pred() {
        if (accept_sym("!")) {
            return Pred::negation(unary_pred());
        }
        if (is_kw("forall") || is_kw("exists")) {
            const bool universal = is_kw("forall");
            ++pos_;
            std::string var = plain_ident("a bound variable");
            expect_kw("in");
            auto [lo, hi] = quantifier_range();
            expect_sym(".");
            bound_.push_back(var);
            Pred body = pred();
            bound_.pop_back();
            return universal ? Pred::forall(var, lo, hi, body) : Pred::exists(var, lo, hi, body);
        }
        if (accept_kw("true")) {
            return Pred::truth();
        }
        if (accept_kw("false")) {
            return Pred::falsity();
        }
        if (is_sym("(")) {
            const size_t save = pos_;
            try {
                ++pos_;
                Pred p = pred();
                expect_sym(")");
                if (!starts_arith_continuation()) {
                    return p;
                }
            } catch (const ParseError&) {
            }
            pos_ = save;
        }
        return comparison();
    }

    bool starts_arith_continuation() const {
        static const char* ops[] = {"+", "-", "*", "/", "^", "=", "!=", "<", "<=", ">", ">="};
        for (const char* op : ops) {
            if (is_sym(op)) {
                return true;
            }
        }
        return false;
    }

    std::optional<CmpOp> cmp_op() {
        static const std::pair<const char*, CmpOp> ops[] = {{"=", CmpOp::Eq},  {"!=", CmpOp::Ne}, {"<=", CmpOp::Le},
                                                            {">=", CmpOp::Ge}, {"<", CmpOp::Lt},  {">", CmpOp::Gt}};
        for (const auto& [s, op] : ops) {
            if (accept_sym(s)) {
                return op;
            }
        }
        return std::nullopt;
    }

    Pred comparison() {
        Expr a = expr();
        auto op = cmp_op();
        if (!op) {
            fail("expected a comparison operator");
        }
        Expr b = expr();
        Pred p = Pred::cmp(*op, a, b);
        // chains such as 0 <= x <= h
        while (auto next = cmp_op()) {
            Expr c = expr();
            p = Pred::conj(p, Pred::cmp(*next, b, c));
            b = c;
        }
        return p;
    }

    std::pair<std::optional<Expr>, std::optional<Expr>> quantifier_range() {
        if (accept_kw("R")) {
            return {std::nullopt, std::nullopt};
        }
        std::optional<Expr> lo, hi;
        if (accept_sym("(")) {
            expect_sym("-");
            expect_kw("inf");
        } else {
            expect_sym("[");
            lo = expr();
        }
        expect_sym(",");
        if (accept_kw("inf")) {
            expect_sym(")");
        } else {
            hi = expr();
            expect_sym("]");
        }
        return {lo, hi};
    }

    // --- programs ----------------------------------------------------------
    Program program() {
        std::vector<Program> branches{sequence()};
        while (accept_sym("++")) {
            branches.push_back(sequence());
        }
        return branches.size() == 1 ? branches.front() : Program::choice(std::move(branches));
    }

    bool starts_primitive(size_t k) const {
        const Token& t = peek(k);
        if (t.kind == Tok::Sym) {
            return t.text == "?" || t.text == "(";
        }
        if (t.kind != Tok::Ident) {
            return false;
        }
        static const std::set<std::string> starters = {"skip", "abort", "if", "loop", "evolve", "evol"};
        if (starters.count(t.text)) {
            return true;
        }
        return !kKeywords.count(t.text) && is_sym(":=", k + 1);
    }

    Program sequence() {
        std::vector<Program> items{primitive()};
        while (is_sym(";") && starts_primitive(1)) {
            ++pos_;
            items.push_back(primitive());
        }
        return items.size() == 1 ? items.front() : Program::seq(std::move(items));
    }

    Program primitive() {
        if (accept_kw("skip")) {
            return Program::skip();
        }
        if (accept_kw("abort")) {
            return Program::abort();
        }
        if (accept_sym("?")) {
            return Program::test(pred());
        }
        if (accept_sym("(")) {
            if (accept_sym(")")) {
                return Program::seq({});
            }
            Program p = program();
            expect_sym(")");
            return p;
        }
        if (accept_kw("if")) {
            Pred c = pred();
            expect_kw("then");
            Program a = primitive();
            expect_kw("else");
            Program b = primitive();
            return Program::ite(c, a, b);
        }
        if (accept_kw("loop")) {
            Program body = program();
            expect_kw("inv");
            return Program::loop(body, pred());
        }
        if (accept_kw("evolve")) {
            return evolve();
        }
        if (accept_kw("evol")) {
            return evol();
        }
        if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
            std::string v = variable("a variable");
            expect_sym(":=");
            return Program::assign(v, expr());
        }
        fail("expected a program");
    }

    FieldMap assignments() {
        FieldMap m;
        do {
            const Token t = peek();
            std::string v = variable("a variable");
            expect_sym(":=");
            if (!m.emplace(v, expr()).second) {
                throw ParseError("duplicate assignment to '" + v + "'", t.line, t.col);
            }
        } while (accept_sym(","));
        return m;
    }

    Rational constant_bound() {
        const Token t = peek();
        Expr e = expr();
        Polynomial p = normalize(e);
        if (!p.is_constant()) {
            throw ParseError("time bounds must be numeric constants", t.line, t.col);
        }
        return p.constant_term();
    }

    TimeInterval time_interval() {
        const Token t = peek();
        if (accept_kw("R")) {
            return TimeInterval::all_reals();
        }
        expect_sym("[");
        Rational lo = constant_bound();
        expect_sym(",");
        if (accept_kw("inf")) {
            expect_sym(")");
            if (lo != 0) {
                throw ParseError("unbounded time domains start at 0", t.line, t.col);
            }
            return TimeInterval::non_negative();
        }
        Rational hi = constant_bound();
        expect_sym("]");
        try {
            return TimeInterval::closed(lo, hi);
        } catch (const Error& e) {
            throw ParseError(e.what(), t.line, t.col);
        }
    }

    TimeDomain time_domain() {
        TimeDomain d;
        d.domain = accept_kw("on") ? time_interval() : TimeInterval::non_negative();
        if (accept_kw("query")) {
            d.query = time_interval();
        }
        return d;
    }

    Program evolve() {
        const Token start = peek();
        EvolveCommand cmd;
        do {
            const Token t = peek();
            std::string v = variable("a variable");
            expect_sym("'");
            expect_sym("=");
            if (!cmd.field.components.emplace(v, expr()).second) {
                throw ParseError("duplicate ODE for '" + v + "'", t.line, t.col);
            }
        } while (accept_sym(","));
        cmd.guard = accept_sym("&") ? pred() : Pred::truth();
        cmd.dom = time_domain();
        if (accept_kw("flow")) {
            Flow f;
            f.components = assignments();
            f.domain = cmd.dom;
            cmd.flow = f;
        }
        if (accept_kw("dinv")) {
            cmd.dinv = pred();
        }
        try {
            return Program::evolve(std::move(cmd));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), start.line, start.col);
        }
    }

    Program evol() {
        const Token start = peek();
        EvolFlowCommand cmd;
        cmd.flow.components = assignments();
        cmd.guard = accept_sym("&") ? pred() : Pred::truth();
        cmd.dom = time_domain();
        cmd.flow.domain = cmd.dom;
        try {
            return Program::evol(std::move(cmd));
        } catch (const Error& e) {
            throw ParseError(e.what(), start.line, start.col);
        }
    }

    // --- spec files --------------------------------------------------------
    bool at_section() const { return peek().kind == Tok::Ident && kSectionKeywords.count(peek().text); }

    double numeric_constant() {
        const Token t = peek();
        Polynomial p = normalize(expr());
        if (!p.is_constant()) {
            throw ParseError("expected a numeric constant", t.line, t.col);
        }
        return p.constant_term().convert_to<double>();
    }

    SpecFile spec_file() {
        SpecFile f;
        syms_.strict = true;
        bool have_pre = false, have_post = false, have_program = false;
        std::set<std::string> lemma_names;
        auto declare = [&](const Token& t, const std::string& name) {
            if (name == kTimeName) {
                throw ParseError("'t' is reserved for time", t.line, t.col);
            }
            if (syms_.vars.count(name) || syms_.consts.count(name)) {
                throw ParseError("'" + name + "' declared twice", t.line, t.col);
            }
        };
        while (!at_end()) {
            const Token t = peek();
            if (accept_kw("problem")) {
                f.problem = plain_ident("a problem name");
            } else if (accept_kw("vars")) {
                do {
                    const Token v = peek();
                    std::string name = plain_ident("a variable name");
                    declare(v, name);
                    syms_.vars.insert(name);
                    f.spec.vars.push_back(name);
                    accept_sym(",");
                } while (peek().kind == Tok::Ident && !kKeywords.count(peek().text));
            } else if (accept_kw("consts")) {
                while (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
                    const Token c = peek();
                    ConstDecl d;
                    d.name = plain_ident("a constant name");
                    declare(c, d.name);
                    if (accept_sym("[")) {
                        const double lo = numeric_constant();
                        expect_sym(",");
                        const double hi = numeric_constant();
                        expect_sym("]");
                        if (!(lo <= hi)) {
                            throw ParseError("empty range for '" + d.name + "'", c.line, c.col);
                        }
                        d.range = std::make_pair(lo, hi);
                    }
                    syms_.consts.insert(d.name);
                    f.spec.consts.push_back(d);
                    accept_sym(",");
                }
            } else if (accept_kw("assume")) {
                do {
                    const Token a = peek();
                    Pred p = pred();
                    for (const auto& n : free_names(p)) {
                        if (!syms_.consts.count(n)) {
                            throw ParseError("assumptions may only mention constants, found '" + n + "'", a.line,
                                             a.col);
                        }
                    }
                    f.spec.assumptions.push_back(p);
                } while (accept_sym(","));
            } else if (accept_kw("pre")) {
                f.spec.pre = pred();
                have_pre = true;
            } else if (accept_kw("post")) {
                f.spec.post = pred();
                have_post = true;
            } else if (accept_kw("program")) {
                f.spec.program = program();
                have_program = true;
            } else if (accept_kw("lemma")) {
                Lemma l;
                const Token n = peek();
                l.name = plain_ident("a lemma name");
                if (!lemma_names.insert(l.name).second) {
                    throw ParseError("duplicate lemma '" + l.name + "'", n.line, n.col);
                }
                expect_sym(":");
                std::vector<Pred> parts{pred()};
                while (accept_sym(",")) {
                    parts.push_back(pred());
                }
                if (accept_sym("=>")) {
                    l.hyps = parts;
                    l.concl = pred();
                } else if (parts.size() == 1) {
                    l.concl = parts.front();
                } else {
                    fail("expected '=>'");
                }
                f.lemmas.push_back(std::move(l));
            } else if (accept_kw("config")) {
                static const std::set<std::string> keys = {"seed",  "trials", "step",         "horizon",
                                                           "fuel",  "eq_tol", "lemma_trials", "refute_trials"};
                do {
                    const Token k = peek();
                    std::string key = plain_ident("a config key");
                    if (!keys.count(key)) {
                        throw ParseError("unknown config key '" + key + "'", k.line, k.col);
                    }
                    expect_sym("=");
                    f.config[key] = numeric_constant();
                } while (accept_sym(","));
            } else {
                fail("expected a section keyword");
            }
            accept_sym(";");
            (void)t;
        }
        if (f.problem.empty()) {
            fail("missing 'problem'");
        }
        if (!have_pre || !have_post || !have_program) {
            fail(std::string("missing '") + (!have_pre ? "pre" : !have_post ? "post" : "program") + "'");
        }
        return f;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    SymbolTable syms_;
    std::vector<std::string> bound_;
    bool last_was_literal_ = false;
};

std::string number_text(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

Expr parse_expr(std::string_view text, const SymbolTable& syms) {
    Parser p(text, syms);
    Expr e = p.expr();
    p.expect_end();
    return e;
}

Pred parse_pred(std::string_view text, const SymbolTable& syms) {
    Parser p(text, syms);
    Pred e = p.pred();
    p.expect_end();
    return e;
}

Program parse_program(std::string_view text, const SymbolTable& syms) {
    Parser p(text, syms);
    Program e = p.program();
    p.expect_end();
    return e;
}

SpecFile parse_spec(std::string_view text) {
    Parser p(text, {});
    return p.spec_file();
}

SpecFile load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_spec(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column(), path);
    }
}

std::string format_spec(const SpecFile& f) {
    std::ostringstream os;
    os << "problem " << f.problem << ";\n";
    os << "vars";
    for (const auto& v : f.spec.vars) {
        os << ' ' << v;
    }
    os << ";\n";
    if (!f.spec.consts.empty()) {
        os << "consts";
        for (const auto& c : f.spec.consts) {
            os << ' ' << c.name;
            if (c.range) {
                os << " [" << number_text(c.range->first) << ", " << number_text(c.range->second) << "]";
            }
        }
        os << ";\n";
    }
    if (!f.spec.assumptions.empty()) {
        os << "assume ";
        for (size_t i = 0; i < f.spec.assumptions.size(); ++i) {
            os << (i ? ", " : "") << to_string(f.spec.assumptions[i]);
        }
        os << ";\n";
    }
    os << "pre " << to_string(f.spec.pre) << ";\n";
    os << "post " << to_string(f.spec.post) << ";\n";
    os << "program\n" << format_program(f.spec.program) << ";\n";
    for (const auto& l : f.lemmas) {
        os << "lemma " << l.name << ": ";
        for (size_t i = 0; i < l.hyps.size(); ++i) {
            os << (i ? ", " : "") << to_string(l.hyps[i]);
        }
        if (!l.hyps.empty()) {
            os << " => ";
        }
        os << to_string(l.concl) << ";\n";
    }
    if (!f.config.empty()) {
        os << "config ";
        bool first = true;
        for (const auto& [k, v] : f.config) {
            os << (first ? "" : ", ") << k << " = " << number_text(v);
            first = false;
        }
        os << ";\n";
    }
    return os.str();
}

}  // namespace hwl
