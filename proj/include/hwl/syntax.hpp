// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hwl/discharge.hpp"
#include "hwl/expr.hpp"
#include "hwl/hprog.hpp"
#include "hwl/vcgen.hpp"

namespace hwl {

class ParseError : public Error {
  public:
    ParseError(const std::string& msg, int line, int column, const std::string& file = {});
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }
    [[nodiscard]] const std::string& message() const { return message_; }

  private:
    std::string message_;
    int line_;
    int column_;
};

/// Resolves identifiers: vars become Var, consts SymConst, `t` the time symbol.
/// With strict = false unknown identifiers are read as variables.
struct SymbolTable {
    std::set<std::string> vars;
    std::set<std::string> consts;
    bool strict = false;
};

Expr parse_expr(std::string_view text, const SymbolTable& syms = {});
Pred parse_pred(std::string_view text, const SymbolTable& syms = {});
Program parse_program(std::string_view text, const SymbolTable& syms = {});

/// One `.hwl` problem.
struct SpecFile {
    std::string problem;
    VerifySpec spec;
    std::vector<Lemma> lemmas;
    std::map<std::string, double> config;
};

SpecFile parse_spec(std::string_view text);
SpecFile load_spec(const std::string& path);
std::string format_spec(const SpecFile& f);

}  // namespace hwl
