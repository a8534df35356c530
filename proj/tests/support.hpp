// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hwl/syntax.hpp"

namespace hwl::test {

inline SymbolTable table(std::set<std::string> consts = {}) {
    SymbolTable t;
    t.consts = std::move(consts);
    return t;
}

inline Expr E(std::string_view s, std::set<std::string> consts = {}) { return parse_expr(s, table(std::move(consts))); }
inline Pred P(std::string_view s, std::set<std::string> consts = {}) { return parse_pred(s, table(std::move(consts))); }

inline Valuation random_valuation(const std::set<std::string>& names, std::mt19937_64& rng, double lo = -3,
                                  double hi = 3) {
    std::uniform_real_distribution<double> d(lo, hi);
    Valuation v;
    for (const auto& n : names) {
        v[n] = d(rng);
    }
    return v;
}

/// Symmetric difference quotient, independent of the symbolic differentiator.
inline double central_diff(const Expr& e, const std::string& w, Valuation v, double h = 1e-5) {
    const double x = v.at(w);
    v[w] = x + h;
    const double up = eval(e, v);
    v[w] = x - h;
    const double down = eval(e, v);
    return (up - down) / (2 * h);
}

inline bool close(double a, double b, double rel) { return std::fabs(a - b) <= rel * (1 + std::max(std::fabs(a), std::fabs(b))); }

/// Expressions exercised by the numeric cross-checks.
inline const std::vector<std::string>& regression_set() {
    static const std::vector<std::string> set{
        "x^2*y + 3*x - 7",
        "sin(x)*cos(y) + exp(x/3)",
        "g*t^2/2 + v*t + x",
        "a5*t^5 + a3*(t^3/c) - a2*exp(t^2) + a1*cos(t) + a0",
        "x*cos(t) + y*sin(t)",
        "(x + 1)^3/(y^2 + 2)",
        "exp(-(x^2))*sin(3*x)",
        "(x*cos(t) + y*sin(t))^2 + (y*cos(t) - x*sin(t))^2",
        "2*(x + 1)*(x - 1) - 2*x^2 + 2",
        "sin(x)^4 + cos(x)^2*sin(x)^2 - x*y/5",
        "-(x - y)^2*cos(x*y)",
        "x/(1 + y^2) - exp(sin(x))",
    };
    return set;
}

}  // namespace hwl::test
