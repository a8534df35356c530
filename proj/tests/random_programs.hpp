// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <string>
#include <vector>

#include "hwl/hprog.hpp"
#include "support.hpp"

namespace hwl::test {

/// Random loop-free discrete programs over the store {x, y}.
/// With `closed` set, every assignment maps {-2..2}^2 into itself.
class ProgramGen {
  public:
    ProgramGen(std::uint64_t seed, bool closed) : rng_(seed), closed_(closed) {}

    Pred atom() {
        static const std::vector<std::string> atoms{"x = 0", "y > 0", "x <= y", "x + y != 1", "x*y >= 0",
                                                    "y < -1", "x >= 1", "x = y"};
        return P(atoms[pick(atoms.size())]);
    }

    Pred pred(int depth = 2) {
        if (depth == 0 || pick(3) == 0) {
            return atom();
        }
        switch (pick(3)) {
        case 0: return Pred::conj(pred(depth - 1), pred(depth - 1));
        case 1: return Pred::disj(pred(depth - 1), pred(depth - 1));
        default: return Pred::negation(pred(depth - 1));
        }
    }

    Program assign() {
        static const std::vector<std::pair<std::string, std::string>> closed{
            {"x", "-x"}, {"y", "-y"}, {"x", "y"}, {"y", "x"}, {"x", "0"}, {"y", "1"}, {"x", "-y"}, {"y", "x*x*x - 3*x"}};
        static const std::vector<std::pair<std::string, std::string>> open{
            {"x", "x + 1"}, {"y", "y - 2"}, {"x", "x + y"}, {"y", "2*x - y"}, {"x", "-x"}, {"y", "x*y"}, {"x", "3"}};
        const auto& pool = closed_ ? closed : open;
        const auto& [v, e] = pool[pick(pool.size())];
        return Program::assign(v, E(e));
    }

    Program program(int depth = 3) {
        if (depth == 0) {
            switch (pick(6)) {
            case 0: return Program::skip();
            case 1: return Program::test(pred(1));
            case 2: return pick(4) == 0 ? Program::abort() : assign();
            default: return assign();
            }
        }
        switch (pick(5)) {
        case 0: return Program::seq({program(depth - 1), program(depth - 1)});
        case 1: return Program::choice({program(depth - 1), program(depth - 1)});
        case 2: return Program::ite(pred(1), program(depth - 1), program(depth - 1));
        case 3: return Program::seq({program(depth - 1), program(depth - 1), program(depth - 1)});
        default: return program(0);
        }
    }

  private:
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    std::mt19937_64 rng_;
    bool closed_;
};

/// All stores with x, y in {-2..2}.
inline std::vector<Store> small_stores() {
    std::vector<Store> out;
    for (int x = -2; x <= 2; ++x) {
        for (int y = -2; y <= 2; ++y) {
            out.push_back({{"x", x}, {"y", y}});
        }
    }
    return out;
}

}  // namespace hwl::test
