// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hwl/expr.hpp"

namespace hwl {

/// Subset of {0..n-1}, n <= 64, stored as a bit mask.
class FinitePred {
  public:
    FinitePred(int n, std::uint64_t bits);
    static FinitePred empty(int n) { return {n, 0}; }
    static FinitePred full(int n);
    static FinitePred of(int n, const std::vector<int>& members);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] std::uint64_t bits() const { return bits_; }
    [[nodiscard]] bool contains(int i) const { return (bits_ >> i) & 1U; }

    [[nodiscard]] FinitePred complement() const;
    [[nodiscard]] FinitePred meet(const FinitePred& o) const;
    [[nodiscard]] FinitePred join(const FinitePred& o) const;
    [[nodiscard]] bool leq(const FinitePred& o) const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const FinitePred&, const FinitePred&) = default;

  private:
    int n_;
    std::uint64_t bits_;
};

/// Binary relation on {0..n-1}; row i holds the successors of i.
class FiniteRel {
  public:
    explicit FiniteRel(int n);
    static FiniteRel identity(int n);
    static FiniteRel empty(int n) { return FiniteRel(n); }
    static FiniteRel full(int n);
    static FiniteRel of(int n, const std::vector<std::pair<int, int>>& pairs);
    /// Bit i*n + j of `code` is the pair (i, j); enumerates all relations for n*n <= 64.
    static FiniteRel from_code(int n, std::uint64_t code);
    /// Subidentity {(x, x) | x in P}.
    static FiniteRel test(const FinitePred& p);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] bool at(int i, int j) const { return (rows_[i] >> j) & 1U; }
    void set(int i, int j, bool value = true);
    [[nodiscard]] std::uint64_t row(int i) const { return rows_[i]; }
    [[nodiscard]] bool leq(const FiniteRel& o) const;
    [[nodiscard]] bool is_subidentity() const;
    [[nodiscard]] FinitePred domain_pred() const;  // {x | (x, x) in R}
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const FiniteRel&, const FiniteRel&) = default;

  private:
    int n_;
    std::vector<std::uint64_t> rows_;
};

/// State transformer {0..n-1} -> P({0..n-1}).
class FiniteSta {
  public:
    explicit FiniteSta(int n);  // the constant empty-set map
    static FiniteSta eta(int n);
    static FiniteSta test(const FinitePred& p);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] FinitePred image(int i) const { return {n_, succ_[i]}; }
    void set_image(int i, std::uint64_t bits);
    [[nodiscard]] bool leq(const FiniteSta& o) const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const FiniteSta&, const FiniteSta&) = default;

  private:
    int n_;
    std::vector<std::uint64_t> succ_;
};

// Relations
FiniteRel rel_union(const FiniteRel& r, const FiniteRel& s);
FiniteRel rel_compose(const FiniteRel& r, const FiniteRel& s);
FiniteRel rel_star(const FiniteRel& r);
FiniteRel rel_converse(const FiniteRel& r);
FiniteRel rel_antidomain(const FiniteRel& r);
FiniteRel rel_antirange(const FiniteRel& r);
FinitePred rel_fbox(const FiniteRel& r, const FinitePred& p);
FinitePred rel_fdia(const FiniteRel& r, const FinitePred& p);
FinitePred rel_bdia(const FiniteRel& r, const FinitePred& p);
FinitePred rel_bbox(const FiniteRel& r, const FinitePred& p);

// State transformers
FiniteSta sta_union(const FiniteSta& f, const FiniteSta& g);
FiniteSta sta_kleisli(const FiniteSta& f, const FiniteSta& g);  // x -> union of g y over y in f x
FiniteSta sta_star(const FiniteSta& f);
FiniteSta sta_antidomain(const FiniteSta& f);
FinitePred sta_fbox(const FiniteSta& f, const FinitePred& p);
FinitePred sta_fdia(const FiniteSta& f, const FinitePred& p);
FinitePred sta_bdia(const FiniteSta& f, const FinitePred& p);
FinitePred sta_bbox(const FiniteSta& f, const FinitePred& p);

// The isomorphism between relations and state transformers.
FiniteSta sta_of_rel(const FiniteRel& r);
FiniteRel rel_of_sta(const FiniteSta& f);

// ---------------------------------------------------------------------------
// Law harness

enum class LawModel { Rel, Sta };

struct LawInfo {
    std::string id;
    int relations;   // number of relation / transformer arguments
    int predicates;  // number of predicate arguments
    std::string description;
    bool sound;      // false for the deliberately wrong control laws
};

/// Every registered law, sound ones first.
const std::vector<LawInfo>& law_catalog();

/// Expands ids and group names ("dioid", "star", ...) into law ids. Empty input selects
/// all sound laws. Throws Error on an unknown identifier.
std::vector<std::string> resolve_laws(const std::vector<std::string>& ids);

struct LawMode {
    bool exhaustive = true;
    std::uint64_t seed = 1;
    int trials = 10000;
};

struct LawResult {
    std::string law;
    std::string mode;  // "exhaustive" or "random"
    bool pass = true;
    long long cases = 0;
    std::optional<std::string> counterexample;
};

struct LawReport {
    LawModel model = LawModel::Rel;
    int n = 0;
    std::vector<LawResult> results;
    [[nodiscard]] bool all_pass() const;
};

/// Exhaustive mode is allowed for n <= 2, and for n = 3 when the argument space has at most 2^20 cases.
LawReport check_laws(LawModel model, int n, const std::vector<std::string>& law_ids, const LawMode& mode);

}  // namespace hwl
