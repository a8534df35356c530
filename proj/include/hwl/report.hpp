// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hwl/algebra.hpp"
#include "hwl/discharge.hpp"
#include "hwl/odecert.hpp"
#include "hwl/syntax.hpp"
#include "hwl/vcgen.hpp"

namespace hwl {

/// Budgets and tolerances shared by the commands. Keys match the `config` section of a spec file.
struct Settings {
    std::uint64_t seed = 1;
    int trials = 1000;  // falsifier trials
    double step = 0.01;
    double horizon = 5.0;
    int fuel = 4;
    double eq_tol = 1e-6;
    int lemma_trials = 10000;
    int refute_trials = 2000;

    /// Applies key/value overrides; throws Error on an unknown key.
    void apply(const std::map<std::string, double>& kv);
};

/// Defaults, then the file's config block, then `cli` overrides.
Settings resolve_settings(const SpecFile& f, const std::map<std::string, double>& cli = {});

struct ObligationResult {
    Obligation obligation;
    Verdict verdict;
    std::optional<FlowCertificate> certificate;
    std::optional<DiffInvariantReport> invariant;
};

struct VerifyReport {
    std::string problem;
    Settings settings;
    std::vector<LemmaDB::Entry> lemmas;
    std::vector<ObligationResult> results;

    [[nodiscard]] int count(VerdictKind k) const;
    /// 0 when every obligation is proved, 2 if any is refuted, 1 otherwise.
    [[nodiscard]] int exit_code() const;
};

LemmaDB build_lemmas(const SpecFile& f, const Settings& s);
Ranges const_ranges(const VerifySpec& spec);

/// Routes each generated obligation to the matching checker.
ObligationResult check_obligation(const Obligation& ob, const LemmaDB& db, const Settings& s, const Ranges& ranges);
VerifyReport run_verify(const SpecFile& f, const Settings& s);

enum class CertifyFilter { All, FlowOnly, DinvOnly };
/// Only the flow-certificate and differential-invariant obligations of the program.
VerifyReport run_certify(const SpecFile& f, const Settings& s, CertifyFilter filter = CertifyFilter::All);

FalsifyBudget make_budget(const Settings& s);

// JSON views
nlohmann::json to_json(const Valuation& v);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const Obligation& ob);
nlohmann::json to_json(const FlowCertificate& c);
nlohmann::json to_json(const DiffInvariantReport& r);
nlohmann::json to_json(const VerifyReport& r);
nlohmann::json to_json(const std::optional<Counterexample>& cx, const std::string& problem, const Settings& s);
nlohmann::json to_json(const LawReport& r);

/// Plain-text rendering of a verification report.
std::string render_text(const VerifyReport& r);

}  // namespace hwl
