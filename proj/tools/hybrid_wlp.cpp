// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
//
// hybrid-wlp: verify | certify | falsify | laws | fmt

#include <CLI11.hpp>
#include <iostream>

#include "hwl/report.hpp"

namespace {

struct Common {
    std::string file;
    bool json = false;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> step;
    std::optional<double> horizon;

    void attach(CLI::App* app, bool with_file = true) {
        if (with_file) {
            app->add_option("file", file, "problem file (.hwl)")->required()->check(CLI::ExistingFile);
        }
        app->add_flag("--json", json, "emit a JSON report");
        app->add_option("--seed", seed, "random seed");
        app->add_option("--trials", trials, "sampling budget");
        app->add_option("--step", step, "time step for numeric evolution");
        app->add_option("--horizon", horizon, "time bound for numeric evolution");
    }

    [[nodiscard]] std::map<std::string, double> overrides() const {
        std::map<std::string, double> kv;
        if (seed) {
            kv["seed"] = static_cast<double>(*seed);
        }
        if (trials) {
            kv["trials"] = *trials;
        }
        if (step) {
            kv["step"] = *step;
        }
        if (horizon) {
            kv["horizon"] = *horizon;
        }
        return kv;
    }
};

int print_report(const hwl::VerifyReport& r, bool json) {
    if (json) {
        std::cout << hwl::to_json(r).dump(2) << "\n";
    } else {
        std::cout << hwl::render_text(r);
    }
    return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weakest liberal preconditions for hybrid programs"};
    app.require_subcommand(1);

    Common verify_opts, certify_opts, falsify_opts, laws_opts;
    auto* verify = app.add_subcommand("verify", "generate and discharge verification conditions");
    verify_opts.attach(verify);

    auto* certify = app.add_subcommand("certify", "check flow certificates and differential invariants");
    certify_opts.attach(certify);
    bool flow_only = false, dinv_only = false;
    auto* fo = certify->add_flag("--flow-only", flow_only, "only flow certificates");
    certify->add_flag("--dinv-only", dinv_only, "only differential invariants")->excludes(fo);

    auto* falsify = app.add_subcommand("falsify", "search for a counterexample by simulation");
    falsify_opts.attach(falsify);

    auto* laws = app.add_subcommand("laws", "check algebraic laws on finite models");
    laws_opts.attach(laws, false);
    std::string model = "rel", mode = "exhaustive";
    int n = 2;
    std::vector<std::string> law_ids;
    laws->add_option("--model", model, "rel or sta")->check(CLI::IsMember({"rel", "sta"}));
    laws->add_option("--n", n, "number of states")->check(CLI::Range(1, 8));
    laws->add_option("--mode", mode, "exhaustive or random")->check(CLI::IsMember({"exhaustive", "random"}));
    laws->add_option("--law", law_ids, "law ids or groups (default: all sound laws)");
    bool list = false;
    laws->add_flag("--list", list, "list the law catalog");

    auto* fmt = app.add_subcommand("fmt", "pretty-print a problem file");
    std::string fmt_file;
    fmt->add_option("file", fmt_file, "problem file (.hwl)")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;  // help and version exit 0, usage errors 3
    }

    try {
        if (verify->parsed()) {
            const auto f = hwl::load_spec(verify_opts.file);
            const auto s = hwl::resolve_settings(f, verify_opts.overrides());
            return print_report(hwl::run_verify(f, s), verify_opts.json);
        }
        if (certify->parsed()) {
            const auto f = hwl::load_spec(certify_opts.file);
            const auto s = hwl::resolve_settings(f, certify_opts.overrides());
            const auto filter = flow_only   ? hwl::CertifyFilter::FlowOnly
                                : dinv_only ? hwl::CertifyFilter::DinvOnly
                                            : hwl::CertifyFilter::All;
            const auto r = hwl::run_certify(f, s, filter);
            if (r.results.empty()) {
                std::cerr << "no flow certificates or differential invariants in " << certify_opts.file << "\n";
            }
            return print_report(r, certify_opts.json);
        }
        if (falsify->parsed()) {
            const auto f = hwl::load_spec(falsify_opts.file);
            const auto s = hwl::resolve_settings(f, falsify_opts.overrides());
            const auto cx = hwl::falsify(f.spec, hwl::make_budget(s));
            if (falsify_opts.json) {
                std::cout << hwl::to_json(cx, f.problem, s).dump(2) << "\n";
            } else if (cx) {
                std::cout << "counterexample at trial " << cx->trial << "\n";
                auto show = [](const char* label, const hwl::Valuation& v) {
                    std::cout << "  " << label << ":";
                    for (const auto& [k, x] : v) {
                        std::cout << " " << k << "=" << x;
                    }
                    std::cout << "\n";
                };
                show("constants", cx->constants);
                show("initial", cx->initial);
                show("violating", cx->violating);
                if (cx->incomplete) {
                    std::cout << "  (run was truncated by the fuel or state caps)\n";
                }
            } else {
                std::cout << "no counterexample in " << s.trials << " trials\n";
            }
            return cx ? 2 : 0;
        }
        if (laws->parsed()) {
            if (list) {
                for (const auto& l : hwl::law_catalog()) {
                    std::cout << l.id << (l.sound ? "" : " (unsound control)") << "  " << l.description << "\n";
                }
                return 0;
            }
            hwl::LawMode m;
            m.exhaustive = mode == "exhaustive";
            if (laws_opts.seed) {
                m.seed = *laws_opts.seed;
            }
            if (laws_opts.trials) {
                m.trials = *laws_opts.trials;
            }
            const auto rep = hwl::check_laws(model == "rel" ? hwl::LawModel::Rel : hwl::LawModel::Sta, n,
                                             hwl::resolve_laws(law_ids), m);
            if (laws_opts.json) {
                std::cout << hwl::to_json(rep).dump(2) << "\n";
            } else {
                for (const auto& r : rep.results) {
                    std::cout << (r.pass ? "pass " : "FAIL ") << r.law << " (" << r.mode << ", " << r.cases
                              << " cases)";
                    if (r.counterexample) {
                        std::cout << ": " << *r.counterexample;
                    }
                    std::cout << "\n";
                }
            }
            return rep.all_pass() ? 0 : 2;  // a failing law comes with a counterexample
        }
        if (fmt->parsed()) {
            std::cout << hwl::format_spec(hwl::load_spec(fmt_file));
            return 0;
        }
    } catch (const hwl::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const hwl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
