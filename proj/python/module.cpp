// Copyright (c) hybrid-wlp contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings. Reports cross the boundary as JSON text; the package wrapper decodes them.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hwl/report.hpp"

namespace py = pybind11;

namespace {

using Overrides = std::map<std::string, double>;

hwl::SpecFile load(const std::string& text, const std::string& origin) {
    if (origin.empty()) {
        return hwl::parse_spec(text);
    }
    return hwl::load_spec(origin);
}

std::string verify(const std::string& text, const std::string& origin, const Overrides& kv) {
    const auto f = load(text, origin);
    py::gil_scoped_release unlocked;
    return hwl::to_json(hwl::run_verify(f, hwl::resolve_settings(f, kv))).dump();
}

std::string certify(const std::string& text, const std::string& origin, const std::string& only, const Overrides& kv) {
    const auto f = load(text, origin);
    hwl::CertifyFilter filter = hwl::CertifyFilter::All;
    if (only == "flow") {
        filter = hwl::CertifyFilter::FlowOnly;
    } else if (only == "dinv") {
        filter = hwl::CertifyFilter::DinvOnly;
    } else if (!only.empty()) {
        throw hwl::Error("only must be 'flow', 'dinv' or empty, got '" + only + "'");
    }
    py::gil_scoped_release unlocked;
    return hwl::to_json(hwl::run_certify(f, hwl::resolve_settings(f, kv), filter)).dump();
}

std::string falsify(const std::string& text, const std::string& origin, const Overrides& kv) {
    const auto f = load(text, origin);
    const auto s = hwl::resolve_settings(f, kv);
    py::gil_scoped_release unlocked;
    return hwl::to_json(hwl::falsify(f.spec, hwl::make_budget(s)), f.problem, s).dump();
}

std::string laws(const std::string& model, int n, const std::vector<std::string>& ids, bool exhaustive,
                 std::uint64_t seed, int trials) {
    if (model != "rel" && model != "sta") {
        throw hwl::Error("model must be 'rel' or 'sta', got '" + model + "'");
    }
    hwl::LawMode m;
    m.exhaustive = exhaustive;
    m.seed = seed;
    m.trials = trials;
    const auto resolved = hwl::resolve_laws(ids);
    py::gil_scoped_release unlocked;
    return hwl::to_json(hwl::check_laws(model == "rel" ? hwl::LawModel::Rel : hwl::LawModel::Sta, n, resolved, m))
        .dump();
}

py::dict wlp(const std::string& program, const std::string& post, const std::vector<std::string>& consts) {
    hwl::SymbolTable syms;
    syms.consts = {consts.begin(), consts.end()};
    const auto r = hwl::wlp(hwl::parse_program(program, syms), hwl::parse_pred(post, syms));
    py::list obs;
    for (const auto& ob : r.obligations) {
        obs.append(hwl::to_json(ob).dump());
    }
    py::dict d;
    d["pre"] = hwl::to_string(r.pre);
    d["obligations"] = obs;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "hybrid-program verification kernel";

    static py::exception<hwl::Error> error(m, "Error", PyExc_ValueError);
    static py::exception<hwl::ParseError> parse_error(m, "ParseError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const hwl::ParseError& e) {
            PyErr_SetString(parse_error.ptr(), e.what());
        } catch (const hwl::Error& e) {
            PyErr_SetString(error.ptr(), e.what());
        }
    });

    m.def("verify", &verify, py::arg("text"), py::arg("origin") = "", py::arg("settings") = Overrides{});
    m.def("certify", &certify, py::arg("text"), py::arg("origin") = "", py::arg("only") = "",
          py::arg("settings") = Overrides{});
    m.def("falsify", &falsify, py::arg("text"), py::arg("origin") = "", py::arg("settings") = Overrides{});
    m.def("laws", &laws, py::arg("model"), py::arg("n"), py::arg("ids") = std::vector<std::string>{},
          py::arg("exhaustive") = true, py::arg("seed") = 1, py::arg("trials") = 1000);
    m.def("law_ids", [] {
        std::vector<std::string> out;
        for (const auto& l : hwl::law_catalog()) {
            out.push_back(l.id);
        }
        return out;
    });
    m.def("wlp", &wlp, py::arg("program"), py::arg("post"), py::arg("consts") = std::vector<std::string>{});
    m.def("format", [](const std::string& text) { return hwl::format_spec(hwl::parse_spec(text)); }, py::arg("text"));
    m.attr("__version__") = "0.1.0";
}
