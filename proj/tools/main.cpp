// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0
//
// fluxdec command-line front end. Talks to the shared library exclusively
// through the public C API; all physics lives behind it.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fluxdec/fluxdec.h"

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
    std::string output_dir;
};

int fail(fluxdec_status st, const std::string& context) {
    std::cerr << "fluxdec: " << context << ": " << fluxdec_last_error() << "\n";
    return static_cast<int>(st);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Loads the config, applies --set overrides, builds the model.
int make_model(const CommonOpts& opts, fluxdec_model** model) {
    fluxdec_config* cfg = nullptr;
    fluxdec_status st = fluxdec_config_load(opts.config_path.c_str(), &cfg);
    if (st != FLUXDEC_OK) return fail(st, "loading config");
    for (const auto& ov : opts.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::cerr << "fluxdec: --set expects key=value, got '" << ov << "'\n";
            fluxdec_config_free(cfg);
            return static_cast<int>(FLUXDEC_ERR_CONFIG);
        }
        st = fluxdec_config_override(cfg, ov.substr(0, eq).c_str(),
                                     ov.substr(eq + 1).c_str());
        if (st != FLUXDEC_OK) {
            fluxdec_config_free(cfg);
            return fail(st, "applying override '" + ov + "'");
        }
    }
    st = fluxdec_model_create(cfg, model);
    fluxdec_config_free(cfg);
    if (st != FLUXDEC_OK) return fail(st, "validating config");
    return 0;
}

struct ModelGuard {
    fluxdec_model* m = nullptr;
    ~ModelGuard() { fluxdec_model_free(m); }
};

struct StringGuard {
    char* s = nullptr;
    ~StringGuard() { fluxdec_string_free(s); }
};

int emit(const CommonOpts& opts, const std::string& filename, const std::string& content,
         bool also_stdout) {
    if (!opts.output_dir.empty()) {
        fs::create_directories(opts.output_dir);
        write_file(fs::path(opts.output_dir) / filename, content);
    } else if (also_stdout) {
        std::cout << content;
    }
    return 0;
}

int cmd_budget(const CommonOpts& opts) {
    ModelGuard model;
    if (int rc = make_model(opts, &model.m)) return rc;
    fluxdec_budget_result* result = nullptr;
    const fluxdec_status st = fluxdec_budget(model.m, &result);
    if (st != FLUXDEC_OK) return fail(st, "budget");
    std::cout << fluxdec_budget_result_text(result);
    if (!opts.output_dir.empty()) {
        fs::create_directories(opts.output_dir);
        write_file(fs::path(opts.output_dir) / "budget.json",
                   std::string(fluxdec_budget_result_json(result)) + "\n");
        write_file(fs::path(opts.output_dir) / "envelope_ramsey.csv",
                   fluxdec_budget_result_envelope_csv(result, 0));
        write_file(fs::path(opts.output_dir) / "envelope_echo.csv",
                   fluxdec_budget_result_envelope_csv(result, 1));
    } else {
        std::cout << "\n" << fluxdec_budget_result_json(result) << "\n";
    }
    fluxdec_budget_result_free(result);
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    ModelGuard model;
    if (int rc = make_model(opts, &model.m)) return rc;
    StringGuard csv;
    const fluxdec_status st = fluxdec_sweep_csv(model.m, &csv.s);
    if (st != FLUXDEC_OK) return fail(st, "sweep");
    return emit(opts, "sweep.csv", csv.s, true);
}

int cmd_anneal(const CommonOpts& opts) {
    ModelGuard model;
    if (int rc = make_model(opts, &model.m)) return rc;
    StringGuard csv;
    const fluxdec_status st = fluxdec_anneal_csv(model.m, &csv.s);
    if (st != FLUXDEC_OK) return fail(st, "anneal");
    return emit(opts, "anneal.csv", csv.s, true);
}

int cmd_validate(const CommonOpts& opts) {
    ModelGuard model;
    if (int rc = make_model(opts, &model.m)) return rc;
    StringGuard ramsey, echo, summary;
    int pass = 0;
    const fluxdec_status st =
        fluxdec_validate(model.m, &ramsey.s, &echo.s, &summary.s, &pass);
    if (st != FLUXDEC_OK) return fail(st, "validate");
    if (!opts.output_dir.empty()) {
        fs::create_directories(opts.output_dir);
        write_file(fs::path(opts.output_dir) / "validate_ramsey.csv", ramsey.s);
        write_file(fs::path(opts.output_dir) / "validate_echo.csv", echo.s);
        write_file(fs::path(opts.output_dir) / "validate_summary.json",
                   std::string(summary.s) + "\n");
    }
    std::cout << summary.s << "\n";
    std::cout << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : static_cast<int>(FLUXDEC_ERR_VALIDATION);
}

int cmd_fit(const CommonOpts& opts, const std::string& kind,
            const std::string& data_path) {
    std::string csv;
    try {
        csv = read_file(data_path);
    } catch (const std::exception& e) {
        std::cerr << "fluxdec: " << e.what() << "\n";
        return static_cast<int>(FLUXDEC_ERR_DATA);
    }
    StringGuard report;
    fluxdec_status st = FLUXDEC_OK;
    if (kind == "asymmetry") {
        st = fluxdec_fit_asymmetry(csv.c_str(), &report.s);
    } else {
        ModelGuard model;
        if (int rc = make_model(opts, &model.m)) return rc;
        st = fluxdec_fit_flux_noise(model.m, csv.c_str(), &report.s);
    }
    if (st != FLUXDEC_OK) return fail(st, "fit");
    std::cout << report.s << "\n";
    if (!opts.output_dir.empty()) {
        fs::create_directories(opts.output_dir);
        write_file(fs::path(opts.output_dir) / "fit_report.json",
                   std::string(report.s) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherence budgets and noise-parameter estimation for tunable "
                 "capacitively-shunted flux qubits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fluxdec_version()));

    CommonOpts opts;
    const auto add_common = [&](CLI::App* sub, bool config_required = true) {
        auto* c = sub->add_option("-c,--config", opts.config_path, "config JSON file");
        if (config_required) c->required();
        sub->add_option("--set", opts.overrides,
                        "override a config key by dotted path, e.g. bias.phi_x=0.35");
        sub->add_option("-o,--output-dir", opts.output_dir,
                        "write outputs into this directory");
    };

    auto* budget = app.add_subcommand("budget", "coherence budget at one bias point");
    add_common(budget);

    auto* sweep = app.add_subcommand("sweep", "bias sweep to CSV");
    add_common(sweep);

    auto* anneal = app.add_subcommand("anneal", "annealing-parameter noise table");
    add_common(anneal);

    auto* validate =
        app.add_subcommand("validate", "Monte-Carlo vs analytic dephasing check");
    add_common(validate);

    std::string fit_kind = "flux-noise";
    std::string fit_data;
    auto* fit = app.add_subcommand("fit", "fit noise parameters from a dataset");
    add_common(fit, false);
    fit->add_option("--kind", fit_kind, "flux-noise | asymmetry")
        ->check(CLI::IsMember({"flux-noise", "asymmetry"}));
    fit->add_option("--data", fit_data, "dataset CSV file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (budget->parsed()) return cmd_budget(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
        if (anneal->parsed()) return cmd_anneal(opts);
        if (validate->parsed()) return cmd_validate(opts);
        if (fit->parsed()) {
            if (fit_kind == "flux-noise" && opts.config_path.empty()) {
                std::cerr << "fluxdec: fit --kind flux-noise needs --config\n";
                return static_cast<int>(FLUXDEC_ERR_CONFIG);
            }
            return cmd_fit(opts, fit_kind, fit_data);
        }
    } catch (const std::exception& e) {
        std::cerr << "fluxdec: " << e.what() << "\n";
        return static_cast<int>(FLUXDEC_ERR_INTERNAL);
    }
    return 0;
}
