// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "fluxdec/fluxdec.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "budget.hpp"
#include "config.hpp"
#include "errors.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Runs `fn`, translating C++ exceptions into status codes and the
// thread-local error message.
template <typename Fn>
fluxdec_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return FLUXDEC_OK;
    } catch (const fluxdec::ConfigError& e) {
        set_error(e.what());
        return FLUXDEC_ERR_CONFIG;
    } catch (const fluxdec::DataError& e) {
        set_error(e.what());
        return FLUXDEC_ERR_DATA;
    } catch (const fluxdec::ConvergenceError& e) {
        set_error(e.what());
        return FLUXDEC_ERR_CONVERGENCE;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return FLUXDEC_ERR_DOMAIN;
    } catch (const std::out_of_range& e) {
        set_error(e.what());
        return FLUXDEC_ERR_DOMAIN;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return FLUXDEC_ERR_DOMAIN;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FLUXDEC_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return FLUXDEC_ERR_INTERNAL;
    }
}

}  // namespace

struct fluxdec_config {
    json data;
};

struct fluxdec_model {
    fluxdec::Model model;
};

struct fluxdec_budget_result {
    std::string json_text;
    std::string table_text;
    std::string ramsey_csv;
    std::string echo_csv;
};

extern "C" {

const char* fluxdec_version(void) { return "0.1.0"; }

const char* fluxdec_last_error(void) { return g_last_error.c_str(); }

void fluxdec_string_free(char* s) { std::free(s); }

fluxdec_status fluxdec_config_parse(const char* json_text, fluxdec_config** out) {
    return guarded([&] {
        if (!json_text || !out) throw std::invalid_argument("null argument");
        auto cfg = std::make_unique<fluxdec_config>();
        cfg->data = fluxdec::parse_config_text(json_text);
        *out = cfg.release();
    });
}

fluxdec_status fluxdec_config_load(const char* path, fluxdec_config** out) {
    return guarded([&] {
        if (!path || !out) throw std::invalid_argument("null argument");
        auto cfg = std::make_unique<fluxdec_config>();
        cfg->data = fluxdec::parse_config_file(path);
        *out = cfg.release();
    });
}

fluxdec_status fluxdec_config_override(fluxdec_config* cfg, const char* dotted_path,
                                       const char* value_json) {
    return guarded([&] {
        if (!cfg || !dotted_path || !value_json) {
            throw std::invalid_argument("null argument");
        }
        fluxdec::apply_override(cfg->data, dotted_path, value_json);
    });
}

void fluxdec_config_free(fluxdec_config* cfg) { delete cfg; }

fluxdec_status fluxdec_model_create(const fluxdec_config* cfg, fluxdec_model** out) {
    return guarded([&] {
        if (!cfg || !out) throw std::invalid_argument("null argument");
        auto model = std::make_unique<fluxdec_model>(
            fluxdec_model{fluxdec::build_model(cfg->data)});
        *out = model.release();
    });
}

void fluxdec_model_free(fluxdec_model* model) { delete model; }

fluxdec_status fluxdec_qubit_point_eval(const fluxdec_model* model, double phi_z,
                                        double phi_x, fluxdec_qubit_point* out) {
    return guarded([&] {
        if (!model || !out) throw std::invalid_argument("null argument");
        const fluxdec::QubitPoint p =
            fluxdec::compute_point(model->model.curves, {phi_z, phi_x});
        *out = {p.epsilon,        p.delta,          p.omega01,
                p.phi_z_sym,      p.d_eps_d_phi_z,  p.d_eps_d_phi_x,
                p.d_delta_d_phi_x, p.d_omega_d_phi_z, p.d_omega_d_phi_x,
                p.d2_omega_d_phi_z2, p.d2_omega_d_phi_x2, p.mz_ge, p.mx_ge};
    });
}

fluxdec_status fluxdec_symmetry_point(const fluxdec_model* model, double phi_x,
                                      double* out) {
    return guarded([&] {
        if (!model || !out) throw std::invalid_argument("null argument");
        *out = fluxdec::symmetry_point(model->model.curves, phi_x);
    });
}

fluxdec_status fluxdec_budget(const fluxdec_model* model, fluxdec_budget_result** out) {
    return guarded([&] {
        if (!model || !out) throw std::invalid_argument("null argument");
        const fluxdec::FluxBias bias = model->model.resolve_bias();
        const fluxdec::CoherenceBudget b = fluxdec::compute_budget(model->model, bias);
        auto res = std::make_unique<fluxdec_budget_result>();
        res->json_text = fluxdec::budget_json(b);
        res->table_text = fluxdec::budget_text(b);
        res->ramsey_csv = fluxdec::envelope_csv(b.envelope_ramsey);
        res->echo_csv = fluxdec::envelope_csv(b.envelope_echo);
        *out = res.release();
    });
}

const char* fluxdec_budget_result_json(const fluxdec_budget_result* r) {
    return r ? r->json_text.c_str() : "";
}

const char* fluxdec_budget_result_text(const fluxdec_budget_result* r) {
    return r ? r->table_text.c_str() : "";
}

const char* fluxdec_budget_result_envelope_csv(const fluxdec_budget_result* r,
                                               int protocol) {
    if (!r) return "";
    return protocol == 0 ? r->ramsey_csv.c_str() : r->echo_csv.c_str();
}

void fluxdec_budget_result_free(fluxdec_budget_result* r) { delete r; }

fluxdec_status fluxdec_sweep_csv(const fluxdec_model* model, char** csv_out) {
    return guarded([&] {
        if (!model || !csv_out) throw std::invalid_argument("null argument");
        *csv_out = dup_string(fluxdec::run_sweep_csv(model->model));
    });
}

fluxdec_status fluxdec_anneal_csv(const fluxdec_model* model, char** csv_out) {
    return guarded([&] {
        if (!model || !csv_out) throw std::invalid_argument("null argument");
        *csv_out = dup_string(fluxdec::run_anneal_csv(model->model));
    });
}

fluxdec_status fluxdec_validate(const fluxdec_model* model, char** ramsey_csv_out,
                                char** echo_csv_out, char** summary_json_out,
                                int* pass_out) {
    return guarded([&] {
        if (!model || !pass_out) throw std::invalid_argument("null argument");
        const fluxdec::ValidationOutcome v = fluxdec::run_validation(model->model);
        if (ramsey_csv_out) *ramsey_csv_out = dup_string(v.ramsey_csv);
        if (echo_csv_out) *echo_csv_out = dup_string(v.echo_csv);
        if (summary_json_out) *summary_json_out = dup_string(v.summary_json);
        *pass_out = v.pass ? 1 : 0;
    });
}

fluxdec_status fluxdec_fit_flux_noise(const fluxdec_model* model,
                                      const char* dataset_csv, char** report_json_out) {
    return guarded([&] {
        if (!model || !dataset_csv || !report_json_out) {
            throw std::invalid_argument("null argument");
        }
        const auto rows = fluxdec::parse_coherence_csv(dataset_csv);
        const fluxdec::NoiseFit fit = fluxdec::fit_flux_noise(
            rows, model->model.curves, model->model.dephasing);
        json j;
        j["estimates"] = {{"sqrt_a_z_phi0_rthz", fit.sqrt_a_z},
                          {"sqrt_a_x_phi0_rthz", fit.sqrt_a_x},
                          {"c_zx", fit.c_zx}};
        j["std_errors"] = {{"sqrt_a_z_phi0_rthz", fit.std_errors[0]},
                           {"sqrt_a_x_phi0_rthz", fit.std_errors[1]},
                           {"c_zx", fit.std_errors[2]}};
        j["covariance"] = fit.covariance;
        j["chi2"] = fit.chi2;
        j["chi2_reduced"] = fit.chi2_reduced;
        j["n_rows"] = fit.n_rows;
        j["iterations"] = fit.iterations;
        *report_json_out = dup_string(j.dump(2));
    });
}

fluxdec_status fluxdec_fit_asymmetry(const char* dataset_csv, char** report_json_out) {
    return guarded([&] {
        if (!dataset_csv || !report_json_out) throw std::invalid_argument("null argument");
        const auto rows = fluxdec::parse_symmetry_csv(dataset_csv);
        const fluxdec::AsymmetryFit fit = fluxdec::fit_asymmetry(rows);
        json j;
        j["estimates"] = {{"asymmetry_d", fit.d}};
        j["std_errors"] = {{"asymmetry_d", fit.std_error}};
        j["chi2"] = fit.chi2;
        j["n_rows"] = fit.n_rows;
        j["iterations"] = fit.iterations;
        *report_json_out = dup_string(j.dump(2));
    });
}

}  // extern "C"
