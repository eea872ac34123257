/* Copyright (c) 2026 the fluxdec authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * fluxdec — coherence-budget simulation and noise-parameter estimation for
 * tunable capacitively-shunted flux qubits.
 *
 * C API of the shared library. All functions are thread-safe once a model
 * has been created; models are immutable. Strings returned through `char**`
 * out-parameters are heap-allocated and must be released with
 * fluxdec_string_free(). Error details for the calling thread are available
 * via fluxdec_last_error().
 */

#ifndef FLUXDEC_H
#define FLUXDEC_H

#include <stddef.h>

#if defined(_WIN32)
#  define FLUXDEC_API __declspec(dllexport)
#else
#  define FLUXDEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The CLI maps these directly to process exit codes. */
typedef enum fluxdec_status {
    FLUXDEC_OK = 0,
    FLUXDEC_ERR_VALIDATION = 1,  /* Monte-Carlo vs analytic comparison failed */
    FLUXDEC_ERR_CONFIG = 2,      /* config parse / schema / range error */
    FLUXDEC_ERR_DATA = 3,        /* malformed or insufficient dataset */
    FLUXDEC_ERR_CONVERGENCE = 4, /* fit or solver failed to converge */
    FLUXDEC_ERR_DOMAIN = 5,      /* evaluation outside a model's domain */
    FLUXDEC_ERR_INTERNAL = 6
} fluxdec_status;

/* Opaque handles. */
typedef struct fluxdec_config fluxdec_config; /* mutable config under construction */
typedef struct fluxdec_model fluxdec_model;   /* immutable, safe for concurrent use */
typedef struct fluxdec_budget_result fluxdec_budget_result;

/* Two-level qubit working point, plain-old-data mirror of the core type.
 * Angular frequencies in rad/s, fluxes dimensionless in units of Phi0. */
typedef struct fluxdec_qubit_point {
    double epsilon;            /* longitudinal field (rad/s) */
    double delta;              /* transverse field (rad/s) */
    double omega01;            /* qubit angular frequency (rad/s) */
    double phi_z_sym;          /* Z symmetry point (Phi0) */
    double d_eps_d_phi_z;      /* (rad/s)/Phi0 */
    double d_eps_d_phi_x;      /* (rad/s)/Phi0 */
    double d_delta_d_phi_x;    /* (rad/s)/Phi0 */
    double d_omega_d_phi_z;    /* (rad/s)/Phi0 */
    double d_omega_d_phi_x;    /* (rad/s)/Phi0 */
    double d2_omega_d_phi_z2;  /* (rad/s)/Phi0^2 */
    double d2_omega_d_phi_x2;  /* (rad/s)/Phi0^2 */
    double mz_ge;              /* transverse matrix element of dH/dPhi_z / hbar, (rad/s)/Phi0 */
    double mx_ge;              /* same for Phi_x */
} fluxdec_qubit_point;

/* Library version, e.g. "0.1.0". */
FLUXDEC_API const char* fluxdec_version(void);

/* Human-readable message for the last error on this thread (empty if none). */
FLUXDEC_API const char* fluxdec_last_error(void);

/* Release a string returned by any fluxdec_* function. NULL is a no-op. */
FLUXDEC_API void fluxdec_string_free(char* s);

/* --- configuration ------------------------------------------------------ */

/* Parse a JSON config from text or load it from a file. On success *out
 * owns a new handle; free with fluxdec_config_free(). */
FLUXDEC_API fluxdec_status fluxdec_config_parse(const char* json_text,
                                                fluxdec_config** out);
FLUXDEC_API fluxdec_status fluxdec_config_load(const char* path,
                                               fluxdec_config** out);

/* Override one key by dotted path, e.g. ("bias.phi_x", "0.35") or
 * ("noise.channels.purcell", "false"). The value is parsed as JSON. */
FLUXDEC_API fluxdec_status fluxdec_config_override(fluxdec_config* cfg,
                                                   const char* dotted_path,
                                                   const char* value_json);

FLUXDEC_API void fluxdec_config_free(fluxdec_config* cfg);

/* Validate the config against the full schema (unknown keys rejected,
 * ranges checked) and build an immutable model. */
FLUXDEC_API fluxdec_status fluxdec_model_create(const fluxdec_config* cfg,
                                                fluxdec_model** out);
FLUXDEC_API void fluxdec_model_free(fluxdec_model* model);

/* --- point evaluation --------------------------------------------------- */

/* Two-level working point at (phi_z, phi_x), both in Phi0 units. */
FLUXDEC_API fluxdec_status fluxdec_qubit_point_eval(const fluxdec_model* model,
                                                    double phi_z, double phi_x,
                                                    fluxdec_qubit_point* out);

/* Z symmetry point Phi_z_sym(phi_x) in Phi0 units. */
FLUXDEC_API fluxdec_status fluxdec_symmetry_point(const fluxdec_model* model,
                                                  double phi_x, double* out);

/* --- subcommand-level operations ---------------------------------------- */

/* Full coherence budget at the configured bias point. */
FLUXDEC_API fluxdec_status fluxdec_budget(const fluxdec_model* model,
                                          fluxdec_budget_result** out);
FLUXDEC_API const char* fluxdec_budget_result_json(const fluxdec_budget_result*);
FLUXDEC_API const char* fluxdec_budget_result_text(const fluxdec_budget_result*);
/* Decay envelope CSV "tau_s,envelope"; protocol 0 = Ramsey, 1 = echo. */
FLUXDEC_API const char* fluxdec_budget_result_envelope_csv(const fluxdec_budget_result*,
                                                           int protocol);
FLUXDEC_API void fluxdec_budget_result_free(fluxdec_budget_result*);

/* Bias sweep over the configured axis; returns the CSV body. */
FLUXDEC_API fluxdec_status fluxdec_sweep_csv(const fluxdec_model* model,
                                             char** csv_out);

/* Annealing-parameter noise table over the configured schedule path. */
FLUXDEC_API fluxdec_status fluxdec_anneal_csv(const fluxdec_model* model,
                                              char** csv_out);

/* Monte-Carlo vs analytic dephasing validation. *pass_out is 1 when the
 * 1/e times agree within the configured tolerance for every protocol.
 * ramsey_csv_out / echo_csv_out columns:
 * tau_s,mc_envelope,mc_stderr,analytic_envelope. Either may be NULL. */
FLUXDEC_API fluxdec_status fluxdec_validate(const fluxdec_model* model,
                                            char** ramsey_csv_out,
                                            char** echo_csv_out,
                                            char** summary_json_out,
                                            int* pass_out);

/* Fit flux-noise powers and Z/X correlation from a coherence dataset.
 * CSV columns: phi_z,phi_x,t_phi_s,sigma_s,protocol (ramsey|echo). */
FLUXDEC_API fluxdec_status fluxdec_fit_flux_noise(const fluxdec_model* model,
                                                  const char* dataset_csv,
                                                  char** report_json_out);

/* Fit the junction asymmetry d from symmetry-point data.
 * CSV columns: phi_x,phi_z_sym,sigma. Needs no device model. */
FLUXDEC_API fluxdec_status fluxdec_fit_asymmetry(const char* dataset_csv,
                                                 char** report_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FLUXDEC_H */
