/*
 * ebs - spin-cavity entanglement beam splitter simulator, C interface.
 *
 * The library evaluates the steady-state transmission/reflection amplitudes
 * of a charged quantum dot in a double-sided microcavity, builds the
 * spin-conditional scattering channel, and runs the entanglement protocols
 * (photon <-> spin state transfer, QND spin readout, two-photon Bell-state
 * creation, remote spin entanglement).
 *
 * All functions return ebs_status; EBS_OK is 0. On failure, a thread-local
 * message is available via ebs_last_error(). Handles are opaque and must be
 * released with the matching _destroy function.
 *
 * Units: every rate and frequency is expressed in a common unit; detunings
 * are offsets from the common resonance omega_0.
 */

#ifndef EBS_H
#define EBS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EBS_BUILD_SHARED)
#    define EBS_API __declspec(dllexport)
#  else
#    define EBS_API __declspec(dllimport)
#  endif
#else
#  define EBS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ebs_status {
    EBS_OK = 0,
    EBS_ERR_INVALID_ARGUMENT = 1,
    EBS_ERR_DOMAIN = 2,
    EBS_ERR_CONFIG = 3,
    EBS_ERR_IO = 4,
    EBS_ERR_INTERNAL = 5
} ebs_status;

typedef struct ebs_channel ebs_channel;
typedef struct ebs_result ebs_result;
typedef struct ebs_config ebs_config;

typedef struct ebs_cavity_params {
    double g;        /* dot-cavity coupling strength */
    double kappa;    /* cavity decay rate into the ports */
    double kappa_s;  /* side-leakage decay rate */
    double gamma;    /* trion dipole decay rate (full width) */
    double omega_c;  /* cavity frequency offset from omega_0 */
    double omega_x;  /* trion frequency offset from omega_0 */
} ebs_cavity_params;

typedef struct ebs_amplitudes {
    double t_re, t_im;   /* hot-cavity transmission */
    double r_re, r_im;   /* hot-cavity reflection, r = 1 + t */
    double t0_re, t0_im; /* cold-cavity transmission */
    double r0_re, r0_im; /* cold-cavity reflection, r0 = 1 + t0 */
    double detuning;
} ebs_amplitudes;

typedef struct ebs_spectrum_row {
    double detuning;
    double abs_t, abs_r, abs_t0, abs_r0;
    double arg_t, arg_r, arg_t0, arg_r0;
} ebs_spectrum_row;

typedef struct ebs_operator_entry {
    char basis_in[8];  /* "R.up", "R.down", "L.up", "L.down" */
    char basis_out[8];
    double re, im;
} ebs_operator_entry;

typedef struct ebs_branch_info {
    char path[64];   /* e.g. "T/H", "T/T/up", "R/loss" */
    char target[32]; /* e.g. "Phi+", "up", "-" for loss branches */
    double probability;
    double fidelity; /* squared overlap with the target; 0 for loss branches */
    int is_loss;
} ebs_branch_info;

typedef struct ebs_port_info {
    char combo[8]; /* "T", "R", "TT", "TR", "RT", "RR" */
    double probability;
    double entanglement_fidelity; /* amplitude overlap with the ideal port target */
} ebs_port_info;

EBS_API const char* ebs_version(void);
EBS_API const char* ebs_status_name(ebs_status status);
/* Message for the last failing call on this thread; empty string if none. */
EBS_API const char* ebs_last_error(void);

/* Default working point: g = 2.4, kappa = 1, kappa_s = 0, gamma = 0.1, resonant. */
EBS_API void ebs_default_params(ebs_cavity_params* out);

/* --- scattering ---------------------------------------------------------- */

EBS_API ebs_status ebs_amplitudes_eval(const ebs_cavity_params* params, double detuning,
                                       ebs_amplitudes* out);

/* gamma^2 / (2 g^2); EBS_ERR_DOMAIN when g = 0. */
EBS_API ebs_status ebs_critical_photon_number(const ebs_cavity_params* params, double* out);

/* F_t = |t0|/sqrt(|t0|^2+|t|^2), F_r = |r|/sqrt(|r0|^2+|r|^2). */
EBS_API ebs_status ebs_fidelities(const ebs_cavity_params* params, double detuning, double* f_t,
                                  double* f_r);

/* One row per grid point; grid must be strictly increasing. */
EBS_API ebs_status ebs_sweep_spectra(const ebs_cavity_params* params, const double* grid,
                                     size_t n, ebs_spectrum_row* rows);

/* --- channel -------------------------------------------------------------- */

/* mode: 0 = full operators, 1 = ideal operators (cross amplitudes zeroed).
 * mixing is the hole-mixing amplitude in [0, 1]. */
EBS_API ebs_status ebs_channel_create(const ebs_cavity_params* params, double detuning,
                                      double mixing, int mode, ebs_channel** out);

/* Perfect limit: t0 = -1, r = +1, no cross amplitudes, no loss. */
EBS_API ebs_status ebs_channel_create_ideal(ebs_channel** out);

EBS_API void ebs_channel_destroy(ebs_channel* ch);

/* Effective amplitudes: t0/r0 slots hold the nominally uncoupled
 * combinations {R up, L down}, t/r the coupled ones {R down, L up}. */
EBS_API ebs_status ebs_channel_amplitudes(const ebs_channel* ch, ebs_amplitudes* out);

EBS_API ebs_status ebs_channel_fidelities(const ebs_channel* ch, double* f_t, double* f_r);

/* Port probabilities for the product input (a_r|R> + a_l|L>)(a_up|up> + a_down|down>);
 * the input must be normalized. */
EBS_API ebs_status ebs_channel_scatter_probabilities(const ebs_channel* ch, double a_r_re,
                                                     double a_r_im, double a_l_re, double a_l_im,
                                                     double a_up_re, double a_up_im,
                                                     double a_down_re, double a_down_im,
                                                     double* p_transmitted, double* p_reflected,
                                                     double* p_lost);

/* All 16 entries of the 4x4 transmission ('t') or reflection ('r') operator
 * in basis order (R up, R down, L up, L down); entries must hold 16 slots. */
EBS_API ebs_status ebs_channel_operator_entries(const ebs_channel* ch, char which,
                                                ebs_operator_entry* entries);

/* --- protocols -------------------------------------------------------------- */

/* name: photon_to_spin | spin_to_photon | qnd_readout | two_photon_bell |
 * remote_entanglement. ch2 may be NULL for the single-channel protocols.
 * alpha/beta are the input amplitudes where the protocol takes them; probe is
 * 'H' or 'V' for qnd_readout (ignored elsewhere); tau_over_t2 adds spin
 * dephasing per scattering event. */
EBS_API ebs_status ebs_protocol_run(const char* name, const ebs_channel* ch1,
                                    const ebs_channel* ch2, double alpha_re, double alpha_im,
                                    double beta_re, double beta_im, char probe,
                                    double tau_over_t2, ebs_result** out);

EBS_API void ebs_result_destroy(ebs_result* result);

EBS_API ebs_status ebs_result_success_probability(const ebs_result* result, double* out);
EBS_API ebs_status ebs_result_branch_count(const ebs_result* result, size_t* out);
EBS_API ebs_status ebs_result_branch(const ebs_result* result, size_t index, ebs_branch_info* out);
EBS_API ebs_status ebs_result_port_count(const ebs_result* result, size_t* out);
EBS_API ebs_status ebs_result_port(const ebs_result* result, size_t index, ebs_port_info* out);

/* Full structured report. Writes up to cap bytes (NUL-terminated when cap > 0)
 * and stores the required size including the terminator in *needed. */
EBS_API ebs_status ebs_result_report(const ebs_result* result, char* buf, size_t cap,
                                     size_t* needed);

/* --- config-driven runs -------------------------------------------------------- */

EBS_API ebs_status ebs_config_parse(const char* text, ebs_config** out);
EBS_API ebs_status ebs_config_load(const char* path, ebs_config** out);
EBS_API void ebs_config_destroy(ebs_config* config);

EBS_API ebs_status ebs_config_serialize(const ebs_config* config, char* buf, size_t cap,
                                        size_t* needed);

/* "spectra", "fidelity" or "protocol". */
EBS_API ebs_status ebs_config_mode(const ebs_config* config, char* buf, size_t cap);

EBS_API ebs_status ebs_config_set_output(ebs_config* config, const char* path);
EBS_API ebs_status ebs_config_set_seed(ebs_config* config, uint64_t seed);
EBS_API ebs_status ebs_config_set_ideal(ebs_config* config, int ideal);

/* Executes the run and writes the output file. mode_override may be NULL;
 * otherwise it must match the config's mode. */
EBS_API ebs_status ebs_run(const ebs_config* config, const char* mode_override);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EBS_H */
