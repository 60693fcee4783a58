// C interface over the core library: opaque handles, status codes, and a
// thread-local last-error message. Exceptions never cross this boundary.

#include "ebs/ebs.h"

#include "../core/channel.hpp"
#include "../core/config.hpp"
#include "../core/protocols.hpp"
#include "../core/runner.hpp"
#include "../core/scattering.hpp"

#include <cstring>
#include <new>
#include <string>

struct ebs_channel {
    ebs::EBSChannel impl;
};

struct ebs_result {
    ebs::ProtocolResult impl;
};

struct ebs_config {
    ebs::RunConfig impl;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ebs_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return EBS_OK;
    } catch (const ebs::ConfigError& e) {
        g_last_error = e.what();
        return EBS_ERR_CONFIG;
    } catch (const ebs::IoError& e) {
        g_last_error = e.what();
        return EBS_ERR_IO;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return EBS_ERR_INVALID_ARGUMENT;
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return EBS_ERR_DOMAIN;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return EBS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return EBS_ERR_INTERNAL;
    }
}

ebs_status fail_invalid(const char* msg) {
    g_last_error = msg;
    return EBS_ERR_INVALID_ARGUMENT;
}

ebs::CavityParams to_core(const ebs_cavity_params& p) {
    return ebs::CavityParams{p.g, p.kappa, p.kappa_s, p.gamma, p.omega_c, p.omega_x};
}

void copy_str(char* dst, size_t cap, const std::string& src) {
    const size_t n = src.size() < cap - 1 ? src.size() : cap - 1;
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

ebs_status fill_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
    if (needed) *needed = s.size() + 1;
    if (buf && cap > 0) copy_str(buf, cap, s);
    return EBS_OK;
}

} // namespace

extern "C" {

const char* ebs_version(void) { return "1.0.0"; }

const char* ebs_status_name(ebs_status status) {
    switch (status) {
        case EBS_OK: return "ok";
        case EBS_ERR_INVALID_ARGUMENT: return "invalid argument";
        case EBS_ERR_DOMAIN: return "domain error";
        case EBS_ERR_CONFIG: return "config error";
        case EBS_ERR_IO: return "io error";
        case EBS_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* ebs_last_error(void) { return g_last_error.c_str(); }

void ebs_default_params(ebs_cavity_params* out) {
    if (!out) return;
    const ebs::CavityParams p;
    *out = ebs_cavity_params{p.g, p.kappa, p.kappa_s, p.gamma, p.omega_c, p.omega_x};
}

ebs_status ebs_amplitudes_eval(const ebs_cavity_params* params, double detuning,
                               ebs_amplitudes* out) {
    if (!params || !out) return fail_invalid("null pointer argument");
    return guarded([&] {
        const ebs::ScatterAmplitudes a = ebs::scatter_amplitudes(to_core(*params), detuning);
        *out = ebs_amplitudes{a.t.real(),  a.t.imag(),  a.r.real(),  a.r.imag(),
                              a.t0.real(), a.t0.imag(), a.r0.real(), a.r0.imag(), a.detuning};
    });
}

ebs_status ebs_critical_photon_number(const ebs_cavity_params* params, double* out) {
    if (!params || !out) return fail_invalid("null pointer argument");
    return guarded([&] { *out = ebs::critical_photon_number(to_core(*params)); });
}

ebs_status ebs_fidelities(const ebs_cavity_params* params, double detuning, double* f_t,
                          double* f_r) {
    if (!params || !f_t || !f_r) return fail_invalid("null pointer argument");
    return guarded([&] {
        const ebs::FidelityReport f = ebs::amplitude_fidelities(to_core(*params), detuning);
        *f_t = f.f_t;
        *f_r = f.f_r;
    });
}

ebs_status ebs_sweep_spectra(const ebs_cavity_params* params, const double* grid, size_t n,
                             ebs_spectrum_row* rows) {
    if (!params || !grid || !rows) return fail_invalid("null pointer argument");
    return guarded([&] {
        const auto table = ebs::sweep_spectra(to_core(*params), std::span<const double>(grid, n));
        for (size_t i = 0; i < table.size(); ++i) {
            const ebs::SpectrumRow& r = table[i];
            rows[i] = ebs_spectrum_row{r.detuning, r.abs_t,  r.abs_r, r.abs_t0, r.abs_r0,
                                       r.arg_t,    r.arg_r, r.arg_t0, r.arg_r0};
        }
    });
}

ebs_status ebs_channel_create(const ebs_cavity_params* params, double detuning, double mixing,
                              int mode, ebs_channel** out) {
    if (!params || !out) return fail_invalid("null pointer argument");
    if (mode != 0 && mode != 1) return fail_invalid("mode must be 0 (full) or 1 (ideal)");
    return guarded([&] {
        const auto m = mode == 0 ? ebs::ChannelMode::Full : ebs::ChannelMode::Ideal;
        *out = new ebs_channel{ebs::EBSChannel::build(to_core(*params), detuning, mixing, m)};
    });
}

ebs_status ebs_channel_create_ideal(ebs_channel** out) {
    if (!out) return fail_invalid("null pointer argument");
    return guarded([&] { *out = new ebs_channel{ebs::EBSChannel::ideal()}; });
}

void ebs_channel_destroy(ebs_channel* ch) { delete ch; }

ebs_status ebs_channel_amplitudes(const ebs_channel* ch, ebs_amplitudes* out) {
    if (!ch || !out) return fail_invalid("null pointer argument");
    return guarded([&] {
        const auto& c = ch->impl;
        *out = ebs_amplitudes{c.t_coupled().real(),   c.t_coupled().imag(),
                              c.r_coupled().real(),   c.r_coupled().imag(),
                              c.t_uncoupled().real(), c.t_uncoupled().imag(),
                              c.r_uncoupled().real(), c.r_uncoupled().imag(),
                              c.detuning()};
    });
}

ebs_status ebs_channel_fidelities(const ebs_channel* ch, double* f_t, double* f_r) {
    if (!ch || !f_t || !f_r) return fail_invalid("null pointer argument");
    return guarded([&] {
        const ebs::FidelityReport f = ch->impl.fidelities();
        *f_t = f.f_t;
        *f_r = f.f_r;
    });
}

ebs_status ebs_channel_scatter_probabilities(const ebs_channel* ch, double a_r_re, double a_r_im,
                                             double a_l_re, double a_l_im, double a_up_re,
                                             double a_up_im, double a_down_re, double a_down_im,
                                             double* p_transmitted, double* p_reflected,
                                             double* p_lost) {
    if (!ch || !p_transmitted || !p_reflected || !p_lost) {
        return fail_invalid("null pointer argument");
    }
    return guarded([&] {
        const ebs::PureState input =
            ebs::tensor(ebs::PureState::photon("ph", {a_r_re, a_r_im}, {a_l_re, a_l_im}),
                        ebs::PureState::spin("s", {a_up_re, a_up_im}, {a_down_re, a_down_im}));
        if (std::abs(input.norm_squared() - 1.0) > 1e-9) {
            throw std::invalid_argument("scatter input must be normalized");
        }
        const auto outcomes = ebs::scatter(ch->impl, input, "ph", "s");
        *p_transmitted = outcomes[0].probability;
        *p_reflected = outcomes[1].probability;
        *p_lost = outcomes[2].probability;
    });
}

ebs_status ebs_channel_operator_entries(const ebs_channel* ch, char which,
                                        ebs_operator_entry* entries) {
    if (!ch || !entries) return fail_invalid("null pointer argument");
    return guarded([&] {
        const auto rows = ch->impl.operator_entries(which);
        for (size_t i = 0; i < rows.size(); ++i) {
            copy_str(entries[i].basis_in, sizeof entries[i].basis_in, rows[i].basis_in);
            copy_str(entries[i].basis_out, sizeof entries[i].basis_out, rows[i].basis_out);
            entries[i].re = rows[i].re;
            entries[i].im = rows[i].im;
        }
    });
}

ebs_status ebs_protocol_run(const char* name, const ebs_channel* ch1, const ebs_channel* ch2,
                            double alpha_re, double alpha_im, double beta_re, double beta_im,
                            char probe, double tau_over_t2, ebs_result** out) {
    if (!name || !ch1 || !out) return fail_invalid("null pointer argument");
    return guarded([&] {
        const std::string proto = name;
        const ebs::c64 alpha{alpha_re, alpha_im};
        const ebs::c64 beta{beta_re, beta_im};
        ebs::ProtocolResult r;
        if (proto == "photon_to_spin") {
            r = ebs::photon_to_spin_transfer(alpha, beta, ch1->impl, tau_over_t2);
        } else if (proto == "spin_to_photon") {
            r = ebs::spin_to_photon_transfer(alpha, beta, ch1->impl, tau_over_t2);
        } else if (proto == "qnd_readout") {
            r = ebs::qnd_spin_readout(alpha, beta, ch1->impl, probe, tau_over_t2);
        } else if (proto == "two_photon_bell") {
            const ebs::EBSChannel& second = ch2 ? ch2->impl : ch1->impl;
            r = ebs::two_photon_bell(ch1->impl, second, tau_over_t2);
        } else if (proto == "remote_entanglement") {
            const ebs::EBSChannel& second = ch2 ? ch2->impl : ch1->impl;
            r = ebs::remote_spin_entanglement(ch1->impl, second, tau_over_t2);
        } else {
            throw std::invalid_argument("unknown protocol name: " + proto);
        }
        *out = new ebs_result{std::move(r)};
    });
}

void ebs_result_destroy(ebs_result* result) { delete result; }

ebs_status ebs_result_success_probability(const ebs_result* result, double* out) {
    if (!result || !out) return fail_invalid("null pointer argument");
    *out = result->impl.success_probability;
    return EBS_OK;
}

ebs_status ebs_result_branch_count(const ebs_result* result, size_t* out) {
    if (!result || !out) return fail_invalid("null pointer argument");
    *out = result->impl.branches.size();
    return EBS_OK;
}

ebs_status ebs_result_branch(const ebs_result* result, size_t index, ebs_branch_info* out) {
    if (!result || !out) return fail_invalid("null pointer argument");
    if (index >= result->impl.branches.size()) return fail_invalid("branch index out of range");
    const ebs::ProtocolBranch& b = result->impl.branches[index];
    copy_str(out->path, sizeof out->path, b.path);
    copy_str(out->target, sizeof out->target, b.target_label);
    out->probability = b.probability;
    out->fidelity = b.fidelity;
    out->is_loss = b.is_loss ? 1 : 0;
    return EBS_OK;
}

ebs_status ebs_result_port_count(const ebs_result* result, size_t* out) {
    if (!result || !out) return fail_invalid("null pointer argument");
    *out = result->impl.ports.size();
    return EBS_OK;
}

ebs_status ebs_result_port(const ebs_result* result, size_t index, ebs_port_info* out) {
    if (!result || !out) return fail_invalid("null pointer argument");
    if (index >= result->impl.ports.size()) return fail_invalid("port index out of range");
    const ebs::PortSummary& p = result->impl.ports[index];
    copy_str(out->combo, sizeof out->combo, p.combo);
    out->probability = p.probability;
    out->entanglement_fidelity = p.entanglement_fidelity;
    return EBS_OK;
}

ebs_status ebs_result_report(const ebs_result* result, char* buf, size_t cap, size_t* needed) {
    if (!result) return fail_invalid("null pointer argument");
    return guarded([&] { fill_string(ebs::to_report(result->impl), buf, cap, needed); });
}

ebs_status ebs_config_parse(const char* text, ebs_config** out) {
    if (!text || !out) return fail_invalid("null pointer argument");
    return guarded([&] { *out = new ebs_config{ebs::parse_config(text)}; });
}

ebs_status ebs_config_load(const char* path, ebs_config** out) {
    if (!path || !out) return fail_invalid("null pointer argument");
    return guarded([&] { *out = new ebs_config{ebs::load_config(path)}; });
}

void ebs_config_destroy(ebs_config* config) { delete config; }

ebs_status ebs_config_serialize(const ebs_config* config, char* buf, size_t cap, size_t* needed) {
    if (!config) return fail_invalid("null pointer argument");
    return guarded([&] { fill_string(ebs::serialize_config(config->impl), buf, cap, needed); });
}

ebs_status ebs_config_mode(const ebs_config* config, char* buf, size_t cap) {
    if (!config || !buf || cap == 0) return fail_invalid("null pointer argument");
    copy_str(buf, cap, ebs::run_mode_name(config->impl.mode));
    return EBS_OK;
}

ebs_status ebs_config_set_output(ebs_config* config, const char* path) {
    if (!config || !path) return fail_invalid("null pointer argument");
    config->impl.output = path;
    return EBS_OK;
}

ebs_status ebs_config_set_seed(ebs_config* config, uint64_t seed) {
    if (!config) return fail_invalid("null pointer argument");
    config->impl.seed = seed;
    return EBS_OK;
}

ebs_status ebs_config_set_ideal(ebs_config* config, int ideal) {
    if (!config) return fail_invalid("null pointer argument");
    config->impl.ideal = ideal != 0;
    return EBS_OK;
}

ebs_status ebs_run(const ebs_config* config, const char* mode_override) {
    if (!config) return fail_invalid("null pointer argument");
    return guarded([&] { ebs::run(config->impl, mode_override ? mode_override : ""); });
}

} // extern "C"
