#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace ebs {

namespace {

std::string fmt_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Rounding guard for printed probabilities and fidelities.
double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void write_file(const std::string& path, const std::string& content) {
    if (path.empty()) throw ConfigError("no output path given (set 'output' or pass --out)");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing output file: " + path);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

EBSChannel channel_from_config(const RunConfig& config, int which) {
    if (config.ideal) return EBSChannel::ideal();
    const double d = (which == 1 && config.detuning2) ? *config.detuning2 : config.detuning;
    return EBSChannel::build(config.cavity, d, config.mixing, ChannelMode::Full);
}

std::string spectra_csv(const RunConfig& config) {
    const auto grid = linspace(config.sweep_min, config.sweep_max,
                               static_cast<std::size_t>(config.sweep_points));
    const auto rows = sweep_spectra(config.cavity, grid);
    std::string out = "detuning,abs_t,abs_r,abs_t0,abs_r0,arg_t,arg_r,arg_t0,arg_r0\n";
    for (const SpectrumRow& r : rows) {
        out += fmt_g9(r.detuning);
        for (double v : {r.abs_t, r.abs_r, r.abs_t0, r.abs_r0, r.arg_t, r.arg_r, r.arg_t0, r.arg_r0}) {
            out += ",";
            out += fmt_g9(v);
        }
        out += "\n";
    }
    return out;
}

std::string fidelity_csv(const RunConfig& config) {
    const auto grid = linspace(config.sweep_min, config.sweep_max,
                               static_cast<std::size_t>(config.sweep_points));
    std::string out = "axis,F_t,F_r\n";
    for (double x : grid) {
        CavityParams p = config.cavity;
        double detuning = config.detuning;
        switch (config.axis) {
            case SweepAxis::Detuning: detuning = x; break;
            case SweepAxis::G: p.g = x; break;
            case SweepAxis::KappaS: p.kappa_s = x; break;
        }
        const FidelityReport f =
            EBSChannel::build(p, detuning, config.mixing, ChannelMode::Full).fidelities();
        out += fmt_g9(x);
        out += ",";
        out += fmt_g9(clamp01(f.f_t));
        out += ",";
        out += fmt_g9(clamp01(f.f_r));
        out += "\n";
    }
    return out;
}

ProtocolResult run_protocol_result(const RunConfig& config) {
    const EBSChannel ch1 = channel_from_config(config, 0);
    if (config.protocol == "photon_to_spin") {
        return photon_to_spin_transfer(config.alpha, config.beta, ch1, config.tau_over_t2);
    }
    if (config.protocol == "spin_to_photon") {
        return spin_to_photon_transfer(config.alpha, config.beta, ch1, config.tau_over_t2);
    }
    if (config.protocol == "qnd_readout") {
        return qnd_spin_readout(config.alpha, config.beta, ch1, config.probe, config.tau_over_t2);
    }
    const EBSChannel ch2 = channel_from_config(config, 1);
    if (config.protocol == "two_photon_bell") {
        return two_photon_bell(ch1, ch2, config.tau_over_t2);
    }
    if (config.protocol == "remote_entanglement") {
        return remote_spin_entanglement(ch1, ch2, config.tau_over_t2);
    }
    throw ConfigError("unknown protocol name: " + config.protocol);
}

namespace {

std::string fmt_complex(const c64& v) {
    return fmt_g9(v.real()) + (v.imag() < 0 ? "" : "+") + fmt_g9(v.imag()) + "i";
}

// Echo of the run point so the report is self-describing.
std::string channel_header(const RunConfig& config) {
    std::string out;
    out += std::string("run.ideal = ") + (config.ideal ? "true" : "false") + "\n";
    if (!config.ideal) {
        out += "run.g = " + fmt_g9(config.cavity.g) + "\n";
        out += "run.kappa = " + fmt_g9(config.cavity.kappa) + "\n";
        out += "run.kappa_s = " + fmt_g9(config.cavity.kappa_s) + "\n";
        out += "run.gamma = " + fmt_g9(config.cavity.gamma) + "\n";
        out += "run.detuning = " + fmt_g9(config.detuning) + "\n";
        if (config.detuning2) out += "run.detuning2 = " + fmt_g9(*config.detuning2) + "\n";
        out += "run.mixing = " + fmt_g9(config.mixing) + "\n";
    }
    out += "run.tau_over_t2 = " + fmt_g9(config.tau_over_t2) + "\n";
    const EBSChannel ch = channel_from_config(config, 0);
    out += "channel.t0 = " + fmt_complex(ch.t_uncoupled()) + "\n";
    out += "channel.t = " + fmt_complex(ch.t_coupled()) + "\n";
    out += "channel.r0 = " + fmt_complex(ch.r_uncoupled()) + "\n";
    out += "channel.r = " + fmt_complex(ch.r_coupled()) + "\n";
    return out;
}

} // namespace

std::string protocol_report(const RunConfig& config) {
    const ProtocolResult result = run_protocol_result(config);
    std::string out = channel_header(config) + to_report(result);

    if (config.samples) {
        // resolved branch distribution, sampled with the documented PRNG
        std::vector<double> cumulative;
        double acc = 0.0;
        for (const ProtocolBranch& b : result.branches) {
            acc += std::max(0.0, b.probability);
            cumulative.push_back(acc);
        }
        std::mt19937_64 rng(*config.seed);
        out += "\n[samples]\n";
        out += "seed = " + std::to_string(*config.seed) + "\n";
        out += "count = " + std::to_string(*config.samples) + "\n";
        for (std::uint64_t i = 0; i < *config.samples; ++i) {
            const double u = uniform01(rng) * acc;
            std::size_t pick = 0;
            while (pick + 1 < cumulative.size() && u >= cumulative[pick]) ++pick;
            out += "sample_" + std::to_string(i + 1) + " = " + result.branches[pick].path + "\n";
        }
    }
    return out;
}

void run_spectra(const RunConfig& config) { write_file(config.output, spectra_csv(config)); }

void run_fidelity_sweep(const RunConfig& config) { write_file(config.output, fidelity_csv(config)); }

void run_protocol(const RunConfig& config) { write_file(config.output, protocol_report(config)); }

void run(const RunConfig& config, const std::string& mode_override) {
    config.validate();
    if (!mode_override.empty() && mode_override != run_mode_name(config.mode)) {
        throw ConfigError("config mode '" + std::string(run_mode_name(config.mode)) +
                          "' does not match requested mode '" + mode_override + "'");
    }
    switch (config.mode) {
        case RunMode::Spectra: run_spectra(config); break;
        case RunMode::Fidelity: run_fidelity_sweep(config); break;
        case RunMode::Protocol: run_protocol(config); break;
    }
}

} // namespace ebs
