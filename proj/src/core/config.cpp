#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ebs {

namespace {

const std::set<std::string> kProtocolNames = {
    "photon_to_spin", "spin_to_photon", "qnd_readout", "two_photon_bell", "remote_entanglement"};

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for '" + key + "': " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("invalid integer value for '" + key + "': " + value);
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("invalid boolean value for '" + key + "': " + value);
}

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

const char* run_mode_name(RunMode m) {
    switch (m) {
        case RunMode::Spectra: return "spectra";
        case RunMode::Fidelity: return "fidelity";
        case RunMode::Protocol: return "protocol";
    }
    return "?";
}

const char* sweep_axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::Detuning: return "detuning";
        case SweepAxis::G: return "g";
        case SweepAxis::KappaS: return "kappa_s";
    }
    return "?";
}

void RunConfig::validate() const {
    try {
        cavity.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid cavity parameter: ") + e.what());
    }
    if (!std::isfinite(detuning)) throw ConfigError("invalid value for 'detuning'");
    if (detuning2 && !std::isfinite(*detuning2)) throw ConfigError("invalid value for 'detuning2'");
    if (mode != RunMode::Protocol) {
        if (!std::isfinite(sweep_min) || !std::isfinite(sweep_max) || !(sweep_min < sweep_max)) {
            throw ConfigError("sweep range must be finite with sweep.min < sweep.max");
        }
        if (sweep_points < 2) throw ConfigError("sweep.points must be at least 2");
    }
    if (mode == RunMode::Spectra && axis != SweepAxis::Detuning) {
        throw ConfigError("spectra mode sweeps detuning only; remove 'sweep.axis'");
    }
    if (mode == RunMode::Protocol) {
        if (protocol.empty()) throw ConfigError("protocol mode requires 'protocol.name'");
        if (!kProtocolNames.contains(protocol)) {
            throw ConfigError("unknown protocol name: " + protocol);
        }
        const bool needs_amplitudes =
            protocol == "photon_to_spin" || protocol == "spin_to_photon" || protocol == "qnd_readout";
        if (needs_amplitudes) {
            const double n = std::norm(alpha) + std::norm(beta);
            if (std::abs(n - 1.0) > 1e-9) {
                throw ConfigError("protocol amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
            }
        }
    }
    if (!(mixing >= 0.0 && mixing <= 1.0)) throw ConfigError("'mixing' must lie in [0, 1]");
    if (!(tau_over_t2 >= 0.0) || !std::isfinite(tau_over_t2)) {
        throw ConfigError("'dephasing.tau_over_t2' must be finite and >= 0");
    }
    if (probe != 'H' && probe != 'V') throw ConfigError("'protocol.probe' must be H or V");
    if (samples.has_value() != seed.has_value()) {
        throw ConfigError("'seed' must be given exactly when 'samples' is given");
    }
    if (samples && *samples == 0) throw ConfigError("'samples' must be positive");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    bool have_mode = false;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        if (!seen.insert(key).second) throw ConfigError("duplicate config key '" + key + "'");

        if (key == "mode") {
            if (value == "spectra") cfg.mode = RunMode::Spectra;
            else if (value == "fidelity") cfg.mode = RunMode::Fidelity;
            else if (value == "protocol") cfg.mode = RunMode::Protocol;
            else throw ConfigError("invalid value for 'mode': " + value);
            have_mode = true;
        } else if (key == "cavity.g") cfg.cavity.g = parse_double(key, value);
        else if (key == "cavity.kappa") cfg.cavity.kappa = parse_double(key, value);
        else if (key == "cavity.kappa_s") cfg.cavity.kappa_s = parse_double(key, value);
        else if (key == "cavity.gamma") cfg.cavity.gamma = parse_double(key, value);
        else if (key == "cavity.omega_c") cfg.cavity.omega_c = parse_double(key, value);
        else if (key == "cavity.omega_x") cfg.cavity.omega_x = parse_double(key, value);
        else if (key == "detuning") cfg.detuning = parse_double(key, value);
        else if (key == "detuning2") cfg.detuning2 = parse_double(key, value);
        else if (key == "sweep.axis") {
            if (value == "detuning") cfg.axis = SweepAxis::Detuning;
            else if (value == "g") cfg.axis = SweepAxis::G;
            else if (value == "kappa_s") cfg.axis = SweepAxis::KappaS;
            else throw ConfigError("invalid value for 'sweep.axis': " + value);
        } else if (key == "sweep.min") cfg.sweep_min = parse_double(key, value);
        else if (key == "sweep.max") cfg.sweep_max = parse_double(key, value);
        else if (key == "sweep.points") cfg.sweep_points = parse_u64(key, value);
        else if (key == "protocol.name") cfg.protocol = value;
        else if (key == "protocol.alpha_re") cfg.alpha.real(parse_double(key, value));
        else if (key == "protocol.alpha_im") cfg.alpha.imag(parse_double(key, value));
        else if (key == "protocol.beta_re") cfg.beta.real(parse_double(key, value));
        else if (key == "protocol.beta_im") cfg.beta.imag(parse_double(key, value));
        else if (key == "protocol.probe") {
            if (value != "H" && value != "V") {
                throw ConfigError("invalid value for 'protocol.probe': " + value);
            }
            cfg.probe = value[0];
        } else if (key == "mixing") cfg.mixing = parse_double(key, value);
        else if (key == "dephasing.tau_over_t2") cfg.tau_over_t2 = parse_double(key, value);
        else if (key == "ideal") cfg.ideal = parse_bool(key, value);
        else if (key == "output") cfg.output = value;
        else if (key == "seed") cfg.seed = parse_u64(key, value);
        else if (key == "samples") cfg.samples = parse_u64(key, value);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    if (!have_mode) throw ConfigError("missing required key 'mode'");
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& config) {
    std::string out;
    auto emit = [&](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    emit("mode", run_mode_name(config.mode));
    emit("cavity.g", fmt_full(config.cavity.g));
    emit("cavity.kappa", fmt_full(config.cavity.kappa));
    emit("cavity.kappa_s", fmt_full(config.cavity.kappa_s));
    emit("cavity.gamma", fmt_full(config.cavity.gamma));
    emit("cavity.omega_c", fmt_full(config.cavity.omega_c));
    emit("cavity.omega_x", fmt_full(config.cavity.omega_x));
    emit("detuning", fmt_full(config.detuning));
    if (config.detuning2) emit("detuning2", fmt_full(*config.detuning2));
    emit("sweep.axis", sweep_axis_name(config.axis));
    emit("sweep.min", fmt_full(config.sweep_min));
    emit("sweep.max", fmt_full(config.sweep_max));
    emit("sweep.points", std::to_string(config.sweep_points));
    if (!config.protocol.empty()) emit("protocol.name", config.protocol);
    emit("protocol.alpha_re", fmt_full(config.alpha.real()));
    emit("protocol.alpha_im", fmt_full(config.alpha.imag()));
    emit("protocol.beta_re", fmt_full(config.beta.real()));
    emit("protocol.beta_im", fmt_full(config.beta.imag()));
    emit("protocol.probe", std::string(1, config.probe));
    emit("mixing", fmt_full(config.mixing));
    emit("dephasing.tau_over_t2", fmt_full(config.tau_over_t2));
    emit("ideal", config.ideal ? "true" : "false");
    if (!config.output.empty()) emit("output", config.output);
    if (config.seed) emit("seed", std::to_string(*config.seed));
    if (config.samples) emit("samples", std::to_string(*config.samples));
    return out;
}

} // namespace ebs
