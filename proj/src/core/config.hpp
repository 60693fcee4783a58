#pragma once

// Flat key-value run configuration. Keys use dotted names (cavity.g = 2.4);
// unknown keys are errors. A config either drives a spectra sweep, a fidelity
// sweep, or one protocol run.

#include "scattering.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ebs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { Spectra, Fidelity, Protocol };
enum class SweepAxis { Detuning, G, KappaS };

const char* run_mode_name(RunMode m);
const char* sweep_axis_name(SweepAxis a);

struct RunConfig {
    RunMode mode = RunMode::Spectra;
    CavityParams cavity;

    double detuning = 0.0;                 // probe detuning (fidelity point, protocol)
    std::optional<double> detuning2;       // second photon / second cavity

    SweepAxis axis = SweepAxis::Detuning;
    double sweep_min = -5.0;
    double sweep_max = 5.0;
    std::uint64_t sweep_points = 1001;

    std::string protocol;                  // protocol mode only
    c64 alpha{1.0, 0.0};
    c64 beta{0.0, 0.0};
    char probe = 'H';                      // qnd_readout probe polarization

    double mixing = 0.0;                   // hole-mixing amplitude
    double tau_over_t2 = 0.0;              // dephasing per scattering event
    bool ideal = false;                    // use the perfect channel

    std::string output;
    std::optional<std::uint64_t> seed;     // required iff samples is set
    std::optional<std::uint64_t> samples;  // sampled trajectory count

    bool operator==(const RunConfig&) const = default;

    // Structural checks beyond parsing: sweep range, protocol name,
    // seed/samples pairing, amplitude normalization where it matters.
    void validate() const;
};

// Throws ConfigError with the offending key or value named in the message.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path); // IoError if unreadable

// Canonical form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

} // namespace ebs
