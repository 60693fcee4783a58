#pragma once

// Steady-state scattering amplitudes of a singly charged quantum dot in a
// double-sided microcavity. All rates and frequencies are expressed in a
// common unit (conventionally the cavity decay rate kappa); frequencies are
// offsets from the common resonance omega_0.

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace ebs {

using c64 = std::complex<double>;

struct CavityParams {
    double g = 2.4;       // dot-cavity coupling strength
    double kappa = 1.0;   // cavity decay rate into the input/output ports
    double kappa_s = 0.0; // side-leakage decay rate
    double gamma = 0.1;   // trion dipole decay rate (full width; gamma/2 enters the formulas)
    double omega_c = 0.0; // cavity mode frequency, offset from omega_0
    double omega_x = 0.0; // trion transition frequency, offset from omega_0

    // Throws std::invalid_argument on non-finite or out-of-range values.
    void validate() const;

    // Same physics with kappa scaled to 1; detunings must be rescaled
    // by the caller accordingly.
    CavityParams normalized() const;

    bool operator==(const CavityParams&) const = default;
};

// The four steady-state amplitudes at one probe detuning (omega - omega_0).
// r = 1 + t and r0 = 1 + t0 hold by construction.
struct ScatterAmplitudes {
    c64 t;        // transmission, dot coupled (hot cavity)
    c64 r;        // reflection, dot coupled
    c64 t0;       // transmission, dot uncoupled (cold cavity)
    c64 r0;       // reflection, dot uncoupled
    double detuning = 0.0;
};

// Hot-cavity amplitudes (t, r). With g = 0 this takes the cold-cavity code
// path, so the two operations agree bitwise in that limit.
std::pair<c64, c64> coupled_amplitudes(const CavityParams& params, double detuning);

// Cold-cavity amplitudes (t0, r0); independent of g and gamma.
std::pair<c64, c64> cold_amplitudes(const CavityParams& params, double detuning);

ScatterAmplitudes scatter_amplitudes(const CavityParams& params, double detuning);

// gamma^2 / (2 g^2); the intracavity photon number that saturates the dot.
// Throws std::domain_error when g = 0.
double critical_photon_number(const CavityParams& params);

struct SpectrumRow {
    double detuning;
    double abs_t, abs_r, abs_t0, abs_r0;
    double arg_t, arg_r, arg_t0, arg_r0;
};

// One row per grid point; grid must be non-empty and strictly increasing.
std::vector<SpectrumRow> sweep_spectra(const CavityParams& params, std::span<const double> grid);

// n evenly spaced points from lo to hi inclusive (n >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace ebs
