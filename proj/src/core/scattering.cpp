#include "scattering.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ebs {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string("non-finite parameter: ") + name);
    }
}

} // namespace

void CavityParams::validate() const {
    require_finite(g, "g");
    require_finite(kappa, "kappa");
    require_finite(kappa_s, "kappa_s");
    require_finite(gamma, "gamma");
    require_finite(omega_c, "omega_c");
    require_finite(omega_x, "omega_x");
    if (g < 0.0) throw std::invalid_argument("g must be >= 0");
    if (kappa <= 0.0) throw std::invalid_argument("kappa must be > 0");
    if (kappa_s < 0.0) throw std::invalid_argument("kappa_s must be >= 0");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
}

CavityParams CavityParams::normalized() const {
    validate();
    CavityParams p = *this;
    p.g /= kappa;
    p.kappa_s /= kappa;
    p.gamma /= kappa;
    p.omega_c /= kappa;
    p.omega_x /= kappa;
    p.kappa = 1.0;
    return p;
}

std::pair<c64, c64> cold_amplitudes(const CavityParams& params, double detuning) {
    params.validate();
    require_finite(detuning, "detuning");
    // cavity response alone, dot decoupled
    const c64 den = c64(params.kappa + 0.5 * params.kappa_s, params.omega_c - detuning);
    const c64 t0 = -params.kappa / den;
    return {t0, 1.0 + t0};
}

std::pair<c64, c64> coupled_amplitudes(const CavityParams& params, double detuning) {
    params.validate();
    require_finite(detuning, "detuning");
    if (params.g == 0.0) {
        // exact reduction to the cold cavity, shared code path
        return cold_amplitudes(params, detuning);
    }
    const c64 dipole(0.5 * params.gamma, params.omega_x - detuning);
    const c64 cavity(params.kappa + 0.5 * params.kappa_s, params.omega_c - detuning);
    const c64 t = -params.kappa * dipole / (dipole * cavity + params.g * params.g);
    return {t, 1.0 + t};
}

ScatterAmplitudes scatter_amplitudes(const CavityParams& params, double detuning) {
    const auto [t, r] = coupled_amplitudes(params, detuning);
    const auto [t0, r0] = cold_amplitudes(params, detuning);
    return ScatterAmplitudes{t, r, t0, r0, detuning};
}

double critical_photon_number(const CavityParams& params) {
    params.validate();
    if (params.g == 0.0) {
        throw std::domain_error("critical photon number undefined for g = 0");
    }
    return params.gamma * params.gamma / (2.0 * params.g * params.g);
}

std::vector<SpectrumRow> sweep_spectra(const CavityParams& params, std::span<const double> grid) {
    params.validate();
    if (grid.empty()) {
        throw std::invalid_argument("detuning grid is empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("detuning grid must be strictly increasing");
        }
    }
    std::vector<SpectrumRow> rows;
    rows.reserve(grid.size());
    for (double d : grid) {
        const ScatterAmplitudes a = scatter_amplitudes(params, d);
        rows.push_back(SpectrumRow{
            d,
            std::abs(a.t), std::abs(a.r), std::abs(a.t0), std::abs(a.r0),
            std::arg(a.t), std::arg(a.r), std::arg(a.t0), std::arg(a.r0),
        });
    }
    return rows;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("linspace needs at least 2 points");
    require_finite(lo, "range low");
    require_finite(hi, "range high");
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

} // namespace ebs
