#include "channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace ebs {

DephasingParams DephasingParams::from_ratio(double tau_over_t2) {
    if (!(tau_over_t2 >= 0.0) || !std::isfinite(tau_over_t2)) {
        throw std::invalid_argument("tau/T2 must be finite and >= 0");
    }
    return DephasingParams{tau_over_t2, 1.0};
}

void DephasingParams::validate() const {
    if (!(tau >= 0.0)) throw std::invalid_argument("dephasing tau must be >= 0");
    if (!(t2 > 0.0)) throw std::invalid_argument("dephasing T2 must be > 0");
}

double DephasingParams::lambda() const {
    validate();
    return std::exp(-tau / t2);
}

const char* port_name(Port p) {
    switch (p) {
        case Port::Transmitted: return "transmitted";
        case Port::Reflected: return "reflected";
        case Port::Lost: return "lost";
    }
    return "?";
}

EBSChannel EBSChannel::build(const CavityParams& params, double detuning, double mixing,
                             ChannelMode mode) {
    params.validate();
    if (!std::isfinite(detuning)) throw std::invalid_argument("non-finite parameter: detuning");
    if (!(mixing >= 0.0 && mixing <= 1.0)) {
        throw std::invalid_argument("hole-mixing amplitude must lie in [0, 1]");
    }
    CavityParams uncoupled = params;
    uncoupled.g = mixing * params.g;
    CavityParams coupled = params;
    coupled.g = params.g * std::sqrt(1.0 - mixing * mixing);

    EBSChannel ch;
    ch.params_ = params;
    ch.detuning_ = detuning;
    ch.mixing_ = mixing;
    ch.mode_ = mode;
    std::tie(ch.t_u_, ch.r_u_) = coupled_amplitudes(uncoupled, detuning);
    std::tie(ch.t_c_, ch.r_c_) = coupled_amplitudes(coupled, detuning);
    if (mode == ChannelMode::Ideal) {
        ch.t_c_ = 0.0;
        ch.r_u_ = 0.0;
    }
    return ch;
}

EBSChannel EBSChannel::ideal() {
    CavityParams p;
    p.g = 1.0;
    p.gamma = 0.0;
    p.kappa_s = 0.0;
    return build(p, 0.0, 0.0, ChannelMode::Ideal);
}

Mat4 EBSChannel::transmission_operator() const {
    Mat4 op;
    op(0, 0) = t_u_; // R up
    op(1, 1) = t_c_; // R down
    op(2, 2) = t_c_; // L up
    op(3, 3) = t_u_; // L down
    return op;
}

Mat4 EBSChannel::reflection_operator() const {
    Mat4 op;
    op(0, 0) = r_u_;
    op(1, 1) = r_c_;
    op(2, 2) = r_c_;
    op(3, 3) = r_u_;
    return op;
}

EBSChannel EBSChannel::with_mixing(double mixing) const {
    return build(params_, detuning_, mixing, mode_);
}

namespace {

FidelityReport fidelities_from(double detuning, const c64& t_u, const c64& t_c, const c64& r_u,
                               const c64& r_c) {
    const double at_u = std::abs(t_u);
    const double at_c = std::abs(t_c);
    const double ar_u = std::abs(r_u);
    const double ar_c = std::abs(r_c);
    if (at_u == 0.0 && at_c == 0.0) {
        throw std::domain_error("transmission fidelity undefined: both amplitudes vanish");
    }
    if (ar_u == 0.0 && ar_c == 0.0) {
        throw std::domain_error("reflection fidelity undefined: both amplitudes vanish");
    }
    return FidelityReport{detuning, at_u / std::hypot(at_u, at_c), ar_c / std::hypot(ar_u, ar_c)};
}

} // namespace

FidelityReport EBSChannel::fidelities() const {
    return fidelities_from(detuning_, t_u_, t_c_, r_u_, r_c_);
}

std::vector<OperatorEntry> EBSChannel::operator_entries(char which) const {
    Mat4 op;
    if (which == 't') {
        op = transmission_operator();
    } else if (which == 'r') {
        op = reflection_operator();
    } else {
        throw std::invalid_argument("operator selector must be 't' or 'r'");
    }
    static const char* kBasis[4] = {"R.up", "R.down", "L.up", "L.down"};
    std::vector<OperatorEntry> rows;
    rows.reserve(16);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            rows.push_back(OperatorEntry{kBasis[j], kBasis[i], op(i, j).real(), op(i, j).imag()});
        }
    }
    return rows;
}

FidelityReport amplitude_fidelities(const CavityParams& params, double detuning) {
    const ScatterAmplitudes a = scatter_amplitudes(params, detuning);
    return fidelities_from(detuning, a.t0, a.t, a.r0, a.r);
}

namespace {

void check_kinds(const PureState& state, std::string_view photon_reg, std::string_view spin_reg) {
    if (state.label(state.register_index(photon_reg)).kind != RegisterKind::Photon) {
        throw std::invalid_argument("register kind mismatch: " + std::string(photon_reg) +
                                    " is not a photon polarization");
    }
    if (state.label(state.register_index(spin_reg)).kind != RegisterKind::Spin) {
        throw std::invalid_argument("register kind mismatch: " + std::string(spin_reg) +
                                    " is not a spin");
    }
}

} // namespace

std::vector<PortOutcome> scatter(const EBSChannel& ch, const PureState& state,
                                 std::string_view photon_reg, std::string_view spin_reg) {
    check_kinds(state, photon_reg, spin_reg);
    const double n2 = state.norm_squared();
    if (n2 <= 0.0) throw std::domain_error("cannot scatter a zero-norm state");

    PureState t_branch = apply_two_register_op(state, photon_reg, spin_reg, ch.transmission_operator());
    PureState r_branch = apply_two_register_op(state, photon_reg, spin_reg, ch.reflection_operator());
    const double p_t = t_branch.norm_squared() / n2;
    const double p_r = r_branch.norm_squared() / n2;
    const double p_loss = 1.0 - p_t - p_r;

    std::vector<PortOutcome> out;
    out.push_back(PortOutcome{Port::Transmitted, p_t,
                              p_t > 0.0 ? std::optional<PureState>(t_branch.normalized())
                                        : std::nullopt});
    out.push_back(PortOutcome{Port::Reflected, p_r,
                              p_r > 0.0 ? std::optional<PureState>(r_branch.normalized())
                                        : std::nullopt});
    out.push_back(PortOutcome{Port::Lost, p_loss, std::nullopt});
    return out;
}

std::vector<DensityPortOutcome> scatter(const EBSChannel& ch, const DensityMatrix& rho,
                                        std::string_view photon_reg, std::string_view spin_reg) {
    const double tr = rho.trace();
    if (tr <= 0.0) throw std::domain_error("cannot scatter a zero-trace state");
    if (rho.registers()[rho.register_index(photon_reg)].kind != RegisterKind::Photon) {
        throw std::invalid_argument("register kind mismatch: " + std::string(photon_reg) +
                                    " is not a photon polarization");
    }
    if (rho.registers()[rho.register_index(spin_reg)].kind != RegisterKind::Spin) {
        throw std::invalid_argument("register kind mismatch: " + std::string(spin_reg) +
                                    " is not a spin");
    }

    DensityMatrix t_branch =
        apply_two_register_op(rho, photon_reg, spin_reg, ch.transmission_operator());
    DensityMatrix r_branch =
        apply_two_register_op(rho, photon_reg, spin_reg, ch.reflection_operator());
    const double p_t = t_branch.trace() / tr;
    const double p_r = r_branch.trace() / tr;
    const double p_loss = 1.0 - p_t - p_r;

    auto normalize = [](DensityMatrix dm, double p) {
        for (std::size_t i = 0; i < dm.dim(); ++i) {
            for (std::size_t j = 0; j < dm.dim(); ++j) dm.at(i, j) /= p;
        }
        return dm;
    };
    std::vector<DensityPortOutcome> out;
    out.push_back(DensityPortOutcome{
        Port::Transmitted, p_t,
        p_t > 0.0 ? std::optional<DensityMatrix>(normalize(std::move(t_branch), p_t * tr))
                  : std::nullopt});
    out.push_back(DensityPortOutcome{
        Port::Reflected, p_r,
        p_r > 0.0 ? std::optional<DensityMatrix>(normalize(std::move(r_branch), p_r * tr))
                  : std::nullopt});
    out.push_back(DensityPortOutcome{Port::Lost, p_loss, std::nullopt});
    return out;
}

DensityMatrix apply_dephasing(const DensityMatrix& rho, std::string_view reg,
                              const DephasingParams& dephasing) {
    const double lambda = dephasing.lambda();
    const std::size_t n = rho.register_count();
    const std::size_t k = rho.register_index(reg);
    const std::size_t bit = std::size_t{1} << (n - 1 - k);
    DensityMatrix out = rho;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        for (std::size_t j = 0; j < out.dim(); ++j) {
            if ((i & bit) != (j & bit)) out.at(i, j) *= lambda;
        }
    }
    return out;
}

} // namespace ebs
