#pragma once

// Spin-conditional transmission/reflection channel of the dot-cavity system.
// A photon whose circular polarization matches the spin selection rule drives
// the trion and sees the hot cavity; the orthogonal combination sees the cold
// cavity. Operator matrices act on the (photon, spin) pair in the fixed basis
// order (R up, R down, L up, L down):
//
//   t_hat = diag(t_u, t_c, t_c, t_u),  r_hat = diag(r_u, r_c, r_c, r_u)
//
// where the "u" amplitudes belong to the uncoupled combinations {R up, L down}
// and the "c" amplitudes to the coupled ones {R down, L up}. The operators are
// sub-unitary; the missing weight is reported as an explicit loss port.

#include "quantum.hpp"
#include "scattering.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ebs {

enum class ChannelMode { Full, Ideal };

struct DephasingParams {
    double tau = 0.0; // cavity photon lifetime
    double t2 = std::numeric_limits<double>::infinity(); // exciton coherence time

    static DephasingParams from_ratio(double tau_over_t2);
    void validate() const;
    double lambda() const; // exp(-tau/T2)
};

struct FidelityReport {
    double detuning;
    double f_t; // transmission amplitude entanglement fidelity
    double f_r; // reflection amplitude entanglement fidelity
};

enum class Port { Transmitted, Reflected, Lost };
const char* port_name(Port p);

struct PortOutcome {
    Port port;
    double probability = 0.0;
    std::optional<PureState> post; // normalized; empty for the loss port
};

struct DensityPortOutcome {
    Port port;
    double probability = 0.0;
    std::optional<DensityMatrix> post;
};

struct OperatorEntry {
    std::string basis_in;
    std::string basis_out;
    double re = 0.0;
    double im = 0.0;
};

class EBSChannel {
public:
    // Hole mixing weakens the spin selection rule: the nominally uncoupled
    // combinations see a hot cavity at coupling mixing*g and the coupled ones
    // at g*sqrt(1 - mixing^2). Ideal mode zeroes the cross amplitudes t_c and
    // r_u, keeping only the scalar prefactors.
    static EBSChannel build(const CavityParams& params, double detuning, double mixing = 0.0,
                            ChannelMode mode = ChannelMode::Full);

    // Perfect limit (gamma = 0, kappa_s = 0, on resonance): t_u = -1, r_c = +1,
    // no cross amplitudes and no loss.
    static EBSChannel ideal();

    const CavityParams& params() const { return params_; }
    double detuning() const { return detuning_; }
    double mixing() const { return mixing_; }
    ChannelMode mode() const { return mode_; }

    c64 t_uncoupled() const { return t_u_; }
    c64 t_coupled() const { return t_c_; }
    c64 r_uncoupled() const { return r_u_; }
    c64 r_coupled() const { return r_c_; }

    Mat4 transmission_operator() const;
    Mat4 reflection_operator() const;

    // Rebuild with a different mixing amplitude; mixing = 0 reproduces the
    // unmixed channel exactly.
    EBSChannel with_mixing(double mixing) const;

    // Fidelities computed from this channel's effective amplitudes.
    FidelityReport fidelities() const;

    // All 16 entries of t_hat ('t') or r_hat ('r') as (basis-in, basis-out, re, im).
    std::vector<OperatorEntry> operator_entries(char which) const;

private:
    CavityParams params_;
    double detuning_ = 0.0;
    double mixing_ = 0.0;
    ChannelMode mode_ = ChannelMode::Full;
    c64 t_u_, t_c_, r_u_, r_c_;
};

// Closed-form fidelities from the bare amplitudes at one detuning:
//   F_t = |t0| / sqrt(|t0|^2 + |t|^2),  F_r = |r| / sqrt(|r0|^2 + |r|^2).
FidelityReport amplitude_fidelities(const CavityParams& params, double detuning);

// Split a state on the channel: transmitted branch t_hat|psi>, reflected
// branch r_hat|psi>, and an explicit loss port carrying the residual weight.
// Probabilities are relative to the input squared norm (which must be > 0).
std::vector<PortOutcome> scatter(const EBSChannel& ch, const PureState& state,
                                 std::string_view photon_reg, std::string_view spin_reg);

std::vector<DensityPortOutcome> scatter(const EBSChannel& ch, const DensityMatrix& rho,
                                        std::string_view photon_reg, std::string_view spin_reg);

// Phase damping on one register: coherences between its basis states are
// multiplied by lambda = exp(-tau/T2); populations and trace are untouched.
DensityMatrix apply_dephasing(const DensityMatrix& rho, std::string_view reg,
                              const DephasingParams& dephasing);

} // namespace ebs
