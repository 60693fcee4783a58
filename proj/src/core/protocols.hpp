#pragma once

// End-to-end procedures built on the channel: state transfer between photon
// and spin, single-shot QND spin readout, two-photon Bell-state creation with
// a shared spin, and remote spin-spin entanglement via a flying photon.
//
// Every protocol is a deterministic enumeration over scatter ports, optional
// phase-damping Kraus branches, and detector outcomes. Branch probabilities
// include the explicit loss ports and sum to one.
//
// Path tokens: "T" / "R" / "loss" for the scatter ports, "H" / "V" for linear
// photon detection, "R" / "L" for circular detection, "up" / "down" for the
// spin readout. Detectors H and up herald the + sign of the conditioned
// state, V and down the - sign; a reflected transfer branch carries the
// compensating bit flip already applied.

#include "channel.hpp"
#include "quantum.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ebs {

struct ProtocolBranch {
    std::string path;
    std::string target_label;
    double probability = 0.0;
    double fidelity = 0.0; // squared overlap with the target; 0 for loss branches
    bool is_loss = false;
    std::optional<PureState> pure_post;      // normalized; absent for loss or mixed branches
    std::optional<DensityMatrix> mixed_post; // normalized; present when dephasing mixed the branch
};

struct PortSummary {
    std::string combo; // "T", "R", "TT", "TR", ...
    double probability = 0.0;
    // Amplitude overlap of the port-conditioned state with the ideal
    // entangled target of that port (before any detection).
    double entanglement_fidelity = 0.0;
};

struct ProtocolResult {
    std::string name;
    double success_probability = 0.0;
    std::vector<ProtocolBranch> branches;
    std::vector<PortSummary> ports;
    std::vector<std::pair<std::string, double>> metrics;     // extra named scalars
    std::vector<std::pair<std::string, std::string>> notes;  // conventions, corrections
};

// Photon in alpha|R> + beta|L> scatters off the cavity; the spin starts in
// (|up> + |down>)/sqrt2. After linear detection of the photon the spin holds
// alpha|up> +/- beta|down>. Success probability is the non-loss weight.
ProtocolResult photon_to_spin_transfer(c64 alpha, c64 beta, const EBSChannel& ch,
                                       double tau_over_t2 = 0.0);

// Spin in alpha|up> + beta|down>, photon prepared in (|R> + |L>)/sqrt2.
// After a spin Hadamard and QND readout the photon holds alpha|R> +/- beta|L>.
// Success probability is the weight of the faithfully transferred component,
// (|t0|^2 + |r|^2)/2 in the unmixed channel.
ProtocolResult spin_to_photon_transfer(c64 alpha, c64 beta, const EBSChannel& ch,
                                       double tau_over_t2 = 0.0);

// A linearly polarized probe photon ('H' or 'V') scatters off the cavity and
// its port and helicity are detected. Inference rule: (T, R) -> up,
// (T, L) -> down, (reflected, L) -> up, (reflected, R) -> down. The metric
// "correctness_probability" is the non-loss-conditioned probability-weighted
// overlap of the post-readout spin with the inferred eigenstate.
ProtocolResult qnd_spin_readout(c64 alpha, c64 beta, const EBSChannel& ch, char probe = 'H',
                                double tau_over_t2 = 0.0);

// Two photons, both (|R> + |L>)/sqrt2, scatter in sequence off the same spin
// prepared in (|up> + |down>)/sqrt2. Port combinations TT/RR herald Phi+/-,
// TR/RT herald Psi+/-, selected by the spin readout after a spin Hadamard.
// Dephasing, when requested, acts once on the spin between the scatterings.
ProtocolResult two_photon_bell(const EBSChannel& ch1, const EBSChannel& ch2,
                               double tau_over_t2 = 0.0);

// One photon scatters off cavity A then cavity B, each holding a spin in
// (|up> + |down>)/sqrt2; linear detection of the photon heralds a Bell state
// of the two spins (Phi+/- for TT and RR, Psi+/- for TR and RT).
ProtocolResult remote_spin_entanglement(const EBSChannel& ch_a, const EBSChannel& ch_b,
                                        double tau_over_t2 = 0.0);

// Line-oriented report: header keys, then one block per port and per branch.
std::string to_report(const ProtocolResult& result);

} // namespace ebs
