#include "protocols.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace ebs {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_input_normalized(c64 alpha, c64 beta) {
    const double n = std::norm(alpha) + std::norm(beta);
    if (std::abs(n - 1.0) > 1e-9) {
        throw std::invalid_argument("input amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
    }
}

// A live enumeration branch; the squared norm of `state` is the absolute
// branch probability.
struct WorkBranch {
    std::string path;
    PureState state;
};

struct LossBranch {
    std::string path;
    double weight = 0.0;
};

std::string joined(const std::string& a, const std::string& b) {
    return a.empty() ? b : a + "/" + b;
}

// Split every live branch on the channel; loss weight goes to the loss list.
void scatter_step(std::vector<WorkBranch>& live, std::vector<LossBranch>& losses,
                  const EBSChannel& ch, const std::string& photon_reg,
                  const std::string& spin_reg) {
    std::vector<WorkBranch> next;
    next.reserve(live.size() * 2);
    for (const WorkBranch& b : live) {
        const double w = b.state.norm_squared();
        PureState t_branch =
            apply_two_register_op(b.state, photon_reg, spin_reg, ch.transmission_operator());
        PureState r_branch =
            apply_two_register_op(b.state, photon_reg, spin_reg, ch.reflection_operator());
        const double w_t = t_branch.norm_squared();
        const double w_r = r_branch.norm_squared();
        losses.push_back(LossBranch{joined(b.path, "loss"), w - w_t - w_r});
        next.push_back(WorkBranch{joined(b.path, "T"), std::move(t_branch)});
        next.push_back(WorkBranch{joined(b.path, "R"), std::move(r_branch)});
    }
    live = std::move(next);
}

// Phase damping on one register as a Kraus pair: sqrt((1+l)/2) I and
// sqrt((1-l)/2) Z. Sub-branches keep the same path and are merged at
// reporting time, which reproduces the density-matrix channel exactly.
void dephase_step(std::vector<WorkBranch>& live, const std::string& reg, double lambda) {
    if (lambda >= 1.0) return;
    const double w0 = std::sqrt(0.5 * (1.0 + lambda));
    const double w1 = std::sqrt(0.5 * (1.0 - lambda));
    std::vector<WorkBranch> next;
    next.reserve(live.size() * 2);
    for (const WorkBranch& b : live) {
        PureState s0 = b.state;
        for (c64& a : s0.amplitudes()) a *= w0;
        PureState s1 = apply_gate(b.state, reg, gates::pauli_z());
        for (c64& a : s1.amplitudes()) a *= w1;
        next.push_back(WorkBranch{b.path, std::move(s0)});
        next.push_back(WorkBranch{b.path, std::move(s1)});
    }
    live = std::move(next);
}

// Project every live branch on both outcomes of a detector, dropping the
// measured register.
void detect_step(std::vector<WorkBranch>& live, const std::string& reg,
                 const MeasurementBasis& basis) {
    std::vector<WorkBranch> next;
    next.reserve(live.size() * 2);
    for (const WorkBranch& b : live) {
        for (const MeasurementRecord& rec : measure(b.state, reg, basis, MeasureMode::Remove)) {
            PureState s = rec.post;
            const double amp = std::sqrt(rec.probability);
            for (c64& a : s.amplitudes()) a *= amp;
            next.push_back(WorkBranch{joined(b.path, rec.outcome), std::move(s)});
        }
    }
    live = std::move(next);
}

void apply_gate_step(std::vector<WorkBranch>& live, const std::string& reg, const Mat2& gate) {
    for (WorkBranch& b : live) b.state = apply_gate(b.state, reg, gate);
}

double total_weight(const std::vector<WorkBranch>& live) {
    double w = 0.0;
    for (const WorkBranch& b : live) w += b.state.norm_squared();
    return w;
}

// Probability of a path prefix, e.g. the "T/R" port combination.
double prefix_weight(const std::vector<WorkBranch>& live, const std::string& prefix) {
    double w = 0.0;
    for (const WorkBranch& b : live) {
        if (b.path == prefix || b.path.rfind(prefix + "/", 0) == 0) w += b.state.norm_squared();
    }
    return w;
}

// Amplitude overlap of the (possibly Kraus-mixed) port-conditioned state with
// a pure target: sqrt(<t|rho|t> / tr rho).
double prefix_amplitude_fidelity(const std::vector<WorkBranch>& live, const std::string& prefix,
                                 const PureState& target) {
    const PureState t = target.normalized();
    double num = 0.0;
    double den = 0.0;
    for (const WorkBranch& b : live) {
        if (!(b.path == prefix || b.path.rfind(prefix + "/", 0) == 0)) continue;
        num += std::norm(inner_product(t, b.state));
        den += b.state.norm_squared();
    }
    if (den <= 0.0) return 0.0;
    return std::sqrt(num / den);
}

// Merge terminal branches by path into reported branches. Targets are looked
// up per path; paths without a target entry get fidelity 0.
std::vector<ProtocolBranch> finalize(const std::vector<WorkBranch>& live,
                                     const std::vector<LossBranch>& losses,
                                     const std::map<std::string, std::pair<std::string, PureState>>& targets) {
    std::vector<ProtocolBranch> out;
    std::vector<std::string> order;
    std::map<std::string, std::vector<const WorkBranch*>> groups;
    for (const WorkBranch& b : live) {
        auto [it, inserted] = groups.try_emplace(b.path);
        if (inserted) order.push_back(b.path);
        it->second.push_back(&b);
    }
    for (const std::string& path : order) {
        const auto& group = groups[path];
        ProtocolBranch br;
        br.path = path;
        double p = 0.0;
        for (const WorkBranch* b : group) p += b->state.norm_squared();
        br.probability = p;
        const auto target_it = targets.find(path);
        if (target_it != targets.end()) {
            br.target_label = target_it->second.first;
            const PureState t = target_it->second.second.normalized();
            if (p > 0.0) {
                double overlap = 0.0;
                for (const WorkBranch* b : group) overlap += std::norm(inner_product(t, b->state));
                br.fidelity = overlap / p;
            }
        }
        if (p > 0.0) {
            if (group.size() == 1) {
                br.pure_post = group.front()->state.normalized();
            } else {
                DensityMatrix rho = to_density(group.front()->state);
                for (std::size_t i = 1; i < group.size(); ++i) {
                    const DensityMatrix d = to_density(group[i]->state);
                    for (std::size_t k = 0; k < rho.data().size(); ++k) {
                        rho.at(k / rho.dim(), k % rho.dim()) += d.data()[k];
                    }
                }
                for (std::size_t i = 0; i < rho.dim(); ++i) {
                    for (std::size_t j = 0; j < rho.dim(); ++j) rho.at(i, j) /= p;
                }
                br.mixed_post = std::move(rho);
            }
        }
        out.push_back(std::move(br));
    }
    // Kraus splitting can report the same loss port several times; merge.
    std::vector<std::string> loss_order;
    std::map<std::string, double> loss_weight;
    for (const LossBranch& l : losses) {
        auto [it, inserted] = loss_weight.try_emplace(l.path, 0.0);
        if (inserted) loss_order.push_back(l.path);
        it->second += l.weight;
    }
    for (const std::string& path : loss_order) {
        ProtocolBranch br;
        br.path = path;
        br.target_label = "-";
        br.probability = loss_weight[path];
        br.is_loss = true;
        out.push_back(std::move(br));
    }
    return out;
}

PureState make_photon_plus(const std::string& name) {
    return PureState::photon(name, kInvSqrt2, kInvSqrt2);
}

PureState make_spin_plus(const std::string& name) {
    return PureState::spin(name, kInvSqrt2, kInvSqrt2);
}

PureState two_qubit_target(const RegisterLabel& a, const RegisterLabel& b, c64 a00, c64 a01,
                           c64 a10, c64 a11) {
    return PureState({a, b}, {a00, a01, a10, a11});
}

// Projector onto the ideal EBS-correlated subspaces of a (photon, spin) pair.
Mat4 ebs_subspace_projector(Port port) {
    Mat4 p;
    if (port == Port::Transmitted) {
        p(0, 0) = 1.0; // R up
        p(3, 3) = 1.0; // L down
    } else {
        p(1, 1) = 1.0; // R down
        p(2, 2) = 1.0; // L up
    }
    return p;
}

std::string fmt_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace

ProtocolResult photon_to_spin_transfer(c64 alpha, c64 beta, const EBSChannel& ch,
                                       double tau_over_t2) {
    check_input_normalized(alpha, beta);
    const double lambda = DephasingParams::from_ratio(tau_over_t2).lambda();

    const PureState input = tensor(PureState::photon("ph", alpha, beta), make_spin_plus("s"));
    std::vector<WorkBranch> live{WorkBranch{"", input}};
    std::vector<LossBranch> losses;
    scatter_step(live, losses, ch, "ph", "s");

    ProtocolResult result;
    result.name = "photon_to_spin";
    result.success_probability = total_weight(live);

    const RegisterLabel ph{"ph", RegisterKind::Photon};
    const RegisterLabel sp{"s", RegisterKind::Spin};
    result.ports.push_back(PortSummary{
        "T", prefix_weight(live, "T"),
        prefix_amplitude_fidelity(live, "T", two_qubit_target(ph, sp, alpha, 0, 0, beta))});
    result.ports.push_back(PortSummary{
        "R", prefix_weight(live, "R"),
        prefix_amplitude_fidelity(live, "R", two_qubit_target(ph, sp, 0, alpha, beta, 0))});

    dephase_step(live, "s", lambda);
    // feed-forward spin flip on the reflected port
    for (WorkBranch& b : live) {
        if (b.path == "R") b.state = apply_gate(b.state, "s", gates::pauli_x());
    }
    detect_step(live, "ph", MeasurementBasis::photon_linear());

    std::map<std::string, std::pair<std::string, PureState>> targets;
    const PureState plus = PureState::spin("s", alpha, beta);
    const PureState minus = PureState::spin("s", alpha, -beta);
    for (const std::string& port : {std::string("T"), std::string("R")}) {
        targets.emplace(port + "/H", std::make_pair("alpha|up>+beta|down>", plus));
        targets.emplace(port + "/V", std::make_pair("alpha|up>-beta|down>", minus));
    }
    result.branches = finalize(live, losses, targets);
    result.notes.emplace_back("detection", "photon measured in the H/V basis");
    result.notes.emplace_back("sign_convention", "H heralds +, V heralds -");
    result.notes.emplace_back("correction", "reflected port applies a spin bit flip");
    return result;
}

ProtocolResult spin_to_photon_transfer(c64 alpha, c64 beta, const EBSChannel& ch,
                                       double tau_over_t2) {
    check_input_normalized(alpha, beta);
    const double lambda = DephasingParams::from_ratio(tau_over_t2).lambda();

    const PureState input = tensor(make_photon_plus("ph"), PureState::spin("s", alpha, beta));
    std::vector<WorkBranch> live{WorkBranch{"", input}};
    std::vector<LossBranch> losses;
    scatter_step(live, losses, ch, "ph", "s");

    ProtocolResult result;
    result.name = "spin_to_photon";
    // faithful transfer weight: the EBS-correlated component of each port
    double faithful = 0.0;
    for (const WorkBranch& b : live) {
        const Port port = (b.path == "T") ? Port::Transmitted : Port::Reflected;
        const PureState kept =
            apply_two_register_op(b.state, "ph", "s", ebs_subspace_projector(port));
        faithful += kept.norm_squared();
    }
    result.success_probability = faithful;

    const RegisterLabel ph{"ph", RegisterKind::Photon};
    const RegisterLabel sp{"s", RegisterKind::Spin};
    result.ports.push_back(PortSummary{
        "T", prefix_weight(live, "T"),
        prefix_amplitude_fidelity(live, "T", two_qubit_target(ph, sp, alpha, 0, 0, beta))});
    result.ports.push_back(PortSummary{
        "R", prefix_weight(live, "R"),
        prefix_amplitude_fidelity(live, "R", two_qubit_target(ph, sp, 0, beta, alpha, 0))});

    dephase_step(live, "s", lambda);
    // feed-forward polarization flip on the reflected port
    for (WorkBranch& b : live) {
        if (b.path == "R") b.state = apply_gate(b.state, "ph", gates::pauli_x());
    }
    apply_gate_step(live, "s", gates::hadamard());
    detect_step(live, "s", MeasurementBasis::spin_z());

    std::map<std::string, std::pair<std::string, PureState>> targets;
    const PureState plus = PureState::photon("ph", alpha, beta);
    const PureState minus = PureState::photon("ph", alpha, -beta);
    for (const std::string& port : {std::string("T"), std::string("R")}) {
        targets.emplace(port + "/up", std::make_pair("alpha|R>+beta|L>", plus));
        targets.emplace(port + "/down", std::make_pair("alpha|R>-beta|L>", minus));
    }
    result.branches = finalize(live, losses, targets);
    result.notes.emplace_back("detection", "spin read out in the z basis after a spin Hadamard");
    result.notes.emplace_back("sign_convention", "up heralds +, down heralds -");
    result.notes.emplace_back("correction", "reflected port applies a polarization bit flip");
    return result;
}

ProtocolResult qnd_spin_readout(c64 alpha, c64 beta, const EBSChannel& ch, char probe,
                                double tau_over_t2) {
    check_input_normalized(alpha, beta);
    if (probe != 'H' && probe != 'V') {
        throw std::invalid_argument("probe polarization must be 'H' or 'V'");
    }
    const double lambda = DephasingParams::from_ratio(tau_over_t2).lambda();

    const c64 a_l = (probe == 'H') ? c64(kInvSqrt2) : c64(-kInvSqrt2);
    const PureState input =
        tensor(PureState::photon("probe", kInvSqrt2, a_l), PureState::spin("s", alpha, beta));
    std::vector<WorkBranch> live{WorkBranch{"", input}};
    std::vector<LossBranch> losses;
    scatter_step(live, losses, ch, "probe", "s");

    ProtocolResult result;
    result.name = "qnd_readout";
    result.success_probability = total_weight(live);

    const RegisterLabel ph{"probe", RegisterKind::Photon};
    const RegisterLabel sp{"s", RegisterKind::Spin};
    const c64 sgn = (probe == 'H') ? 1.0 : -1.0;
    result.ports.push_back(PortSummary{
        "T", prefix_weight(live, "T"),
        prefix_amplitude_fidelity(live, "T",
                                  two_qubit_target(ph, sp, alpha, 0, 0, sgn * beta))});
    result.ports.push_back(PortSummary{
        "R", prefix_weight(live, "R"),
        prefix_amplitude_fidelity(live, "R",
                                  two_qubit_target(ph, sp, 0, beta, sgn * alpha, 0))});

    dephase_step(live, "s", lambda);
    detect_step(live, "probe", MeasurementBasis::photon_circular());

    // helicity inference: transmission preserves the selection-rule pairing,
    // reflection swaps it
    std::map<std::string, std::pair<std::string, PureState>> targets;
    targets.emplace("T/R", std::make_pair("up", PureState::spin("s", 1.0, 0.0)));
    targets.emplace("T/L", std::make_pair("down", PureState::spin("s", 0.0, 1.0)));
    targets.emplace("R/L", std::make_pair("up", PureState::spin("s", 1.0, 0.0)));
    targets.emplace("R/R", std::make_pair("down", PureState::spin("s", 0.0, 1.0)));
    result.branches = finalize(live, losses, targets);

    double weighted = 0.0;
    double nonloss = 0.0;
    for (const ProtocolBranch& b : result.branches) {
        if (b.is_loss) continue;
        weighted += b.probability * b.fidelity;
        nonloss += b.probability;
    }
    result.metrics.emplace_back("correctness_probability", nonloss > 0.0 ? weighted / nonloss : 0.0);
    result.notes.emplace_back("inference", "T/R -> up, T/L -> down, R/L -> up, R/R -> down");
    return result;
}

namespace {

// Shared tail of the two Bell protocols: port summaries over the four
// combinations, then detection and target assignment.
void add_combo_ports(ProtocolResult& result, const std::vector<WorkBranch>& live,
                     const std::map<std::string, PureState>& port_targets) {
    for (const std::string combo : {"T/T", "T/R", "R/T", "R/R"}) {
        PortSummary s;
        s.combo = combo == "T/T" ? "TT" : combo == "T/R" ? "TR" : combo == "R/T" ? "RT" : "RR";
        s.probability = prefix_weight(live, combo);
        s.entanglement_fidelity =
            prefix_amplitude_fidelity(live, combo, port_targets.at(combo));
        result.ports.push_back(std::move(s));
    }
}

} // namespace

ProtocolResult two_photon_bell(const EBSChannel& ch1, const EBSChannel& ch2, double tau_over_t2) {
    const double lambda = DephasingParams::from_ratio(tau_over_t2).lambda();

    const PureState input =
        tensor(tensor(make_photon_plus("ph1"), make_photon_plus("ph2")), make_spin_plus("s"));
    std::vector<WorkBranch> live{WorkBranch{"", input}};
    std::vector<LossBranch> losses;
    scatter_step(live, losses, ch1, "ph1", "s");
    dephase_step(live, "s", lambda); // spin idles between the two photons
    scatter_step(live, losses, ch2, "ph2", "s");

    ProtocolResult result;
    result.name = "two_photon_bell";
    result.success_probability = total_weight(live);

    const RegisterLabel p1{"ph1", RegisterKind::Photon};
    const RegisterLabel p2{"ph2", RegisterKind::Photon};
    const RegisterLabel sp{"s", RegisterKind::Spin};
    auto three = [&](int i_p1, int i_p2, int i_s, int j_p1, int j_p2, int j_s) {
        std::vector<c64> amps(8, c64{});
        amps[static_cast<std::size_t>(i_p1 * 4 + i_p2 * 2 + i_s)] = kInvSqrt2;
        amps[static_cast<std::size_t>(j_p1 * 4 + j_p2 * 2 + j_s)] = kInvSqrt2;
        return PureState({p1, p2, sp}, std::move(amps));
    };
    std::map<std::string, PureState> port_targets;
    port_targets.emplace("T/T", three(0, 0, 0, 1, 1, 1)); // (RR up + LL down)/sqrt2
    port_targets.emplace("T/R", three(0, 1, 0, 1, 0, 1)); // (RL up + LR down)/sqrt2
    port_targets.emplace("R/T", three(1, 0, 0, 0, 1, 1)); // (LR up + RL down)/sqrt2
    port_targets.emplace("R/R", three(0, 0, 1, 1, 1, 0)); // (RR down + LL up)/sqrt2
    add_combo_ports(result, live, port_targets);

    apply_gate_step(live, "s", gates::hadamard());
    detect_step(live, "s", MeasurementBasis::spin_z());

    auto bell = [&](const char* which) {
        const double s = kInvSqrt2;
        if (std::string(which) == "Phi+") return two_qubit_target(p1, p2, s, 0, 0, s);
        if (std::string(which) == "Phi-") return two_qubit_target(p1, p2, s, 0, 0, -s);
        if (std::string(which) == "Psi+") return two_qubit_target(p1, p2, 0, s, s, 0);
        return two_qubit_target(p1, p2, 0, s, -s, 0);
    };
    std::map<std::string, std::pair<std::string, PureState>> targets;
    for (const std::string combo : {"T/T", "R/R"}) {
        targets.emplace(combo + "/up", std::make_pair("Phi+", bell("Phi+")));
        targets.emplace(combo + "/down", std::make_pair("Phi-", bell("Phi-")));
    }
    for (const std::string combo : {"T/R", "R/T"}) {
        targets.emplace(combo + "/up", std::make_pair("Psi+", bell("Psi+")));
        targets.emplace(combo + "/down", std::make_pair("Psi-", bell("Psi-")));
    }
    result.branches = finalize(live, losses, targets);
    result.notes.emplace_back("detection", "spin read out in the z basis after a spin Hadamard");
    result.notes.emplace_back("sign_convention", "up heralds +, down heralds -");
    return result;
}

ProtocolResult remote_spin_entanglement(const EBSChannel& ch_a, const EBSChannel& ch_b,
                                        double tau_over_t2) {
    const double lambda = DephasingParams::from_ratio(tau_over_t2).lambda();

    const PureState input =
        tensor(tensor(make_photon_plus("ph"), make_spin_plus("sA")), make_spin_plus("sB"));
    std::vector<WorkBranch> live{WorkBranch{"", input}};
    std::vector<LossBranch> losses;
    scatter_step(live, losses, ch_a, "ph", "sA");
    dephase_step(live, "sA", lambda);
    scatter_step(live, losses, ch_b, "ph", "sB");
    dephase_step(live, "sB", lambda);

    ProtocolResult result;
    result.name = "remote_entanglement";
    result.success_probability = total_weight(live);

    const RegisterLabel ph{"ph", RegisterKind::Photon};
    const RegisterLabel sa{"sA", RegisterKind::Spin};
    const RegisterLabel sb{"sB", RegisterKind::Spin};
    auto three = [&](int i_ph, int i_a, int i_b, int j_ph, int j_a, int j_b) {
        std::vector<c64> amps(8, c64{});
        amps[static_cast<std::size_t>(i_ph * 4 + i_a * 2 + i_b)] = kInvSqrt2;
        amps[static_cast<std::size_t>(j_ph * 4 + j_a * 2 + j_b)] = kInvSqrt2;
        return PureState({ph, sa, sb}, std::move(amps));
    };
    std::map<std::string, PureState> port_targets;
    port_targets.emplace("T/T", three(0, 0, 0, 1, 1, 1)); // (R upup + L downdown)/sqrt2
    port_targets.emplace("T/R", three(0, 0, 1, 1, 1, 0));
    port_targets.emplace("R/T", three(0, 1, 0, 1, 0, 1));
    port_targets.emplace("R/R", three(0, 1, 1, 1, 0, 0));
    add_combo_ports(result, live, port_targets);

    detect_step(live, "ph", MeasurementBasis::photon_linear());

    auto bell = [&](const char* which) {
        const double s = kInvSqrt2;
        if (std::string(which) == "Phi+") return two_qubit_target(sa, sb, s, 0, 0, s);
        if (std::string(which) == "Phi-") return two_qubit_target(sa, sb, s, 0, 0, -s);
        if (std::string(which) == "Psi+") return two_qubit_target(sa, sb, 0, s, s, 0);
        return two_qubit_target(sa, sb, 0, s, -s, 0);
    };
    std::map<std::string, std::pair<std::string, PureState>> targets;
    for (const std::string combo : {"T/T", "R/R"}) {
        targets.emplace(combo + "/H", std::make_pair("Phi+", bell("Phi+")));
        targets.emplace(combo + "/V", std::make_pair("Phi-", bell("Phi-")));
    }
    for (const std::string combo : {"T/R", "R/T"}) {
        targets.emplace(combo + "/H", std::make_pair("Psi+", bell("Psi+")));
        targets.emplace(combo + "/V", std::make_pair("Psi-", bell("Psi-")));
    }
    result.branches = finalize(live, losses, targets);
    result.notes.emplace_back("detection", "photon measured in the H/V basis");
    result.notes.emplace_back("sign_convention", "H heralds +, V heralds -");
    return result;
}

std::string to_report(const ProtocolResult& result) {
    std::string out;
    out += "protocol = " + result.name + "\n";
    out += "success_probability = " + fmt_g9(result.success_probability) + "\n";
    for (const auto& [key, value] : result.metrics) {
        out += key + " = " + fmt_g9(value) + "\n";
    }
    for (const auto& [key, value] : result.notes) {
        out += "note." + key + " = " + value + "\n";
    }
    for (const PortSummary& p : result.ports) {
        out += "\n[port]\n";
        out += "combo = " + p.combo + "\n";
        out += "probability = " + fmt_g9(p.probability) + "\n";
        out += "entanglement_fidelity = " + fmt_g9(p.entanglement_fidelity) + "\n";
    }
    for (const ProtocolBranch& b : result.branches) {
        out += "\n[branch]\n";
        out += "path = " + b.path + "\n";
        out += "target = " + b.target_label + "\n";
        out += "probability = " + fmt_g9(std::max(0.0, b.probability)) + "\n";
        out += "fidelity = " + fmt_g9(std::min(1.0, std::max(0.0, b.fidelity))) + "\n";
        out += std::string("loss = ") + (b.is_loss ? "true" : "false") + "\n";
    }
    return out;
}

} // namespace ebs
