#pragma once

// Dense state engine for a few labeled two-level registers: photon
// polarizations in the circular basis {R, L} and spins in {up, down}.
// States may be sub-normalized; the squared norm of a branch is its
// probability weight. Register 0 owns the most significant index bit.
//
// Convention for linear polarization, fixed globally:
//   |H> = (|R> + |L>)/sqrt(2),  |V> = (|R> - |L>)/sqrt(2).

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ebs {

using c64 = std::complex<double>;

enum class RegisterKind { Photon, Spin };

struct RegisterLabel {
    std::string name;
    RegisterKind kind = RegisterKind::Photon;

    bool operator==(const RegisterLabel&) const = default;
};

struct Mat2 {
    std::array<c64, 4> m{}; // row-major
    c64& operator()(int i, int j) { return m[static_cast<std::size_t>(i * 2 + j)]; }
    const c64& operator()(int i, int j) const { return m[static_cast<std::size_t>(i * 2 + j)]; }
};

struct Mat4 {
    std::array<c64, 16> m{}; // row-major, basis order (R up, R down, L up, L down)
    c64& operator()(int i, int j) { return m[static_cast<std::size_t>(i * 4 + j)]; }
    const c64& operator()(int i, int j) const { return m[static_cast<std::size_t>(i * 4 + j)]; }
};

namespace gates {
Mat2 identity();
Mat2 hadamard();     // |0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2
Mat2 pauli_x();
Mat2 pauli_z();
Mat2 quarter_wave(); // circular <-> linear basis change; equals hadamard in this phase convention
} // namespace gates

class PureState {
public:
    PureState() = default;
    PureState(std::vector<RegisterLabel> registers, std::vector<c64> amplitudes);

    static PureState single(RegisterLabel reg, c64 a0, c64 a1);
    static PureState photon(std::string name, c64 a_r, c64 a_l);
    static PureState spin(std::string name, c64 a_up, c64 a_down);

    const std::vector<RegisterLabel>& registers() const { return registers_; }
    const std::vector<c64>& amplitudes() const { return amps_; }
    std::vector<c64>& amplitudes() { return amps_; }
    std::size_t register_count() const { return registers_.size(); }
    std::size_t dim() const { return amps_.size(); }

    std::size_t register_index(std::string_view name) const; // throws on unknown name
    bool has_register(std::string_view name) const;
    const RegisterLabel& label(std::size_t idx) const { return registers_[idx]; }

    double norm_squared() const;
    PureState normalized() const; // throws on zero norm

private:
    std::vector<RegisterLabel> registers_;
    std::vector<c64> amps_;
};

class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(std::vector<RegisterLabel> registers, std::vector<c64> rowmajor);

    const std::vector<RegisterLabel>& registers() const { return registers_; }
    std::size_t register_count() const { return registers_.size(); }
    std::size_t dim() const { return dim_; }
    c64& at(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }
    const c64& at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }
    const std::vector<c64>& data() const { return m_; }

    std::size_t register_index(std::string_view name) const;

    double trace() const;
    // Hermiticity within 1e-12, eigenvalues >= -1e-10, trace <= 1 + 1e-12.
    void validate() const;

private:
    std::vector<RegisterLabel> registers_;
    std::vector<c64> m_;
    std::size_t dim_ = 0;
};

// --- composition -----------------------------------------------------------

// Kronecker product; register labels must be disjoint.
PureState tensor(const PureState& a, const PureState& b);

// Reorder registers to the given name order (a permutation of the current set).
PureState reorder_registers(const PureState& s, const std::vector<std::string>& order);

c64 inner_product(const PureState& a, const PureState& b); // <a|b>, registers matched by name

// --- gates ------------------------------------------------------------------

PureState apply_gate(const PureState& s, std::string_view reg, const Mat2& gate);
// 4x4 operator on the ordered register pair (a, b); need not be unitary.
PureState apply_two_register_op(const PureState& s, std::string_view reg_a, std::string_view reg_b,
                                const Mat4& op);

DensityMatrix apply_gate(const DensityMatrix& rho, std::string_view reg, const Mat2& gate);
DensityMatrix apply_two_register_op(const DensityMatrix& rho, std::string_view reg_a,
                                    std::string_view reg_b, const Mat4& op);

// --- measurement ------------------------------------------------------------

struct BasisVector {
    c64 a0, a1;
    std::string label;
};

// Orthonormal pair defining a projective measurement of one register.
struct MeasurementBasis {
    BasisVector first, second;

    static MeasurementBasis photon_circular(); // outcomes R, L
    static MeasurementBasis photon_linear();   // outcomes H, V
    static MeasurementBasis spin_z();          // outcomes up, down
};

// Retain keeps the measured register collapsed onto the outcome ket (a
// non-demolition readout); Remove drops it from the state (an absorptive
// detector).
enum class MeasureMode { Retain, Remove };

struct MeasurementRecord {
    std::string register_name;
    std::string outcome;       // basis vector label
    double probability = 0.0;  // relative to the input squared norm when conditioned
    PureState post;            // normalized unless probability is zero
};

// Enumerates both outcomes deterministically. With conditioned = true the
// probabilities are rescaled by the input squared norm, which must be > 0.
std::vector<MeasurementRecord> measure(const PureState& s, std::string_view reg,
                                       const MeasurementBasis& basis,
                                       MeasureMode mode = MeasureMode::Retain,
                                       bool conditioned = false);

struct DensityMeasurementRecord {
    std::string register_name;
    std::string outcome;
    double probability = 0.0;
    DensityMatrix post; // normalized unless probability is zero
};

std::vector<DensityMeasurementRecord> measure(const DensityMatrix& rho, std::string_view reg,
                                              const MeasurementBasis& basis,
                                              MeasureMode mode = MeasureMode::Retain,
                                              bool conditioned = false);

// --- density-matrix utilities ------------------------------------------------

DensityMatrix to_density(const PureState& s); // |s><s|, trace = norm^2

// Trace out the named registers; the rest keep their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& traced);

// <target|rho|target> / trace(rho); target is normalized internally and its
// registers must match rho's as a set.
double state_fidelity(const DensityMatrix& rho, const PureState& target);
// Squared overlap of the normalized states.
double state_fidelity(const PureState& a, const PureState& b);

// Eigenvalues of a Hermitian matrix (row-major, dim x dim), ascending.
// Cyclic complex Jacobi; intended for the small matrices used here.
std::vector<double> hermitian_eigenvalues(std::vector<c64> matrix, std::size_t dim);

// (1/2) sum |eig(rho - sigma)|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace ebs
