#include "quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ebs {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t checked_pow2(std::size_t n) {
    if (n > 8) throw std::invalid_argument("at most 8 registers are supported");
    return std::size_t{1} << n;
}

void check_unique_names(const std::vector<RegisterLabel>& regs) {
    std::unordered_set<std::string> seen;
    for (const auto& r : regs) {
        if (r.name.empty()) throw std::invalid_argument("register name must not be empty");
        if (!seen.insert(r.name).second) {
            throw std::invalid_argument("duplicate register name: " + r.name);
        }
    }
}

// Bit position (from the LSB) owned by register k in an n-register state.
std::size_t shift_of(std::size_t k, std::size_t n) { return n - 1 - k; }

void check_basis(const MeasurementBasis& b) {
    const auto& f = b.first;
    const auto& s = b.second;
    const double n1 = std::norm(f.a0) + std::norm(f.a1);
    const double n2 = std::norm(s.a0) + std::norm(s.a1);
    const c64 ov = std::conj(f.a0) * s.a0 + std::conj(f.a1) * s.a1;
    if (std::abs(n1 - 1.0) > 1e-9 || std::abs(n2 - 1.0) > 1e-9 || std::abs(ov) > 1e-9) {
        throw std::invalid_argument("measurement basis is not an orthonormal pair");
    }
}

} // namespace

namespace gates {

Mat2 identity() {
    Mat2 g;
    g(0, 0) = 1.0;
    g(1, 1) = 1.0;
    return g;
}

Mat2 hadamard() {
    Mat2 g;
    g(0, 0) = kInvSqrt2;
    g(0, 1) = kInvSqrt2;
    g(1, 0) = kInvSqrt2;
    g(1, 1) = -kInvSqrt2;
    return g;
}

Mat2 pauli_x() {
    Mat2 g;
    g(0, 1) = 1.0;
    g(1, 0) = 1.0;
    return g;
}

Mat2 pauli_z() {
    Mat2 g;
    g(0, 0) = 1.0;
    g(1, 1) = -1.0;
    return g;
}

Mat2 quarter_wave() { return hadamard(); }

} // namespace gates

// --- PureState ---------------------------------------------------------------

PureState::PureState(std::vector<RegisterLabel> registers, std::vector<c64> amplitudes)
    : registers_(std::move(registers)), amps_(std::move(amplitudes)) {
    check_unique_names(registers_);
    if (amps_.size() != checked_pow2(registers_.size())) {
        throw std::invalid_argument("amplitude vector length must be 2^(register count)");
    }
}

PureState PureState::single(RegisterLabel reg, c64 a0, c64 a1) {
    return PureState({std::move(reg)}, {a0, a1});
}

PureState PureState::photon(std::string name, c64 a_r, c64 a_l) {
    return single({std::move(name), RegisterKind::Photon}, a_r, a_l);
}

PureState PureState::spin(std::string name, c64 a_up, c64 a_down) {
    return single({std::move(name), RegisterKind::Spin}, a_up, a_down);
}

std::size_t PureState::register_index(std::string_view name) const {
    for (std::size_t i = 0; i < registers_.size(); ++i) {
        if (registers_[i].name == name) return i;
    }
    throw std::invalid_argument("unknown register: " + std::string(name));
}

bool PureState::has_register(std::string_view name) const {
    return std::any_of(registers_.begin(), registers_.end(),
                       [&](const RegisterLabel& r) { return r.name == name; });
}

double PureState::norm_squared() const {
    double s = 0.0;
    for (const c64& a : amps_) s += std::norm(a);
    return s;
}

PureState PureState::normalized() const {
    const double n2 = norm_squared();
    if (n2 <= 0.0) throw std::domain_error("cannot normalize a zero-norm state");
    PureState out = *this;
    const double inv = 1.0 / std::sqrt(n2);
    for (c64& a : out.amps_) a *= inv;
    return out;
}

// --- DensityMatrix -------------------------------------------------------------

DensityMatrix::DensityMatrix(std::vector<RegisterLabel> registers, std::vector<c64> rowmajor)
    : registers_(std::move(registers)), m_(std::move(rowmajor)) {
    check_unique_names(registers_);
    dim_ = checked_pow2(registers_.size());
    if (m_.size() != dim_ * dim_) {
        throw std::invalid_argument("density matrix must be 2^n x 2^n");
    }
}

std::size_t DensityMatrix::register_index(std::string_view name) const {
    for (std::size_t i = 0; i < registers_.size(); ++i) {
        if (registers_[i].name == name) return i;
    }
    throw std::invalid_argument("unknown register: " + std::string(name));
}

double DensityMatrix::trace() const {
    double tr = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) tr += at(i, i).real();
    return tr;
}

void DensityMatrix::validate() const {
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (std::abs(at(i, j) - std::conj(at(j, i))) > 1e-12) {
                throw std::runtime_error("density matrix is not Hermitian");
            }
        }
    }
    const double tr = trace();
    if (tr < -1e-12 || tr > 1.0 + 1e-12) {
        throw std::runtime_error("density matrix trace outside [0, 1]");
    }
    const auto eig = hermitian_eigenvalues(m_, dim_);
    if (!eig.empty() && eig.front() < -1e-10) {
        throw std::runtime_error("density matrix has a negative eigenvalue");
    }
}

// --- composition ----------------------------------------------------------------

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<RegisterLabel> regs = a.registers();
    for (const auto& r : b.registers()) {
        if (a.has_register(r.name)) {
            throw std::invalid_argument("duplicate register name: " + r.name);
        }
        regs.push_back(r);
    }
    std::vector<c64> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a.amplitudes()[i] * b.amplitudes()[j];
        }
    }
    return PureState(std::move(regs), std::move(amps));
}

PureState reorder_registers(const PureState& s, const std::vector<std::string>& order) {
    const std::size_t n = s.register_count();
    if (order.size() != n) {
        throw std::invalid_argument("register order must list every register exactly once");
    }
    std::vector<std::size_t> src(n); // src[k] = old position of new register k
    for (std::size_t k = 0; k < n; ++k) src[k] = s.register_index(order[k]);
    std::vector<RegisterLabel> regs(n);
    for (std::size_t k = 0; k < n; ++k) regs[k] = s.label(src[k]);
    check_unique_names(regs);

    std::vector<c64> amps(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
        std::size_t j = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t bit = (i >> shift_of(src[k], n)) & 1u;
            j |= bit << shift_of(k, n);
        }
        amps[j] = s.amplitudes()[i];
    }
    return PureState(std::move(regs), std::move(amps));
}

c64 inner_product(const PureState& a, const PureState& b) {
    if (b.register_count() != a.register_count()) {
        throw std::invalid_argument("register sets differ");
    }
    std::vector<std::string> order;
    order.reserve(a.register_count());
    for (const auto& r : a.registers()) order.push_back(r.name);
    const PureState bb = reorder_registers(b, order);
    if (bb.registers() != a.registers()) {
        throw std::invalid_argument("register sets differ");
    }
    c64 s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a.amplitudes()[i]) * bb.amplitudes()[i];
    }
    return s;
}

// --- gates ------------------------------------------------------------------------

PureState apply_gate(const PureState& s, std::string_view reg, const Mat2& gate) {
    const std::size_t n = s.register_count();
    const std::size_t sh = shift_of(s.register_index(reg), n);
    PureState out = s;
    auto& a = out.amplitudes();
    const std::size_t bit = std::size_t{1} << sh;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i & bit) continue;
        const c64 a0 = a[i];
        const c64 a1 = a[i | bit];
        a[i] = gate(0, 0) * a0 + gate(0, 1) * a1;
        a[i | bit] = gate(1, 0) * a0 + gate(1, 1) * a1;
    }
    return out;
}

PureState apply_two_register_op(const PureState& s, std::string_view reg_a, std::string_view reg_b,
                                const Mat4& op) {
    const std::size_t n = s.register_count();
    const std::size_t ka = s.register_index(reg_a);
    const std::size_t kb = s.register_index(reg_b);
    if (ka == kb) throw std::invalid_argument("two-register op needs distinct registers");
    const std::size_t ba = std::size_t{1} << shift_of(ka, n);
    const std::size_t bb = std::size_t{1} << shift_of(kb, n);
    PureState out = s;
    auto& a = out.amplitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((i & ba) || (i & bb)) continue;
        c64 in[4];
        for (int pa = 0; pa < 2; ++pa) {
            for (int pb = 0; pb < 2; ++pb) {
                in[pa * 2 + pb] = a[i | (pa ? ba : 0) | (pb ? bb : 0)];
            }
        }
        for (int la = 0; la < 4; ++la) {
            c64 v = 0.0;
            for (int lb = 0; lb < 4; ++lb) v += op(la, lb) * in[lb];
            a[i | ((la >> 1) ? ba : 0) | ((la & 1) ? bb : 0)] = v;
        }
    }
    return out;
}

DensityMatrix apply_gate(const DensityMatrix& rho, std::string_view reg, const Mat2& gate) {
    const std::size_t n = rho.register_count();
    const std::size_t bit = std::size_t{1} << shift_of(rho.register_index(reg), n);
    const std::size_t dim = rho.dim();
    DensityMatrix out = rho;
    // rho -> U rho (row index), then -> (U rho) U^dagger (column index)
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const c64 a0 = out.at(i, j);
            const c64 a1 = out.at(i | bit, j);
            out.at(i, j) = gate(0, 0) * a0 + gate(0, 1) * a1;
            out.at(i | bit, j) = gate(1, 0) * a0 + gate(1, 1) * a1;
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if (j & bit) continue;
            const c64 a0 = out.at(i, j);
            const c64 a1 = out.at(i, j | bit);
            out.at(i, j) = a0 * std::conj(gate(0, 0)) + a1 * std::conj(gate(0, 1));
            out.at(i, j | bit) = a0 * std::conj(gate(1, 0)) + a1 * std::conj(gate(1, 1));
        }
    }
    return out;
}

DensityMatrix apply_two_register_op(const DensityMatrix& rho, std::string_view reg_a,
                                    std::string_view reg_b, const Mat4& op) {
    const std::size_t n = rho.register_count();
    const std::size_t ka = rho.register_index(reg_a);
    const std::size_t kb = rho.register_index(reg_b);
    if (ka == kb) throw std::invalid_argument("two-register op needs distinct registers");
    const std::size_t ba = std::size_t{1} << shift_of(ka, n);
    const std::size_t bb = std::size_t{1} << shift_of(kb, n);
    const std::size_t dim = rho.dim();
    DensityMatrix out = rho;
    auto index = [&](std::size_t base, int local) {
        return base | ((local >> 1) ? ba : 0) | ((local & 1) ? bb : 0);
    };
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & ba) || (i & bb)) continue;
            c64 in[4];
            for (int l = 0; l < 4; ++l) in[l] = out.at(index(i, l), j);
            for (int la = 0; la < 4; ++la) {
                c64 v = 0.0;
                for (int lb = 0; lb < 4; ++lb) v += op(la, lb) * in[lb];
                out.at(index(i, la), j) = v;
            }
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            if ((j & ba) || (j & bb)) continue;
            c64 in[4];
            for (int l = 0; l < 4; ++l) in[l] = out.at(i, index(j, l));
            for (int la = 0; la < 4; ++la) {
                c64 v = 0.0;
                for (int lb = 0; lb < 4; ++lb) v += in[lb] * std::conj(op(la, lb));
                out.at(i, index(j, la)) = v;
            }
        }
    }
    return out;
}

// --- measurement --------------------------------------------------------------------

MeasurementBasis MeasurementBasis::photon_circular() {
    return {{1.0, 0.0, "R"}, {0.0, 1.0, "L"}};
}

MeasurementBasis MeasurementBasis::photon_linear() {
    return {{kInvSqrt2, kInvSqrt2, "H"}, {kInvSqrt2, -kInvSqrt2, "V"}};
}

MeasurementBasis MeasurementBasis::spin_z() {
    return {{1.0, 0.0, "up"}, {0.0, 1.0, "down"}};
}

std::vector<MeasurementRecord> measure(const PureState& s, std::string_view reg,
                                       const MeasurementBasis& basis, MeasureMode mode,
                                       bool conditioned) {
    check_basis(basis);
    const std::size_t n = s.register_count();
    const std::size_t k = s.register_index(reg);
    const std::size_t sh = shift_of(k, n);
    const std::size_t bit = std::size_t{1} << sh;

    double total = 1.0;
    if (conditioned) {
        total = s.norm_squared();
        if (total <= 0.0) {
            throw std::domain_error("cannot condition measurement on a zero-norm state");
        }
    }

    std::vector<RegisterLabel> reduced_regs;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != k) reduced_regs.push_back(s.label(i));
    }

    std::vector<MeasurementRecord> records;
    for (const BasisVector* bv : {&basis.first, &basis.second}) {
        // overlap coefficients <bv|psi> over the remaining registers
        std::vector<c64> coeff(s.dim() / 2);
        double p = 0.0;
        std::size_t j = 0;
        for (std::size_t i = 0; i < s.dim(); ++i) {
            if (i & bit) continue;
            const c64 c = std::conj(bv->a0) * s.amplitudes()[i] +
                          std::conj(bv->a1) * s.amplitudes()[i | bit];
            coeff[j++] = c;
            p += std::norm(c);
        }

        PureState post;
        if (mode == MeasureMode::Remove) {
            post = PureState(reduced_regs, std::move(coeff));
        } else {
            std::vector<c64> amps(s.dim(), c64{});
            std::size_t jj = 0;
            for (std::size_t i = 0; i < s.dim(); ++i) {
                if (i & bit) continue;
                amps[i] = bv->a0 * coeff[jj];
                amps[i | bit] = bv->a1 * coeff[jj];
                ++jj;
            }
            post = PureState(s.registers(), std::move(amps));
        }
        if (p > 0.0) post = post.normalized();
        records.push_back(MeasurementRecord{std::string(reg), bv->label, p / total, std::move(post)});
    }
    return records;
}

std::vector<DensityMeasurementRecord> measure(const DensityMatrix& rho, std::string_view reg,
                                              const MeasurementBasis& basis, MeasureMode mode,
                                              bool conditioned) {
    check_basis(basis);
    const std::size_t n = rho.register_count();
    const std::size_t k = rho.register_index(reg);
    const std::size_t bit = std::size_t{1} << shift_of(k, n);
    const std::size_t dim = rho.dim();

    double total = 1.0;
    if (conditioned) {
        total = rho.trace();
        if (total <= 0.0) {
            throw std::domain_error("cannot condition measurement on a zero-trace state");
        }
    }

    std::vector<RegisterLabel> reduced_regs;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != k) reduced_regs.push_back(rho.registers()[i]);
    }

    std::vector<DensityMeasurementRecord> records;
    for (const BasisVector* bv : {&basis.first, &basis.second}) {
        // <b|rho|b> over the remaining registers
        const std::size_t rdim = dim / 2;
        std::vector<c64> red(rdim * rdim, c64{});
        std::size_t ri = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            std::size_t rj = 0;
            for (std::size_t j = 0; j < dim; ++j) {
                if (j & bit) continue;
                c64 v = 0.0;
                const c64 b[2] = {bv->a0, bv->a1};
                for (int x = 0; x < 2; ++x) {
                    for (int y = 0; y < 2; ++y) {
                        v += std::conj(b[x]) * b[y] *
                             rho.at(i | (x ? bit : 0), j | (y ? bit : 0));
                    }
                }
                red[ri * rdim + rj] = v;
                ++rj;
            }
            ++ri;
        }
        double p = 0.0;
        for (std::size_t i = 0; i < rdim; ++i) p += red[i * rdim + i].real();

        DensityMatrix post;
        if (mode == MeasureMode::Remove) {
            post = DensityMatrix(reduced_regs, std::move(red));
        } else {
            std::vector<c64> full(dim * dim, c64{});
            const c64 b[2] = {bv->a0, bv->a1};
            std::size_t ii = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & bit) continue;
                std::size_t jj = 0;
                for (std::size_t j = 0; j < dim; ++j) {
                    if (j & bit) continue;
                    const c64 v = red[ii * rdim + jj];
                    for (int x = 0; x < 2; ++x) {
                        for (int y = 0; y < 2; ++y) {
                            full[(i | (x ? bit : 0)) * dim + (j | (y ? bit : 0))] =
                                b[x] * std::conj(b[y]) * v;
                        }
                    }
                    ++jj;
                }
                ++ii;
            }
            post = DensityMatrix(rho.registers(), std::move(full));
        }
        if (p > 0.0) {
            DensityMatrix scaled = post;
            for (std::size_t i = 0; i < scaled.dim(); ++i) {
                for (std::size_t j = 0; j < scaled.dim(); ++j) {
                    scaled.at(i, j) /= p;
                }
            }
            post = std::move(scaled);
        }
        records.push_back(
            DensityMeasurementRecord{std::string(reg), bv->label, p / total, std::move(post)});
    }
    return records;
}

// --- density-matrix utilities ----------------------------------------------------------

DensityMatrix to_density(const PureState& s) {
    const std::size_t dim = s.dim();
    std::vector<c64> m(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            m[i * dim + j] = s.amplitudes()[i] * std::conj(s.amplitudes()[j]);
        }
    }
    return DensityMatrix(s.registers(), std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& traced) {
    const std::size_t n = rho.register_count();
    std::vector<bool> is_traced(n, false);
    for (const auto& name : traced) {
        const std::size_t k = rho.register_index(name);
        if (is_traced[k]) throw std::invalid_argument("register traced twice: " + name);
        is_traced[k] = true;
    }
    std::vector<std::size_t> kept;
    std::vector<std::size_t> gone;
    std::vector<RegisterLabel> regs;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_traced[i]) {
            gone.push_back(i);
        } else {
            kept.push_back(i);
            regs.push_back(rho.registers()[i]);
        }
    }
    const std::size_t kdim = std::size_t{1} << kept.size();
    const std::size_t gdim = std::size_t{1} << gone.size();
    auto compose = [&](std::size_t kept_idx, std::size_t gone_idx) {
        std::size_t full = 0;
        for (std::size_t a = 0; a < kept.size(); ++a) {
            const std::size_t b = (kept_idx >> shift_of(a, kept.size())) & 1u;
            full |= b << shift_of(kept[a], n);
        }
        for (std::size_t a = 0; a < gone.size(); ++a) {
            const std::size_t b = (gone_idx >> (gone.size() - 1 - a)) & 1u;
            full |= b << shift_of(gone[a], n);
        }
        return full;
    };
    std::vector<c64> m(kdim * kdim, c64{});
    for (std::size_t i = 0; i < kdim; ++i) {
        for (std::size_t j = 0; j < kdim; ++j) {
            c64 v = 0.0;
            for (std::size_t c = 0; c < gdim; ++c) {
                v += rho.at(compose(i, c), compose(j, c));
            }
            m[i * kdim + j] = v;
        }
    }
    return DensityMatrix(std::move(regs), std::move(m));
}

double state_fidelity(const DensityMatrix& rho, const PureState& target) {
    const double tr = rho.trace();
    if (tr <= 0.0) throw std::domain_error("fidelity undefined for zero-trace state");
    std::vector<std::string> order;
    for (const auto& r : rho.registers()) order.push_back(r.name);
    if (target.register_count() != rho.register_count()) {
        throw std::invalid_argument("register sets differ");
    }
    const PureState t = reorder_registers(target, order).normalized();
    c64 v = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            v += std::conj(t.amplitudes()[i]) * rho.at(i, j) * t.amplitudes()[j];
        }
    }
    return v.real() / tr;
}

double state_fidelity(const PureState& a, const PureState& b) {
    const c64 ov = inner_product(a.normalized(), b.normalized());
    return std::norm(ov);
}

std::vector<double> hermitian_eigenvalues(std::vector<c64> m, std::size_t dim) {
    if (m.size() != dim * dim) throw std::invalid_argument("matrix size mismatch");
    auto at = [&](std::size_t i, std::size_t j) -> c64& { return m[i * dim + j]; };

    double scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i) scale += std::abs(at(i, i));
    scale = std::max(scale, 1.0);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) off += std::norm(at(p, q));
        }
        if (off < 1e-28 * scale * scale) break;

        for (std::size_t p = 0; p < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                const c64 apq = at(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const double app = at(p, p).real();
                const double aqq = at(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double sgn = tau >= 0.0 ? 1.0 : -1.0;
                const double tt = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + tt * tt);
                const double s = tt * c;
                const c64 sp = s * (apq / mag); // rotation with the phase of a_pq

                for (std::size_t k = 0; k < dim; ++k) { // columns: A <- A U
                    const c64 vp = at(k, p);
                    const c64 vq = at(k, q);
                    at(k, p) = c * vp - std::conj(sp) * vq;
                    at(k, q) = sp * vp + c * vq;
                }
                for (std::size_t k = 0; k < dim; ++k) { // rows: A <- U^dagger A
                    const c64 vp = at(p, k);
                    const c64 vq = at(q, k);
                    at(p, k) = c * vp - sp * vq;
                    at(q, k) = std::conj(sp) * vp + c * vq;
                }
            }
        }
    }
    std::vector<double> eig(dim);
    for (std::size_t i = 0; i < dim; ++i) eig[i] = at(i, i).real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.registers() != sigma.registers()) {
        throw std::invalid_argument("register sets differ");
    }
    std::vector<c64> diff(rho.data());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= sigma.data()[i];
    const auto eig = hermitian_eigenvalues(std::move(diff), rho.dim());
    double s = 0.0;
    for (double e : eig) s += std::abs(e);
    return 0.5 * s;
}

} // namespace ebs
