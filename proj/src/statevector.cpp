#include "snt/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "snt/rng.hpp"

namespace snt {

namespace {

using cd = std::complex<double>;

std::size_t qubit_mask(std::size_t n, std::size_t q) {
    return std::size_t(1) << (n - 1 - q);
}

// generic single-qubit 2x2 update
void apply_single(DenseState& v, std::size_t q, cd m00, cd m01, cd m10, cd m11) {
    std::size_t mask = qubit_mask(v.n, q);
    for (std::size_t i = 0; i < v.amp.size(); ++i) {
        if (i & mask) continue;
        cd a = v.amp[i], b = v.amp[i | mask];
        v.amp[i] = m00 * a + m01 * b;
        v.amp[i | mask] = m10 * a + m11 * b;
    }
}

}  // namespace

double DenseState::norm() const {
    double s = 0;
    for (const cd& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

void DenseState::normalize() {
    double s = norm();
    if (s <= 0) throw std::runtime_error("normalize: zero vector");
    for (cd& a : amp) a /= s;
}

void apply_gate(DenseState& v, const Gate& g) {
    const cd i(0, 1);
    const double s = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
        case GateKind::H: apply_single(v, g.a, s, s, s, -s); break;
        case GateKind::S: apply_single(v, g.a, 1, 0, 0, i); break;
        case GateKind::Sdg: apply_single(v, g.a, 1, 0, 0, -i); break;
        case GateKind::X: apply_single(v, g.a, 0, 1, 1, 0); break;
        case GateKind::Y: apply_single(v, g.a, 0, -i, i, 0); break;
        case GateKind::Z: apply_single(v, g.a, 1, 0, 0, -1); break;
        case GateKind::CZ: {
            std::size_t ma = qubit_mask(v.n, g.a), mb = qubit_mask(v.n, g.b);
            for (std::size_t k = 0; k < v.amp.size(); ++k)
                if ((k & ma) && (k & mb)) v.amp[k] = -v.amp[k];
            break;
        }
    }
}

void apply_rotation(DenseState& v, const RotationGate& r) {
    const cd i(0, 1);
    double c = std::cos(r.angle / 2), s = std::sin(r.angle / 2);
    switch (r.axis) {
        case 'X': apply_single(v, r.target, c, -i * s, -i * s, c); break;
        case 'Y': apply_single(v, r.target, c, -s, s, c); break;
        case 'Z': apply_single(v, r.target, cd(c, -s), 0, 0, cd(c, s)); break;
        default: throw std::invalid_argument("apply_rotation: bad axis");
    }
}

void apply_pauli(DenseState& v, const PauliOperator& p) {
    if (p.n_qubits() != v.n) throw std::invalid_argument("apply_pauli: width mismatch");
    // P = i^phase * X^x * Z^z: flip sign by z-parity of the source index,
    // then move the amplitude to index ^ xmask
    std::size_t dim = v.amp.size();
    std::vector<cd> out(dim);
    std::size_t xmask = 0, zmask = 0;
    for (std::size_t q = 0; q < v.n; ++q) {
        if (p.x_bit(q)) xmask |= qubit_mask(v.n, q);
        if (p.z_bit(q)) zmask |= qubit_mask(v.n, q);
    }
    const cd iu(0, 1);
    cd ph = 1.0;
    for (int k = 0; k < (p.raw_phase() & 3); ++k) ph *= iu;
    for (std::size_t k = 0; k < dim; ++k) {
        cd a = v.amp[k] * ph;
        if (std::popcount(k & zmask) & 1) a = -a;
        out[k ^ xmask] = a;
    }
    v.amp.swap(out);
}

double pauli_expectation(const DenseState& v, const PauliOperator& p) {
    DenseState w = v;
    apply_pauli(w, p);
    cd s = 0;
    for (std::size_t k = 0; k < v.amp.size(); ++k) s += std::conj(v.amp[k]) * w.amp[k];
    return s.real();
}

DenseState state_from_stabilizers(const std::vector<PauliOperator>& rows, std::size_t n) {
    if (n > 24) throw std::invalid_argument("state_from_stabilizers: register too wide");
    for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
        DenseState v(n);
        Rng rng = Rng::stream(0x51abf1ed, attempt, 0);
        for (auto& a : v.amp) a = cd(rng.uniform() - 0.5, rng.uniform() - 0.5);
        for (const PauliOperator& s : rows) {
            DenseState w = v;
            apply_pauli(w, s.padded(n));
            for (std::size_t k = 0; k < v.amp.size(); ++k)
                v.amp[k] = 0.5 * (v.amp[k] + w.amp[k]);
        }
        if (v.norm() < 1e-8) continue;  // unlucky draw landed near the kernel
        v.normalize();
        // fix the global phase so the construction is exactly reproducible
        std::size_t best = 0;
        for (std::size_t k = 1; k < v.amp.size(); ++k)
            if (std::abs(v.amp[k]) > std::abs(v.amp[best])) best = k;
        cd u = v.amp[best] / std::abs(v.amp[best]);
        for (auto& a : v.amp) a /= u;
        return v;
    }
    throw std::runtime_error("state_from_stabilizers: projection kept vanishing");
}

DenseState with_ancillas(const DenseState& data, std::size_t n_ancilla) {
    DenseState out(data.n + n_ancilla);
    out.amp.assign(out.amp.size(), 0.0);
    for (std::size_t k = 0; k < data.amp.size(); ++k)
        out.amp[k << n_ancilla] = data.amp[k];
    return out;
}

}  // namespace snt
