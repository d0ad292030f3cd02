#include "snt/clifford.hpp"

namespace snt {

// Conjugation rules below act on the i^c X^x Z^z representation directly.

void gate_h(PauliOperator& p, std::size_t q) {
    bool x = p.x_bit(q), z = p.z_bit(q);
    if (x && z) p.add_phase(2);  // Y -> -Y
    p.set_x(q, z);
    p.set_z(q, x);
}

void gate_s(PauliOperator& p, std::size_t q) {
    if (p.x_bit(q)) {
        p.add_phase(1);  // X -> i XZ
        p.set_z(q, !p.z_bit(q));
    }
}

void gate_sdg(PauliOperator& p, std::size_t q) {
    if (p.x_bit(q)) {
        p.add_phase(3);
        p.set_z(q, !p.z_bit(q));
    }
}

void gate_x(PauliOperator& p, std::size_t q) {
    if (p.z_bit(q)) p.add_phase(2);
}

void gate_y(PauliOperator& p, std::size_t q) {
    if (p.x_bit(q) != p.z_bit(q)) p.add_phase(2);
}

void gate_z(PauliOperator& p, std::size_t q) {
    if (p.x_bit(q)) p.add_phase(2);
}

void gate_cz(PauliOperator& p, std::size_t a, std::size_t b) {
    bool xa = p.x_bit(a), xb = p.x_bit(b);
    if (xa && xb) p.add_phase(2);
    if (xb) p.set_z(a, !p.z_bit(a));
    if (xa) p.set_z(b, !p.z_bit(b));
}

void gate_cx(PauliOperator& p, std::size_t a, std::size_t b) {
    if (p.x_bit(a)) p.set_x(b, !p.x_bit(b));
    if (p.z_bit(b)) p.set_z(a, !p.z_bit(a));
}

void gate_swap(PauliOperator& p, std::size_t a, std::size_t b) {
    bool xa = p.x_bit(a), za = p.z_bit(a);
    p.set_x(a, p.x_bit(b));
    p.set_z(a, p.z_bit(b));
    p.set_x(b, xa);
    p.set_z(b, za);
}

CliffordTableau::CliffordTableau(std::size_t n) : n_(n) {
    img_x_.reserve(n);
    img_z_.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
        img_x_.push_back(PauliOperator::single(n, q, 'X'));
        img_z_.push_back(PauliOperator::single(n, q, 'Z'));
    }
}

#define SNT_APPLY1(fn)                                   \
    void CliffordTableau::apply_##fn(std::size_t q) {    \
        for (auto& p : img_x_) gate_##fn(p, q);          \
        for (auto& p : img_z_) gate_##fn(p, q);          \
    }
SNT_APPLY1(h)
SNT_APPLY1(s)
SNT_APPLY1(sdg)
SNT_APPLY1(x)
SNT_APPLY1(y)
SNT_APPLY1(z)
#undef SNT_APPLY1

#define SNT_APPLY2(fn)                                                  \
    void CliffordTableau::apply_##fn(std::size_t a, std::size_t b) {    \
        for (auto& p : img_x_) gate_##fn(p, a, b);                      \
        for (auto& p : img_z_) gate_##fn(p, a, b);                      \
    }
SNT_APPLY2(cz)
SNT_APPLY2(cx)
SNT_APPLY2(swap)
#undef SNT_APPLY2

PauliOperator CliffordTableau::conjugate(const PauliOperator& p) const {
    if (p.n_qubits() != n_) throw std::invalid_argument("conjugate: qubit count mismatch");
    PauliOperator r(n_);
    r.add_phase(p.raw_phase());
    for (std::size_t q = 0; q < n_; ++q)
        if (p.x_bit(q)) r = multiply(r, img_x_[q]);
    for (std::size_t q = 0; q < n_; ++q)
        if (p.z_bit(q)) r = multiply(r, img_z_[q]);
    return r;
}

CliffordTableau CliffordTableau::then(const CliffordTableau& second) const {
    if (second.n_ != n_) throw std::invalid_argument("then: qubit count mismatch");
    CliffordTableau r(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        r.img_x_[q] = second.conjugate(img_x_[q]);
        r.img_z_[q] = second.conjugate(img_z_[q]);
    }
    return r;
}

CliffordTableau CliffordTableau::inverse() const {
    // Symplectic part: the inverse of the binary map sends the image of each
    // generator back to it; reconstruct columns by solving with the identity
    // M^-1 = L M^T L, where L swaps x and z blocks. Then repair signs.
    CliffordTableau r(n_);
    for (std::size_t q = 0; q < n_; ++q) {
        PauliOperator px(n_), pz(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            // row entries of M^T read off the stored images
            if (img_z_[j].z_bit(q)) px.set_x(j, true);
            if (img_x_[j].z_bit(q)) px.set_z(j, true);
            if (img_z_[j].x_bit(q)) pz.set_x(j, true);
            if (img_x_[j].x_bit(q)) pz.set_z(j, true);
        }
        // make each candidate Hermitian, then repair its sign so the forward
        // map sends it to +X_q / +Z_q exactly
        if (!px.is_hermitian()) px.add_phase(1);
        if (!pz.is_hermitian()) pz.add_phase(1);
        if (conjugate(px).sign() < 0) px.negate();
        if (conjugate(pz).sign() < 0) pz.negate();
        r.img_x_[q] = px;
        r.img_z_[q] = pz;
    }
    return r;
}

bool CliffordTableau::is_valid() const {
    for (std::size_t q = 0; q < n_; ++q) {
        if (!img_x_[q].is_hermitian() || !img_z_[q].is_hermitian()) return false;
        if (symplectic_product(img_x_[q], img_z_[q]) != 1) return false;
        for (std::size_t r = q + 1; r < n_; ++r) {
            if (symplectic_product(img_x_[q], img_x_[r]) != 0) return false;
            if (symplectic_product(img_z_[q], img_z_[r]) != 0) return false;
            if (symplectic_product(img_x_[q], img_z_[r]) != 0) return false;
            if (symplectic_product(img_z_[q], img_x_[r]) != 0) return false;
        }
    }
    return true;
}

}  // namespace snt
