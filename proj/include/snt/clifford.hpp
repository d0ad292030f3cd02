#pragma once

#include "snt/pauli.hpp"

namespace snt {

// Clifford map stored as signed images of the single-qubit generators:
// image_x[q] = U X_q U^dag, image_z[q] = U Z_q U^dag.
class CliffordTableau {
public:
    CliffordTableau() = default;
    explicit CliffordTableau(std::size_t n);

    std::size_t n_qubits() const { return n_; }

    // append gate g: tableau becomes g * U (images conjugated by g)
    void apply_h(std::size_t q);
    void apply_s(std::size_t q);
    void apply_sdg(std::size_t q);
    void apply_x(std::size_t q);
    void apply_y(std::size_t q);
    void apply_z(std::size_t q);
    void apply_cz(std::size_t a, std::size_t b);
    void apply_cx(std::size_t a, std::size_t b);
    void apply_swap(std::size_t a, std::size_t b);

    PauliOperator conjugate(const PauliOperator& p) const;

    // composition: returns (second * this), i.e. this acts first
    CliffordTableau then(const CliffordTableau& second) const;
    CliffordTableau inverse() const;

    const PauliOperator& image_x(std::size_t q) const { return img_x_[q]; }
    const PauliOperator& image_z(std::size_t q) const { return img_z_[q]; }

    // images Hermitian, commutation relations of generators preserved
    bool is_valid() const;

    bool operator==(const CliffordTableau& o) const {
        return n_ == o.n_ && img_x_ == o.img_x_ && img_z_ == o.img_z_;
    }

private:
    void for_each_image(void (*f)(PauliOperator&, std::size_t), std::size_t q);

    std::size_t n_ = 0;
    std::vector<PauliOperator> img_x_, img_z_;
};

// in-place single-gate conjugation rules on a Pauli
void gate_h(PauliOperator& p, std::size_t q);
void gate_s(PauliOperator& p, std::size_t q);
void gate_sdg(PauliOperator& p, std::size_t q);
void gate_x(PauliOperator& p, std::size_t q);
void gate_y(PauliOperator& p, std::size_t q);
void gate_z(PauliOperator& p, std::size_t q);
void gate_cz(PauliOperator& p, std::size_t a, std::size_t b);
void gate_cx(PauliOperator& p, std::size_t a, std::size_t b);
void gate_swap(PauliOperator& p, std::size_t a, std::size_t b);

}  // namespace snt
