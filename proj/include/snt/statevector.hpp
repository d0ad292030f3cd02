#pragma once

#include <complex>
#include <vector>

#include "snt/circuits.hpp"

namespace snt {

// dense state over n qubits; qubit 0 owns the most significant index bit,
// matching the text convention used everywhere else
struct DenseState {
    std::size_t n = 0;
    std::vector<std::complex<double>> amp;

    explicit DenseState(std::size_t n_qubits)
        : n(n_qubits), amp(std::size_t(1) << n_qubits, 0.0) {
        amp[0] = 1.0;
    }

    double norm() const;
    void normalize();
};

void apply_gate(DenseState& v, const Gate& g);
void apply_rotation(DenseState& v, const RotationGate& r);
void apply_pauli(DenseState& v, const PauliOperator& p);

// <v|P|v>, real for Hermitian P
double pauli_expectation(const DenseState& v, const PauliOperator& p);

// unique joint +1 eigenstate of a rank-n stabilizer group, built by
// projecting a fixed pseudo-random vector; deterministic across runs
DenseState state_from_stabilizers(const std::vector<PauliOperator>& rows, std::size_t n);

// embeds a data-register state into a wider register with trailing |0>
// ancillas (ancilla qubits take the low-order index bits)
DenseState with_ancillas(const DenseState& data, std::size_t n_ancilla);

}  // namespace snt
