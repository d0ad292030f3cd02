#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snt/pauli.hpp"

namespace snt {

enum class EncodingKind { JW, LE, VC, DK, HX };

EncodingKind encoding_from_name(const std::string& name);
std::string encoding_name(EncodingKind kind);

// Fermionic modes live on a width x height grid; mode (x, y) has row-major
// index y * width + x. Rows double as spin species for the Hubbard chain.
struct EncEdge {
    std::size_t a, b;  // mode indices, a is the tail (west/south)
    bool horizontal;
    PauliOperator op;  // gauge-fixed edge operator, reversal negates
};

struct Observable {
    std::string name;
    PauliOperator op;
    double offset, scale;  // value = offset + scale * <op>
};

struct Encoding {
    EncodingKind kind;
    std::size_t width = 0, height = 0;
    std::size_t n_modes = 0, n_qubits = 0;
    std::vector<PauliOperator> vertex;  // one per mode
    std::vector<EncEdge> edges;
    std::vector<PauliOperator> local_stabilizers;
    std::vector<PauliOperator> global_stabilizers;  // row parities
    // generating set fixing the codespace for state preparation; a superset
    // of the constraints implied by local_stabilizers
    std::vector<PauliOperator> prep_stabilizers;
    std::vector<std::string> qubit_labels;

    std::size_t mode_index(std::size_t x, std::size_t y) const { return y * width + x; }
    const PauliOperator& vertex_operator(std::size_t m) const { return vertex.at(m); }
    const EncEdge* find_edge(std::size_t a, std::size_t b) const;

    // Signed Hermitian Pauli pair of the kinetic term: the hopping
    // contribution of edge (a, b) is -(t/2) * (first + second). Operators are
    // reduced to minimum weight modulo the local stabilizer group.
    std::pair<PauliOperator, PauliOperator> hopping_operators(std::size_t a, std::size_t b) const;

    // edge operator between arbitrary modes, composed along a path of
    // elementary edges (defined up to local stabilizers)
    PauliOperator composite_edge(std::size_t a, std::size_t b) const;

    // single-mode occupations n_m = (1 - V_m)/2
    std::vector<Observable> occupation_observables() const;
    // pair correlators (1 - V_a V_b)/2
    Observable pair_observable(std::size_t a, std::size_t b) const;

    std::string report() const;
};

Encoding build_encoding(EncodingKind kind, std::size_t width, std::size_t height);

// closed-form two-qubit gate count per Trotter step for a Hubbard chain of
// n_sites sites (two spin rows); two_dimensional selects the square lattice
// variant used by the resource estimator
double tqg_count_formula(EncodingKind kind, std::size_t n_sites, bool two_dimensional);

}  // namespace snt
