#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "snt/clifford.hpp"
#include "snt/encodings.hpp"

namespace snt {

enum class GateKind { H, S, Sdg, X, Y, Z, CZ };

struct Gate {
    GateKind kind;
    std::uint32_t a = 0, b = 0;  // b only used by CZ
    bool operator==(const Gate&) const = default;
};

bool is_two_qubit(GateKind k);
std::string gate_name(GateKind k);

struct RotationGate {
    std::uint32_t target = 0;
    char axis = 'Z';  // X, Y or Z
    double angle = 0;  // exp(-i angle/2 * axis), normalized to (-pi, pi]
};

// ordered native gates (CZ plus single-qubit Cliffords) with a cached tableau
class CliffordLayer {
public:
    CliffordLayer() = default;
    explicit CliffordLayer(std::size_t n) : tableau_(n) {}

    std::size_t n_qubits() const { return tableau_.n_qubits(); }
    const std::vector<Gate>& gates() const { return gates_; }
    const CliffordTableau& tableau() const { return tableau_; }
    std::size_t n_tqg() const { return n_tqg_; }
    bool empty() const { return gates_.empty(); }

    void add(Gate g);
    void add_cx(std::uint32_t c, std::uint32_t t);  // sugar: h t; cz c t; h t
    void append(const CliffordLayer& other);
    void append_inverse(const CliffordLayer& other);

private:
    std::vector<Gate> gates_;
    CliffordTableau tableau_;
    std::size_t n_tqg_ = 0;
};

// conjugation of p by a single gate, in place
void apply_gate(PauliOperator& p, const Gate& g);
Gate inverse_gate(const Gate& g);

struct ParityCheck {
    std::size_t stab_index = 0;      // into local_stabilizers
    PauliOperator stabilizer;        // padded to the full register
    std::size_t ancilla = 0;         // qubit index
    std::size_t outcome_bit = 0;     // fresh per round
};

struct CheckRound {
    std::size_t after_step = 0;   // Trotter step boundary
    std::size_t after_layer = 0;  // rotation/Clifford layers completed before it
    std::vector<ParityCheck> checks;
};

struct FhmParams {
    double t = 1.0, U = 4.0, T = 0.5;
    std::size_t n_trotter = 10;
    bool operator==(const FhmParams&) const = default;
    double dt() const { return T / double(n_trotter); }
};

struct LayeredCircuit {
    std::size_t n_data = 0, n_ancilla = 0;
    std::size_t n_qubits() const { return n_data + n_ancilla; }

    CliffordLayer initial;
    struct Layer {
        std::vector<RotationGate> rotations;
        CliffordLayer clifford;
    };
    std::vector<Layer> layers;
    std::vector<CheckRound> rounds;            // ordered by after_layer
    std::vector<std::size_t> step_boundaries;  // layer count at each Trotter step end

    // declared on the data register (width n_data)
    std::vector<PauliOperator> local_stabilizers;
    std::vector<PauliOperator> global_stabilizers;

    std::size_t n_outcome_bits() const;
    bool is_clifford() const;
};

// the ancilla is prepared in |+>, picks up one controlled factor per
// stabilizer qubit (one CZ each) and is measured in the X basis
CliffordLayer check_subcircuit(const PauliOperator& stabilizer, std::size_t ancilla,
                               std::size_t n_total);

// exp(-i(theta/2)P) as left Clifford, central single-qubit rotation, right
// Clifford; each side carries weight-1 CZ gates
std::tuple<CliffordLayer, RotationGate, CliffordLayer>
decompose_pauli_exponential(const PauliOperator& p, double theta);

// first-order Trotter circuit for the Hubbard chain: per step, horizontal
// hops (even then odd columns), vertical hops (even then odd rows, only on
// grids taller than two rows), then on-site interaction (rows as spins)
LayeredCircuit trotterize(const Encoding& enc, const FhmParams& params);

LayeredCircuit clifford_round(const LayeredCircuit& c);

// placement lists Trotter-step boundaries (1-based); empty means evenly
// spaced with the last round at the final step
LayeredCircuit insert_parity_checks(const LayeredCircuit& c, std::size_t n_rounds,
                                    std::vector<std::size_t> placement = {});

// one slot per Clifford block, in execution order: the state-prep layer
// (layer 0), each evolution layer's Clifford (layer k), and every parity
// check as its own slot right after its round's position
struct LayerSlot {
    bool check = false;
    std::size_t layer = 0;  // 0 = initial, k = layers[k-1].clifford
    std::size_t round = 0, check_index = 0;
};
std::vector<LayerSlot> layer_slots(const LayeredCircuit& c);

// gate list and native width of a slot (evolution slots act on the data
// register only, check slots on the full register)
const CliffordLayer& slot_clifford(const LayeredCircuit& c, const LayerSlot& s,
                                   CliffordLayer& scratch);

struct TqgCounts {
    std::vector<std::size_t> per_layer;  // initial first, then each layer
    std::size_t evolution = 0;
    std::size_t checks = 0;
};
TqgCounts count_tqgs(const LayeredCircuit& c);

std::string to_ir(const LayeredCircuit& c);
LayeredCircuit from_ir(const std::string& text);

}  // namespace snt
