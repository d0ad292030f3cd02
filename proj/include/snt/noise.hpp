#pragma once

#include <string>
#include <vector>

#include "snt/circuits.hpp"
#include "snt/rng.hpp"

namespace snt {

struct NoiseTerm {
    PauliOperator op;  // width = full register, positive sign
    double prob = 0;
};

// Pauli channel attached to one Clifford slot. Channels built by
// local_noise_model keep the slot's gate list so sampling can compose
// multiple per-gate error events exactly; channels loaded from text carry
// only the aggregated terms and sample at most one fault per slot.
struct LayerNoiseChannel {
    std::vector<NoiseTerm> terms;  // distinct non-identity Paulis

    std::vector<Gate> gates;           // the slot's gates, native width
    std::vector<std::size_t> tqg_pos;  // entangler positions within gates
    std::size_t native_width = 0;
    double eps_gate = 0;  // per-entangler error probability
    double two_qubit_fraction = 0.8;

    bool check_layer = false;
    std::size_t layer = 0;  // Clifford layer index (0 = state prep)
    std::size_t round = 0, check_index = 0;

    double epsilon() const;
    bool composable() const { return !tqg_pos.empty(); }
};

struct NoiseModel {
    std::size_t n_qubits = 0;
    std::vector<LayerNoiseChannel> channels;  // one per slot, execution order
    double eps_meas = 0;                      // outcome-bit flip probability
    std::size_t n_outcome_bits = 0;
};

struct NoiseMetrics {
    double csp = 1;          // product of per-layer success, evolution only
    double lambda = 0;       // -ln(csp)
    double lambda_cone = 0;  // restricted to layers feeding the checks
    double msp = 1;          // (1 - eps_meas)^n_outcome_bits
};

struct Fault {
    std::size_t channel = 0;
    PauliOperator op;
};

struct FaultSample {
    std::vector<Fault> faults;              // ordered by channel index
    std::vector<std::size_t> flipped_bits;  // outcome bits hit by readout flips
};

// Builds per-slot channels from an average two-qubit gate fidelity. Each
// entangler fails independently with probability 1 - (5 f_avg - 1)/4; on
// failure the error acts on the gate's pair, spending two_qubit_fraction of
// the mass uniformly on the 9 weight-2 pair Paulis and the rest uniformly on
// the 6 weight-1 ones; errors attach to the end of their layer.
NoiseModel local_noise_model(const LayeredCircuit& c, double f_avg_tqg,
                             double eps_meas = 0.0, double two_qubit_fraction = 0.8);

NoiseMetrics metrics(const NoiseModel& m, const LayeredCircuit& c);

FaultSample sample_faults(const NoiseModel& m, Rng& rng);

std::string dump_noise_model(const NoiseModel& m);
NoiseModel load_noise_model(const std::string& text);

}  // namespace snt
