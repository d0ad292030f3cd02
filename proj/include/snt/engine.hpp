#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "snt/circuits.hpp"
#include "snt/encodings.hpp"
#include "snt/noise.hpp"
#include "snt/stabilizer.hpp"
#include "snt/statevector.hpp"

namespace snt {

enum class BackendKind { PauliFrame, Statevector };

// one circuit variant to execute; quasi-probability samplers attach a sign
// and a list of deliberate Pauli insertions (applied after the given slot,
// alongside any sampled noise there)
struct CircuitInstance {
    std::size_t id = 0;
    int sign = 1;
    std::vector<Fault> insertions;
};

struct ShotRecord {
    std::size_t instance = 0;
    std::uint64_t shot = 0;
    int sign = 1;
    std::vector<std::int8_t> check_bits;  // +1 / -1 per outcome bit
    std::vector<std::int8_t> outcomes;    // +1 / -1 per observable
    bool accepted = true;                 // every check bit read +1
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::uint64_t n_shots = 1;                // per instance
    std::optional<BackendKind> backend;       // default: by circuit content
    std::size_t statevector_cap = 20;         // qubit limit for the dense path
    bool faults_per_circuit = false;          // one fault draw reused across shots
    std::vector<bool> occupied;               // per mode; empty = checkerboard
};

// half filling with alternating spin along the chain: mode (x, y) starts
// occupied when x + y is even
std::vector<bool> checkerboard_pattern(std::size_t width, std::size_t height);

// codespace state with the requested occupations: every prep stabilizer reads
// +1 and every vertex operator reads (-1)^occupied; throws when the pattern
// conflicts with the encoded parity sector
StabilizerState prepare_initial_state(const Encoding& enc, const std::vector<bool>& occupied);

// executes every instance for cfg.n_shots shots, streaming one record per
// shot; observables are Paulis on the data register and must pairwise commute
void run(const Encoding& enc, const LayeredCircuit& c, const NoiseModel& m,
         const std::vector<CircuitInstance>& instances,
         const std::vector<PauliOperator>& observables, const RunConfig& cfg,
         const std::function<void(ShotRecord&&)>& sink);

std::vector<ShotRecord> run_collect(const Encoding& enc, const LayeredCircuit& c,
                                    const NoiseModel& m,
                                    const std::vector<CircuitInstance>& instances,
                                    const std::vector<PauliOperator>& observables,
                                    const RunConfig& cfg);

// columns: instance, shot, sign, accepted, check bits, outcomes
std::string shots_csv(const std::vector<ShotRecord>& shots);

}  // namespace snt
