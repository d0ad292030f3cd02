#pragma once

#include <string>
#include <vector>

#include "snt/circuits.hpp"
#include "snt/noise.hpp"

namespace snt {

enum class FaultClass { PsDetectable, PpDetectable, Undetectable };

std::string fault_class_name(FaultClass c);

// a fault pushed from the end of its slot to the end of the circuit;
// rotations never change the image, they only flip their angle sign when
// the image anticommutes with the rotation axis
struct PropagatedError {
    std::size_t slot = 0;
    PauliOperator origin;  // full register width
    std::vector<PauliOperator> at_round;  // image after each later round (earlier rounds empty)
    PauliOperator at_end;
    std::vector<int> angle_signs;            // per rotation after the slot, in order
    std::vector<std::size_t> fired_checks;   // outcome bits flipped by this fault
};

// slot indexes into layer_slots(c); p may be given at data or full width
PropagatedError propagate(const LayeredCircuit& c, std::size_t slot, const PauliOperator& p);

// PS when some check at or after the slot fires, else PP when the terminal
// image anticommutes with a declared global stabilizer, else undetectable
FaultClass classify_fault(const LayeredCircuit& c, std::size_t slot, const PauliOperator& p);

// no conjugation: detectable iff p anticommutes with some listed stabilizer
bool boundary_detectable(const PauliOperator& p, const std::vector<PauliOperator>& stabs);

struct LayerPartition {
    std::vector<FaultClass> term_class;  // parallel to the channel's terms
    double p_ps = 0, p_pp = 0, eta = 0;  // eta = undetectable mass
};

struct NoisePartition {
    std::vector<LayerPartition> layers;  // one per channel
    // probability-weighted ratios over evolution channels (check-layer noise
    // is tracked per layer but kept out of the aggregates, matching the
    // convention that lambda ignores the checks)
    double r_ps = 0, r_pp = 0, r = 0;
    bool defined = false;  // false when the model carries no noise
};

NoisePartition partition(const LayeredCircuit& c, const NoiseModel& m);

// columns: layer, pauli, class, probability
std::string partition_csv(const NoiseModel& m, const NoisePartition& p);

}  // namespace snt
