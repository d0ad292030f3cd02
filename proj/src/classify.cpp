#include "snt/classify.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace snt {

namespace {

// split off the data-register part, conjugate it, and reattach the ancilla
// factors (evolution Cliffords never touch ancillas, ancilla letters commute
// with everything on the data side, so phases just add)
PauliOperator conjugate_data(const PauliOperator& img, const CliffordTableau& t,
                             std::size_t n_data, std::size_t n_total) {
    PauliOperator d(n_data);
    for (std::size_t q = 0; q < n_data; ++q) {
        d.set_x(q, img.x_bit(q));
        d.set_z(q, img.z_bit(q));
    }
    PauliOperator out = t.conjugate(d).padded(n_total);
    for (std::size_t q = n_data; q < n_total; ++q) {
        out.set_x(q, img.x_bit(q));
        out.set_z(q, img.z_bit(q));
    }
    out.add_phase(img.raw_phase());
    return out;
}

}  // namespace

std::string fault_class_name(FaultClass c) {
    switch (c) {
        case FaultClass::PsDetectable: return "ps-detectable";
        case FaultClass::PpDetectable: return "pp-detectable";
        default: return "undetectable";
    }
}

PropagatedError propagate(const LayeredCircuit& c, std::size_t slot, const PauliOperator& p) {
    std::vector<LayerSlot> slots = layer_slots(c);
    if (slot >= slots.size()) throw std::out_of_range("propagate: bad slot index");
    if (p.n_qubits() != c.n_data && p.n_qubits() != c.n_qubits())
        throw std::invalid_argument("propagate: operator width mismatch");

    PropagatedError out;
    out.slot = slot;
    out.origin = p.padded(c.n_qubits());
    out.at_round.resize(c.rounds.size());

    PauliOperator img = out.origin;
    auto visit_check = [&](const LayerSlot& s, bool conjugate) {
        const ParityCheck& pc = c.rounds[s.round].checks[s.check_index];
        if (conjugate) {
            CliffordLayer sub = check_subcircuit(pc.stabilizer, pc.ancilla, c.n_qubits());
            for (const Gate& g : sub.gates()) apply_gate(img, g);
        }
        // the ancilla is read out along X; only a Z component flips it
        if (img.z_bit(pc.ancilla)) out.fired_checks.push_back(pc.outcome_bit);
        if (s.check_index + 1 == c.rounds[s.round].checks.size())
            out.at_round[s.round] = img;
    };

    if (slots[slot].check) visit_check(slots[slot], false);
    for (std::size_t i = slot + 1; i < slots.size(); ++i) {
        const LayerSlot& s = slots[i];
        if (s.check) {
            visit_check(s, true);
            continue;
        }
        const LayeredCircuit::Layer& layer = c.layers[s.layer - 1];
        for (const RotationGate& r : layer.rotations) {
            PauliOperator axis = PauliOperator::single(c.n_qubits(), r.target, r.axis);
            out.angle_signs.push_back(symplectic_product(img, axis) ? -1 : 1);
        }
        img = conjugate_data(img, layer.clifford.tableau(), c.n_data, c.n_qubits());
    }
    out.at_end = img;
    return out;
}

FaultClass classify_fault(const LayeredCircuit& c, std::size_t slot, const PauliOperator& p) {
    PropagatedError pe = propagate(c, slot, p);
    if (!pe.fired_checks.empty()) return FaultClass::PsDetectable;
    for (const PauliOperator& g : c.global_stabilizers)
        if (symplectic_product(pe.at_end, g.padded(c.n_qubits()))) return FaultClass::PpDetectable;
    return FaultClass::Undetectable;
}

bool boundary_detectable(const PauliOperator& p, const std::vector<PauliOperator>& stabs) {
    for (const PauliOperator& s : stabs)
        if (symplectic_product(p, s)) return true;
    return false;
}

NoisePartition partition(const LayeredCircuit& c, const NoiseModel& m) {
    if (m.n_qubits != c.n_qubits() || m.channels.size() != layer_slots(c).size())
        throw std::invalid_argument("partition: model does not match circuit");
    NoisePartition out;
    out.layers.resize(m.channels.size());
    std::unordered_map<std::string, FaultClass> memo;
    double total = 0, total_ps = 0, total_pp = 0;
    for (std::size_t i = 0; i < m.channels.size(); ++i) {
        const LayerNoiseChannel& ch = m.channels[i];
        LayerPartition& lp = out.layers[i];
        lp.term_class.reserve(ch.terms.size());
        for (const NoiseTerm& t : ch.terms) {
            std::string key = std::to_string(i) + ":" + t.op.to_string();
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, classify_fault(c, i, t.op)).first;
            lp.term_class.push_back(it->second);
            switch (it->second) {
                case FaultClass::PsDetectable: lp.p_ps += t.prob; break;
                case FaultClass::PpDetectable: lp.p_pp += t.prob; break;
                default: lp.eta += t.prob; break;
            }
        }
        if (!ch.check_layer) {
            total += ch.epsilon();
            total_ps += lp.p_ps;
            total_pp += lp.p_pp;
        }
    }
    out.defined = total > 0;
    if (out.defined) {
        out.r_ps = total_ps / total;
        out.r_pp = total_pp / total;
        out.r = out.r_ps + out.r_pp;
    }
    return out;
}

std::string partition_csv(const NoiseModel& m, const NoisePartition& p) {
    if (p.layers.size() != m.channels.size())
        throw std::invalid_argument("partition_csv: partition does not match model");
    std::ostringstream os;
    os << "layer,pauli,class,probability\n";
    os.precision(17);
    for (std::size_t i = 0; i < m.channels.size(); ++i)
        for (std::size_t j = 0; j < m.channels[i].terms.size(); ++j)
            os << i << "," << m.channels[i].terms[j].op.to_string() << ","
               << fault_class_name(p.layers[i].term_class[j]) << ","
               << m.channels[i].terms[j].prob << "\n";
    return os.str();
}

}  // namespace snt
