#include "snt/engine.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace snt {

namespace {

void tableau_apply(CliffordTableau& t, const Gate& g) {
    switch (g.kind) {
        case GateKind::H: t.apply_h(g.a); break;
        case GateKind::S: t.apply_s(g.a); break;
        case GateKind::Sdg: t.apply_sdg(g.a); break;
        case GateKind::X: t.apply_x(g.a); break;
        case GateKind::Y: t.apply_y(g.a); break;
        case GateKind::Z: t.apply_z(g.a); break;
        case GateKind::CZ: t.apply_cz(g.a, g.b); break;
    }
}

struct SlotInfo {
    LayerSlot slot;
    std::vector<Gate> gates;                       // register-wide indices
    const std::vector<RotationGate>* rotations = nullptr;
    const ParityCheck* check = nullptr;
    CliffordTableau full;                          // full register width
};

std::vector<SlotInfo> build_slots(const LayeredCircuit& c) {
    std::vector<SlotInfo> out;
    CliffordLayer scratch;
    for (const LayerSlot& s : layer_slots(c)) {
        SlotInfo info;
        info.slot = s;
        info.gates = slot_clifford(c, s, scratch).gates();
        if (s.check) info.check = &c.rounds[s.round].checks[s.check_index];
        else if (s.layer > 0) info.rotations = &c.layers[s.layer - 1].rotations;
        info.full = CliffordTableau(c.n_qubits());
        for (const Gate& g : info.gates) tableau_apply(info.full, g);
        out.push_back(std::move(info));
    }
    return out;
}

void prepare_into(StabilizerState& st, const Encoding& enc, const std::vector<bool>& occupied) {
    if (occupied.size() != enc.n_modes)
        throw std::invalid_argument("prepare_initial_state: pattern size != mode count");
    std::size_t w = st.n_qubits();
    std::vector<PauliOperator> fixed;
    try {
        for (const PauliOperator& s : enc.prep_stabilizers) st.force(s.padded(w), fixed);
        for (std::size_t m = 0; m < enc.n_modes; ++m) {
            PauliOperator v = enc.vertex[m].padded(w);
            if (occupied[m]) v.negate();
            st.force(v, fixed);
        }
    } catch (const std::logic_error& e) {
        throw std::invalid_argument(std::string("prepare_initial_state: occupation pattern "
                                                "conflicts with the encoded sector (") +
                                    e.what() + ")");
    }
}

// all deliberate insertions of an instance, grouped by slot
std::map<std::size_t, std::vector<PauliOperator>>
insertion_map(const CircuitInstance& inst, std::size_t n_slots, std::size_t nq) {
    std::map<std::size_t, std::vector<PauliOperator>> out;
    for (const Fault& f : inst.insertions) {
        if (f.channel >= n_slots)
            throw std::invalid_argument("run: insertion slot out of range");
        if (f.op.n_qubits() > nq)
            throw std::invalid_argument("run: insertion width mismatch");
        out[f.channel].push_back(f.op.padded(nq));
    }
    return out;
}

constexpr std::uint64_t kFaultStreamTag = 0xfa171c0de0ull;

}  // namespace

std::vector<bool> checkerboard_pattern(std::size_t width, std::size_t height) {
    std::vector<bool> out(width * height, false);
    for (std::size_t y = 0; y < height; ++y)
        for (std::size_t x = 0; x < width; ++x)
            out[y * width + x] = ((x + y) % 2 == 0);
    return out;
}

StabilizerState prepare_initial_state(const Encoding& enc, const std::vector<bool>& occupied) {
    StabilizerState st(enc.n_qubits);
    prepare_into(st, enc, occupied);
    return st;
}

void run(const Encoding& enc, const LayeredCircuit& c, const NoiseModel& m,
         const std::vector<CircuitInstance>& instances,
         const std::vector<PauliOperator>& observables, const RunConfig& cfg,
         const std::function<void(ShotRecord&&)>& sink) {
    std::size_t nq = c.n_qubits();
    if (enc.n_qubits != c.n_data)
        throw std::invalid_argument("run: encoding and circuit disagree on register size");
    bool noiseless = m.channels.empty() && m.eps_meas == 0;
    std::vector<SlotInfo> slots = build_slots(c);
    if (!noiseless &&
        (m.n_qubits != nq || m.channels.size() != slots.size() ||
         m.n_outcome_bits != c.n_outcome_bits()))
        throw std::invalid_argument("run: noise model does not match circuit");

    std::vector<PauliOperator> obs;
    for (const PauliOperator& o : observables) {
        if (o.n_qubits() != c.n_data && o.n_qubits() != nq)
            throw std::invalid_argument("run: observable width mismatch");
        obs.push_back(o.padded(nq));
    }
    for (std::size_t i = 0; i < obs.size(); ++i)
        for (std::size_t j = i + 1; j < obs.size(); ++j)
            if (symplectic_product(obs[i], obs[j]))
                throw std::invalid_argument("run: observables must pairwise commute");

    BackendKind backend = cfg.backend.value_or(c.is_clifford() ? BackendKind::PauliFrame
                                                               : BackendKind::Statevector);
    if (backend == BackendKind::PauliFrame && !c.is_clifford())
        throw std::invalid_argument("run: frame backend needs a Clifford circuit");
    if (backend == BackendKind::Statevector && nq > cfg.statevector_cap)
        throw std::invalid_argument("run: register too wide for the dense backend");

    const std::vector<bool> pattern =
        cfg.occupied.empty() ? checkerboard_pattern(enc.width, enc.height) : cfg.occupied;
    std::size_t n_bits = c.n_outcome_bits();

    if (backend == BackendKind::PauliFrame) {
        // one noiseless pass fixes every reference value
        StabilizerState ref(nq);
        prepare_into(ref, enc, pattern);
        for (const SlotInfo& info : slots) {
            ref.apply(info.full);
            if (info.check) {
                PauliOperator xa = PauliOperator::single(nq, info.check->ancilla, 'X');
                if (ref.expectation(xa) != 1)
                    throw std::logic_error("run: reference parity check did not read +1");
            }
        }
        std::vector<int> det(obs.size());
        bool all_det = true;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            det[i] = ref.expectation(obs[i]);
            if (det[i] == 0) all_det = false;
        }

        for (const CircuitInstance& inst : instances) {
            auto ins = insertion_map(inst, slots.size(), nq);
            FaultSample shared;
            if (cfg.faults_per_circuit && !noiseless) {
                Rng fr = Rng::stream(cfg.seed ^ kFaultStreamTag, inst.id, 0);
                shared = sample_faults(m, fr);
            }
            for (std::uint64_t shot = 0; shot < cfg.n_shots; ++shot) {
                Rng rng = Rng::stream(cfg.seed, inst.id, shot);
                FaultSample fs;
                if (!noiseless)
                    fs = cfg.faults_per_circuit ? shared : sample_faults(m, rng);

                ShotRecord rec;
                rec.instance = inst.id;
                rec.shot = shot;
                rec.sign = inst.sign;
                rec.check_bits.assign(n_bits, 1);
                rec.outcomes.resize(obs.size());

                PauliOperator frame(nq);
                bool live = false;
                std::size_t fi = 0;
                for (std::size_t si = 0; si < slots.size(); ++si) {
                    const SlotInfo& info = slots[si];
                    if (live)
                        for (const Gate& g : info.gates) apply_gate(frame, g);
                    while (fi < fs.faults.size() && fs.faults[fi].channel == si) {
                        frame = multiply(frame, fs.faults[fi].op);
                        live = true;
                        ++fi;
                    }
                    if (auto it = ins.find(si); it != ins.end())
                        for (const PauliOperator& p : it->second) {
                            frame = multiply(frame, p);
                            live = true;
                        }
                    if (info.check && live && frame.z_bit(info.check->ancilla))
                        rec.check_bits[info.check->outcome_bit] = -1;
                }
                for (std::size_t b : fs.flipped_bits) rec.check_bits[b] = -rec.check_bits[b];
                for (std::int8_t v : rec.check_bits)
                    if (v != 1) rec.accepted = false;

                if (all_det || obs.empty()) {
                    for (std::size_t i = 0; i < obs.size(); ++i) {
                        int flip = (live && symplectic_product(frame, obs[i])) ? -1 : 1;
                        rec.outcomes[i] = std::int8_t(det[i] * flip);
                    }
                } else {
                    // joint sampling keeps cross-observable correlations exact
                    StabilizerState st = ref;
                    for (std::size_t i = 0; i < obs.size(); ++i) {
                        int v = st.measure(obs[i], rng);
                        int flip = (live && symplectic_product(frame, obs[i])) ? -1 : 1;
                        rec.outcomes[i] = std::int8_t(v * flip);
                    }
                }
                sink(std::move(rec));
            }
        }
        return;
    }

    // dense backend: prepare once, cache the fault-free trajectory
    StabilizerState prep(c.n_data);
    prepare_into(prep, enc, pattern);
    std::vector<PauliOperator> rows;
    for (std::size_t i = 0; i < c.n_data; ++i) rows.push_back(prep.stabilizer(i));
    DenseState start = with_ancillas(state_from_stabilizers(rows, c.n_data), c.n_ancilla);

    auto simulate = [&](const FaultSample& fs,
                        const std::map<std::size_t, std::vector<PauliOperator>>& ins,
                        std::vector<std::int8_t>& checks, std::vector<double>& evs) {
        DenseState v = start;
        std::size_t fi = 0;
        for (std::size_t si = 0; si < slots.size(); ++si) {
            const SlotInfo& info = slots[si];
            if (info.rotations)
                for (const RotationGate& r : *info.rotations) apply_rotation(v, r);
            for (const Gate& g : info.gates) apply_gate(v, g);
            while (fi < fs.faults.size() && fs.faults[fi].channel == si) {
                apply_pauli(v, fs.faults[fi].op);
                ++fi;
            }
            if (auto it = ins.find(si); it != ins.end())
                for (const PauliOperator& p : it->second) apply_pauli(v, p);
            if (info.check) {
                PauliOperator xa = PauliOperator::single(nq, info.check->ancilla, 'X');
                double ev = pauli_expectation(v, xa);
                if (std::abs(std::abs(ev) - 1) > 1e-6)
                    throw std::logic_error("run: parity check came out indeterminate");
                checks[info.check->outcome_bit] = ev > 0 ? 1 : -1;
            }
        }
        for (const PauliOperator& o : obs) evs.push_back(pauli_expectation(v, o));
    };

    std::vector<std::int8_t> clean_checks(n_bits, 1);
    std::vector<double> clean_evs;
    {
        std::map<std::size_t, std::vector<PauliOperator>> none;
        simulate(FaultSample{}, none, clean_checks, clean_evs);
        for (std::int8_t b : clean_checks)
            if (b != 1) throw std::logic_error("run: reference parity check did not read +1");
    }

    for (const CircuitInstance& inst : instances) {
        auto ins = insertion_map(inst, slots.size(), nq);
        FaultSample shared;
        if (cfg.faults_per_circuit && !noiseless) {
            Rng fr = Rng::stream(cfg.seed ^ kFaultStreamTag, inst.id, 0);
            shared = sample_faults(m, fr);
        }
        for (std::uint64_t shot = 0; shot < cfg.n_shots; ++shot) {
            Rng rng = Rng::stream(cfg.seed, inst.id, shot);
            FaultSample fs;
            if (!noiseless)
                fs = cfg.faults_per_circuit ? shared : sample_faults(m, rng);

            ShotRecord rec;
            rec.instance = inst.id;
            rec.shot = shot;
            rec.sign = inst.sign;
            rec.check_bits.assign(n_bits, 1);
            rec.outcomes.resize(obs.size());

            std::vector<double> evs;
            if (fs.faults.empty() && ins.empty()) {
                rec.check_bits = clean_checks;
                evs = clean_evs;
            } else {
                simulate(fs, ins, rec.check_bits, evs);
            }
            for (std::size_t b : fs.flipped_bits) rec.check_bits[b] = -rec.check_bits[b];
            for (std::int8_t v : rec.check_bits)
                if (v != 1) rec.accepted = false;
            // per-observable outcome draws; correlations between observables
            // are not reproduced on this backend, only their means
            for (std::size_t i = 0; i < obs.size(); ++i)
                rec.outcomes[i] = rng.bernoulli(0.5 * (1 + evs[i])) ? 1 : -1;
            sink(std::move(rec));
        }
    }
}

std::vector<ShotRecord> run_collect(const Encoding& enc, const LayeredCircuit& c,
                                    const NoiseModel& m,
                                    const std::vector<CircuitInstance>& instances,
                                    const std::vector<PauliOperator>& observables,
                                    const RunConfig& cfg) {
    std::vector<ShotRecord> out;
    out.reserve(instances.size() * cfg.n_shots);
    run(enc, c, m, instances, observables, cfg,
        [&](ShotRecord&& r) { out.push_back(std::move(r)); });
    return out;
}

std::string shots_csv(const std::vector<ShotRecord>& shots) {
    std::ostringstream os;
    os << "instance,shot,sign,accepted,check_bits,outcomes\n";
    for (const ShotRecord& r : shots) {
        os << r.instance << "," << r.shot << "," << r.sign << "," << (r.accepted ? 1 : 0) << ",";
        for (std::int8_t b : r.check_bits) os << (b > 0 ? '+' : '-');
        os << ",";
        for (std::int8_t o : r.outcomes) os << (o > 0 ? '+' : '-');
        os << "\n";
    }
    return os.str();
}

}  // namespace snt
