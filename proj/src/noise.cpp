#include "snt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace snt {

namespace {

// error Paulis are rays; keep the +1 Hermitian representative
void normalize_sign(PauliOperator& p) {
    if (!p.is_hermitian()) p.add_phase(1);
    p.set_sign(1);
}

PauliOperator pair_error(std::size_t width, std::uint32_t a, std::uint32_t b,
                         std::size_t which) {
    static const char letters[3] = {'X', 'Y', 'Z'};
    PauliOperator p(width);
    if (which < 9) {  // weight 2
        p.set_letter(a, letters[which / 3]);
        p.set_letter(b, letters[which % 3]);
    } else {  // weight 1
        std::size_t k = which - 9;
        p.set_letter(k < 3 ? a : b, letters[k % 3]);
    }
    return p;
}

PauliOperator restrict_to(const PauliOperator& p, std::size_t n) {
    PauliOperator r(n);
    for (std::size_t q = 0; q < n; ++q) {
        r.set_x(q, p.x_bit(q));
        r.set_z(q, p.z_bit(q));
    }
    return r;
}

bool supports_intersect(const PauliOperator& p, const PauliOperator& q) {
    const auto &px = p.x_words(), &pz = p.z_words();
    const auto &qx = q.x_words(), &qz = q.z_words();
    std::size_t w = std::min(px.size(), qx.size());
    for (std::size_t i = 0; i < w; ++i)
        if ((px[i] | pz[i]) & (qx[i] | qz[i])) return true;
    return false;
}

}  // namespace

double LayerNoiseChannel::epsilon() const {
    double e = 0;
    for (const auto& t : terms) e += t.prob;
    return e;
}

NoiseModel local_noise_model(const LayeredCircuit& c, double f_avg_tqg,
                             double eps_meas, double two_qubit_fraction) {
    if (!(f_avg_tqg > 0.0) || f_avg_tqg > 1.0)
        throw std::invalid_argument("local_noise_model: fidelity out of (0, 1]");
    if (eps_meas < 0.0 || eps_meas >= 1.0)
        throw std::invalid_argument("local_noise_model: eps_meas out of [0, 1)");
    if (two_qubit_fraction < 0.0 || two_qubit_fraction > 1.0)
        throw std::invalid_argument("local_noise_model: two_qubit_fraction out of [0, 1]");
    double f_ent = (5.0 * f_avg_tqg - 1.0) / 4.0;
    if (f_ent <= 0.0)
        throw std::invalid_argument("local_noise_model: fidelity below the entanglement floor");
    double eps_gate = 1.0 - f_ent;

    NoiseModel m;
    m.n_qubits = c.n_qubits();
    m.eps_meas = eps_meas;
    m.n_outcome_bits = c.n_outcome_bits();

    CliffordLayer scratch;
    for (const LayerSlot& s : layer_slots(c)) {
        const CliffordLayer& cl = slot_clifford(c, s, scratch);
        LayerNoiseChannel ch;
        ch.check_layer = s.check;
        ch.layer = s.layer;
        ch.round = s.round;
        ch.check_index = s.check_index;
        ch.gates = cl.gates();
        ch.native_width = cl.n_qubits();
        ch.eps_gate = eps_gate;
        ch.two_qubit_fraction = two_qubit_fraction;
        for (std::size_t g = 0; g < ch.gates.size(); ++g)
            if (is_two_qubit(ch.gates[g].kind)) ch.tqg_pos.push_back(g);

        if (eps_gate > 0.0 && !ch.tqg_pos.empty()) {
            // p(first failing entangler is the j-th) = eps (1-eps)^{j-1};
            // these sum to 1 - (1-eps)^N, so epsilon() matches the slot's
            // fidelity product exactly
            std::map<std::string, std::pair<PauliOperator, double>> acc;
            for (std::size_t j = 0; j < ch.tqg_pos.size(); ++j) {
                const Gate& g = ch.gates[ch.tqg_pos[j]];
                double p_gate = eps_gate * std::pow(1.0 - eps_gate, double(j));
                for (std::size_t which = 0; which < 15; ++which) {
                    double w = which < 9 ? two_qubit_fraction / 9.0
                                         : (1.0 - two_qubit_fraction) / 6.0;
                    if (w == 0.0) continue;
                    PauliOperator p =
                        pair_error(ch.native_width, g.a, g.b, which).padded(m.n_qubits);
                    normalize_sign(p);
                    auto [it, fresh] = acc.try_emplace(p.to_string(), p, 0.0);
                    it->second.second += p_gate * w;
                }
            }
            ch.terms.reserve(acc.size());
            for (auto& [key, pv] : acc) ch.terms.push_back({std::move(pv.first), pv.second});
        }
        m.channels.push_back(std::move(ch));
    }
    return m;
}

NoiseMetrics metrics(const NoiseModel& m, const LayeredCircuit& c) {
    if (m.n_qubits != c.n_qubits() || m.channels.size() != layer_slots(c).size())
        throw std::invalid_argument("metrics: model does not match circuit");
    NoiseMetrics out;
    for (const auto& ch : m.channels)
        if (!ch.check_layer) out.csp *= 1.0 - ch.epsilon();
    out.lambda = -std::log(out.csp);
    out.msp = std::pow(1.0 - m.eps_meas, double(m.n_outcome_bits));

    // intervals end at each check round, the last one at the circuit end;
    // a layer's rate counts toward an interval when any of its error terms,
    // pushed through the remaining evolution Cliffords, can touch a
    // stabilizer read out at the boundary (check-layer faults excluded here,
    // matching csp)
    struct Interval {
        std::size_t first_layer, last_layer;  // Clifford layer indices, inclusive
        PauliOperator stab_support;           // union mask, width n_data
    };
    PauliOperator globals(c.n_data);
    for (const auto& s : c.global_stabilizers)
        for (std::size_t q = 0; q < c.n_data; ++q)
            if (s.x_bit(q) || s.z_bit(q)) globals.set_z(q, true);

    std::vector<Interval> intervals;
    std::size_t start = 0;
    for (const auto& r : c.rounds) {
        Interval iv{start, r.after_layer, globals};
        for (const auto& pc : r.checks)
            for (std::size_t q = 0; q < c.n_data; ++q)
                if (pc.stabilizer.x_bit(q) || pc.stabilizer.z_bit(q))
                    iv.stab_support.set_z(q, true);
        intervals.push_back(std::move(iv));
        start = r.after_layer + 1;
    }
    if (start <= c.layers.size()) {
        PauliOperator all_stabs = globals;
        for (const auto& s : c.local_stabilizers)
            for (std::size_t q = 0; q < c.n_data; ++q)
                if (s.x_bit(q) || s.z_bit(q)) all_stabs.set_z(q, true);
        intervals.push_back({start, c.layers.size(), std::move(all_stabs)});
    }

    for (const auto& iv : intervals) {
        double sum = 0;
        for (const auto& ch : m.channels) {
            if (ch.check_layer || ch.layer < iv.first_layer || ch.layer > iv.last_layer)
                continue;
            PauliOperator mask(c.n_data);
            for (const auto& t : ch.terms) {
                PauliOperator img = restrict_to(t.op, c.n_data);
                for (std::size_t k = ch.layer + 1; k <= iv.last_layer; ++k)
                    img = c.layers[k - 1].clifford.tableau().conjugate(img);
                for (std::size_t q = 0; q < c.n_data; ++q)
                    if (img.x_bit(q) || img.z_bit(q)) mask.set_z(q, true);
            }
            if (supports_intersect(mask, iv.stab_support))
                sum += -std::log(1.0 - ch.epsilon());
        }
        out.lambda_cone = std::max(out.lambda_cone, sum);
    }
    return out;
}

FaultSample sample_faults(const NoiseModel& m, Rng& rng) {
    FaultSample out;
    for (std::size_t i = 0; i < m.channels.size(); ++i) {
        const auto& ch = m.channels[i];
        if (ch.composable()) {
            PauliOperator frame(m.n_qubits);
            bool hit = false;
            for (std::size_t pos : ch.tqg_pos) {
                if (!rng.bernoulli(ch.eps_gate)) continue;
                const Gate& g = ch.gates[pos];
                std::size_t which = rng.bernoulli(ch.two_qubit_fraction)
                                        ? rng.below(9)
                                        : 9 + rng.below(6);
                PauliOperator p = pair_error(ch.native_width, g.a, g.b, which);
                frame = multiply(frame, p.padded(m.n_qubits));
                hit = true;
            }
            if (hit && !frame.is_identity()) {
                normalize_sign(frame);
                out.faults.push_back({i, std::move(frame)});
            }
        } else if (!ch.terms.empty()) {
            double u = rng.uniform(), acc = 0;
            for (const auto& t : ch.terms) {
                acc += t.prob;
                if (u < acc) {
                    out.faults.push_back({i, t.op});
                    break;
                }
            }
        }
    }
    if (m.eps_meas > 0.0)
        for (std::size_t b = 0; b < m.n_outcome_bits; ++b)
            if (rng.bernoulli(m.eps_meas)) out.flipped_bits.push_back(b);
    return out;
}

std::string dump_noise_model(const NoiseModel& m) {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "NOISEMODEL\n";
    os << "NQUBITS " << m.n_qubits << "\n";
    os << "EPSMEAS " << num(m.eps_meas) << "\n";
    os << "NMEAS " << m.n_outcome_bits << "\n";
    for (std::size_t i = 0; i < m.channels.size(); ++i) {
        const auto& ch = m.channels[i];
        os << "CHANNEL " << i;
        if (ch.check_layer)
            os << " check " << ch.round << " " << ch.check_index;
        else
            os << " evo " << ch.layer;
        os << "\n";
        for (const auto& t : ch.terms)
            os << t.op.to_string() << " " << num(t.prob) << "\n";
    }
    os << "END\n";
    return os.str();
}

NoiseModel load_noise_model(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    auto next_line = [&]() {
        while (std::getline(is, line))
            if (!line.empty()) return true;
        return false;
    };
    if (!next_line() || line != "NOISEMODEL")
        throw std::invalid_argument("noise model: missing header");
    NoiseModel m;
    LayerNoiseChannel* cur = nullptr;
    while (next_line()) {
        if (line == "END") return m;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "NQUBITS") {
            ls >> m.n_qubits;
        } else if (tok == "EPSMEAS") {
            ls >> m.eps_meas;
        } else if (tok == "NMEAS") {
            ls >> m.n_outcome_bits;
        } else if (tok == "CHANNEL") {
            std::size_t idx;
            std::string kind;
            ls >> idx >> kind;
            if (idx != m.channels.size())
                throw std::invalid_argument("noise model: channel index out of order");
            LayerNoiseChannel ch;
            if (kind == "check") {
                ch.check_layer = true;
                ls >> ch.round >> ch.check_index;
            } else if (kind == "evo") {
                ls >> ch.layer;
            } else {
                throw std::invalid_argument("noise model: bad channel kind " + kind);
            }
            m.channels.push_back(std::move(ch));
            cur = &m.channels.back();
        } else {
            if (!cur) throw std::invalid_argument("noise model: term before channel");
            PauliOperator p = PauliOperator::parse(tok);
            if (p.n_qubits() != m.n_qubits || p.is_identity())
                throw std::invalid_argument("noise model: bad term " + tok);
            double prob;
            if (!(ls >> prob) || prob <= 0.0)
                throw std::invalid_argument("noise model: bad probability in " + line);
            cur->terms.push_back({std::move(p), prob});
        }
    }
    throw std::invalid_argument("noise model: missing END");
}

}  // namespace snt
