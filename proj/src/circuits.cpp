#include "snt/circuits.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace snt {

bool is_two_qubit(GateKind k) { return k == GateKind::CZ; }

std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "h";
        case GateKind::S: return "s";
        case GateKind::Sdg: return "sdg";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::CZ: return "cz";
    }
    throw std::logic_error("gate_name");
}

void apply_gate(PauliOperator& p, const Gate& g) {
    switch (g.kind) {
        case GateKind::H: gate_h(p, g.a); break;
        case GateKind::S: gate_s(p, g.a); break;
        case GateKind::Sdg: gate_sdg(p, g.a); break;
        case GateKind::X: gate_x(p, g.a); break;
        case GateKind::Y: gate_y(p, g.a); break;
        case GateKind::Z: gate_z(p, g.a); break;
        case GateKind::CZ: gate_cz(p, g.a, g.b); break;
    }
}

Gate inverse_gate(const Gate& g) {
    Gate r = g;
    if (g.kind == GateKind::S) r.kind = GateKind::Sdg;
    else if (g.kind == GateKind::Sdg) r.kind = GateKind::S;
    return r;  // the rest are involutions
}

void CliffordLayer::add(Gate g) {
    gates_.push_back(g);
    switch (g.kind) {
        case GateKind::H: tableau_.apply_h(g.a); break;
        case GateKind::S: tableau_.apply_s(g.a); break;
        case GateKind::Sdg: tableau_.apply_sdg(g.a); break;
        case GateKind::X: tableau_.apply_x(g.a); break;
        case GateKind::Y: tableau_.apply_y(g.a); break;
        case GateKind::Z: tableau_.apply_z(g.a); break;
        case GateKind::CZ:
            tableau_.apply_cz(g.a, g.b);
            ++n_tqg_;
            break;
    }
}

void CliffordLayer::add_cx(std::uint32_t c, std::uint32_t t) {
    add({GateKind::H, t});
    add({GateKind::CZ, c, t});
    add({GateKind::H, t});
}

void CliffordLayer::append(const CliffordLayer& other) {
    for (const auto& g : other.gates_) add(g);
}

void CliffordLayer::append_inverse(const CliffordLayer& other) {
    for (auto it = other.gates_.rbegin(); it != other.gates_.rend(); ++it)
        add(inverse_gate(*it));
}

namespace {

double wrap_angle(double th) {
    double r = std::remainder(th, 4 * std::acos(0.0));
    return r;
}

// single-qubit Clifford realizing the letter permutation X -> img_x,
// Z -> img_z (signs are not controlled; they are folded into angles later)
std::vector<GateKind> perm_gates(char img_x, char img_z) {
    if (img_x == 'X' && img_z == 'Z') return {};
    if (img_x == 'Z' && img_z == 'X') return {GateKind::H};
    if (img_x == 'Y' && img_z == 'Z') return {GateKind::S};
    if (img_x == 'X' && img_z == 'Y') return {GateKind::H, GateKind::S, GateKind::H};
    if (img_x == 'Y' && img_z == 'X') return {GateKind::S, GateKind::H};
    if (img_x == 'Z' && img_z == 'Y') return {GateKind::H, GateKind::S};
    throw std::invalid_argument("perm_gates: not a permutation");
}

std::vector<GateKind> letter_to_z(char l) {
    switch (l) {
        case 'Z': return {};
        case 'X': return {GateKind::H};
        case 'Y': return {GateKind::H, GateKind::S, GateKind::H};  // Y -> Z, X -> X
    }
    throw std::invalid_argument("letter_to_z");
}

// permutation sending two distinct letters to X and Y respectively
std::vector<GateKind> pair_to_xy(char to_x, char to_y) {
    char to_z = 'X' ^ 'Y' ^ 'Z' ^ to_x ^ to_y;
    char img_x = to_x == 'X' ? 'X' : (to_y == 'X' ? 'Y' : 'Z');
    char img_z = to_x == 'Z' ? 'X' : (to_y == 'Z' ? 'Y' : 'Z');
    (void)to_z;
    return perm_gates(img_x, img_z);
}

// Incrementally synthesizes one Clifford frame that maps each requested
// operator to Z on a fresh target qubit. Operators handed in are conjugated
// live, so callers see their final images.
class FrameSynth {
public:
    explicit FrameSynth(std::size_t n) : layer_(n), is_target_(n, false) {}

    const CliffordLayer& layer() const { return layer_; }

    std::size_t diag_single(PauliOperator& p) {
        live_ = {&p};
        p = layer_.tableau().conjugate(p);
        return reduce_to_target(p);
    }

    std::pair<std::size_t, std::size_t> diag_pair(PauliOperator& p, PauliOperator& q) {
        live_ = {&p, &q};
        p = layer_.tableau().conjugate(p);
        q = layer_.tableau().conjugate(q);
        std::vector<std::size_t> diff, shared, only_p, only_q;
        bool clean = true;
        for (std::size_t i = 0; i < p.n_qubits(); ++i) {
            char lp = p.letter(i), lq = q.letter(i);
            if (lp == 'I' && lq == 'I') continue;
            if (is_target_[i]) clean = false;
            if (lp == 'I') only_q.push_back(i);
            else if (lq == 'I') only_p.push_back(i);
            else if (lp == lq) shared.push_back(i);
            else diff.push_back(i);
        }
        if (clean && diff.size() == 2) {
            symmetric_pair(p, q, diff, shared, only_p, only_q);
            return {diff[0], diff[1]};
        }
        std::size_t t1 = reduce_to_target(p);
        std::size_t t2 = reduce_to_target(q);
        return {t1, t2};
    }

private:
    void emit(Gate g) {
        layer_.add(g);
        for (auto* op : live_) apply_gate(*op, g);
    }
    void emit_singles(const std::vector<GateKind>& ks, std::size_t q) {
        for (auto k : ks) emit({k, std::uint32_t(q)});
    }
    void emit_cx(std::size_t c, std::size_t t) {
        emit({GateKind::H, std::uint32_t(t)});
        emit({GateKind::CZ, std::uint32_t(c), std::uint32_t(t)});
        emit({GateKind::H, std::uint32_t(t)});
    }

    // generic path: letters to Z, then fold the string into one fresh qubit
    std::size_t reduce_to_target(PauliOperator& p) {
        std::size_t n = p.n_qubits();
        std::size_t target = SIZE_MAX;
        for (std::size_t q = 0; q < n; ++q) {
            if (p.letter(q) == 'I' || is_target_[q]) continue;
            emit_singles(letter_to_z(p.letter(q)), q);
            if (target == SIZE_MAX) target = q;
        }
        if (target == SIZE_MAX)
            throw std::logic_error("frame: operator dependent on previous targets");
        for (std::size_t q = 0; q < n; ++q)
            if (q != target && p.letter(q) != 'I') emit_cx(q, target);
        is_target_[target] = true;
        if (p.weight() != 1 || p.letter(target) != 'Z')
            throw std::logic_error("frame: reduction failed");
        return target;
    }

    // letters differ on exactly two qubits: one entangler per remaining
    // support qubit plus one to split the final two-qubit pair
    void symmetric_pair(PauliOperator& p, PauliOperator& q,
                        const std::vector<std::size_t>& diff,
                        const std::vector<std::size_t>& shared,
                        const std::vector<std::size_t>& only_p,
                        const std::vector<std::size_t>& only_q) {
        std::size_t a = diff[0], b = diff[1];
        for (std::size_t s : shared) emit_singles(letter_to_z(p.letter(s)), s);
        for (std::size_t s : only_p) emit_singles(letter_to_z(p.letter(s)), s);
        for (std::size_t s : only_q) emit_singles(letter_to_z(q.letter(s)), s);
        emit_singles(pair_to_xy(p.letter(a), q.letter(a)), a);  // p = X, q = Y at a
        emit_singles(pair_to_xy(q.letter(b), p.letter(b)), b);  // p = Y, q = X at b
        for (std::size_t s : shared) emit({GateKind::CZ, std::uint32_t(a), std::uint32_t(s)});
        for (std::size_t s : only_q) emit_cx(s, a);  // only q's Y at a picks up Z_s
        for (std::size_t s : only_p) emit_cx(s, b);
        emit_singles(pair_to_xy(p.letter(b), q.letter(b)), b);
        // p = +-X_a X_b, q = +-Y_a Y_b; one CZ splits them onto the two qubits
        emit_singles(perm_gates('X', 'Y'), a);
        emit_singles(perm_gates('Z', 'Y'), b);
        emit({GateKind::CZ, std::uint32_t(a), std::uint32_t(b)});
        emit({GateKind::H, std::uint32_t(a)});
        emit({GateKind::H, std::uint32_t(b)});
        is_target_[a] = is_target_[b] = true;
        if (p.weight() != 1 || p.letter(a) != 'Z' || q.weight() != 1 || q.letter(b) != 'Z')
            throw std::logic_error("frame: pair reduction failed");
    }

    CliffordLayer layer_;
    std::vector<bool> is_target_;
    std::vector<PauliOperator*> live_;
};

RotationGate z_rotation(const PauliOperator& image, std::size_t target, double theta) {
    return {std::uint32_t(target), 'Z', wrap_angle(theta * image.sign())};
}

// assembles the alternating rotation/Clifford structure, fusing adjacent
// Clifford blocks into a single layer
class Builder {
public:
    Builder(LayeredCircuit& c, std::size_t n) : c_(c), open_(n), n_(n) {}

    void gates(const CliffordLayer& g) { open_.append(g); }
    void gates_inverse(const CliffordLayer& g) { open_.append_inverse(g); }

    void rotations(std::vector<RotationGate> r) {
        if (r.empty()) return;
        close();
        c_.layers.push_back({std::move(r), CliffordLayer(n_)});
        started_ = true;
    }

    // seal the open Clifford into the current layer so the accumulated frame
    // is the identity here; later gates start a fresh rotation-free layer
    void boundary() {
        close();
        sealed_ = true;
    }

    void finish() { close(); }

private:
    void close() {
        if (!started_) {
            c_.initial = std::move(open_);
        } else if (sealed_) {
            if (!open_.empty()) c_.layers.push_back({{}, std::move(open_)});
            sealed_ = false;
        } else {
            c_.layers.back().clifford = std::move(open_);
        }
        open_ = CliffordLayer(n_);
    }
    LayeredCircuit& c_;
    CliffordLayer open_;
    std::size_t n_;
    bool started_ = false;
    bool sealed_ = false;
};

}  // namespace

std::size_t LayeredCircuit::n_outcome_bits() const {
    std::size_t c = 0;
    for (const auto& r : rounds) c += r.checks.size();
    return c;
}

bool LayeredCircuit::is_clifford() const {
    for (const auto& l : layers)
        for (const auto& r : l.rotations)
            if (r.angle != 0) return false;
    return true;
}

CliffordLayer check_subcircuit(const PauliOperator& stabilizer, std::size_t ancilla,
                               std::size_t n_total) {
    PauliOperator s = stabilizer.padded(n_total);
    CliffordLayer l(n_total);
    l.add({GateKind::H, std::uint32_t(ancilla)});
    if (s.sign() < 0) l.add({GateKind::Z, std::uint32_t(ancilla)});
    for (std::size_t q = 0; q < n_total; ++q) {
        char letter = s.letter(q);
        if (letter == 'I') continue;
        auto basis = letter_to_z(letter);
        for (auto k : basis) l.add({k, std::uint32_t(q)});
        l.add({GateKind::CZ, std::uint32_t(ancilla), std::uint32_t(q)});
        for (auto it = basis.rbegin(); it != basis.rend(); ++it)
            l.add(inverse_gate({*it, std::uint32_t(q)}));
    }
    return l;
}

std::tuple<CliffordLayer, RotationGate, CliffordLayer>
decompose_pauli_exponential(const PauliOperator& p, double theta) {
    if (p.is_identity()) throw std::invalid_argument("decompose: identity input");
    std::size_t n = p.n_qubits();
    if (p.weight() == 1) {
        std::size_t q = 0;
        while (p.letter(q) == 'I') ++q;
        return {CliffordLayer(n), {std::uint32_t(q), p.letter(q), wrap_angle(theta * p.sign())},
                CliffordLayer(n)};
    }
    FrameSynth fs(n);
    PauliOperator img = p;
    std::size_t t = fs.diag_single(img);
    CliffordLayer left = fs.layer();
    CliffordLayer right(n);
    right.append_inverse(left);
    return {left, z_rotation(img, t, theta), right};
}

LayeredCircuit trotterize(const Encoding& enc, const FhmParams& params) {
    if (params.n_trotter < 1 || params.dt() <= 0)
        throw std::invalid_argument("trotterize: bad Trotter parameters");
    LayeredCircuit c;
    c.n_data = enc.n_qubits;
    c.local_stabilizers = enc.local_stabilizers;
    c.global_stabilizers = enc.global_stabilizers;
    std::size_t n = enc.n_qubits;
    Builder b(c, n);
    double dt = params.dt();

    auto hop_class = [&](bool horizontal, std::size_t parity) {
        FrameSynth fs(n);
        std::vector<RotationGate> rots;
        for (const auto& ed : enc.edges) {
            if (ed.horizontal != horizontal) continue;
            std::size_t tail_x = ed.a % enc.width, tail_y = ed.a / enc.width;
            if ((horizontal ? tail_x : tail_y) % 2 != parity) continue;
            auto [h1, h2] = enc.hopping_operators(ed.a, ed.b);
            auto [t1, t2] = fs.diag_pair(h1, h2);
            rots.push_back(z_rotation(h1, t1, -params.t * dt));
            rots.push_back(z_rotation(h2, t2, -params.t * dt));
        }
        if (rots.empty()) return;
        b.gates(fs.layer());
        b.rotations(std::move(rots));
        b.gates_inverse(fs.layer());
    };

    for (std::size_t step = 0; step < params.n_trotter; ++step) {
        hop_class(true, 0);
        hop_class(true, 1);
        if (enc.height > 2) {  // rows act as spatial sites, not spins
            hop_class(false, 0);
            hop_class(false, 1);
        }
        if (enc.height == 2) {
            FrameSynth fs(n);
            std::vector<RotationGate> rots1, rots2;
            std::vector<std::pair<std::size_t, std::size_t>> prod_targets;
            std::vector<PauliOperator> prods;
            for (std::size_t x = 0; x < enc.width; ++x) {
                PauliOperator vu = enc.vertex[enc.mode_index(x, 0)];
                PauliOperator vd = enc.vertex[enc.mode_index(x, 1)];
                prods.push_back(multiply(vu, vd));
                auto [t1, t2] = fs.diag_pair(vu, vd);
                rots1.push_back(z_rotation(vu, t1, -params.U * dt / 2));
                rots1.push_back(z_rotation(vd, t2, -params.U * dt / 2));
                prod_targets.emplace_back(t1, t2);
            }
            CliffordLayer inner(n);
            for (std::size_t x = 0; x < enc.width; ++x) {
                auto [t1, t2] = prod_targets[x];
                inner.add_cx(std::uint32_t(t1), std::uint32_t(t2));
                PauliOperator img = inner.tableau().conjugate(fs.layer().tableau().conjugate(prods[x]));
                if (img.weight() != 1 || img.letter(t2) != 'Z')
                    throw std::logic_error("trotterize: interaction reduction failed");
                rots2.push_back(z_rotation(img, t2, params.U * dt / 2));
            }
            b.gates(fs.layer());
            b.rotations(std::move(rots1));
            b.gates(inner);
            b.rotations(std::move(rots2));
            b.gates_inverse(inner);
            b.gates_inverse(fs.layer());
        }
        b.boundary();
        c.step_boundaries.push_back(c.layers.size());
    }
    b.finish();
    return c;
}

LayeredCircuit clifford_round(const LayeredCircuit& c) {
    LayeredCircuit r = c;
    for (auto& l : r.layers)
        for (auto& rot : l.rotations) rot.angle = 0;
    return r;
}

LayeredCircuit insert_parity_checks(const LayeredCircuit& c0, std::size_t n_rounds,
                                    std::vector<std::size_t> placement) {
    LayeredCircuit c = c0;
    c.rounds.clear();
    c.n_ancilla = 0;
    if (c.local_stabilizers.empty() || n_rounds == 0) return c;
    std::size_t n_steps = c.step_boundaries.size();
    if (placement.empty())
        for (std::size_t r = 1; r <= n_rounds; ++r)
            placement.push_back(std::size_t(std::llround(double(r) * double(n_steps) / double(n_rounds))));
    if (placement.size() != n_rounds)
        throw std::invalid_argument("insert_parity_checks: placement size mismatch");
    for (std::size_t s : placement)
        if (s < 1 || s > n_steps)
            throw std::out_of_range("insert_parity_checks: placement outside circuit");
    std::sort(placement.begin(), placement.end());
    std::size_t n_loc = c.local_stabilizers.size();
    c.n_ancilla = n_rounds * n_loc;
    std::size_t bit = 0;
    // the compilation leaves a Clifford frame open at step boundaries (it
    // only closes at the circuit end), so the check must measure the
    // declared stabilizer conjugated into that frame
    CliffordTableau frame = c.initial.tableau();
    std::size_t done = 0;
    for (std::size_t r = 0; r < n_rounds; ++r) {
        CheckRound cr;
        cr.after_step = placement[r];
        cr.after_layer = c.step_boundaries[placement[r] - 1];
        while (done < cr.after_layer) {
            frame = frame.then(c.layers[done].clifford.tableau());
            ++done;
        }
        for (std::size_t j = 0; j < n_loc; ++j) {
            ParityCheck pc;
            pc.stab_index = j;
            pc.stabilizer = frame.conjugate(c.local_stabilizers[j]).padded(c.n_qubits());
            pc.ancilla = c.n_data + r * n_loc + j;
            pc.outcome_bit = bit++;
            cr.checks.push_back(pc);
        }
        c.rounds.push_back(std::move(cr));
    }
    return c;
}

TqgCounts count_tqgs(const LayeredCircuit& c) {
    TqgCounts out;
    out.per_layer.push_back(c.initial.n_tqg());
    out.evolution = c.initial.n_tqg();
    for (const auto& l : c.layers) {
        out.per_layer.push_back(l.clifford.n_tqg());
        out.evolution += l.clifford.n_tqg();
    }
    for (const auto& r : c.rounds)
        for (const auto& pc : r.checks) out.checks += pc.stabilizer.weight();
    return out;
}

namespace {

std::string fmt_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}

void print_gates(std::ostringstream& os, const CliffordLayer& l) {
    bool first = true;
    for (const auto& g : l.gates()) {
        if (!first) os << "; ";
        first = false;
        os << gate_name(g.kind) << " " << g.a;
        if (g.kind == GateKind::CZ) os << " " << g.b;
    }
}

}  // namespace

std::string to_ir(const LayeredCircuit& c) {
    std::ostringstream os;
    os << "DATA " << c.n_data << "\n";
    os << "ANC " << c.n_ancilla << "\n";
    for (std::size_t i = 0; i < c.local_stabilizers.size(); ++i)
        os << "SLOC " << i << " = " << c.local_stabilizers[i].to_string() << "\n";
    for (std::size_t i = 0; i < c.global_stabilizers.size(); ++i)
        os << "SGLOB " << i << " = " << c.global_stabilizers[i].to_string() << "\n";
    os << "STEPS";
    for (std::size_t s : c.step_boundaries) os << " " << s;
    os << "\n";
    os << "CLIFF 0: ";
    print_gates(os, c.initial);
    os << "\n";
    std::size_t round_idx = 0;
    auto flush_rounds = [&](std::size_t layer_count) {
        while (round_idx < c.rounds.size() && c.rounds[round_idx].after_layer == layer_count) {
            const auto& r = c.rounds[round_idx];
            os << "CHECK " << round_idx << " @ " << r.after_step << ": ";
            for (std::size_t j = 0; j < r.checks.size(); ++j) {
                if (j) os << "; ";
                os << "S" << r.checks[j].stab_index << " -> anc" << r.checks[j].ancilla;
            }
            os << "\n";
            ++round_idx;
        }
    };
    flush_rounds(0);
    for (std::size_t k = 0; k < c.layers.size(); ++k) {
        os << "ROT " << k + 1 << ": ";
        bool first = true;
        for (const auto& r : c.layers[k].rotations) {
            if (!first) os << "; ";
            first = false;
            os << "r" << char(std::tolower(r.axis)) << " " << r.target << " "
               << fmt_angle(r.angle);
        }
        os << "\n";
        os << "CLIFF " << k + 1 << ": ";
        print_gates(os, c.layers[k].clifford);
        os << "\n";
        flush_rounds(k + 1);
    }
    return os.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else cur += ch;
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void parse_gates(CliffordLayer& l, const std::string& body) {
    for (const auto& piece0 : split(body, ';')) {
        std::string piece = trim(piece0);
        if (piece.empty()) continue;
        std::istringstream is(piece);
        std::string name;
        std::uint32_t a = 0, b = 0;
        is >> name >> a;
        if (name == "cz") {
            is >> b;
            l.add({GateKind::CZ, a, b});
        } else if (name == "h") l.add({GateKind::H, a});
        else if (name == "s") l.add({GateKind::S, a});
        else if (name == "sdg") l.add({GateKind::Sdg, a});
        else if (name == "x") l.add({GateKind::X, a});
        else if (name == "y") l.add({GateKind::Y, a});
        else if (name == "z") l.add({GateKind::Z, a});
        else throw std::invalid_argument("circuit ir: unknown gate " + name);
    }
}

}  // namespace

LayeredCircuit from_ir(const std::string& text) {
    LayeredCircuit c;
    std::istringstream is(text);
    std::string line;
    bool have_data = false;
    struct PendingRound { std::size_t after_step, after_layer; std::string body; };
    std::vector<PendingRound> pending;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "DATA") {
            ls >> c.n_data;
            have_data = true;
        } else if (tag == "ANC") {
            ls >> c.n_ancilla;
        } else if (tag == "SLOC" || tag == "SGLOB") {
            std::size_t idx;
            std::string eq, pauli;
            ls >> idx >> eq >> pauli;
            auto& dst = tag == "SLOC" ? c.local_stabilizers : c.global_stabilizers;
            if (dst.size() != idx) throw std::invalid_argument("circuit ir: stabilizer order");
            dst.push_back(PauliOperator::parse(pauli));
        } else if (tag == "STEPS") {
            std::size_t s;
            while (ls >> s) c.step_boundaries.push_back(s);
        } else if (tag == "CLIFF") {
            if (!have_data) throw std::invalid_argument("circuit ir: DATA missing");
            std::size_t k;
            char colon;
            ls >> k >> colon;
            std::string body;
            std::getline(ls, body);
            CliffordLayer l(c.n_data);  // evolution layers act on data only
            parse_gates(l, body);
            if (k == 0) c.initial = std::move(l);
            else {
                if (c.layers.size() != k) throw std::invalid_argument("circuit ir: layer order");
                c.layers.back().clifford = std::move(l);
            }
        } else if (tag == "ROT") {
            std::size_t k;
            char colon;
            ls >> k >> colon;
            if (c.layers.size() + 1 != k) throw std::invalid_argument("circuit ir: layer order");
            std::string body;
            std::getline(ls, body);
            LayeredCircuit::Layer layer;
            layer.clifford = CliffordLayer(c.n_data);
            for (const auto& piece0 : split(body, ';')) {
                std::string piece = trim(piece0);
                if (piece.empty()) continue;
                std::istringstream rs(piece);
                std::string name;
                std::uint32_t q;
                double angle;
                rs >> name >> q >> angle;
                if (name.size() != 2 || name[0] != 'r')
                    throw std::invalid_argument("circuit ir: bad rotation " + name);
                layer.rotations.push_back({q, char(std::toupper(name[1])), angle});
            }
            c.layers.push_back(std::move(layer));
        } else if (tag == "CHECK") {
            std::size_t r, s;
            std::string at;
            char colon;
            ls >> r >> at >> s >> colon;
            (void)r;
            std::string body;
            std::getline(ls, body);
            pending.push_back({s, 0, body});
        } else {
            throw std::invalid_argument("circuit ir: unknown line " + tag);
        }
    }
    std::size_t bit = 0;
    CliffordTableau frame = c.initial.tableau();
    std::size_t done = 0;
    for (auto& pr : pending) {
        if (pr.after_step < 1 || pr.after_step > c.step_boundaries.size())
            throw std::invalid_argument("circuit ir: check round out of range");
        CheckRound cr;
        cr.after_step = pr.after_step;
        cr.after_layer = c.step_boundaries[pr.after_step - 1];
        while (done < cr.after_layer) {
            frame = frame.then(c.layers[done].clifford.tableau());
            ++done;
        }
        for (const auto& piece0 : split(pr.body, ';')) {
            std::string piece = trim(piece0);
            if (piece.empty()) continue;
            std::istringstream cs(piece);
            std::string sname, arrow, aname;
            cs >> sname >> arrow >> aname;
            if (sname.empty() || sname[0] != 'S' || arrow != "->" || aname.rfind("anc", 0) != 0)
                throw std::invalid_argument("circuit ir: bad check " + piece);
            ParityCheck pc;
            pc.stab_index = std::stoul(sname.substr(1));
            if (pc.stab_index >= c.local_stabilizers.size())
                throw std::invalid_argument("circuit ir: check stabilizer out of range");
            pc.stabilizer =
                frame.conjugate(c.local_stabilizers[pc.stab_index]).padded(c.n_qubits());
            pc.ancilla = std::stoul(aname.substr(3));
            pc.outcome_bit = bit++;
            cr.checks.push_back(std::move(pc));
        }
        c.rounds.push_back(std::move(cr));
    }
    return c;
}

std::vector<LayerSlot> layer_slots(const LayeredCircuit& c) {
    std::vector<LayerSlot> slots;
    std::size_t round = 0;
    auto emit_rounds = [&](std::size_t after_layer) {
        while (round < c.rounds.size() && c.rounds[round].after_layer == after_layer) {
            for (std::size_t j = 0; j < c.rounds[round].checks.size(); ++j)
                slots.push_back({true, 0, round, j});
            ++round;
        }
    };
    slots.push_back({false, 0, 0, 0});
    emit_rounds(0);
    for (std::size_t k = 1; k <= c.layers.size(); ++k) {
        slots.push_back({false, k, 0, 0});
        emit_rounds(k);
    }
    return slots;
}

const CliffordLayer& slot_clifford(const LayeredCircuit& c, const LayerSlot& s,
                                   CliffordLayer& scratch) {
    if (!s.check) return s.layer == 0 ? c.initial : c.layers[s.layer - 1].clifford;
    const ParityCheck& pc = c.rounds[s.round].checks[s.check_index];
    scratch = check_subcircuit(pc.stabilizer, pc.ancilla, c.n_qubits());
    return scratch;
}

}  // namespace snt
