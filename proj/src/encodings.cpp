#include "snt/encodings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "snt/stabilizer.hpp"

namespace snt {

namespace {

// Majorana pair on a linear chain of qubit positions: Z...Z X (or Y) at pos.
// All chain operators built this way pairwise anticommute.
PauliOperator chain_majorana(std::size_t n, std::size_t pos, bool bar) {
    PauliOperator p(n);
    for (std::size_t i = 0; i < pos; ++i) p.set_letter(i, 'Z');
    p.set_letter(pos, bar ? 'Y' : 'X');
    return p;
}

// -i c1 c2 for anticommuting Hermitian c1, c2
PauliOperator bilinear(const PauliOperator& c1, const PauliOperator& c2) {
    PauliOperator r = multiply(c1, c2);
    r.add_phase(3);
    return r;
}

PauliOperator normalized(PauliOperator p) {
    if (!p.is_hermitian()) p.add_phase(1);
    if (p.sign() < 0) p.negate();
    return p;
}

std::vector<uint64_t> symplectic_vec(const PauliOperator& p) {
    std::vector<uint64_t> v;
    for (auto w : p.x_words()) v.push_back(w);
    for (auto w : p.z_words()) v.push_back(w);
    return v;
}

// GF(2) solve: subset of gens whose symplectic sum equals target; returns a
// bitmask over gens, or nullopt when the target is outside the span
std::optional<uint64_t> solve_subset(const std::vector<PauliOperator>& gens,
                                     const PauliOperator& target) {
    if (gens.size() > 64) throw std::logic_error("solve_subset: too many generators");
    std::vector<std::vector<uint64_t>> rows;
    std::vector<uint64_t> combo;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        rows.push_back(symplectic_vec(gens[i]));
        combo.push_back(uint64_t(1) << i);
    }
    std::vector<uint64_t> t = symplectic_vec(target);
    uint64_t tcombo = 0;
    std::size_t rank = 0, cols = t.size() * 64;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t w = c / 64, b = c % 64;
        std::size_t piv = rank;
        while (piv < rows.size() && !((rows[piv][w] >> b) & 1)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        std::swap(combo[rank], combo[piv]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && ((rows[r][w] >> b) & 1)) {
                for (std::size_t k = 0; k < t.size(); ++k) rows[r][k] ^= rows[rank][k];
                combo[r] ^= combo[rank];
            }
        if ((t[w] >> b) & 1) {
            for (std::size_t k = 0; k < t.size(); ++k) t[k] ^= rows[rank][k];
            tcombo ^= combo[rank];
        }
        ++rank;
    }
    for (auto w : t)
        if (w) return std::nullopt;
    return tcombo;
}

// When the stabilizer group pins the total fermion parity, make sure the
// even-occupation sector is the one kept (so physical initial states with an
// even particle number live in the code).
std::optional<uint64_t> parity_fix_mask(const Encoding& e,
                                        const std::vector<PauliOperator>& gens) {
    PauliOperator total(e.n_qubits);
    for (const auto& v : e.vertex) total = multiply(total, v);
    auto combo = solve_subset(gens, total);
    if (!combo) return std::nullopt;
    PauliOperator prod(e.n_qubits);
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (*combo >> i & 1) prod = multiply(prod, gens[i]);
    if (!prod.equals_up_to_sign(total)) throw std::logic_error("parity combo mismatch");
    if (prod.sign() * total.sign() == 1) return std::nullopt;  // already even
    return combo;
}

std::string mode_label(std::size_t x, std::size_t y) {
    std::ostringstream os;
    os << "(" << x << "," << y << ")";
    return os.str();
}

// ---- JW ----------------------------------------------------------------

Encoding build_jw(std::size_t W, std::size_t H) {
    Encoding e;
    e.kind = EncodingKind::JW;
    e.width = W;
    e.height = H;
    e.n_modes = W * H;
    e.n_qubits = e.n_modes;
    std::size_t n = e.n_qubits;
    for (std::size_t m = 0; m < e.n_modes; ++m) {
        e.vertex.push_back(PauliOperator::single(n, m, 'Z'));
        e.qubit_labels.push_back("m" + mode_label(m % W, m / W));
    }
    // edges along the serial ordering; grid-vertical edges are composites
    for (std::size_t m = 0; m + 1 < e.n_modes; ++m) {
        bool horizontal = (m % W) + 1 < W;
        PauliOperator op = bilinear(chain_majorana(n, m, false), chain_majorana(n, m + 1, false));
        e.edges.push_back({m, m + 1, horizontal, op});
    }
    for (std::size_t y = 0; y < H; ++y) {
        PauliOperator g(n);
        for (std::size_t x = 0; x < W; ++x) g.set_letter(e.mode_index(x, y), 'Z');
        e.global_stabilizers.push_back(g);
    }
    return e;
}

// ---- LE ----------------------------------------------------------------

Encoding build_le(std::size_t W, std::size_t H) {
    Encoding e;
    e.kind = EncodingKind::LE;
    e.width = W;
    e.height = H;
    e.n_modes = W * H;
    e.n_qubits = 2 * e.n_modes;
    std::size_t n = e.n_qubits;
    auto top = [&](std::size_t m) { return 2 * m; };
    auto bot = [&](std::size_t m) { return 2 * m + 1; };
    for (std::size_t m = 0; m < e.n_modes; ++m) {
        PauliOperator v(n);
        v.set_letter(top(m), 'Z');
        v.set_letter(bot(m), 'Z');
        e.vertex.push_back(v);
        e.qubit_labels.push_back("t" + mode_label(m % W, m / W));
        e.qubit_labels.push_back("b" + mode_label(m % W, m / W));
    }
    for (std::size_t y = 0; y < H; ++y) {
        for (std::size_t x = 0; x + 1 < W; ++x) {
            std::size_t a = e.mode_index(x, y), b = e.mode_index(x + 1, y);
            PauliOperator op(n);
            op.set_letter(top(a), 'X');
            op.set_letter(top(b), 'Z');
            op.set_letter(bot(b), 'Y');
            e.edges.push_back({a, b, true, op});
        }
        // one rung per row plus a plaquette per edge fixes the row's ladder
        std::size_t first = e.mode_index(0, y);
        PauliOperator rung(n);
        rung.set_letter(top(first), 'X');
        rung.set_letter(bot(first), 'Y');
        e.local_stabilizers.push_back(rung);
        for (std::size_t x = 0; x + 1 < W; ++x) {
            std::size_t a = e.mode_index(x, y), b = e.mode_index(x + 1, y);
            PauliOperator s(n);
            s.set_letter(top(a), 'Y');
            s.set_letter(bot(a), 'X');
            s.set_letter(top(b), 'X');
            s.set_letter(bot(b), 'Y');
            e.local_stabilizers.push_back(s);
        }
        PauliOperator g(n);
        for (std::size_t x = 0; x < W; ++x) {
            g.set_letter(top(e.mode_index(x, y)), 'Z');
            g.set_letter(bot(e.mode_index(x, y)), 'Z');
        }
        e.global_stabilizers.push_back(g);
    }
    e.prep_stabilizers = e.local_stabilizers;
    return e;
}

// ---- VC ----------------------------------------------------------------

Encoding build_vc(std::size_t W, std::size_t H) {
    Encoding e;
    e.kind = EncodingKind::VC;
    e.width = W;
    e.height = H;
    e.n_modes = W * H;
    e.n_qubits = 2 * e.n_modes;
    std::size_t n = e.n_qubits;
    // boustrophedon column-major order: grid-vertical neighbors are adjacent
    auto snake = [&](std::size_t x, std::size_t y) {
        return x * H + (x % 2 == 0 ? y : H - 1 - y);
    };
    auto gam = [&](std::size_t j, bool bar) { return chain_majorana(n, 2 * j, bar); };
    auto mu = [&](std::size_t j, bool bar) { return chain_majorana(n, 2 * j + 1, bar); };
    e.vertex.assign(e.n_modes, PauliOperator(n));
    e.qubit_labels.assign(n, "");
    for (std::size_t y = 0; y < H; ++y) {
        for (std::size_t x = 0; x < W; ++x) {
            std::size_t j = snake(x, y);
            e.vertex[e.mode_index(x, y)] = PauliOperator::single(n, 2 * j, 'Z');
            e.qubit_labels[2 * j] = "s" + mode_label(x, y);
            e.qubit_labels[2 * j + 1] = "a" + mode_label(x, y);
        }
    }
    std::vector<PauliOperator> dimers;
    for (std::size_t y = 0; y + 1 < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            std::size_t a = e.mode_index(x, y), b = e.mode_index(x, y + 1);
            e.edges.push_back({a, b, false, bilinear(gam(snake(x, y), false), gam(snake(x, y + 1), false))});
        }
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x + 1 < W; ++x) {
            std::size_t a = e.mode_index(x, y), b = e.mode_index(x + 1, y);
            std::size_t ja = snake(x, y), jb = snake(x + 1, y);
            // auxiliary pair turns the long string into a 4-qubit operator
            PauliOperator d = normalized(bilinear(mu(ja, true), mu(jb, false)));
            PauliOperator op = multiply(bilinear(gam(ja, false), gam(jb, false)), d);
            e.edges.push_back({a, b, true, op});
            dimers.push_back(d);
        }
    std::vector<PauliOperator> boundary;
    for (std::size_t y = 0; y + 1 < H; y += 2) {
        boundary.push_back(normalized(bilinear(mu(snake(0, y), false), mu(snake(0, y + 1), false))));
        boundary.push_back(
            normalized(bilinear(mu(snake(W - 1, y), true), mu(snake(W - 1, y + 1), true))));
    }
    e.prep_stabilizers = dimers;
    e.prep_stabilizers.insert(e.prep_stabilizers.end(), boundary.begin(), boundary.end());
    // checks: plaquette loops (weight 6) plus the boundary pairs
    for (std::size_t y = 0; y + 1 < H; ++y)
        for (std::size_t x = 0; x + 1 < W; ++x) {
            std::vector<std::size_t> cyc = {e.mode_index(x, y), e.mode_index(x + 1, y),
                                            e.mode_index(x + 1, y + 1), e.mode_index(x, y + 1)};
            PauliOperator loop(n);
            for (std::size_t k = 0; k < cyc.size(); ++k) {
                const EncEdge* ed = e.find_edge(cyc[k], cyc[(k + 1) % cyc.size()]);
                if (!ed) throw std::logic_error("vc plaquette edge missing");
                PauliOperator step = ed->op;
                if (ed->a != cyc[k]) step.negate();
                loop = multiply(loop, step);
            }
            e.local_stabilizers.push_back(loop);
        }
    e.local_stabilizers.insert(e.local_stabilizers.end(), boundary.begin(), boundary.end());
    for (std::size_t y = 0; y < H; ++y) {
        PauliOperator g(n);
        for (std::size_t x = 0; x < W; ++x) g.set_letter(2 * snake(x, y), 'Z');
        e.global_stabilizers.push_back(g);
    }
    return e;
}

// ---- DK ----------------------------------------------------------------

Encoding build_dk(std::size_t W, std::size_t H) {
    if (W < 2 || H < 2) throw std::invalid_argument("dk: needs a 2d mode grid");
    Encoding e;
    e.kind = EncodingKind::DK;
    e.width = W;
    e.height = H;
    e.n_modes = W * H;
    // auxiliary qubits on alternating faces; put them on the smaller class so
    // the face loops without qubits (the checks) outnumber them by one
    std::size_t cnt[2] = {0, 0};
    for (std::size_t fx = 0; fx + 1 < W; ++fx)
        for (std::size_t fy = 0; fy + 1 < H; ++fy) ++cnt[(fx + fy) % 2];
    int par = cnt[1] <= cnt[0] ? 1 : 0;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> aux;
    for (std::size_t fx = 0; fx + 1 < W; ++fx)
        for (std::size_t fy = 0; fy + 1 < H; ++fy)
            if (int((fx + fy) % 2) == par) {
                aux[{fx, fy}] = e.n_modes + aux.size();
            }
    std::size_t n = e.n_modes + aux.size();
    e.n_qubits = n;
    for (std::size_t m = 0; m < e.n_modes; ++m) {
        e.vertex.push_back(PauliOperator::single(n, m, 'Z'));
        e.qubit_labels.push_back("m" + mode_label(m % W, m / W));
    }
    for (const auto& [f, q] : aux) {
        (void)q;
        e.qubit_labels.push_back("f" + mode_label(f.first, f.second));
    }
    auto face_qubit = [&](long fx, long fy) -> long {
        if (fx < 0 || fy < 0 || fx + 1 >= long(W) || fy + 1 >= long(H)) return -1;
        auto it = aux.find({std::size_t(fx), std::size_t(fy)});
        return it == aux.end() ? -1 : long(it->second);
    };
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x + 1 < W; ++x) {
            PauliOperator op(n);
            op.set_letter(e.mode_index(x, y), y % 2 == 0 ? 'X' : 'Y');
            op.set_letter(e.mode_index(x + 1, y), y % 2 == 0 ? 'Y' : 'X');
            long f = face_qubit(long(x), long(y));
            if (f < 0) f = face_qubit(long(x), long(y) - 1);
            if (f >= 0) op.set_letter(std::size_t(f), 'X');
            e.edges.push_back({e.mode_index(x, y), e.mode_index(x + 1, y), true, op});
        }
    for (std::size_t y = 0; y + 1 < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            PauliOperator op(n);
            bool flip = (x + std::size_t(par)) % 2 != 0;
            op.set_letter(e.mode_index(x, y), flip ? 'Y' : 'X');
            op.set_letter(e.mode_index(x, y + 1), flip ? 'X' : 'Y');
            long f = face_qubit(long(x), long(y));
            if (f < 0) f = face_qubit(long(x) - 1, long(y));
            if (f >= 0) op.set_letter(std::size_t(f), 'Y');
            e.edges.push_back({e.mode_index(x, y), e.mode_index(x, y + 1), false, op});
        }
    auto face_loop = [&](std::size_t fx, std::size_t fy) {
        std::vector<std::size_t> cyc = {e.mode_index(fx, fy), e.mode_index(fx + 1, fy),
                                        e.mode_index(fx + 1, fy + 1), e.mode_index(fx, fy + 1)};
        PauliOperator loop(n);
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            const EncEdge* ed = e.find_edge(cyc[k], cyc[(k + 1) % cyc.size()]);
            PauliOperator step = ed->op;
            if (ed->a != cyc[k]) step.negate();
            loop = multiply(loop, step);
        }
        return loop;
    };
    // faces holding a qubit must close to +identity; fix signs face by face
    // (no two such faces share an edge, so the flips are independent)
    for (const auto& [f, q] : aux) {
        (void)q;
        PauliOperator loop = face_loop(f.first, f.second);
        if (loop.weight() != 0) throw std::logic_error("dk: face loop not scalar");
        if (loop.raw_phase() % 2 != 0) throw std::logic_error("dk: face loop not hermitian");
        if (loop.raw_phase() == 2) {
            for (auto& ed : e.edges)
                if (ed.horizontal && ed.a == e.mode_index(f.first, f.second)) {
                    ed.op.negate();
                    break;
                }
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> bare;
    for (std::size_t fx = 0; fx + 1 < W; ++fx)
        for (std::size_t fy = 0; fy + 1 < H; ++fy) {
            if (int((fx + fy) % 2) == par) continue;
            bare.push_back({fx, fy});
            e.local_stabilizers.push_back(face_loop(fx, fy));
        }
    // keep the even-occupation sector: flip a grid-boundary edge (one that
    // belongs to a single face) of some check in the parity combination
    if (auto mask = parity_fix_mask(e, e.local_stabilizers)) {
        bool fixed = false;
        for (std::size_t i = 0; i < bare.size() && !fixed; ++i) {
            if (!(*mask >> i & 1)) continue;
            auto [fx, fy] = bare[i];
            std::size_t ea = 0, eb = 0;
            if (fy == 0) ea = e.mode_index(fx, 0), eb = e.mode_index(fx + 1, 0);
            else if (fy + 2 == H) ea = e.mode_index(fx, H - 1), eb = e.mode_index(fx + 1, H - 1);
            else if (fx == 0) ea = e.mode_index(0, fy), eb = e.mode_index(0, fy + 1);
            else if (fx + 2 == W) ea = e.mode_index(W - 1, fy), eb = e.mode_index(W - 1, fy + 1);
            else continue;
            for (auto& ed : e.edges)
                if (ed.a == ea && ed.b == eb) {
                    ed.op.negate();
                    e.local_stabilizers[i] = face_loop(fx, fy);
                    fixed = true;
                    break;
                }
        }
        if (!fixed) throw std::logic_error("dk: cannot select even parity sector");
    }
    e.prep_stabilizers = e.local_stabilizers;
    for (std::size_t y = 0; y < H; ++y) {
        PauliOperator g(n);
        for (std::size_t x = 0; x < W; ++x) g.set_letter(e.mode_index(x, y), 'Z');
        e.global_stabilizers.push_back(g);
    }
    return e;
}

// ---- HX ----------------------------------------------------------------

Encoding build_hx(std::size_t W, std::size_t H) {
    if (W < 2 || H < 2) throw std::invalid_argument("hx: needs a 2d mode grid");
    Encoding e;
    e.kind = EncodingKind::HX;
    e.width = W;
    e.height = H;
    e.n_modes = W * H;
    // modes sit on the vertical links of a brick-wall lattice; grid (x, y)
    // maps to the rotated coordinates (c, v) = (x + y, y - x + W - 1)
    auto coord = [&](std::size_t x, std::size_t y) {
        return std::pair<long, long>(long(x + y), long(y) - long(x) + long(W) - 1);
    };
    std::map<std::pair<long, long>, std::size_t> qubit;
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            auto [c, v] = coord(x, y);
            qubit[{c, v}] = 0;
            qubit[{c, v + 1}] = 0;
        }
    std::size_t idx = 0;
    for (auto& [cv, q] : qubit) {
        (void)cv;
        q = idx++;
    }
    std::size_t n = qubit.size();
    e.n_qubits = n;
    e.qubit_labels.assign(n, "");
    for (const auto& [cv, q] : qubit) {
        std::ostringstream os;
        os << "hx(" << cv.first << "," << cv.second << ")";
        e.qubit_labels[q] = os.str();
    }
    auto has = [&](long c, long v) { return qubit.count({c, v}) != 0; };
    auto q_at = [&](long c, long v) { return qubit.at({c, v}); };
    auto link_letter = [&](long c) { return c % 2 == 0 ? 'X' : 'Y'; };  // link (c,v)-(c+1,v)
    auto link_op = [&](long c, long v) {
        PauliOperator p(n);
        p.set_letter(q_at(c, v), link_letter(c));
        p.set_letter(q_at(c + 1, v), link_letter(c));
        return p;
    };
    e.vertex.reserve(e.n_modes);
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            auto [c, v] = coord(x, y);
            PauliOperator p(n);
            p.set_letter(q_at(c, v), 'Z');
            p.set_letter(q_at(c, v + 1), 'Z');
            e.vertex.push_back(p);
        }
    // reorder: vertex was pushed row-major already (mode_index order)
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            auto [c, v] = coord(x, y);
            if (x + 1 < W) {  // neighbor sits one column right, one row down
                PauliOperator op = multiply(link_op(c, v), e.vertex[e.mode_index(x + 1, y)]);
                op.add_phase(1);
                e.edges.push_back({e.mode_index(x, y), e.mode_index(x + 1, y), true, op});
            }
            if (y + 1 < H) {  // neighbor one column right, one row up
                PauliOperator op = multiply(e.vertex[e.mode_index(x, y)], link_op(c, v + 1));
                op.add_phase(1);
                e.edges.push_back({e.mode_index(x, y), e.mode_index(x, y + 1), false, op});
            }
        }
    for (std::size_t fy = 0; fy + 1 < H; ++fy)
        for (std::size_t fx = 0; fx + 1 < W; ++fx) {
            std::vector<std::size_t> cyc = {e.mode_index(fx, fy), e.mode_index(fx + 1, fy),
                                            e.mode_index(fx + 1, fy + 1), e.mode_index(fx, fy + 1)};
            PauliOperator loop(n);
            for (std::size_t k = 0; k < cyc.size(); ++k) {
                const EncEdge* ed = e.find_edge(cyc[k], cyc[(k + 1) % cyc.size()]);
                PauliOperator step = ed->op;
                if (ed->a != cyc[k]) step.negate();
                loop = multiply(loop, step);
            }
            e.local_stabilizers.push_back(loop);
        }
    // boundary completion: qubits missing a brick-wall link leave an unpaired
    // degree of freedom which must be pinned by an extra check
    struct Single {
        long c, v;
        char letter;
    };
    std::vector<Single> singles;
    for (const auto& [cv, q] : qubit) {
        (void)q;
        auto [c, v] = cv;
        bool west = has(c - 1, v), east = has(c + 1, v);
        if (!west && !east) {
            e.local_stabilizers.push_back(PauliOperator::single(n, q_at(c, v), 'Z'));
        } else if (!west) {
            singles.push_back({c, v, link_letter(c - 1)});
        } else if (!east) {
            singles.push_back({c, v, link_letter(c)});
        }
    }
    // pair leftovers through a shortest path of link / mode-partner steps
    auto neighbours = [&](std::pair<long, long> cv) {
        std::vector<std::pair<long, long>> out;
        auto [c, v] = cv;
        if (has(c - 1, v)) out.push_back({c - 1, v});
        if (has(c + 1, v)) out.push_back({c + 1, v});
        long rho = long((W - 1) % 2);
        long partner = ((c + v) % 2 + 2) % 2 == rho ? v + 1 : v - 1;
        if (has(c, partner)) out.push_back({c, partner});
        return out;
    };
    auto step_op = [&](std::pair<long, long> a, std::pair<long, long> b) {
        if (a.first == b.first) {  // mode partner: the Z Z vertex operator
            PauliOperator p(n);
            p.set_letter(q_at(a.first, a.second), 'Z');
            p.set_letter(q_at(b.first, b.second), 'Z');
            return p;
        }
        return link_op(std::min(a.first, b.first), a.second);
    };
    std::vector<bool> used(singles.size(), false);
    for (std::size_t i = 0; i < singles.size(); ++i) {
        if (used[i]) continue;
        // BFS to the closest other unpaired qubit
        std::map<std::pair<long, long>, std::pair<long, long>> parent;
        std::queue<std::pair<long, long>> bfs;
        std::pair<long, long> src = {singles[i].c, singles[i].v};
        bfs.push(src);
        parent[src] = src;
        long best = -1;
        std::pair<long, long> dst{};
        while (!bfs.empty() && best < 0) {
            auto cur = bfs.front();
            bfs.pop();
            for (std::size_t j = 0; j < singles.size(); ++j)
                if (!used[j] && j != i && singles[j].c == cur.first && singles[j].v == cur.second) {
                    best = long(j);
                    dst = cur;
                    break;
                }
            if (best >= 0) break;
            for (auto nb : neighbours(cur))
                if (!parent.count(nb)) {
                    parent[nb] = cur;
                    bfs.push(nb);
                }
        }
        if (best < 0) throw std::logic_error("hx: unpaired boundary qubit");
        used[i] = used[std::size_t(best)] = true;
        std::vector<std::pair<long, long>> path;
        for (auto cur = dst;; cur = parent[cur]) {
            path.push_back(cur);
            if (cur == src) break;
        }
        std::reverse(path.begin(), path.end());
        PauliOperator s(n);
        s.set_letter(q_at(singles[i].c, singles[i].v), singles[i].letter);
        s = multiply(s, PauliOperator::single(n, q_at(dst.first, dst.second),
                                              singles[std::size_t(best)].letter));
        for (std::size_t k = 0; k + 1 < path.size(); ++k)
            s = multiply(s, step_op(path[k], path[k + 1]));
        e.local_stabilizers.push_back(normalized(s));
    }
    e.prep_stabilizers = e.local_stabilizers;
    for (std::size_t y = 0; y < H; ++y) {
        PauliOperator g(n);
        for (std::size_t x = 0; x < W; ++x) {
            auto [c, v] = coord(x, y);
            g = multiply(g, e.vertex[e.mode_index(x, y)]);
            (void)c;
            (void)v;
        }
        e.global_stabilizers.push_back(g);
    }
    return e;
}

// flip dependent prep generators whose forced value comes out negative, so
// the stored set always describes a non-empty joint +1 eigenspace
void repair_prep(Encoding& e, std::size_t first_flippable) {
    StabilizerState st(e.n_qubits);
    std::vector<PauliOperator> fixed;
    for (std::size_t i = 0; i < e.prep_stabilizers.size(); ++i) {
        try {
            st.force(e.prep_stabilizers[i], fixed);
        } catch (const std::logic_error&) {
            if (i < first_flippable) throw;
            e.prep_stabilizers[i].negate();
            st.force(e.prep_stabilizers[i], fixed);
            for (auto& s : e.local_stabilizers)
                if (s.equals_up_to_sign(e.prep_stabilizers[i]) &&
                    s.sign() != e.prep_stabilizers[i].sign())
                    s = e.prep_stabilizers[i];
        }
    }
}

}  // namespace

EncodingKind encoding_from_name(const std::string& name) {
    std::string u;
    for (char c : name) u.push_back(char(std::toupper(static_cast<unsigned char>(c))));
    if (u == "JW") return EncodingKind::JW;
    if (u == "LE") return EncodingKind::LE;
    if (u == "VC") return EncodingKind::VC;
    if (u == "DK") return EncodingKind::DK;
    if (u == "HX") return EncodingKind::HX;
    throw std::invalid_argument("unknown encoding: " + name);
}

std::string encoding_name(EncodingKind kind) {
    switch (kind) {
        case EncodingKind::JW: return "JW";
        case EncodingKind::LE: return "LE";
        case EncodingKind::VC: return "VC";
        case EncodingKind::DK: return "DK";
        case EncodingKind::HX: return "HX";
    }
    throw std::logic_error("encoding_name");
}

const EncEdge* Encoding::find_edge(std::size_t a, std::size_t b) const {
    for (const auto& ed : edges)
        if ((ed.a == a && ed.b == b) || (ed.a == b && ed.b == a)) return &ed;
    return nullptr;
}

PauliOperator Encoding::composite_edge(std::size_t a, std::size_t b) const {
    if (const EncEdge* ed = find_edge(a, b)) {
        PauliOperator op = ed->op;
        if (ed->a != a) op.negate();
        return op;
    }
    // BFS path through elementary edges, composed pairwise
    std::vector<long> parent(n_modes, -1);
    std::queue<std::size_t> bfs;
    bfs.push(a);
    parent[a] = long(a);
    while (!bfs.empty()) {
        std::size_t cur = bfs.front();
        bfs.pop();
        if (cur == b) break;
        for (const auto& ed : edges) {
            std::size_t other;
            if (ed.a == cur) other = ed.b;
            else if (ed.b == cur) other = ed.a;
            else continue;
            if (parent[other] < 0) {
                parent[other] = long(cur);
                bfs.push(other);
            }
        }
    }
    if (parent[b] < 0) throw std::invalid_argument("composite_edge: modes not connected");
    std::vector<std::size_t> path;
    for (std::size_t cur = b;; cur = std::size_t(parent[cur])) {
        path.push_back(cur);
        if (cur == a) break;
    }
    std::reverse(path.begin(), path.end());
    PauliOperator op = composite_edge(path[0], path[1]);
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        op = multiply(op, composite_edge(path[k], path[k + 1]));
        op.add_phase(1);
    }
    return op;
}

std::pair<PauliOperator, PauliOperator> Encoding::hopping_operators(std::size_t a,
                                                                    std::size_t b) const {
    PauliOperator edge = composite_edge(a, b);
    PauliOperator h1 = multiply(vertex[b], edge);
    h1.add_phase(1);
    PauliOperator h2 = multiply(vertex[a], edge);
    h2.add_phase(3);
    auto reduce = [&](PauliOperator p) {
        bool improved = true;
        const std::vector<PauliOperator>& syms = local_stabilizers;
        while (improved) {
            improved = false;
            for (const auto& s : syms) {
                PauliOperator cand = multiply(p, s);
                if (cand.weight() < p.weight()) {
                    p = cand;
                    improved = true;
                }
            }
        }
        return p;
    };
    return {reduce(h1), reduce(h2)};
}

std::vector<Observable> Encoding::occupation_observables() const {
    std::vector<Observable> out;
    for (std::size_t y = 0; y < height; ++y)
        for (std::size_t x = 0; x < width; ++x) {
            std::ostringstream os;
            os << "n" << mode_label(x, y);
            out.push_back({os.str(), vertex[mode_index(x, y)], 0.5, -0.5});
        }
    return out;
}

Observable Encoding::pair_observable(std::size_t a, std::size_t b) const {
    std::ostringstream os;
    os << "nn" << mode_label(a % width, a / width) << mode_label(b % width, b / width);
    return {os.str(), multiply(vertex[a], vertex[b]), 0.5, -0.5};
}

std::string Encoding::report() const {
    std::ostringstream os;
    os << "encoding " << encoding_name(kind) << " " << width << "x" << height << ": " << n_modes
       << " modes on " << n_qubits << " qubits\n";
    os << "qubits:";
    for (const auto& l : qubit_labels) os << " " << l;
    os << "\n";
    for (std::size_t m = 0; m < n_modes; ++m)
        os << "V[" << m << "] = " << vertex[m].to_string() << "\n";
    for (const auto& ed : edges)
        os << "E[" << ed.a << (ed.horizontal ? "-" : "|") << ed.b
           << "] = " << ed.op.to_string() << "\n";
    for (std::size_t i = 0; i < local_stabilizers.size(); ++i)
        os << "S[" << i << "] = " << local_stabilizers[i].to_string() << "\n";
    for (std::size_t i = 0; i < global_stabilizers.size(); ++i)
        os << "G[" << i << "] = " << global_stabilizers[i].to_string() << "\n";
    for (std::size_t i = 0; i < prep_stabilizers.size(); ++i)
        os << "P[" << i << "] = " << prep_stabilizers[i].to_string() << "\n";
    return os.str();
}

Encoding build_encoding(EncodingKind kind, std::size_t width, std::size_t height) {
    Encoding e;
    switch (kind) {
        case EncodingKind::JW: e = build_jw(width, height); break;
        case EncodingKind::LE: e = build_le(width, height); break;
        case EncodingKind::VC:
            e = build_vc(width, height);
            // dimers stay pinned, boundary pair signs may adjust
            repair_prep(e, (width - 1) * height);
            break;
        case EncodingKind::DK: e = build_dk(width, height); break;
        case EncodingKind::HX: {
            e = build_hx(width, height);
            std::size_t n_loops = (width - 1) * (height - 1);
            repair_prep(e, n_loops);  // loops stay pinned
            if (auto mask = parity_fix_mask(e, e.prep_stabilizers)) {
                bool fixed = false;
                for (std::size_t i = n_loops; i < e.prep_stabilizers.size(); ++i) {
                    if (!(*mask >> i & 1)) continue;
                    for (auto& s : e.local_stabilizers)
                        if (s == e.prep_stabilizers[i]) s.negate();
                    e.prep_stabilizers[i].negate();
                    fixed = true;
                    break;
                }
                if (!fixed) throw std::logic_error("hx: cannot select even parity sector");
                repair_prep(e, e.prep_stabilizers.size());  // consistency check
            }
            break;
        }
    }
    return e;
}

double tqg_count_formula(EncodingKind kind, std::size_t n_sites, bool two_dimensional) {
    double N = double(n_sites);
    double r = std::sqrt(N);
    switch (kind) {
        case EncodingKind::JW:
            return two_dimensional ? 4 * N * r + 6 * N - 4 * r - 4 : 6 * N - 4;
        case EncodingKind::LE:
            return two_dimensional ? 8 * N * r + 10 * N - 4 * r - 4 : 14 * N - 8;
        case EncodingKind::DK: return two_dimensional ? 20 * N - 36 * r + 18 : 14 * N - 12;
        case EncodingKind::VC: return two_dimensional ? 22 * N - 20 * r : 14 * N - 12;
        case EncodingKind::HX: return two_dimensional ? 44 * N - 24 * r : 16 * N - 9;
    }
    throw std::logic_error("tqg_count_formula");
}

}  // namespace snt
