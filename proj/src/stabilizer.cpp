#include "snt/stabilizer.hpp"

namespace snt {

StabilizerState::StabilizerState(std::size_t n) : n_(n) {
    stab_.reserve(n);
    destab_.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
        stab_.push_back(PauliOperator::single(n, q, 'Z'));
        destab_.push_back(PauliOperator::single(n, q, 'X'));
    }
}

void StabilizerState::apply(const CliffordTableau& t) {
    for (auto& s : stab_) s = t.conjugate(s);
    for (auto& d : destab_) d = t.conjugate(d);
}

void StabilizerState::apply_pauli(const PauliOperator& p) {
    for (auto& s : stab_)
        if (symplectic_product(s, p)) s.negate();
    for (auto& d : destab_)
        if (symplectic_product(d, p)) d.negate();
}

int StabilizerState::determinate_value(const PauliOperator& p) const {
    // p = +/- product of the stabilizers its destabilizer pattern selects
    PauliOperator prod(n_);
    for (std::size_t i = 0; i < n_; ++i)
        if (symplectic_product(destab_[i], p)) prod = multiply(prod, stab_[i]);
    if (!prod.equals_up_to_sign(p))
        throw std::logic_error("stabilizer reconstruction mismatch");
    return prod.sign() * p.sign();
}

int StabilizerState::expectation(const PauliOperator& p) const {
    for (const auto& s : stab_)
        if (symplectic_product(s, p)) return 0;
    return determinate_value(p);
}

void StabilizerState::collapse(const PauliOperator& p, int outcome, std::size_t pivot) {
    PauliOperator piv = stab_[pivot];
    for (std::size_t i = 0; i < n_; ++i) {
        if (i != pivot && symplectic_product(stab_[i], p)) stab_[i] = multiply(piv, stab_[i]);
        if (symplectic_product(destab_[i], p)) destab_[i] = multiply(piv, destab_[i]);
    }
    destab_[pivot] = piv;
    stab_[pivot] = p;  // post-state stabilized by outcome * p
    if (outcome < 0) stab_[pivot].negate();
}

int StabilizerState::measure(const PauliOperator& p, Rng& rng) {
    for (std::size_t i = 0; i < n_; ++i) {
        if (symplectic_product(stab_[i], p)) {
            int outcome = rng.bernoulli(0.5) ? 1 : -1;
            collapse(p, outcome, i);
            return outcome;
        }
    }
    return determinate_value(p);
}

void StabilizerState::project(const PauliOperator& p, int desired) {
    for (std::size_t i = 0; i < n_; ++i) {
        if (symplectic_product(stab_[i], p)) {
            collapse(p, desired, i);
            return;
        }
    }
    if (determinate_value(p) != desired)
        throw std::logic_error("project: inconsistent with current state");
}

void StabilizerState::force(const PauliOperator& p, std::vector<PauliOperator>& fixed) {
    if (expectation(p) == -1) apply_pauli(anticommuting_partner(fixed, p));
    project(p, 1);
    fixed.push_back(p);
}

PauliOperator anticommuting_partner(const std::vector<PauliOperator>& keep,
                                    const PauliOperator& flip) {
    // unknown c as 2n bits (x block then z block); each constraint row is the
    // symplectic pairing <p, c> = p.z . c.x + p.x . c.z
    const std::size_t n = flip.n_qubits();
    const std::size_t cols = 2 * n;
    std::vector<std::vector<uint8_t>> rows;
    auto add_row = [&](const PauliOperator& p, uint8_t rhs) {
        std::vector<uint8_t> r(cols + 1, 0);
        for (std::size_t q = 0; q < n; ++q) {
            r[q] = p.z_bit(q);
            r[n + q] = p.x_bit(q);
        }
        r[cols] = rhs;
        rows.push_back(std::move(r));
    };
    for (const auto& p : keep) add_row(p, 0);
    add_row(flip, 1);

    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pr = rank;
        while (pr < rows.size() && !rows[pr][c]) ++pr;
        if (pr == rows.size()) continue;
        std::swap(rows[pr], rows[rank]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r][c])
                for (std::size_t k = c; k <= cols; ++k) rows[r][k] ^= rows[rank][k];
        pivots.emplace_back(rank, c);
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r)
        if (rows[r][cols]) throw std::logic_error("anticommuting_partner: no solution");

    PauliOperator out(n);
    for (auto [r, c] : pivots) {
        if (!rows[r][cols]) continue;
        if (c < n) out.set_x(c, true);
        else out.set_z(c - n, true);
    }
    for (std::size_t q = 0; q < n; ++q)
        if (out.x_bit(q) && out.z_bit(q)) out.add_phase(1);  // keep it Hermitian
    return out;
}

void force_stabilizers(StabilizerState& st, const std::vector<PauliOperator>& stabs) {
    std::vector<PauliOperator> fixed;
    for (const auto& s : stabs) st.force(s, fixed);
}

}  // namespace snt
