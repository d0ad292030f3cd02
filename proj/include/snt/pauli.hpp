#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace snt {

// Bit-packed n-qubit Pauli, stored as P = i^phase * X^x * Z^z (per qubit,
// X factor left of Z factor). A Hermitian Pauli always has (phase - #Y) even;
// products transiently carry odd powers of i until resolved.
class PauliOperator {
public:
    PauliOperator() = default;
    explicit PauliOperator(std::size_t n_qubits)
        : n_(n_qubits), x_((n_qubits + 63) / 64, 0), z_((n_qubits + 63) / 64, 0) {}

    static PauliOperator identity(std::size_t n) { return PauliOperator(n); }
    // Single non-identity letter at qubit q; letter in {'X','Y','Z'}.
    static PauliOperator single(std::size_t n, std::size_t q, char letter);
    // Parses e.g. "-XIZY" (qubit 0 leftmost, optional +/- prefix).
    static PauliOperator parse(const std::string& text);

    std::size_t n_qubits() const { return n_; }

    bool x_bit(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
    bool z_bit(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1; }
    void set_x(std::size_t q, bool v) { set_bit(x_, q, v); }
    void set_z(std::size_t q, bool v) { set_bit(z_, q, v); }

    // Letter at qubit q in {'I','X','Y','Z'}; assigning fixes phase so the
    // letter form stays Hermitian.
    char letter(std::size_t q) const {
        static const char tab[4] = {'I', 'X', 'Z', 'Y'};
        return tab[(x_bit(q) ? 1 : 0) | (z_bit(q) ? 2 : 0)];
    }
    void set_letter(std::size_t q, char letter);

    std::size_t weight() const;
    bool is_identity() const;

    // i^k with k = phase - #Y must be real for a Hermitian representative.
    bool is_hermitian() const { return ((phase_ - count_y()) & 1) == 0; }
    // +1 or -1; throws std::logic_error on a non-Hermitian representative.
    int sign() const;
    void negate() { phase_ = (phase_ + 2) & 3; }
    void add_phase(int k) { phase_ = (phase_ + k) & 3; }
    void set_sign(int s);
    int raw_phase() const { return phase_; }

    // 0 if [P,Q] = 0, 1 if {P,Q} = 0.
    friend int symplectic_product(const PauliOperator& p, const PauliOperator& q);
    friend PauliOperator multiply(const PauliOperator& p, const PauliOperator& q);

    bool commutes_with(const PauliOperator& q) const { return symplectic_product(*this, q) == 0; }

    bool operator==(const PauliOperator& o) const {
        return n_ == o.n_ && phase_ == o.phase_ && x_ == o.x_ && z_ == o.z_;
    }
    bool equals_up_to_sign(const PauliOperator& o) const {
        return n_ == o.n_ && x_ == o.x_ && z_ == o.z_;
    }

    std::string to_string() const;

    const std::vector<std::uint64_t>& x_words() const { return x_; }
    const std::vector<std::uint64_t>& z_words() const { return z_; }

    // Embeds this operator into a wider register (qubits keep their index).
    PauliOperator padded(std::size_t n_total) const;

private:
    static void set_bit(std::vector<std::uint64_t>& w, std::size_t q, bool v) {
        if (v) w[q >> 6] |= std::uint64_t(1) << (q & 63);
        else   w[q >> 6] &= ~(std::uint64_t(1) << (q & 63));
    }
    std::size_t count_y() const;

    std::size_t n_ = 0;
    std::vector<std::uint64_t> x_, z_;
    int phase_ = 0;  // exponent of i, mod 4
};

inline std::size_t PauliOperator::count_y() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) c += std::popcount(x_[i] & z_[i]);
    return c;
}

inline std::size_t PauliOperator::weight() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) c += std::popcount(x_[i] | z_[i]);
    return c;
}

inline bool PauliOperator::is_identity() const {
    if (phase_ != 0) return false;
    for (std::size_t i = 0; i < x_.size(); ++i)
        if (x_[i] | z_[i]) return false;
    return true;
}

inline int symplectic_product(const PauliOperator& p, const PauliOperator& q) {
    if (p.n_ != q.n_) throw std::invalid_argument("symplectic_product: qubit count mismatch");
    std::size_t c = 0;
    for (std::size_t i = 0; i < p.x_.size(); ++i)
        c += std::popcount(p.x_[i] & q.z_[i]) + std::popcount(p.z_[i] & q.x_[i]);
    return int(c & 1);
}

inline PauliOperator multiply(const PauliOperator& p, const PauliOperator& q) {
    if (p.n_ != q.n_) throw std::invalid_argument("multiply: qubit count mismatch");
    PauliOperator r(p.n_);
    std::size_t swaps = 0;
    for (std::size_t i = 0; i < p.x_.size(); ++i) {
        swaps += std::popcount(p.z_[i] & q.x_[i]);  // Z^zp past X^xq
        r.x_[i] = p.x_[i] ^ q.x_[i];
        r.z_[i] = p.z_[i] ^ q.z_[i];
    }
    r.phase_ = int((p.phase_ + q.phase_ + 2 * swaps) & 3);
    return r;
}

}  // namespace snt
