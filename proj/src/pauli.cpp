#include "snt/pauli.hpp"

namespace snt {

PauliOperator PauliOperator::single(std::size_t n, std::size_t q, char letter) {
    PauliOperator p(n);
    p.set_letter(q, letter);
    return p;
}

void PauliOperator::set_letter(std::size_t q, char letter) {
    if (q >= n_) throw std::invalid_argument("set_letter: qubit out of range");
    // remove the current letter's phase contribution, then add the new one
    if (x_bit(q) && z_bit(q)) phase_ = (phase_ + 3) & 3;
    switch (letter) {
        case 'I': set_x(q, false); set_z(q, false); break;
        case 'X': set_x(q, true);  set_z(q, false); break;
        case 'Z': set_x(q, false); set_z(q, true);  break;
        case 'Y': set_x(q, true);  set_z(q, true);  phase_ = (phase_ + 1) & 3; break;
        default: throw std::invalid_argument(std::string("set_letter: bad letter '") + letter + "'");
    }
}

int PauliOperator::sign() const {
    int k = int((phase_ - int(count_y() & 3)) & 3);
    if (k & 1) throw std::logic_error("PauliOperator::sign: non-Hermitian representative");
    return k == 0 ? 1 : -1;
}

void PauliOperator::set_sign(int s) {
    if (s != 1 && s != -1) throw std::invalid_argument("set_sign: expected +1/-1");
    if (sign() != s) negate();
}

PauliOperator PauliOperator::parse(const std::string& text) {
    std::size_t i = 0;
    int sgn = 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        if (text[i] == '-') sgn = -1;
        ++i;
    }
    std::string body = text.substr(i);
    if (body.empty()) throw std::invalid_argument("PauliOperator::parse: empty operator");
    PauliOperator p(body.size());
    for (std::size_t q = 0; q < body.size(); ++q) p.set_letter(q, body[q]);
    p.set_sign(sgn);
    return p;
}

std::string PauliOperator::to_string() const {
    std::string out;
    out.reserve(n_ + 1);
    out.push_back(sign() < 0 ? '-' : '+');
    for (std::size_t q = 0; q < n_; ++q) out.push_back(letter(q));
    return out;
}

PauliOperator PauliOperator::padded(std::size_t n_total) const {
    if (n_total < n_) throw std::invalid_argument("padded: target smaller than source");
    PauliOperator p(n_total);
    for (std::size_t i = 0; i < x_.size(); ++i) {
        p.x_[i] = x_[i];
        p.z_[i] = z_[i];
    }
    p.phase_ = phase_;
    return p;
}

}  // namespace snt
