#pragma once

#include "snt/clifford.hpp"
#include "snt/rng.hpp"

namespace snt {

// Stabilizer state tracked as n stabilizer rows plus n destabilizer rows.
// destab[i] anticommutes with stab[i] and commutes with every other row.
class StabilizerState {
public:
    explicit StabilizerState(std::size_t n);  // |0...0>

    std::size_t n_qubits() const { return n_; }

    void apply(const CliffordTableau& t);
    void apply_pauli(const PauliOperator& p);  // only signs can change

    // +1 / -1 when p is determinate, 0 otherwise
    int expectation(const PauliOperator& p) const;

    // measurement with collapse; indeterminate outcomes drawn from rng
    int measure(const PauliOperator& p, Rng& rng);

    // force the outcome of a measurement of p to `desired` (+1/-1);
    // throws if p is determinate with the opposite value
    void project(const PauliOperator& p, int desired);

    const PauliOperator& stabilizer(std::size_t i) const { return stab_[i]; }
    const PauliOperator& destabilizer(std::size_t i) const { return destab_[i]; }

    // project p onto +1; if p is determinate with value -1 but independent of
    // `fixed`, a Pauli correction commuting with every element of `fixed` is
    // applied first. Throws if p is in the group generated by `fixed` with the
    // wrong sign. On success p is appended to `fixed`.
    void force(const PauliOperator& p, std::vector<PauliOperator>& fixed);

private:
    int determinate_value(const PauliOperator& p) const;
    void collapse(const PauliOperator& p, int outcome, std::size_t pivot);

    std::size_t n_;
    std::vector<PauliOperator> stab_, destab_;
};

// Pauli that commutes with every element of `keep` and anticommutes with
// `flip` (signs are irrelevant, only the symplectic data is constrained).
// Throws std::logic_error when flip is in the span of keep.
PauliOperator anticommuting_partner(const std::vector<PauliOperator>& keep,
                                    const PauliOperator& flip);

// sequentially force every stabilizer in `stabs` onto +1, applying
// corrections where needed; throws if the signed group is inconsistent
void force_stabilizers(StabilizerState& st, const std::vector<PauliOperator>& stabs);

}  // namespace snt
