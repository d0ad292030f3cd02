#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "snt/classify.hpp"
#include "snt/engine.hpp"

namespace snt {

enum class QemProtocol { Unmitigated, PS, SV, PecFull, Snt };

QemProtocol protocol_from_name(const std::string& name);
std::string protocol_name(QemProtocol p);

enum class PlanMode { UndetectableOnly, All };

// per-layer inverse-map sampling rule: with probability (1 + mass) / gamma
// insert nothing (sign +), else insert target i with probability p_i / gamma
// (sign -); gamma = 1 + 2 mass
struct LayerPlan {
    std::size_t channel = 0;  // slot index
    std::vector<NoiseTerm> targets;
    double mass = 0;
    double gamma = 1;
};

struct QuasiProbabilityPlan {
    std::vector<LayerPlan> layers;  // only layers with nonzero targeted mass
    double c_pec = 1;               // product of the gammas
    // probability that a sampled instance carries no insertion at all
    double p_zero() const;
};

// mode UndetectableOnly targets each evolution layer's undetectable set,
// mode All the layer's full channel; check layers are never targeted
// (their faults sit outside the mitigated error budget)
QuasiProbabilityPlan build_quasiprobability(const NoiseModel& m, const NoisePartition& part,
                                            PlanMode mode);

enum class SamplingStrategy { Plain, GroupedZero };

struct ShotBudget {
    std::uint64_t n_shots = 0;
    std::size_t n_circuits = 1;
    SamplingStrategy strategy = SamplingStrategy::Plain;
};

struct SampledInstance {
    CircuitInstance instance;
    std::uint64_t n_shots = 0;
};

// plain: n_circuits independent draws with n_shots / n_circuits shots each.
// grouped-zero: instance 0 is the no-insertion circuit with n_shots * p_zero
// shots; the remaining draws are conditioned on carrying an insertion and
// share the rest evenly
std::vector<SampledInstance> sample_instances(const QuasiProbabilityPlan& plan,
                                              const ShotBudget& budget, std::uint64_t seed);

struct PsResult {
    std::vector<ShotRecord> accepted;
    double pi = 0;    // rejected fraction
    double c_ps = 1;  // 1 / sqrt(1 - pi)
    bool all_rejected = false;
};

PsResult postselect(const std::vector<ShotRecord>& records);

struct PPEstimate {
    double a_mean = 0, b_mean = 0;
    double estimate = 0;
    double variance = 0;
    bool valid = false;
};

// group-resolved symmetry-verification ratio: four circuits measure O,
// O S_up, O S_dn, O S_up S_dn (one outcome each) and one circuit measures
// the three symmetry products jointly
PPEstimate pp_estimate(const std::array<std::vector<std::int8_t>, 4>& a_groups,
                       const std::vector<std::array<std::int8_t, 3>>& b_shots);

// optimal split of a shot budget: each of the four A-groups gets n / 6 shots
// and the B-group n / 3 (rounding remainder folded into the B-group)
struct PpAllocation {
    std::uint64_t n_a = 0, n_b = 0;
};
PpAllocation pp_allocation(std::uint64_t n_shots);

struct EstimateOptions {
    QemProtocol protocol = QemProtocol::Unmitigated;
    double c_pec = 1;  // plan cost, used by the sign-weighted protocols
    // outcome indices holding the global-stabilizer readings used by the
    // symmetry projector M = prod (1 + g) / 2; empty disables the PP stage
    std::vector<std::size_t> global_outcomes;
    // grouped-zero stratification: instance `zero_instance` estimates the
    // no-insertion stratum with weight p_zero
    bool grouped_zero = false;
    double p_zero = 0;
    std::size_t zero_instance = 0;
};

struct EstimateResult {
    double mean = 0;
    double variance = 0;
    std::uint64_t n_used = 0;  // shots entering the estimator after PS
    bool valid = false;
    std::string note;
};

// protocol estimator chain over recorded shots: PS filtering (PS/SV/SNT),
// PEC sign weighting (PEC/SNT), symmetry-verification ratio (SV/SNT);
// one result per requested observable index
std::vector<EstimateResult> estimate(const std::vector<ShotRecord>& records,
                                     std::size_t n_observables, const EstimateOptions& opt);

// effective sample count of the two-contribution variance form
double n_eff(double n_circuits, double shots_per_circuit);

}  // namespace snt
