#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "snt/encodings.hpp"
#include "snt/qem.hpp"

namespace snt {

struct HardwareProfile {
    double f_avg_tqg = 0.9995;
    double eps_meas = 0;
    double shot_rate_hz = 1000;
    // 12 hours at 1 kHz
    std::uint64_t n_shots = 43'200'000;
    std::size_t n_circuits = 43'200'000;
};

// squared bias = (a * x^2)^2 + b, where x is the per-window error rate
// (between consecutive check rounds) for tailored runs
struct BiasModel {
    double a = 0;
    double b = 0;
};

// least-squares fit of log(y - b) against the quartic form; needs >= 4
// points spanning at least a decade in x; b is pinned to the shot floor
BiasModel fit_bias_model(const std::vector<std::pair<double, double>>& points,
                         double floor_b);

// ordinary log-log regression slope, used to check scaling exponents
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct Lattice {
    std::size_t width = 2, height = 2;
    bool operator==(const Lattice&) const = default;
    std::size_t sites() const { return width * height; }
    // a two-row lattice is a spin chain; anything taller is a genuine grid
    bool two_dimensional() const { return height > 2; }
};

// per-encoding cost/bias coefficients used by the extrapolation; defaults are
// fixture values, callers can override with their own extraction
struct EncodingCoefficients {
    double r_ps = 0, r_pp = 0;  // detectable fractions
    double beta_snt = 0;        // tailored cost exponent
    double bias_a_snt = 0;      // quartic bias coefficient, per-window rate
    double bias_a_sv = 0;       // linear-in-undetectable bias coefficient
};

struct ResourceModel {
    std::map<EncodingKind, EncodingCoefficients> enc;
    double sigma_sq = 1.0;        // per-shot outcome variance bound
    double pec_cost_ceiling = 1e6;  // on C^2
    double rmse_ceiling = 1.0;      // cells above this count as infeasible
};

ResourceModel default_resource_model();

struct RmsePrediction {
    double rmse = 0, bias_sq = 0, variance = 0;
    double c_total = 1;
    double lambda = 0, lambda_prime = 0, csp = 1;
    double n_tqg = 0;
    bool feasible = true;
    std::string limiting;  // "bias", "variance" or "circuits"
};

// protocol is one of SV, Snt, PecFull; PEC runs without parity checks
RmsePrediction predict_rmse(EncodingKind kind, QemProtocol protocol, const Lattice& lattice,
                            std::size_t n_trotter, std::size_t rounds,
                            const HardwareProfile& hw,
                            const ResourceModel& model = default_resource_model());

struct StrategyPoint {
    Lattice lattice;
    double fidelity = 1;
    EncodingKind encoding = EncodingKind::JW;
    QemProtocol protocol = QemProtocol::SV;
    RmsePrediction prediction;
    bool feasible = false;
};

// argmin of predicted RMSE over the five encodings and {SV, SNT, PEC};
// ties break toward lower total cost; one check round per Trotter step
std::vector<StrategyPoint> phase_diagram(const std::vector<Lattice>& lattices,
                                         const std::vector<double>& fidelities,
                                         std::size_t n_trotter, const HardwareProfile& hw,
                                         const ResourceModel& model = default_resource_model());

std::string phase_csv(const std::vector<StrategyPoint>& grid);
std::string phase_manifest_json(const std::vector<Lattice>& lattices,
                                const std::vector<double>& fidelities, std::size_t n_trotter,
                                const HardwareProfile& hw, const ResourceModel& model);

// largest step count meeting the target at the given fidelity (0 when even a
// single step misses it); capped at the budget-limited value
std::size_t max_trotter(double fidelity, double rmse_target, EncodingKind kind,
                        QemProtocol protocol, const Lattice& lattice,
                        const HardwareProfile& hw,
                        const ResourceModel& model = default_resource_model());

// smallest two-qubit-gate fidelity meeting the target; throws when even a
// perfect gate set misses it
double required_fidelity(const Lattice& lattice, std::size_t n_trotter, QemProtocol protocol,
                         double rmse_target, EncodingKind kind, const HardwareProfile& hw,
                         const ResourceModel& model = default_resource_model());

}  // namespace snt
