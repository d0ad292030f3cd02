#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace snt {

// unbiased squared-bias estimator: subtracting the estimator variance makes
// individual entries possibly negative
struct BiasEstimate {
    std::vector<double> theta_i;
    double theta = 0;
    double var_theta = 0;
};

// theta_i = (mean_i - ref_i)^2 - var_i, where var_i is the variance OF THE
// MEAN estimator; references are treated as exact
BiasEstimate squared_bias(const std::vector<double>& means, const std::vector<double>& variances,
                          const std::vector<double>& references);

double mse(double bias_sq, double variance);
double rmse(double bias_sq, double variance);
double rmse_avg(const std::vector<double>& bias_sq, const std::vector<double>& variances);

struct CostBreakdown {
    double c_ps = 1, c_pp = 1, c_pec = 1, c_total = 1;
    double lambda = 0;
    double beta = 0;
    bool beta_defined = false;  // only reported above lambda = 0.1
};

// pi: rejected fraction; mean_m: symmetry-projector average on accepted
// shots; gamma: quasi-probability sampling cost; lambda excludes check layers
CostBreakdown cost_breakdown(double pi, double mean_m, double gamma, double lambda);

enum class RJwVariant { SpinlessLocal, SpinLocal, Global };

// closed-form detectable-noise ratios for parity-string stabilizers under
// independent single-qubit noise (p_xy the combined X/Y rate per qubit);
// the global variant depends only on the stabilizer count g
double analytic_r_jw(double p_xy, double p_z, std::size_t n_qubits, RJwVariant variant,
                     std::size_t g = 2);

double pp_cost_alpha();                  // post-processing prefactor, 3/2
double meas_cost_bound(double msp);      // 1 / sqrt(MSP)

enum class SntCostVariant { Ps, Pp };

// predicted sampling cost exp(beta * lambda) with beta = R/2 + 2(1-R) when
// detectable faults are filtered by rejection, or R + 2(1-R) when they are
// removed in post-processing
double snt_cost_model(double r, double lambda, SntCostVariant variant);

struct ObservableStat {
    std::string name;
    double mean = 0, variance = 0, reference = 0;
};

// one JSON document per experiment / one CSV row per observable
std::string stats_json(const std::string& label, const std::vector<ObservableStat>& rows,
                       const BiasEstimate& bias, const CostBreakdown& cost, double rmse_value);
std::string stats_csv(const std::vector<ObservableStat>& rows, const BiasEstimate& bias);

}  // namespace snt
