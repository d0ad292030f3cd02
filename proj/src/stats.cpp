#include "snt/stats.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace snt {

BiasEstimate squared_bias(const std::vector<double>& means, const std::vector<double>& variances,
                          const std::vector<double>& references) {
    if (means.size() != variances.size() || means.size() != references.size())
        throw std::invalid_argument("squared_bias: mismatched inputs");
    if (means.empty()) throw std::invalid_argument("squared_bias: missing reference");
    BiasEstimate b;
    double n = double(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) {
        double d = means[i] - references[i];
        b.theta_i.push_back(d * d - variances[i]);
        b.theta += b.theta_i.back() / n;
        b.var_theta +=
            (2.0 * variances[i] * variances[i] + 4.0 * variances[i] * d * d) / (n * n);
    }
    return b;
}

double mse(double bias_sq, double variance) {
    if (bias_sq < 0 || variance < 0) throw std::invalid_argument("mse: negative input");
    return bias_sq + variance;
}

double rmse(double bias_sq, double variance) { return std::sqrt(mse(bias_sq, variance)); }

double rmse_avg(const std::vector<double>& bias_sq, const std::vector<double>& variances) {
    if (bias_sq.size() != variances.size() || bias_sq.empty())
        throw std::invalid_argument("rmse_avg: mismatched inputs");
    double s = 0;
    for (std::size_t i = 0; i < bias_sq.size(); ++i) s += mse(bias_sq[i], variances[i]);
    return std::sqrt(s / double(bias_sq.size()));
}

CostBreakdown cost_breakdown(double pi, double mean_m, double gamma, double lambda) {
    if (!(pi >= 0) || pi >= 1) throw std::invalid_argument("cost_breakdown: rejection rate");
    if (!(mean_m > 0)) throw std::invalid_argument("cost_breakdown: projector average");
    if (gamma < 1) throw std::invalid_argument("cost_breakdown: sampling cost below 1");
    CostBreakdown c;
    c.c_ps = 1.0 / std::sqrt(1.0 - pi);
    c.c_pp = pp_cost_alpha() / mean_m;
    c.c_pec = gamma;
    c.c_total = c.c_ps * c.c_pp * c.c_pec;
    c.lambda = lambda;
    if (lambda > 0.1) {
        c.beta = std::log(c.c_total) / lambda;
        c.beta_defined = true;
    }
    return c;
}

double analytic_r_jw(double p_xy, double p_z, std::size_t n_qubits, RJwVariant variant,
                     std::size_t g) {
    if (variant == RJwVariant::Global) {
        if (g == 0 || n_qubits == 0) throw std::invalid_argument("analytic_r_jw: empty group");
        double num = 1.0 - std::pow(2.0, -double(g));
        double scale = std::pow(4.0, double(n_qubits));
        return scale * num / (scale - 1.0);
    }
    if (p_xy < 0 || p_z < 0 || p_xy + p_z >= 1)
        throw std::invalid_argument("analytic_r_jw: probabilities out of range");
    if (p_xy + p_z == 0) throw std::invalid_argument("analytic_r_jw: degenerate denominator");
    if (n_qubits < 2 || (variant == RJwVariant::SpinLocal && n_qubits % 2 != 0))
        throw std::invalid_argument("analytic_r_jw: qubit count");
    double denom = 1.0 - std::pow(1.0 - p_xy - p_z, double(n_qubits));
    if (variant == RJwVariant::SpinlessLocal)
        return 0.5 * (1.0 - std::pow(1.0 - 2.0 * p_xy, double(n_qubits))) / denom;
    // one parity string per spin row: undetectable configurations flip an
    // even number of X/Y on both halves
    double q = std::pow(1.0 - 2.0 * p_xy, double(n_qubits) / 2.0);
    return (1.0 - 0.25 * (1.0 + q) * (1.0 + q)) / denom;
}

double pp_cost_alpha() { return 1.5; }

double meas_cost_bound(double msp) {
    if (!(msp > 0) || msp > 1) throw std::invalid_argument("meas_cost_bound: MSP out of (0, 1]");
    return 1.0 / std::sqrt(msp);
}

double snt_cost_model(double r, double lambda, SntCostVariant variant) {
    if (r < 0 || r > 1 || lambda < 0) throw std::invalid_argument("snt_cost_model: bad inputs");
    double beta = (variant == SntCostVariant::Ps ? 0.5 * r : r) + 2.0 * (1.0 - r);
    return std::exp(beta * lambda);
}

std::string stats_json(const std::string& label, const std::vector<ObservableStat>& rows,
                       const BiasEstimate& bias, const CostBreakdown& cost,
                       double rmse_value) {
    nlohmann::json j;
    j["label"] = label;
    j["rmse"] = rmse_value;
    j["bias"] = {{"theta", bias.theta}, {"var_theta", bias.var_theta}};
    j["cost"] = {{"c_ps", cost.c_ps},     {"c_pp", cost.c_pp},
                 {"c_pec", cost.c_pec},   {"c_total", cost.c_total},
                 {"lambda", cost.lambda}, {"beta_defined", cost.beta_defined}};
    if (cost.beta_defined) j["cost"]["beta"] = cost.beta;
    j["observables"] = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        j["observables"].push_back({{"name", rows[i].name},
                                    {"mean", rows[i].mean},
                                    {"variance", rows[i].variance},
                                    {"reference", rows[i].reference},
                                    {"theta", i < bias.theta_i.size() ? bias.theta_i[i] : 0.0}});
    }
    return j.dump(2);
}

std::string stats_csv(const std::vector<ObservableStat>& rows, const BiasEstimate& bias) {
    std::ostringstream os;
    os << "name,mean,variance,reference,theta\n";
    os.precision(17);
    for (std::size_t i = 0; i < rows.size(); ++i)
        os << rows[i].name << ',' << rows[i].mean << ',' << rows[i].variance << ','
           << rows[i].reference << ','
           << (i < bias.theta_i.size() ? bias.theta_i[i] : 0.0) << '\n';
    return os.str();
}

}  // namespace snt
