#include "snt/qem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "snt/rng.hpp"

namespace snt {

namespace {

constexpr std::uint64_t kInstanceStreamTag = 0x9ec5a3b1ull;

struct Moments {
    std::vector<double> mu_a, mu_b, var_a, var_b, cov_ab, n;
};

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / double(v.size());
}

double var_pop(const std::vector<double>& v) {
    double m = mean_of(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return v.empty() ? 0.0 : s / double(v.size());
}

double cov_pop(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = mean_of(a), mb = mean_of(b), s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return a.empty() ? 0.0 : s / double(a.size());
}

// two-contribution form: shot noise at the average allocation plus the
// circuit-to-circuit spread, inflated by the allocation imbalance
double two_contribution(const std::vector<double>& mu, const std::vector<double>& sig2,
                        const std::vector<double>& n) {
    if (mu.empty()) return 0;
    double nc = double(mu.size());
    double nbar = mean_of(n);
    if (nbar <= 0) return 0;
    return (mean_of(sig2) / nbar + var_pop(mu) * (1.0 + var_pop(n) / (nbar * nbar))) / nc;
}

double two_contribution_cov(const std::vector<double>& mu_a, const std::vector<double>& mu_b,
                            const std::vector<double>& cov, const std::vector<double>& n) {
    if (mu_a.empty()) return 0;
    double nc = double(mu_a.size());
    double nbar = mean_of(n);
    if (nbar <= 0) return 0;
    return (mean_of(cov) / nbar +
            cov_pop(mu_a, mu_b) * (1.0 + var_pop(n) / (nbar * nbar))) /
           nc;
}

}  // namespace

QemProtocol protocol_from_name(const std::string& name) {
    if (name == "unmitigated") return QemProtocol::Unmitigated;
    if (name == "ps") return QemProtocol::PS;
    if (name == "sv") return QemProtocol::SV;
    if (name == "pec") return QemProtocol::PecFull;
    if (name == "snt") return QemProtocol::Snt;
    throw std::invalid_argument("protocol_from_name: unknown protocol " + name);
}

std::string protocol_name(QemProtocol p) {
    switch (p) {
        case QemProtocol::Unmitigated: return "unmitigated";
        case QemProtocol::PS: return "ps";
        case QemProtocol::SV: return "sv";
        case QemProtocol::PecFull: return "pec";
        case QemProtocol::Snt: return "snt";
    }
    return "?";
}

double QuasiProbabilityPlan::p_zero() const {
    double p = 1;
    for (const auto& l : layers) p *= (1.0 + l.mass) / l.gamma;
    return p;
}

QuasiProbabilityPlan build_quasiprobability(const NoiseModel& m, const NoisePartition& part,
                                            PlanMode mode) {
    if (part.layers.size() != m.channels.size())
        throw std::invalid_argument("build_quasiprobability: partition does not match model");
    QuasiProbabilityPlan plan;
    for (std::size_t i = 0; i < m.channels.size(); ++i) {
        const auto& ch = m.channels[i];
        if (ch.check_layer) continue;
        LayerPlan lp;
        lp.channel = i;
        for (std::size_t t = 0; t < ch.terms.size(); ++t) {
            if (mode == PlanMode::UndetectableOnly &&
                part.layers[i].term_class[t] != FaultClass::Undetectable)
                continue;
            lp.targets.push_back(ch.terms[t]);
            lp.mass += ch.terms[t].prob;
        }
        if (lp.targets.empty()) continue;
        lp.gamma = 1.0 + 2.0 * lp.mass;
        plan.c_pec *= lp.gamma;
        plan.layers.push_back(std::move(lp));
    }
    return plan;
}

std::vector<SampledInstance> sample_instances(const QuasiProbabilityPlan& plan,
                                              const ShotBudget& budget, std::uint64_t seed) {
    if (budget.n_circuits == 0)
        throw std::invalid_argument("sample_instances: need at least one circuit");

    auto draw = [&](Rng& rng, CircuitInstance& inst) {
        for (const auto& l : plan.layers) {
            double u = rng.uniform() * l.gamma;
            if (u < 1.0 + l.mass) continue;
            u -= 1.0 + l.mass;
            const NoiseTerm* pick = &l.targets.back();
            for (const auto& t : l.targets) {
                if (u < t.prob) {
                    pick = &t;
                    break;
                }
                u -= t.prob;
            }
            inst.insertions.push_back({l.channel, pick->op});
            inst.sign = -inst.sign;
        }
    };

    std::vector<SampledInstance> out;
    if (budget.strategy == SamplingStrategy::Plain) {
        std::uint64_t base = budget.n_shots / budget.n_circuits;
        std::uint64_t extra = budget.n_shots % budget.n_circuits;
        for (std::size_t id = 0; id < budget.n_circuits; ++id) {
            SampledInstance si;
            si.instance.id = id;
            si.n_shots = base + (id < extra ? 1 : 0);
            Rng rng = Rng::stream(seed, kInstanceStreamTag, id);
            draw(rng, si.instance);
            out.push_back(std::move(si));
        }
        return out;
    }

    // grouped-zero stratification
    if (budget.n_circuits < 2)
        throw std::invalid_argument("sample_instances: grouped-zero needs >= 2 circuits");
    if (plan.layers.empty())
        throw std::invalid_argument("sample_instances: grouped-zero needs a nonempty plan");
    double p0 = plan.p_zero();
    std::uint64_t n0 = std::uint64_t(std::llround(double(budget.n_shots) * p0));
    n0 = std::min(n0, budget.n_shots);
    SampledInstance zero;
    zero.instance.id = 0;
    zero.n_shots = n0;
    out.push_back(std::move(zero));

    std::uint64_t rest = budget.n_shots - n0;
    std::size_t n_nz = budget.n_circuits - 1;
    std::uint64_t base = rest / n_nz, extra = rest % n_nz;
    for (std::size_t k = 0; k < n_nz; ++k) {
        SampledInstance si;
        si.instance.id = k + 1;
        si.n_shots = base + (k < extra ? 1 : 0);
        Rng rng = Rng::stream(seed, kInstanceStreamTag, k + 1);
        do {
            si.instance.sign = 1;
            si.instance.insertions.clear();
            draw(rng, si.instance);
        } while (si.instance.insertions.empty());
        out.push_back(std::move(si));
    }
    return out;
}

PsResult postselect(const std::vector<ShotRecord>& records) {
    PsResult r;
    for (const auto& s : records)
        if (s.accepted) r.accepted.push_back(s);
    std::size_t total = records.size();
    r.pi = total == 0 ? 1.0 : 1.0 - double(r.accepted.size()) / double(total);
    if (r.accepted.empty()) {
        r.all_rejected = true;
        r.c_ps = std::numeric_limits<double>::infinity();
    } else {
        r.c_ps = 1.0 / std::sqrt(1.0 - r.pi);
    }
    return r;
}

PPEstimate pp_estimate(const std::array<std::vector<std::int8_t>, 4>& a_groups,
                       const std::vector<std::array<std::int8_t, 3>>& b_shots) {
    PPEstimate e;
    double var_a = 0;
    for (const auto& g : a_groups) {
        if (g.empty()) return e;
        double m = 0;
        for (auto v : g) m += v;
        m /= double(g.size());
        double s2 = 0;
        for (auto v : g) s2 += (v - m) * (v - m);
        s2 /= double(g.size());
        e.a_mean += 0.25 * m;
        var_a += (0.25 * 0.25) * s2 / double(g.size());
    }
    if (b_shots.empty()) return e;
    // the projector average per joint shot keeps the covariance between the
    // three symmetry readings
    double mb = 0;
    std::vector<double> bi(b_shots.size());
    for (std::size_t i = 0; i < b_shots.size(); ++i) {
        bi[i] = 0.25 * (1.0 + b_shots[i][0] + b_shots[i][1] + b_shots[i][2]);
        mb += bi[i];
    }
    mb /= double(b_shots.size());
    double var_b = var_pop(bi) / double(b_shots.size());
    e.b_mean = mb;
    if (!(mb > 0)) return e;
    e.estimate = e.a_mean / mb;
    e.variance = var_a / (mb * mb) + e.a_mean * e.a_mean * var_b / (mb * mb * mb * mb);
    e.valid = true;
    return e;
}

PpAllocation pp_allocation(std::uint64_t n_shots) {
    PpAllocation a;
    a.n_a = n_shots / 6;
    a.n_b = n_shots - 4 * a.n_a;
    return a;
}

std::vector<EstimateResult> estimate(const std::vector<ShotRecord>& records,
                                     std::size_t n_observables, const EstimateOptions& opt) {
    const bool use_ps = opt.protocol == QemProtocol::PS || opt.protocol == QemProtocol::SV ||
                        opt.protocol == QemProtocol::Snt;
    const bool use_sign =
        opt.protocol == QemProtocol::PecFull || opt.protocol == QemProtocol::Snt;
    const bool use_pp = (opt.protocol == QemProtocol::SV || opt.protocol == QemProtocol::Snt) &&
                        !opt.global_outcomes.empty();
    // every post-selected or projector-weighted chain is a ratio of two
    // sample means over all shots; the quasi-probability cost cancels there,
    // so only the bare sign-weighted mean carries the explicit scale
    const bool ratio = use_ps || use_pp;
    const double scale = (use_sign && !ratio) ? opt.c_pec : 1.0;

    std::vector<EstimateResult> out(n_observables);
    if (records.empty()) {
        for (auto& r : out) r.note = "no shots";
        return out;
    }
    for (const auto& s : records) {
        if (s.outcomes.size() < n_observables)
            throw std::invalid_argument("estimate: record is missing observable outcomes");
        for (std::size_t g : opt.global_outcomes)
            if (g >= s.outcomes.size())
                throw std::invalid_argument("estimate: global outcome index out of range");
    }

    // per-instance shot tallies, shared across observables
    struct Tally {
        std::vector<double> sa, sb, saa, sbb, sab;  // per observable
        double n = 0;
        bool zero_stratum = false;
    };
    std::map<std::size_t, Tally> tallies;
    std::uint64_t n_used = 0;
    for (const auto& s : records) {
        double acc = (use_ps && !s.accepted) ? 0.0 : 1.0;
        double m = acc;
        if (use_pp && acc != 0.0)
            for (std::size_t g : opt.global_outcomes) m *= 0.5 * (1.0 + s.outcomes[g]);
        double sg = use_sign ? double(s.sign) : 1.0;
        auto& t = tallies[s.instance];
        if (t.sa.empty()) {
            t.sa.assign(n_observables, 0);
            t.sb.assign(n_observables, 0);
            t.saa.assign(n_observables, 0);
            t.sbb.assign(n_observables, 0);
            t.sab.assign(n_observables, 0);
        }
        double b = sg * m;
        for (std::size_t k = 0; k < n_observables; ++k) {
            double a = sg * m * double(s.outcomes[k]);
            t.sa[k] += a;
            t.sb[k] += b;
            t.saa[k] += a * a;
            t.sbb[k] += b * b;
            t.sab[k] += a * b;
        }
        t.n += 1;
        if (acc != 0.0) ++n_used;
    }
    if (opt.grouped_zero)
        if (auto it = tallies.find(opt.zero_instance); it != tallies.end())
            it->second.zero_stratum = true;

    for (std::size_t k = 0; k < n_observables; ++k) {
        EstimateResult& r = out[k];
        r.n_used = n_used;
        if (tallies.empty()) {
            r.note = "no usable shots";
            continue;
        }

        Moments nz;          // sampled (nonzero) instances
        const Tally* z = nullptr;
        for (const auto& [id, t] : tallies) {
            double mu_a = t.sa[k] / t.n, mu_b = t.sb[k] / t.n;
            double va = t.saa[k] / t.n - mu_a * mu_a;
            double vb = t.sbb[k] / t.n - mu_b * mu_b;
            double cab = t.sab[k] / t.n - mu_a * mu_b;
            if (t.zero_stratum) {
                z = &t;
                continue;
            }
            nz.mu_a.push_back(mu_a);
            nz.mu_b.push_back(mu_b);
            nz.var_a.push_back(va);
            nz.var_b.push_back(vb);
            nz.cov_ab.push_back(cab);
            nz.n.push_back(t.n);
        }

        double w_nz = opt.grouped_zero ? 1.0 - opt.p_zero : 1.0;
        double a = w_nz * mean_of(nz.mu_a), b = w_nz * mean_of(nz.mu_b);
        double var_est_a = w_nz * w_nz * two_contribution(nz.mu_a, nz.var_a, nz.n);
        double var_est_b = w_nz * w_nz * two_contribution(nz.mu_b, nz.var_b, nz.n);
        double cov_est = w_nz * w_nz * two_contribution_cov(nz.mu_a, nz.mu_b, nz.cov_ab, nz.n);
        if (z) {
            double mu_a0 = z->sa[k] / z->n, mu_b0 = z->sb[k] / z->n;
            a += opt.p_zero * mu_a0;
            b += opt.p_zero * mu_b0;
            double w0 = opt.p_zero;
            var_est_a += w0 * w0 * (z->saa[k] / z->n - mu_a0 * mu_a0) / z->n;
            var_est_b += w0 * w0 * (z->sbb[k] / z->n - mu_b0 * mu_b0) / z->n;
            cov_est += w0 * w0 * (z->sab[k] / z->n - mu_a0 * mu_b0) / z->n;
        }

        if (!ratio) {
            r.mean = scale * a;
            r.variance = scale * scale * var_est_a;
            r.valid = true;
            continue;
        }
        if (!(b > 0)) {
            r.note = "denominator not positive";
            continue;
        }
        double rr = a / b;
        r.mean = rr;
        r.variance =
            (var_est_a - 2.0 * rr * cov_est + rr * rr * var_est_b) / (b * b);
        r.variance = std::max(r.variance, 0.0);
        r.valid = true;
    }
    return out;
}

double n_eff(double n_circuits, double shots_per_circuit) {
    return n_circuits * shots_per_circuit / (shots_per_circuit + 1.0);
}

}  // namespace snt
