#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "snt/classify.hpp"
#include "snt/config.hpp"
#include "snt/engine.hpp"
#include "snt/stats.hpp"

namespace snt {

namespace {

namespace fs = std::filesystem;

// raised for runs that are valid but cannot produce an estimate
// (every shot rejected, register too wide for the dense backend, ...)
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string stamp(const ExperimentConfig& cfg) {
    return std::string("# artifact ") + kArtifactVersion + "\n# config " + config_hash(cfg) +
           "\n";
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + p.string());
    os << body;
}

struct Pipeline {
    Encoding enc;
    LayeredCircuit circ;
    NoiseModel noise;
    NoiseMetrics met;
    std::vector<PauliOperator> obs;       // occupations first, then globals
    std::vector<Observable> occupations;  // name / offset / scale per row
    std::vector<std::size_t> gidx;        // outcome indices of the globals
};

Pipeline make_pipeline(const ExperimentConfig& cfg, const std::string& backend) {
    Pipeline p;
    p.enc = build_encoding(cfg.encoding, cfg.lattice.width, cfg.lattice.height);
    p.circ = trotterize(p.enc, cfg.fhm);
    if (backend == "clifford") p.circ = clifford_round(p.circ);
    if (cfg.rounds > 0) p.circ = insert_parity_checks(p.circ, cfg.rounds);
    p.noise = local_noise_model(p.circ, cfg.fidelity, cfg.eps_meas, cfg.two_qubit_fraction);
    p.met = metrics(p.noise, p.circ);

    p.occupations = p.enc.occupation_observables();
    for (const auto& o : p.occupations) p.obs.push_back(o.op);

    // the symmetry projector needs each global read in the prepared sector,
    // otherwise (1 + g)/2 annihilates the signal
    if (cfg.protocol == QemProtocol::SV || cfg.protocol == QemProtocol::Snt) {
        StabilizerState prep = prepare_initial_state(
            p.enc, checkerboard_pattern(cfg.lattice.width, cfg.lattice.height));
        for (const auto& g : p.enc.global_stabilizers) {
            PauliOperator gg = g;
            if (prep.expectation(g) < 0) gg.set_sign(-1);
            p.gidx.push_back(p.obs.size());
            p.obs.push_back(gg);
        }
    }
    return p;
}

std::string resolve_backend(const ExperimentConfig& cfg, const CliOptions& opt) {
    std::string b = opt.backend.value_or(cfg.backend);
    if (b != "auto" && b != "clifford" && b != "statevector")
        throw std::invalid_argument("config: field 'backend': must be auto, clifford or "
                                    "statevector");
    return b;
}

RunConfig engine_config(const ExperimentConfig& cfg, const std::string& backend,
                        std::uint64_t shots_per_instance) {
    RunConfig rc;
    rc.seed = cfg.seed;
    rc.n_shots = shots_per_instance;
    if (backend == "clifford") rc.backend = BackendKind::PauliFrame;
    else if (backend == "statevector") rc.backend = BackendKind::Statevector;
    return rc;
}

struct SimulationResult {
    std::vector<ShotRecord> records;
    std::vector<ObservableStat> rows;  // occupation scale applied
    BiasEstimate bias;
    CostBreakdown cost;
    double rmse_value = 0;
    double c_pec = 1;
};

SimulationResult simulate_core(const ExperimentConfig& cfg, const Pipeline& p,
                               const std::string& backend) {
    if (backend == "statevector" && p.circ.n_qubits() > 24)
        throw InfeasibleError("statevector backend limited to 24 qubits, circuit needs " +
                              std::to_string(p.circ.n_qubits()));

    double c_pec = 1;
    std::vector<CircuitInstance> instances;
    if (cfg.protocol == QemProtocol::PecFull || cfg.protocol == QemProtocol::Snt) {
        NoisePartition part = partition(p.circ, p.noise);
        PlanMode mode = cfg.protocol == QemProtocol::PecFull ? PlanMode::All
                                                             : PlanMode::UndetectableOnly;
        QuasiProbabilityPlan plan = build_quasiprobability(p.noise, part, mode);
        c_pec = plan.c_pec;
        ShotBudget b{cfg.n_shots, cfg.n_circuits, SamplingStrategy::Plain};
        for (const auto& si : sample_instances(plan, b, cfg.seed)) instances.push_back(si.instance);
    } else {
        for (std::size_t i = 0; i < cfg.n_circuits; ++i)
            instances.push_back({i, 1, {}});
    }

    std::uint64_t per = std::max<std::uint64_t>(1, cfg.n_shots / instances.size());
    RunConfig rc = engine_config(cfg, backend, per);
    std::vector<ShotRecord> recs =
        run_collect(p.enc, p.circ, p.noise, instances, p.obs, rc);

    PsResult ps = postselect(recs);
    bool uses_checks = cfg.protocol == QemProtocol::PS || cfg.protocol == QemProtocol::SV ||
                       cfg.protocol == QemProtocol::Snt;
    if (uses_checks && ps.all_rejected)
        throw InfeasibleError("every shot failed a parity check");

    EstimateOptions eo;
    eo.protocol = cfg.protocol;
    eo.c_pec = c_pec;
    eo.global_outcomes = p.gidx;
    std::size_t n_occ = p.occupations.size();
    std::vector<EstimateResult> est = estimate(recs, n_occ, eo);

    // noiseless reference with the same seed and budget: a zero-noise config
    // then reproduces itself shot for shot
    NoiseModel clean =
        local_noise_model(p.circ, 1.0, 0.0, cfg.two_qubit_fraction);
    std::vector<CircuitInstance> plain;
    for (std::size_t i = 0; i < instances.size(); ++i) plain.push_back({i, 1, {}});
    std::vector<ShotRecord> refs = run_collect(p.enc, p.circ, clean, plain, p.obs, rc);
    std::vector<EstimateResult> ref = estimate(refs, n_occ, EstimateOptions{});

    SimulationResult out;
    out.c_pec = c_pec;
    std::vector<double> means, vars, truths;
    for (std::size_t k = 0; k < n_occ; ++k) {
        if (!est[k].valid) throw InfeasibleError("estimator produced no value for " +
                                                 p.occupations[k].name);
        const Observable& o = p.occupations[k];
        double s2 = o.scale * o.scale;
        out.rows.push_back({o.name, o.offset + o.scale * est[k].mean,
                            s2 * est[k].variance, o.offset + o.scale * ref[k].mean});
        means.push_back(out.rows.back().mean);
        vars.push_back(out.rows.back().variance);
        truths.push_back(out.rows.back().reference);
    }
    out.bias = squared_bias(means, vars, truths);

    double mean_m = 1.0;
    if (!p.gidx.empty() && !ps.accepted.empty()) {
        double acc = 0;
        for (const auto& r : ps.accepted) {
            double m = 1;
            for (std::size_t g : p.gidx) m *= 0.5 * (1.0 + r.outcomes[g]);
            acc += m;
        }
        mean_m = std::max(acc / double(ps.accepted.size()), 1e-12);
    }
    out.cost = cost_breakdown(ps.pi, mean_m, c_pec, p.met.lambda);

    double mean_var = 0;
    for (double v : vars) mean_var += v / double(vars.size());
    out.rmse_value = rmse(std::max(out.bias.theta, 0.0), mean_var);
    out.records = std::move(recs);
    return out;
}

nlohmann::json result_json(const ExperimentConfig& cfg, const SimulationResult& r) {
    nlohmann::json j = nlohmann::json::parse(
        stats_json(protocol_name(cfg.protocol), r.rows, r.bias, r.cost, r.rmse_value));
    j["artifact_version"] = kArtifactVersion;
    j["config_hash"] = config_hash(cfg);
    return j;
}

int cmd_build(const ExperimentConfig& cfg, const CliOptions& opt, const fs::path& out,
              std::ostream& log) {
    Pipeline p = make_pipeline(cfg, resolve_backend(cfg, opt));
    fs::path f = out / "circuit.ir";
    write_file(f, stamp(cfg) + to_ir(p.circ));
    log << "wrote " << f.string() << "\n";
    return 0;
}

int cmd_classify(const ExperimentConfig& cfg, const CliOptions& opt, const fs::path& out,
                 std::ostream& log) {
    Pipeline p = make_pipeline(cfg, resolve_backend(cfg, opt));
    NoisePartition part = partition(p.circ, p.noise);
    fs::path f = out / "partition.csv";
    write_file(f, stamp(cfg) + partition_csv(p.noise, part));

    nlohmann::json j;
    j["artifact_version"] = kArtifactVersion;
    j["config_hash"] = config_hash(cfg);
    j["defined"] = part.defined;
    j["r_ps"] = part.r_ps;
    j["r_pp"] = part.r_pp;
    j["r"] = part.r;
    j["lambda"] = p.met.lambda;
    j["csp"] = p.met.csp;
    j["msp"] = p.met.msp;
    fs::path g = out / "partition.json";
    write_file(g, j.dump(2) + "\n");
    log << "wrote " << f.string() << " and " << g.string() << "\n";
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const CliOptions& opt, const fs::path& out,
                 std::ostream& log) {
    std::string backend = resolve_backend(cfg, opt);
    Pipeline p = make_pipeline(cfg, backend);
    SimulationResult r = simulate_core(cfg, p, backend);

    write_file(out / "stats.json", result_json(cfg, r).dump(2) + "\n");
    write_file(out / "estimates.csv", stamp(cfg) + stats_csv(r.rows, r.bias));
    if (opt.dump_shots) write_file(out / "shots.csv", stamp(cfg) + shots_csv(r.records));
    log << "wrote " << (out / "stats.json").string() << "\n";
    return 0;
}

int cmd_estimate(const ExperimentConfig& cfg, const CliOptions& opt, const fs::path& out,
                 std::ostream& log) {
    std::string backend = resolve_backend(cfg, opt);
    Pipeline p = make_pipeline(cfg, backend);
    SimulationResult r = simulate_core(cfg, p, backend);

    nlohmann::json j;
    j["artifact_version"] = kArtifactVersion;
    j["config_hash"] = config_hash(cfg);
    j["protocol"] = protocol_name(cfg.protocol);
    j["bias"] = {{"theta", r.bias.theta}, {"var_theta", r.bias.var_theta}};
    j["cost"] = {{"c_ps", r.cost.c_ps},
                 {"c_pp", r.cost.c_pp},
                 {"c_pec", r.cost.c_pec},
                 {"c_total", r.cost.c_total},
                 {"lambda", r.cost.lambda}};
    if (r.cost.beta_defined) j["cost"]["beta"] = r.cost.beta;
    j["rmse"] = r.rmse_value;
    fs::path f = out / "estimate.json";
    write_file(f, j.dump(2) + "\n");
    log << "wrote " << f.string() << "\n";
    return 0;
}

int cmd_phase_diagram(const ExperimentConfig& cfg, const CliOptions&, const fs::path& out,
                      std::ostream& log) {
    std::vector<Lattice> lats =
        cfg.grid_lattices.empty() ? std::vector<Lattice>{cfg.lattice} : cfg.grid_lattices;
    std::vector<double> fids = cfg.grid_fidelities.empty() ? std::vector<double>{cfg.fidelity}
                                                           : cfg.grid_fidelities;
    HardwareProfile hw;
    hw.f_avg_tqg = cfg.fidelity;
    hw.eps_meas = cfg.eps_meas;
    hw.n_shots = cfg.n_shots;
    hw.n_circuits = cfg.n_circuits;

    auto grid = phase_diagram(lats, fids, cfg.fhm.n_trotter, hw);
    write_file(out / "phase.csv", stamp(cfg) + phase_csv(grid));

    nlohmann::json j = nlohmann::json::parse(
        phase_manifest_json(lats, fids, cfg.fhm.n_trotter, hw, default_resource_model()));
    j["artifact_version"] = kArtifactVersion;
    j["config_hash"] = config_hash(cfg);
    write_file(out / "phase_manifest.json", j.dump(2) + "\n");
    log << "wrote " << (out / "phase.csv").string() << "\n";
    return 0;
}

}  // namespace

int run_command(const std::string& command, ExperimentConfig cfg, const CliOptions& opt,
                std::ostream& log) {
    try {
        if (opt.seed) cfg.seed = *opt.seed;
        if (opt.out_dir) cfg.out_dir = *opt.out_dir;
        if (opt.threads == 0) throw std::invalid_argument("config: field 'threads': must be >= 1");
        resolve_backend(cfg, opt);
        fs::path out(cfg.out_dir);
        fs::create_directories(out);

        if (command == "build") return cmd_build(cfg, opt, out, log);
        if (command == "classify") return cmd_classify(cfg, opt, out, log);
        if (command == "simulate") return cmd_simulate(cfg, opt, out, log);
        if (command == "estimate") return cmd_estimate(cfg, opt, out, log);
        if (command == "phase-diagram") return cmd_phase_diagram(cfg, opt, out, log);
        throw std::invalid_argument("unknown command " + command);
    } catch (const InfeasibleError& e) {
        log << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace snt
