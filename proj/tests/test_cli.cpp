#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "snt/circuits.hpp"
#include "snt/config.hpp"

using namespace snt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    return d;
}

int quiet_run(const std::string& cmd, const ExperimentConfig& cfg, const CliOptions& opt) {
    std::ostringstream log;
    return run_command(cmd, cfg, opt, log);
}

}  // namespace

TEST_CASE("config defaults and round trip") {
    ExperimentConfig def = parse_config("{}");
    CHECK(def == ExperimentConfig{});
    CHECK(def.fhm.t == 1.0);
    CHECK(def.fhm.U == 4.0);
    CHECK(def.fhm.T == 0.5);
    CHECK(def.fhm.n_trotter == 10);
    CHECK(def.two_qubit_fraction == 0.8);

    ExperimentConfig c;
    c.encoding = EncodingKind::DK;
    c.lattice = {4, 4};
    c.fhm = {0.5, 2.0, 1.0, 6};
    c.fidelity = 0.999;
    c.eps_meas = 0.01;
    c.two_qubit_fraction = 0.7;
    c.protocol = QemProtocol::Snt;
    c.n_shots = 5000;
    c.n_circuits = 50;
    c.rounds = 2;
    c.seed = 99;
    c.backend = "clifford";
    c.out_dir = "results";
    c.grid_fidelities = {0.999, 0.9995};
    c.grid_lattices = {{4, 4}, {6, 6}};
    CHECK(parse_config(print_config(c)) == c);

    CHECK(config_hash(c) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
    ExperimentConfig c2 = c;
    c2.seed = 100;
    CHECK(config_hash(c2) != config_hash(c));
}

TEST_CASE("config validation names the offending field") {
    auto expect_field = [](const std::string& text, const std::string& field) {
        try {
            parse_config(text);
            FAIL("expected rejection of ", text);
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    };
    expect_field(R"({"fidelity": 0.1})", "fidelity");
    expect_field(R"({"encoding": "XX"})", "encoding");
    expect_field(R"({"protocol": "magic"})", "protocol");
    expect_field(R"({"n_shots": 10, "n_circuits": 20})", "n_circuits");
    expect_field(R"({"backend": "qpu"})", "backend");
    expect_field(R"({"fhm": {"n_trotter": 0}})", "n_trotter");
    expect_field(R"({"lattice": [1, 4]})", "lattice");
    expect_field(R"({"frobnicate": 1})", "frobnicate");
    CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[1,2]"), std::invalid_argument);
}

TEST_CASE("build emits loadable circuit IR with the stamp") {
    ExperimentConfig cfg;
    cfg.encoding = EncodingKind::LE;
    cfg.fhm.n_trotter = 3;
    cfg.rounds = 1;
    cfg.out_dir = fresh_dir("snt_cli_build").string();
    CHECK(quiet_run("build", cfg, {}) == 0);

    std::string ir = slurp(fs::path(cfg.out_dir) / "circuit.ir");
    CHECK(ir.rfind("# artifact ", 0) == 0);
    CHECK(ir.find("# config " + config_hash(cfg)) != std::string::npos);
    LayeredCircuit c = from_ir(ir);  // comment lines are skipped on load
    CHECK(c.layers.size() > 0);
    CHECK(c.rounds.size() == 1);
}

TEST_CASE("classify writes the partition summary") {
    ExperimentConfig cfg;
    cfg.encoding = EncodingKind::LE;
    cfg.fhm.n_trotter = 2;
    cfg.rounds = 1;
    cfg.fidelity = 0.999;
    cfg.out_dir = fresh_dir("snt_cli_classify").string();
    CHECK(quiet_run("classify", cfg, {}) == 0);

    std::string csv = slurp(fs::path(cfg.out_dir) / "partition.csv");
    CHECK(csv.rfind("# artifact ", 0) == 0);
    auto j = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "partition.json"));
    CHECK(j["config_hash"] == config_hash(cfg));
    CHECK(bool(j["defined"]));
    double r_ps = j["r_ps"], r_pp = j["r_pp"];
    CHECK(r_ps >= 0);
    CHECK(r_pp >= 0);
    CHECK(r_ps + r_pp <= 1.0 + 1e-12);
    CHECK(double(j["lambda"]) > 0);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    ExperimentConfig cfg;
    cfg.encoding = EncodingKind::LE;
    cfg.fhm.n_trotter = 2;
    cfg.rounds = 1;
    cfg.fidelity = 0.999;
    cfg.protocol = QemProtocol::SV;
    cfg.n_shots = 4000;
    cfg.n_circuits = 4;
    cfg.backend = "clifford";
    cfg.out_dir = fresh_dir("snt_cli_sim").string();

    CliOptions opt;
    opt.dump_shots = true;
    CHECK(quiet_run("simulate", cfg, opt) == 0);
    std::string stats1 = slurp(fs::path(cfg.out_dir) / "stats.json");
    std::string csv1 = slurp(fs::path(cfg.out_dir) / "estimates.csv");
    std::string shots1 = slurp(fs::path(cfg.out_dir) / "shots.csv");
    CHECK(quiet_run("simulate", cfg, opt) == 0);
    CHECK(slurp(fs::path(cfg.out_dir) / "stats.json") == stats1);
    CHECK(slurp(fs::path(cfg.out_dir) / "estimates.csv") == csv1);
    CHECK(slurp(fs::path(cfg.out_dir) / "shots.csv") == shots1);

    auto j = nlohmann::json::parse(stats1);
    CHECK(j["config_hash"] == config_hash(cfg));
    CHECK(j["artifact_version"] == kArtifactVersion);
    CHECK(j["observables"].size() == 4);
    for (const auto& row : j["observables"]) {
        double m = row["mean"];
        CHECK(m >= -0.2);
        CHECK(m <= 1.2);
    }
    CHECK(csv1.find("name,mean,variance,reference,theta") != std::string::npos);

    // a different seed moves the sampled shots
    CliOptions reseeded = opt;
    reseeded.seed = 777;
    CHECK(quiet_run("simulate", cfg, reseeded) == 0);
    CHECK(slurp(fs::path(cfg.out_dir) / "shots.csv") != shots1);
}

TEST_CASE("estimate on a noiseless config is unbiased to machine precision") {
    ExperimentConfig cfg;
    cfg.encoding = EncodingKind::LE;
    cfg.fhm.n_trotter = 2;
    cfg.fidelity = 1.0;
    cfg.rounds = 1;
    cfg.n_shots = 500;
    cfg.backend = "clifford";
    cfg.out_dir = fresh_dir("snt_cli_zero").string();
    CHECK(quiet_run("estimate", cfg, {}) == 0);

    auto j = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "estimate.json"));
    double theta = j["bias"]["theta"], var = j["bias"]["var_theta"];
    CHECK(std::abs(theta) <= std::sqrt(var) + 1e-12);
    // only the constant projector prefactor survives without noise
    CHECK(double(j["cost"]["c_ps"]) == doctest::Approx(1.0));
    CHECK(double(j["cost"]["c_pec"]) == doctest::Approx(1.0));
    CHECK(double(j["cost"]["c_total"]) == doctest::Approx(1.5));
    CHECK(double(j["rmse"]) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("exit codes separate config errors from infeasible runs") {
    ExperimentConfig cfg;
    cfg.out_dir = fresh_dir("snt_cli_codes").string();
    CHECK(quiet_run("transmogrify", cfg, {}) == 2);

    CliOptions bad;
    bad.backend = "qpu";
    CHECK(quiet_run("build", cfg, bad) == 2);

    CliOptions zero_threads;
    zero_threads.threads = 0;
    CHECK(quiet_run("build", cfg, zero_threads) == 2);

    // dense backend cannot hold a 36-site register
    ExperimentConfig big;
    big.encoding = EncodingKind::JW;
    big.lattice = {6, 6};
    big.fhm.n_trotter = 1;
    big.n_shots = 10;
    big.backend = "statevector";
    big.out_dir = fresh_dir("snt_cli_big").string();
    CHECK(quiet_run("simulate", big, {}) == 3);
}

TEST_CASE("phase diagram command writes the sweep grid") {
    ExperimentConfig cfg;
    cfg.grid_lattices = {{4, 4}, {6, 6}};
    cfg.grid_fidelities = {0.9995, 0.9999};
    cfg.n_shots = 43'200'000;
    cfg.n_circuits = 43'200'000;
    cfg.out_dir = fresh_dir("snt_cli_phase").string();
    CHECK(quiet_run("phase-diagram", cfg, {}) == 0);

    std::string csv = slurp(fs::path(cfg.out_dir) / "phase.csv");
    CHECK(csv.rfind("# artifact ", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // stamp + header + 4 cells

    auto j = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "phase_manifest.json"));
    CHECK(j["config_hash"] == config_hash(cfg));
    CHECK(j["fidelities"].size() == 2);
    CHECK(j["lattices"].size() == 2);
}
