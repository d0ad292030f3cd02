#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "snt/circuits.hpp"
#include "snt/encodings.hpp"
#include "snt/qem.hpp"
#include "snt/resource.hpp"

namespace snt {

extern const char* const kArtifactVersion;

// one experiment end to end: lattice and model, hardware knobs, protocol,
// budgets and output routing; the grid fields drive the phase-diagram sweep
struct ExperimentConfig {
    EncodingKind encoding = EncodingKind::JW;
    Lattice lattice{2, 2};
    FhmParams fhm;
    double fidelity = 0.9995;
    double eps_meas = 0;
    double two_qubit_fraction = 0.8;
    QemProtocol protocol = QemProtocol::Unmitigated;
    std::uint64_t n_shots = 10000;
    std::size_t n_circuits = 1;
    std::size_t rounds = 0;
    std::string observables = "vertex";
    std::uint64_t seed = 1;
    std::string backend = "auto";  // auto, clifford or statevector
    std::string out_dir = "out";
    std::vector<double> grid_fidelities;
    std::vector<Lattice> grid_lattices;

    bool operator==(const ExperimentConfig&) const = default;
};

// JSON text with every field optional; unknown keys and out-of-range values
// are rejected with the offending field named
ExperimentConfig parse_config(const std::string& text);
std::string print_config(const ExperimentConfig& c);

// stable 64-bit digest of the printed form, stamped into every output
std::string config_hash(const ExperimentConfig& c);

struct CliOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> backend;
    std::size_t threads = 1;
    bool dump_shots = false;
};

// command is one of build, classify, simulate, estimate, phase-diagram;
// returns the process exit code: 0 ok, 2 bad config, 3 infeasible run,
// 4 internal invariant violation
int run_command(const std::string& command, ExperimentConfig cfg, const CliOptions& opt,
                std::ostream& log);

}  // namespace snt
