#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snt/config.hpp"

namespace {

int dispatch(const std::string& command, const std::string& config_path,
             const snt::CliOptions& opt) {
    snt::ExperimentConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read config file " << config_path << "\n";
            return 2;
        }
        std::ostringstream body;
        body << in.rdbuf();
        try {
            cfg = snt::parse_config(body.str());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return snt::run_command(command, cfg, opt, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noise-tailored error mitigation workbench for Fermi-Hubbard circuits"};
    app.require_subcommand(1);

    std::string config_path;
    snt::CliOptions opt;
    std::uint64_t seed = 0;
    std::string out_dir, backend;
    std::size_t threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file (JSON)");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out", out_dir, "override the output directory");
        sub->add_option("--threads", threads, "worker threads (1 = bit-exact reference)");
        sub->add_option("--backend", backend, "auto, clifford or statevector");
        sub->add_flag("--dump-shots", opt.dump_shots, "also write the per-shot table");
        return sub;
    };

    CLI::App* build = add_common(app.add_subcommand("build", "emit the circuit IR"));
    CLI::App* classify =
        add_common(app.add_subcommand("classify", "partition the noise channels"));
    CLI::App* simulate =
        add_common(app.add_subcommand("simulate", "run shots and write statistics"));
    CLI::App* estimate =
        add_common(app.add_subcommand("estimate", "bias, cost and RMSE summary"));
    CLI::App* phase =
        add_common(app.add_subcommand("phase-diagram", "strategy grid over the sweep"));

    CLI11_PARSE(app, argc, argv);

    for (auto* sub : {build, classify, simulate, estimate, phase}) {
        if (!sub->parsed()) continue;
        if (sub->count("--seed")) opt.seed = seed;
        if (sub->count("--out")) opt.out_dir = out_dir;
        if (sub->count("--backend")) opt.backend = backend;
        opt.threads = threads;
        return dispatch(sub->get_name(), config_path, opt);
    }
    return 2;
}
