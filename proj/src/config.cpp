#include "snt/config.hpp"

#include <stdexcept>

#include <json.hpp>

namespace snt {

const char* const kArtifactVersion = "1.0.0";

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config: field '" + field + "': " + why);
}

double num(const json& j, const std::string& field) {
    if (!j.is_number()) bad(field, "expected a number");
    return j.get<double>();
}

std::uint64_t uint(const json& j, const std::string& field) {
    if (!j.is_number_unsigned()) bad(field, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::string str(const json& j, const std::string& field) {
    if (!j.is_string()) bad(field, "expected a string");
    return j.get<std::string>();
}

Lattice lattice_from(const json& j, const std::string& field) {
    Lattice l;
    if (j.is_array() && j.size() == 2) {
        l.width = uint(j[0], field);
        l.height = uint(j[1], field);
    } else if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (k == "width") l.width = uint(v, field + ".width");
            else if (k == "height") l.height = uint(v, field + ".height");
            else bad(field, "unknown key '" + k + "'");
        }
    } else bad(field, "expected [width, height] or an object");
    if (l.width < 2 || l.height < 2) bad(field, "lattice sides must be >= 2");
    return l;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    ExperimentConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "encoding") {
            try {
                c.encoding = encoding_from_name(str(v, key));
            } catch (const std::exception&) {
                bad(key, "unknown encoding '" + str(v, key) + "'");
            }
        } else if (key == "lattice") {
            c.lattice = lattice_from(v, key);
        } else if (key == "fhm") {
            if (!v.is_object()) bad(key, "expected an object");
            for (const auto& [k2, v2] : v.items()) {
                if (k2 == "t") c.fhm.t = num(v2, "fhm.t");
                else if (k2 == "U") c.fhm.U = num(v2, "fhm.U");
                else if (k2 == "T") c.fhm.T = num(v2, "fhm.T");
                else if (k2 == "n_trotter") c.fhm.n_trotter = uint(v2, "fhm.n_trotter");
                else bad(key, "unknown key '" + k2 + "'");
            }
        } else if (key == "fidelity") c.fidelity = num(v, key);
        else if (key == "eps_meas") c.eps_meas = num(v, key);
        else if (key == "two_qubit_fraction") c.two_qubit_fraction = num(v, key);
        else if (key == "protocol") {
            try {
                c.protocol = protocol_from_name(str(v, key));
            } catch (const std::exception&) {
                bad(key, "unknown protocol '" + str(v, key) + "'");
            }
        } else if (key == "n_shots") c.n_shots = uint(v, key);
        else if (key == "n_circuits") c.n_circuits = std::size_t(uint(v, key));
        else if (key == "rounds") c.rounds = std::size_t(uint(v, key));
        else if (key == "observables") c.observables = str(v, key);
        else if (key == "seed") c.seed = uint(v, key);
        else if (key == "backend") c.backend = str(v, key);
        else if (key == "out_dir") c.out_dir = str(v, key);
        else if (key == "grid_fidelities") {
            if (!v.is_array()) bad(key, "expected an array");
            c.grid_fidelities.clear();
            for (const auto& f : v) c.grid_fidelities.push_back(num(f, key));
        } else if (key == "grid_lattices") {
            if (!v.is_array()) bad(key, "expected an array");
            c.grid_lattices.clear();
            for (const auto& l : v) c.grid_lattices.push_back(lattice_from(l, key));
        } else {
            bad(key, "unknown field");
        }
    }

    if (!(c.fidelity > 0.2) || c.fidelity > 1.0) bad("fidelity", "must lie in (0.2, 1]");
    if (c.eps_meas < 0 || c.eps_meas >= 1) bad("eps_meas", "must lie in [0, 1)");
    if (c.two_qubit_fraction < 0 || c.two_qubit_fraction > 1)
        bad("two_qubit_fraction", "must lie in [0, 1]");
    if (c.fhm.n_trotter == 0) bad("fhm.n_trotter", "must be >= 1");
    if (!(c.fhm.T > 0)) bad("fhm.T", "must be > 0");
    if (c.n_shots == 0) bad("n_shots", "must be >= 1");
    if (c.n_circuits == 0) bad("n_circuits", "must be >= 1");
    if (c.n_shots < c.n_circuits) bad("n_circuits", "cannot exceed n_shots");
    if (c.backend != "auto" && c.backend != "clifford" && c.backend != "statevector")
        bad("backend", "must be auto, clifford or statevector");
    if (c.observables != "vertex") bad("observables", "unknown observable set");
    for (double f : c.grid_fidelities)
        if (!(f > 0.2) || f > 1.0) bad("grid_fidelities", "entries must lie in (0.2, 1]");
    return c;
}

std::string print_config(const ExperimentConfig& c) {
    json j;
    j["encoding"] = encoding_name(c.encoding);
    j["lattice"] = {{"width", c.lattice.width}, {"height", c.lattice.height}};
    j["fhm"] = {{"t", c.fhm.t}, {"U", c.fhm.U}, {"T", c.fhm.T},
                {"n_trotter", c.fhm.n_trotter}};
    j["fidelity"] = c.fidelity;
    j["eps_meas"] = c.eps_meas;
    j["two_qubit_fraction"] = c.two_qubit_fraction;
    j["protocol"] = protocol_name(c.protocol);
    j["n_shots"] = c.n_shots;
    j["n_circuits"] = c.n_circuits;
    j["rounds"] = c.rounds;
    j["observables"] = c.observables;
    j["seed"] = c.seed;
    j["backend"] = c.backend;
    j["out_dir"] = c.out_dir;
    if (!c.grid_fidelities.empty()) j["grid_fidelities"] = c.grid_fidelities;
    if (!c.grid_lattices.empty()) {
        j["grid_lattices"] = json::array();
        for (const auto& l : c.grid_lattices) j["grid_lattices"].push_back({l.width, l.height});
    }
    return j.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& c) {
    // FNV-1a over the canonical printed form
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : print_config(c)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace snt
