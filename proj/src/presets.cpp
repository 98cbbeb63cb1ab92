// Embedded scenario presets. Each one is an ordinary config document and goes
// through the same parser as a file on disk.

#include <map>

#include "cqed/config.hpp"
#include "cqed/errors.hpp"

namespace cqed {

namespace {

// Two identical Delta-type flux qubits in a resonator.
// "all the numerical analysis are done with the frequencies of cavity and flux qubit"
constexpr const char* circuit_system = R"(
  "cavity": {"frequency": 7.9655, "n_max": 3, "decay": 1e-5},
  "atoms": [
    {"kind": "delta", "levels": {"g": 0.0, "e": 4.0, "i": 7.0},
     "couplings": {"ge": 0.12, "ei": 0.18, "gi": 0.1}},
    {"kind": "delta", "levels": {"g": 0.0, "e": 4.0, "i": 7.0},
     "couplings": {"ge": 0.12, "ei": 0.18, "gi": 0.1}}
  ],
  "dissipation": [
    {"atom": 1, "channel": "ge", "rate": 1e-5},
    {"atom": 1, "channel": "gi", "rate": 1e-5},
    {"atom": 1, "channel": "ei", "rate": 1.5e-5},
    {"atom": 2, "channel": "ge", "rate": 1e-5},
    {"atom": 2, "channel": "gi", "rate": 1e-5},
    {"atom": 2, "channel": "ei", "rate": 1.5e-5}
  ],
  "grid": {"t_start": 0, "t_end": 2000, "n_samples": 2001},
  "solver": {"rtol": 1e-9, "atol": 1e-12, "method": "dop853"},
  "initial": "1gg",
  "scan": {"enabled": true, "range": [7.9, 8.0], "objective": "peak_transfer", "target": "0ee"}
)";

std::string circuit(const std::string& name, bool dissipative) {
    return "{\n  \"name\": \"" + name + "\",\n  \"dissipative\": " + (dissipative ? "true" : "false") + "," +
           circuit_system + "}\n";
}

const std::map<std::string, std::string, std::less<>>& table() {
    static const std::map<std::string, std::string, std::less<>> presets{
        {"fig5", circuit("fig5", false)},
        {"fig6", circuit("fig6", true)},
        {"fig7", circuit("fig7", false)},
        {"ghz", R"({
  "name": "ghz",
  "cavity": {"frequency": 6.0, "n_max": 5, "decay": 0.0},
  "atoms": [
    {"kind": "lambda", "levels": {"g": 0.0, "e": 4.0, "i": 7.0},
     "couplings": {"gi": 0.1, "ei": 0.18},
     "drives": [
       {"transition": "gi", "amplitude": 0.1, "frequency": 7.9835, "phase": 1.5707963267948966},
       {"transition": "ei", "amplitude": 0.05, "frequency": 7.9835, "phase": 0.0}
     ]},
    {"kind": "two_level", "levels": {"g": 0.0, "e": 4.0}, "couplings": {"ge": 0.12}}
  ],
  "grid": {"t_start": 0, "t_end": 250, "n_samples": 251},
  "solver": {"rtol": 1e-9, "atol": 1e-12, "method": "dop853"},
  "initial": "0gg",
  "scan": {"enabled": true, "objective": "peak_transfer", "target": "0ee"}
}
)"},
        {"two_photon", R"({
  "name": "two_photon",
  "cavity": {"frequency": 5.96, "n_max": 5, "decay": 0.0},
  "atoms": [
    {"kind": "lambda", "levels": {"g": 0.0, "e": 4.0, "i": 8.5}, "couplings": {"gi": 0.3, "ei": 0.3}},
    {"kind": "xi", "levels": {"g": 0.0, "i": 4.5, "e": 8.0}, "couplings": {"gi": 0.3, "ie": 0.3}}
  ],
  "grid": {"t_start": 0, "t_end": 2500, "n_samples": 2501},
  "solver": {"rtol": 1e-9, "atol": 1e-12, "method": "dop853"},
  "initial": "2gg",
  "scan": {"enabled": true, "objective": "min_gap", "target": "0ee"}
}
)"},
        {"lambda", R"({
  "name": "lambda",
  "cavity": {"frequency": 7.97, "n_max": 3, "decay": 0.0},
  "atoms": [
    {"kind": "lambda", "levels": {"g": 0.0, "e": 4.0, "i": 7.0}, "couplings": {"gi": 0.1, "ei": 0.18}},
    {"kind": "two_level", "levels": {"g": 0.0, "e": 4.0}, "couplings": {"ge": 0.12}}
  ],
  "grid": {"t_start": 0, "t_end": 2000, "n_samples": 2001},
  "solver": {"rtol": 1e-9, "atol": 1e-12, "method": "dop853"},
  "initial": "1gg",
  "scan": {"enabled": true, "objective": "peak_transfer", "target": "0ee"}
}
)"},
        {"vee", R"({
  "name": "vee",
  "cavity": {"frequency": 7.97, "n_max": 3, "decay": 0.0},
  "atoms": [
    {"kind": "vee", "levels": {"i": 0.0, "g": 3.0, "e": 7.0}, "couplings": {"ie": 0.1, "ig": 0.18}},
    {"kind": "two_level", "levels": {"g": 0.0, "e": 4.0}, "couplings": {"ge": 0.12}}
  ],
  "grid": {"t_start": 0, "t_end": 2000, "n_samples": 2001},
  "solver": {"rtol": 1e-9, "atol": 1e-12, "method": "dop853"},
  "initial": "1gg",
  "scan": {"enabled": true, "objective": "peak_transfer", "target": "0ee"}
}
)"},
    };
    return presets;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [k, v] : table()) out.push_back(k);
        return out;
    }();
    return names;
}

const std::string& preset_text(std::string_view name) {
    const auto it = table().find(name);
    if (it == table().end()) throw ConfigError("unknown preset '" + std::string(name) + "'");
    return it->second;
}

} // namespace cqed
