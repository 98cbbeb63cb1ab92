// config.hpp - JSON run configuration and the embedded presets
//
// Document layout (frequencies and rates in GHz, times in ns):
//
//   {
//     "name": "fig5",
//     "cavity": {"frequency": 7.9655, "n_max": 3, "decay": 1e-5},
//     "atoms": [{"kind": "delta", "levels": {"e": 4.0, "i": 7.0},
//                "couplings": {"ge": 0.12, "gi": 0.1, "ei": 0.18},
//                "drives": [{"transition": "gi", "amplitude": 0.1, "frequency": 7.98, "phase": 1.57}]}],
//     "dissipation": [{"atom": 1, "channel": "ge", "rate": 1e-5}],
//     "grid": {"t_start": 0, "t_end": 2000, "n_samples": 2001},
//     "solver": {"rtol": 1e-9, "atol": 1e-12, "method": "dop853", "step": 1e-3},
//     "initial": "1gg",
//     "dissipative": false,
//     "scan": {"enabled": true, "range": [7.9, 8.0], "objective": "peak_transfer", "target": "0ee"}
//   }
//
// A coupling key "jk" couples the transition from level j to level k. A
// dissipation channel "jk" is the rate gamma_jk of the jump |j><k|, so "ge"
// is relaxation from e down to g. Atoms are numbered from 1.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cqed/dynamics.hpp"
#include "cqed/model.hpp"
#include "cqed/scan.hpp"

namespace cqed {

struct ScanConfig {
    bool enabled = false;
    std::optional<std::pair<double, double>> range;  // GHz; default: estimate +- 0.05
    Objective objective = Objective::PeakTransfer;
    std::string target = "0ee";
    Index grid_points = 41;
    double resolution = 1e-5;                        // GHz
    std::optional<double> window_ns;                 // PeakTransfer window override
};

struct RunConfig {
    std::string name;
    SystemSpec spec;
    TimeGrid grid;
    SolverOptions solver;
    std::string initial = "1gg";
    bool dissipative = false;
    ScanConfig scan;
};

/// Throws ConfigError with the offending key on any malformed entry.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const SystemSpec& spec);
SystemSpec parse_system(const nlohmann::json& doc);

/// Names of the embedded presets.
const std::vector<std::string>& preset_names();
/// Preset document text; throws ConfigError for unknown names.
const std::string& preset_text(std::string_view name);
RunConfig preset(std::string_view name);

/// A path to a JSON file, or the name of an embedded preset.
RunConfig load_config_or_preset(const std::string& path_or_name);

} // namespace cqed
