// scenario.hpp - config-driven runs: scan, evolve, summarize
//
// A run takes a RunConfig, optionally scans the matching frequency, then
// integrates the full or the effective model and records the standard traces.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqed/config.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/scan.hpp"

namespace cqed {

enum class ModelChoice { Full, Effective };

ModelChoice parse_model(std::string_view text);
std::string_view to_string(ModelChoice model);

/// Command-line adjustments layered over a config document.
struct Overrides {
    std::optional<Index> n_max;
    std::optional<double> tolerance;   // rtol; atol follows as tolerance * 1e-3
    std::optional<bool> dissipative;
    std::optional<bool> scan;
    std::optional<std::pair<double, double>> range;
    std::optional<Objective> objective;
    std::optional<double> t_end;       // keeps the sample spacing
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

// ------------------------------ models --------------------------------------

struct ModelSetup {
    DimSignature sig;
    Operator h;
    std::vector<DriveTerm> drives;
    std::vector<CollapseChannel> channels;
};

/// Full model of spec, or its effective model. Dissipation is modelled for the
/// full model only. effective_cavity replaces the cavity frequency of the
/// effective model alone; chi keeps its value at the spec's cavity frequency.
ModelSetup build_model(const SystemSpec& spec, ModelChoice model, bool dissipative,
                       std::optional<double> effective_cavity = std::nullopt);

/// Bare ket for a label such as "1gg" on sig; throws ConfigError when outside the truncation.
State labelled_state(const DimSignature& sig, std::string_view label);

/// Registry lookup, except that populations of states outside the truncated
/// space are recorded as identically zero.
std::vector<Observable> trace_observables(const DimSignature& sig, const std::vector<std::string>& names);

// ------------------------------ scan and evolve -----------------------------

ScanProblem scan_problem(const RunConfig& config, ModelChoice model);
/// Range: explicit override, else the config range (full model only), else estimate +- 0.05 GHz.
ScanOptions scan_options(const RunConfig& config, ModelChoice model, const ScanProblem& problem,
                         const std::optional<std::pair<double, double>>& range = std::nullopt);
ScanResult scan_config(const RunConfig& config, ModelChoice model,
                       const std::optional<std::pair<double, double>>& range = std::nullopt);

struct Simulation {
    RunConfig config;                  // full model: with the scanned value applied
    std::optional<double> effective_cavity;  // effective model: scanned cavity frequency
    ModelChoice model = ModelChoice::Full;
    std::optional<ScanResult> scan;
    Trajectory trajectory;
};

/// Scans when config.scan.enabled, then evolves with config.dissipative.
Simulation simulate(const RunConfig& config, ModelChoice model, const std::vector<std::string>& extra_traces = {},
                    const std::optional<std::pair<double, double>>& range = std::nullopt);

// ------------------------------ trace analysis ------------------------------

struct Peak {
    double t = 0.0;
    double value = 0.0;
};

/// Maximum of every excursion that rises above the upper level and ends below
/// the lower one (default levels: 40% and 60% of the trace's range). The band
/// between the levels keeps small fast ripples from splitting an excursion.
/// Excursions cut by either end of the trace are skipped. Peaks are refined
/// by a parabola through the top three samples.
std::vector<Peak> segment_maxima(const std::vector<double>& t, const std::vector<double>& y,
                                 std::optional<std::pair<double, double>> levels = std::nullopt);

/// Mean spacing of successive peaks; empty with fewer than two peaks.
std::optional<double> mean_period(const std::vector<Peak>& peaks);

/// Value of y at time t by linear interpolation.
double sample_at(const std::vector<double>& t, const std::vector<double>& y, double time);

// ------------------------------ scenarios -----------------------------------

struct SummaryLine {
    std::string key;
    std::string value;
    std::optional<bool> pass;  // set for asserted quantities
};

struct ScenarioReport {
    std::string name;
    std::vector<SummaryLine> lines;
    std::vector<std::pair<std::string, std::string>> files;  // file name, content

    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] std::string text() const;
};

struct GhzOutcome {
    double chi_d = 0.0;               // GHz
    double t_effective = 0.0;         // pi / (4 |chi_d|), ns
    double fidelity_effective = 0.0;
    Trajectory effective;
    std::optional<ScanResult> scan;
    double drive_frequency = 0.0;     // GHz, used for the full model
    double t_full = 0.0;              // ns
    double fidelity_full = 0.0;
    double relative_phase = 0.0;      // arg(<0ee|psi> / <0gg|psi>) in the rotating frame
    Trajectory full;
};

/// GHZ preparation by the two-photon coherent pump in the effective and full driven models.
GhzOutcome run_ghz(const RunConfig& config);

const std::vector<std::string>& scenario_names();
ScenarioReport run_scenario(std::string_view name, const Overrides& overrides = {});

} // namespace cqed
