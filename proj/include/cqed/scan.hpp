// scan.hpp - one-parameter search for the frequency-matching point
//
// A coarse uniform grid locates the extremum, golden-section search refines
// it to the requested resolution. Grid points are evaluated concurrently
// (at most SIM_THREADS threads); refinement is sequential.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cqed/model.hpp"

namespace cqed {

enum class Objective {
    PeakTransfer,  // maximise max_t |<target|e^{-iHt}|initial>|^2 over a window
    MinGap,        // minimise the splitting of the dressed pair built on {initial, target}
};

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view text);

/// A Hamiltonian family H(x) with x in GHz, plus the two bare states whose
/// resonance is sought.
struct ScanProblem {
    std::string parameter = "omega_c";
    std::function<Operator(double)> hamiltonian;
    Index initial = 0;
    Index target = 0;
    std::optional<double> window_ns;  // PeakTransfer observation window
};

struct ScanOptions {
    double lo = 0.0;   // GHz
    double hi = 0.0;   // GHz
    Objective objective = Objective::PeakTransfer;
    Index grid_points = 41;
    double resolution = 1e-5;   // GHz, golden-section stopping width
    Index window_samples = 20000;
    unsigned threads = 0;       // 0: hardware concurrency capped by SIM_THREADS
};

struct ScanSample {
    double x = 0.0;
    double value = 0.0;  // peak probability, or gap in GHz
};

struct ScanResult {
    std::string parameter;
    Objective objective = Objective::PeakTransfer;
    std::vector<ScanSample> samples;  // sorted by x
    ScanSample best;
    Index coarse_points = 0;
    Index refine_steps = 0;
    double window_ns = 0.0;            // PeakTransfer only
    double time_of_peak_ns = 0.0;      // PeakTransfer only, at best.x
};

/// Peak of |<target|e^{-iHt}|initial>|^2 for t in [0, window]; also returns its time.
std::pair<double, double> peak_transfer(const Operator& h, Index initial, Index target, double window_ns,
                                        Index samples = 20000);

/// |E_1 - E_2| / 2pi (GHz) of the two eigenstates with the largest weight on
/// span{initial, target}. Throws ValidationError when either weight is below 0.5.
double dressed_gap(const Operator& h, Index initial, Index target);

/// Runs the two-stage search. Throws ValidationError when the coarse extremum
/// sits on the range boundary.
ScanResult run_scan(const ScanProblem& problem, const ScanOptions& options);

/// Thread count for parallel grid evaluation: SIM_THREADS if set, else hardware concurrency.
unsigned scan_threads(unsigned requested = 0);

// ------------------------------ problem builders ----------------------------

/// Cavity frequency scan of the full static model, or drive frequency scan of
/// the rotating-frame Hamiltonian when spec carries drives.
ScanProblem full_scan_problem(const SystemSpec& spec, std::string_view initial, std::string_view target);

/// Cavity frequency scan of the effective model (bare frequencies, matching built in).
ScanProblem effective_scan_problem(const SystemSpec& spec, std::string_view initial, std::string_view target);

/// Second-order estimate of the matching frequency for problem, starting from x0.
double matching_estimate(const ScanProblem& problem, double x0);

/// Sets scan_parameter(spec) to x.
SystemSpec apply_scan_value(const SystemSpec& spec, double x);

/// Current value of the scanned frequency: the drive frequency for driven specs, else the cavity frequency.
double scan_parameter(const SystemSpec& spec);

} // namespace cqed
