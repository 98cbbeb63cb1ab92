// validate.hpp - invariant suite behind the `validate` command

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqed/config.hpp"

namespace cqed {

struct CheckResult {
    std::string name;
    double value = 0.0;
    std::string limit;   // human-readable acceptance band
    bool pass = false;
};

struct ValidationOptions {
    /// Multiplies every analytic chi before it is compared with an oracle.
    /// 1 checks the real formulas; other values act as a mutation fixture.
    double chi_scale = 1.0;
    unsigned random_sets = 20;
    unsigned seed = 20240601;
    /// Optional user config whose dispersive-validity warnings are reported.
    std::optional<RunConfig> config;
    double warn_ratio = 0.25;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;

    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] std::string table() const;
};

ValidationReport run_validation(const ValidationOptions& options = {});

/// Random dispersive parameter sets used by the generator-identity checks.
std::vector<SystemSpec> random_specs(AtomKind first_kind, AtomKind second_kind, unsigned count, unsigned seed);

/// Exact splitting of the {1gg, 0ee} doublet (GHz) at the min-gap resonance of the full model.
double exact_doublet_splitting(const SystemSpec& spec, double range_half_width = 0.05);

/// <0ee| H_BCH |1gg> in rad/ns for the static spec.
Operator::Scalar bch_resonant_element(const SystemSpec& spec);

} // namespace cqed
