// cqedsim - command-line front end
//
// Exit codes: 0 success, 1 validation failure, 2 parse/config error,
// 3 singular detuning, 4 integration failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "cqed/config.hpp"
#include "cqed/csv.hpp"
#include "cqed/effective.hpp"
#include "cqed/errors.hpp"
#include "cqed/scenario.hpp"
#include "cqed/validate.hpp"

using namespace cqed;
using nlohmann::json;

namespace {

enum Exit { ok = 0, failed = 1, parse_error = 2, singular = 3, integration = 4 };

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("--range expects lo:hi in GHz");
    try {
        std::size_t used = 0;
        const double lo = std::stod(text.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("lo");
        const std::string rest = text.substr(colon + 1);
        const double hi = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("hi");
        if (!(lo < hi)) throw ConfigError("--range needs lo < hi");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ConfigError("--range expects lo:hi in GHz, got '" + text + "'");
    }
}

json shifted(const ShiftedFrequency& f) { return {{"constant_ghz", f.constant}, {"per_photon_ghz", f.per_photon}}; }

json chi_document(const RunConfig& config) {
    const EffectiveParams p = effective_params(config.spec);
    json doc;
    doc["name"] = config.name;
    doc["family"] = std::string(to_string(p.family));
    if (p.chi) {
        doc["chi_ghz"] = *p.chi;
        doc["chi_rad_per_ns"] = two_pi * *p.chi;
        if (const auto t = p.period_ns()) {
            doc["period_ns"] = *t;
        } else {
            doc["period_ns"] = "non-interacting";
        }
    } else {
        doc["chi_ghz"] = nullptr;
        doc["period_ns"] = "no closed form for this model";
    }
    doc["detunings_ghz"] = json::array();
    for (const auto& d : p.detunings) doc["detunings_ghz"].push_back({{"p", d.p}, {"s", d.s}, {"two", d.two}});
    if (p.drive) doc["drive_detunings_ghz"] = {{"d", p.drive->d}, {"d_prime", p.drive->d_prime}};
    doc["dispersive_ratios"] = json::array();
    for (const auto& r : p.ratios) {
        doc["dispersive_ratios"].push_back(
            {{"transition", r.transition}, {"coupling_ghz", r.coupling}, {"detuning_ghz", r.detuning}, {"ratio", r.ratio}});
    }
    doc["dispersive_valid"] = p.dispersive_valid();
    doc["renormalized_frequencies"] = json::object();
    for (const auto& [k, v] : p.renormalized) doc["renormalized_frequencies"][k] = shifted(v);
    doc["warnings"] = p.warnings;
    return doc;
}

void print_scan_summary(const ScanResult& r) {
    std::cout << "best " << r.parameter << " = " << format_number(r.best.x) << " GHz, "
              << to_string(r.objective) << " = " << format_number(r.best.value) << " (" << r.samples.size()
              << " evaluations)\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cqedsim: one photon exciting two atoms in cavity and circuit QED"};
    app.require_subcommand(1);

    std::string config_arg, out_path, model_name = "full", range_text, objective_name, scenario_name;
    bool dissipative = false;
    std::optional<Index> n_max;
    std::optional<double> tol, t_end;
    std::optional<bool> scan_flag;
    double mutate_chi = 1.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n-max", n_max, "Fock truncation n_max");
        sub->add_option("--tol", tol, "relative integrator tolerance (absolute = tol * 1e-3)");
    };

    auto* chi = app.add_subcommand("chi", "print the effective-coupling document for a config");
    chi->add_option("config", config_arg, "config file or preset name")->required();
    add_common(chi);

    auto* evolve = app.add_subcommand("evolve", "integrate a config and write the trace CSV");
    evolve->add_option("config", config_arg, "config file or preset name")->required();
    evolve->add_option("--model", model_name, "full or effective")->check(CLI::IsMember({"full", "effective"}));
    evolve->add_flag("--dissipative", dissipative, "integrate the master equation");
    evolve->add_flag("--scan,!--no-scan", scan_flag, "scan the matching frequency first (default: config)");
    evolve->add_option("--range", range_text, "scan range lo:hi in GHz");
    evolve->add_option("--objective", objective_name, "peak_transfer or min_gap");
    evolve->add_option("--t-end", t_end, "end of the time window in ns");
    evolve->add_option("--out", out_path, "CSV path (default: stdout)");
    add_common(evolve);

    auto* scan = app.add_subcommand("scan", "scan the matching frequency and write the scan CSV");
    scan->add_option("config", config_arg, "config file or preset name")->required();
    scan->add_option("--model", model_name, "full or effective")->check(CLI::IsMember({"full", "effective"}));
    scan->add_option("--range", range_text, "scan range lo:hi in GHz");
    scan->add_option("--objective", objective_name, "peak_transfer or min_gap");
    scan->add_option("--out", out_path, "scan CSV path (default: stdout after the summary)");
    add_common(scan);

    auto* scenario = app.add_subcommand("scenario", "run a preset end to end and summarize it");
    scenario->add_option("name", scenario_name, "fig5, fig6, fig7, ghz or two_photon")->required();
    scenario->add_option("--out", out_path, "directory for the CSV bundle (default: .)");
    scenario->add_option("--t-end", t_end, "end of the time window in ns");
    add_common(scenario);

    auto* validate = app.add_subcommand("validate", "run the invariant suite");
    validate->add_option("config", config_arg, "optional config whose dispersive validity is reported");
    validate->add_option("--mutate-chi", mutate_chi, "scale analytic chi before oracle comparisons (mutation fixture)");

    auto* presets = app.add_subcommand("preset", "print an embedded preset config");
    presets->add_option("name", scenario_name, "preset name; omit to list them");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : parse_error;
    }

    Overrides ov;
    ov.n_max = n_max;
    ov.tolerance = tol;
    ov.t_end = t_end;

    try {
        if (*chi) {
            RunConfig config = load_config_or_preset(config_arg);
            apply_overrides(config, ov);
            std::cout << chi_document(config).dump(2) << "\n";
            return ok;
        }
        if (*evolve || *scan) {
            RunConfig config = load_config_or_preset(config_arg);
            if (*evolve) {
                if (dissipative) ov.dissipative = true;
                ov.scan = scan_flag;
            }
            if (!objective_name.empty()) ov.objective = parse_objective(objective_name);
            apply_overrides(config, ov);
            std::optional<std::pair<double, double>> range;
            if (!range_text.empty()) range = parse_range(range_text);
            const ModelChoice model = parse_model(model_name);

            if (*scan) {
                const ScanResult r = scan_config(config, model, range);
                std::ostringstream os;
                write_scan_csv(os, r);
                print_scan_summary(r);
                if (out_path.empty()) {
                    std::cout << os.str();
                } else {
                    write_file(out_path, os.str());
                }
                return ok;
            }
            const Simulation sim = simulate(config, model, {}, range);
            if (sim.scan) {
                std::cerr << "scan: " << sim.scan->parameter << " = " << format_number(sim.scan->best.x) << " GHz\n";
            }
            if (sim.trajectory.stats.truncation_flag) {
                std::cerr << "warning: top Fock level population reached "
                          << format_number(sim.trajectory.stats.max_top_fock) << "; raise n_max\n";
            }
            std::ostringstream os;
            write_trajectory_csv(os, sim.trajectory);
            if (out_path.empty()) {
                std::cout << os.str();
            } else {
                write_file(out_path, os.str());
            }
            return ok;
        }
        if (*scenario) {
            const ScenarioReport report = run_scenario(scenario_name, ov);
            const std::filesystem::path dir = out_path.empty() ? "." : out_path;
            std::filesystem::create_directories(dir);
            for (const auto& [file, text] : report.files) write_file((dir / file).string(), text);
            write_file((dir / (report.name + "_summary.txt")).string(), report.text());
            std::cout << report.text();
            return report.all_pass() ? ok : failed;
        }
        if (*validate) {
            ValidationOptions opt;
            opt.chi_scale = mutate_chi;
            if (!config_arg.empty()) opt.config = load_config_or_preset(config_arg);
            const ValidationReport report = run_validation(opt);
            std::cout << report.table();
            return report.all_pass() ? ok : failed;
        }
        if (*presets) {
            if (scenario_name.empty()) {
                for (const auto& n : preset_names()) std::cout << n << "\n";
            } else {
                std::cout << preset_text(scenario_name);
            }
            return ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return parse_error;
    } catch (const SingularDetuning& e) {
        std::cerr << "singular detuning: " << e.what() << "\n";
        return singular;
    } catch (const IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        return integration;
    } catch (const ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failed;
    }
    return ok;
}
