#include "cqed/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    const std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
    }
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

template <typename T>
T get_or(const json& j, const char* key, const std::string& where, T fallback) {
    return j.contains(key) ? get<T>(j, key, where) : fallback;
}

CavitySpec parse_cavity(const json& j) {
    require_object(j, "cavity");
    reject_unknown(j, "cavity", {"frequency", "n_max", "decay"});
    CavitySpec c;
    c.frequency = get<double>(j, "frequency", "cavity");
    c.n_max = get<Index>(j, "n_max", "cavity");
    c.decay = get_or<double>(j, "decay", "cavity", 0.0);
    return c;
}

AtomSpec parse_atom(const json& j, const std::string& where) {
    require_object(j, where);
    reject_unknown(j, where, {"kind", "levels", "couplings", "drives"});
    AtomSpec a;
    a.kind = parse_atom_kind(get<std::string>(j, "kind", where));
    if (j.contains("levels")) {
        require_object(j["levels"], where + ".levels");
        for (const auto& [k, v] : j["levels"].items()) {
            if (k.size() != 1) throw ConfigError(where + ".levels: bad level '" + k + "'");
            a.level_frequencies[parse_level(k[0])] = get<double>(j["levels"], k.c_str(), where + ".levels");
        }
    }
    if (j.contains("couplings")) {
        require_object(j["couplings"], where + ".couplings");
        for (const auto& [k, v] : j["couplings"].items()) {
            a.couplings[parse_level_pair(k)] = get<double>(j["couplings"], k.c_str(), where + ".couplings");
        }
    }
    if (j.contains("drives")) {
        if (!j["drives"].is_array()) throw ConfigError(where + ".drives: expected an array");
        for (std::size_t n = 0; n < j["drives"].size(); ++n) {
            const json& d = j["drives"][n];
            const std::string w = where + ".drives[" + std::to_string(n) + "]";
            require_object(d, w);
            reject_unknown(d, w, {"transition", "amplitude", "frequency", "phase"});
            DriveSpec spec;
            spec.transition = parse_level_pair(get<std::string>(d, "transition", w));
            spec.amplitude = get<double>(d, "amplitude", w);
            spec.frequency = get<double>(d, "frequency", w);
            spec.phase = get_or<double>(d, "phase", w, 0.0);
            a.drives.push_back(spec);
        }
    }
    return a;
}

TimeGrid parse_grid(const json& j) {
    require_object(j, "grid");
    reject_unknown(j, "grid", {"t_start", "t_end", "n_samples"});
    TimeGrid g;
    g.t_start = get_or<double>(j, "t_start", "grid", g.t_start);
    g.t_end = get_or<double>(j, "t_end", "grid", g.t_end);
    g.n_samples = get_or<Index>(j, "n_samples", "grid", g.n_samples);
    try {
        g.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    return g;
}

SolverOptions parse_solver(const json& j) {
    require_object(j, "solver");
    reject_unknown(j, "solver", {"rtol", "atol", "method", "step"});
    SolverOptions s;
    s.rtol = get_or<double>(j, "rtol", "solver", s.rtol);
    s.atol = get_or<double>(j, "atol", "solver", s.atol);
    s.fixed_step = get_or<double>(j, "step", "solver", s.fixed_step);
    const auto method = get_or<std::string>(j, "method", "solver", "dop853");
    if (method == "dop853") {
        s.method = Method::Dop853;
    } else if (method == "rk4") {
        s.method = Method::FixedRk4;
    } else {
        throw ConfigError("solver.method: expected 'dop853' or 'rk4'");
    }
    if (!(s.rtol > 0.0) || !(s.atol > 0.0) || !(s.fixed_step > 0.0)) {
        throw ConfigError("solver: tolerances and step must be positive");
    }
    return s;
}

ScanConfig parse_scan(const json& j) {
    require_object(j, "scan");
    reject_unknown(j, "scan", {"enabled", "range", "objective", "target", "grid_points", "resolution", "window_ns"});
    ScanConfig s;
    s.enabled = get_or<bool>(j, "enabled", "scan", s.enabled);
    if (j.contains("range")) {
        const auto r = get<std::vector<double>>(j, "range", "scan");
        if (r.size() != 2 || !(r[0] < r[1])) throw ConfigError("scan.range: expected [lo, hi] with lo < hi");
        s.range = std::pair{r[0], r[1]};
    }
    if (j.contains("objective")) s.objective = parse_objective(get<std::string>(j, "objective", "scan"));
    s.target = get_or<std::string>(j, "target", "scan", s.target);
    s.grid_points = get_or<Index>(j, "grid_points", "scan", s.grid_points);
    s.resolution = get_or<double>(j, "resolution", "scan", s.resolution);
    if (j.contains("window_ns")) s.window_ns = get<double>(j, "window_ns", "scan");
    return s;
}

} // namespace

SystemSpec parse_system(const json& doc) {
    require_object(doc, "config");
    SystemSpec spec;
    if (!doc.contains("cavity")) throw ConfigError("config: missing 'cavity'");
    spec.cavity = parse_cavity(doc["cavity"]);
    if (!doc.contains("atoms") || !doc["atoms"].is_array()) throw ConfigError("config: 'atoms' must be an array");
    for (std::size_t q = 0; q < doc["atoms"].size(); ++q) {
        spec.atoms.push_back(parse_atom(doc["atoms"][q], "atoms[" + std::to_string(q) + "]"));
    }
    if (doc.contains("dissipation")) {
        if (!doc["dissipation"].is_array()) throw ConfigError("dissipation: expected an array");
        for (std::size_t n = 0; n < doc["dissipation"].size(); ++n) {
            const json& d = doc["dissipation"][n];
            const std::string w = "dissipation[" + std::to_string(n) + "]";
            require_object(d, w);
            reject_unknown(d, w, {"atom", "channel", "rate"});
            const auto atom = get<long>(d, "atom", w);
            if (atom < 1) throw ConfigError(w + ".atom: atoms are numbered from 1");
            const LevelPair label = parse_level_pair(get<std::string>(d, "channel", w));
            const RelaxationKey key{static_cast<std::size_t>(atom - 1), {label.to, label.from}};
            if (spec.relaxation.count(key)) throw ConfigError(w + ": duplicate channel");
            spec.relaxation[key] = get<double>(d, "rate", w);
        }
    }
    spec.validate();
    return spec;
}

RunConfig parse_config(const json& doc) {
    require_object(doc, "config");
    reject_unknown(doc, "config",
                   {"name", "cavity", "atoms", "dissipation", "grid", "solver", "initial", "dissipative", "scan"});
    RunConfig c;
    c.name = get_or<std::string>(doc, "name", "config", "");
    c.spec = parse_system(doc);
    if (doc.contains("grid")) c.grid = parse_grid(doc["grid"]);
    if (doc.contains("solver")) c.solver = parse_solver(doc["solver"]);
    c.initial = get_or<std::string>(doc, "initial", "config", c.initial);
    c.dissipative = get_or<bool>(doc, "dissipative", "config", c.dissipative);
    if (doc.contains("scan")) c.scan = parse_scan(doc["scan"]);
    parse_bare_label(c.initial, c.spec.atoms.size());
    parse_bare_label(c.scan.target, c.spec.atoms.size());
    return c;
}

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json to_json(const SystemSpec& spec) {
    json doc;
    doc["cavity"] = {{"frequency", spec.cavity.frequency}, {"n_max", spec.cavity.n_max}, {"decay", spec.cavity.decay}};
    doc["atoms"] = json::array();
    for (const auto& a : spec.atoms) {
        json atom;
        atom["kind"] = std::string(to_string(a.kind));
        atom["levels"] = json::object();
        for (const auto& [l, w] : a.level_frequencies) atom["levels"][std::string(to_string(l))] = w;
        atom["couplings"] = json::object();
        for (const auto& [p, g] : a.couplings) atom["couplings"][to_string(p)] = g;
        if (!a.drives.empty()) {
            atom["drives"] = json::array();
            for (const auto& d : a.drives) {
                atom["drives"].push_back({{"transition", to_string(d.transition)},
                                          {"amplitude", d.amplitude},
                                          {"frequency", d.frequency},
                                          {"phase", d.phase}});
            }
        }
        doc["atoms"].push_back(atom);
    }
    doc["dissipation"] = json::array();
    for (const auto& [key, rate] : spec.relaxation) {
        doc["dissipation"].push_back({{"atom", key.atom + 1},
                                      {"channel", to_string(LevelPair{key.jump.to, key.jump.from})},
                                      {"rate", rate}});
    }
    return doc;
}

json to_json(const RunConfig& c) {
    json doc = to_json(c.spec);
    doc["name"] = c.name;
    doc["grid"] = {{"t_start", c.grid.t_start}, {"t_end", c.grid.t_end}, {"n_samples", c.grid.n_samples}};
    doc["solver"] = {{"rtol", c.solver.rtol},
                     {"atol", c.solver.atol},
                     {"method", c.solver.method == Method::Dop853 ? "dop853" : "rk4"},
                     {"step", c.solver.fixed_step}};
    doc["initial"] = c.initial;
    doc["dissipative"] = c.dissipative;
    json scan = {{"enabled", c.scan.enabled},
                 {"objective", std::string(to_string(c.scan.objective))},
                 {"target", c.scan.target},
                 {"grid_points", c.scan.grid_points},
                 {"resolution", c.scan.resolution}};
    if (c.scan.range) scan["range"] = {c.scan.range->first, c.scan.range->second};
    if (c.scan.window_ns) scan["window_ns"] = *c.scan.window_ns;
    doc["scan"] = scan;
    return doc;
}

RunConfig preset(std::string_view name) {
    return parse_config_text(preset_text(name));
}

RunConfig load_config_or_preset(const std::string& path_or_name) {
    if (std::filesystem::exists(path_or_name)) return load_config(path_or_name);
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), path_or_name) != names.end()) return preset(path_or_name);
    throw ConfigError("'" + path_or_name + "' is neither a readable file nor a preset name");
}

} // namespace cqed
