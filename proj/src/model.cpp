#include "cqed/model.hpp"

#include <cctype>
#include <cmath>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

bool finite(double x) { return std::isfinite(x); }

Index level_index(Level l) { return static_cast<Index>(l); }

bool has_level(const AtomSpec& atom, Level l) { return level_index(l) < atom.level_count(); }

bool allowed(AtomKind kind, LevelPair p) {
    const auto& list = allowed_transitions(kind);
    return std::find(list.begin(), list.end(), p) != list.end();
}

std::string atom_name(std::size_t q) { return "atom " + std::to_string(q + 1); }

} // namespace

double AtomSpec::frequency(Level l) const {
    auto it = level_frequencies.find(l);
    return it == level_frequencies.end() ? 0.0 : it->second;
}

double AtomSpec::coupling(LevelPair p) const {
    auto it = couplings.find(p);
    return it == couplings.end() ? 0.0 : it->second;
}

DimSignature SystemSpec::signature() const {
    std::vector<Index> dims{cavity.n_max + 1};
    for (const auto& atom : atoms) dims.push_back(atom.level_count());
    return DimSignature(std::move(dims));
}

void SystemSpec::validate() const {
    if (!finite(cavity.frequency) || cavity.frequency <= 0.0) {
        throw ConfigError("cavity frequency must be a positive number");
    }
    if (cavity.n_max < 1) throw ConfigError("cavity n_max must be >= 1");
    if (!finite(cavity.decay) || cavity.decay < 0.0) throw ConfigError("cavity decay must be >= 0");
    if (atoms.empty()) throw ConfigError("at least one atom is required");

    for (std::size_t q = 0; q < atoms.size(); ++q) {
        const auto& atom = atoms[q];
        for (const auto& [level, w] : atom.level_frequencies) {
            if (!has_level(atom, level)) {
                throw ConfigError(atom_name(q) + ": level " + std::string(to_string(level)) +
                                  " does not exist for kind " + std::string(to_string(atom.kind)));
            }
            if (!finite(w)) throw ConfigError(atom_name(q) + ": non-finite level frequency");
        }
        for (const auto& [pair, g] : atom.couplings) {
            if (!allowed(atom.kind, pair)) {
                throw ConfigError(atom_name(q) + ": coupling " + to_string(pair) +
                                  " is not allowed for kind " + std::string(to_string(atom.kind)));
            }
            if (!finite(g) || g < 0.0) throw ConfigError(atom_name(q) + ": couplings must be finite and >= 0");
        }
        for (const auto& d : atom.drives) {
            if (!allowed(atom.kind, d.transition)) {
                throw ConfigError(atom_name(q) + ": drive on " + to_string(d.transition) +
                                  " is not allowed for kind " + std::string(to_string(atom.kind)));
            }
            if (!finite(d.amplitude) || d.amplitude < 0.0 || !finite(d.phase)) {
                throw ConfigError(atom_name(q) + ": drive amplitude must be >= 0 and phase finite");
            }
            if (!finite(d.frequency) || d.frequency <= 0.0) {
                throw ConfigError(atom_name(q) + ": drive frequency must be positive");
            }
        }
    }

    for (const auto& [key, rate] : relaxation) {
        if (key.atom >= atoms.size()) {
            throw ConfigError("relaxation refers to " + atom_name(key.atom) + " which does not exist");
        }
        const auto& atom = atoms[key.atom];
        if (key.jump.from == key.jump.to || !has_level(atom, key.jump.from) ||
            !has_level(atom, key.jump.to)) {
            throw ConfigError(atom_name(key.atom) + ": invalid relaxation channel");
        }
        if (!finite(rate) || rate < 0.0) throw ConfigError("relaxation rates must be >= 0");
    }
}

// ------------------------------ labels --------------------------------------

std::string_view to_string(AtomKind kind) {
    switch (kind) {
    case AtomKind::TwoLevel: return "two_level";
    case AtomKind::Lambda: return "lambda";
    case AtomKind::Vee: return "vee";
    case AtomKind::Xi: return "xi";
    case AtomKind::Delta: return "delta";
    }
    return "?";
}

std::string_view to_string(Level level) {
    switch (level) {
    case Level::g: return "g";
    case Level::e: return "e";
    case Level::i: return "i";
    }
    return "?";
}

AtomKind parse_atom_kind(std::string_view text) {
    if (text == "two_level") return AtomKind::TwoLevel;
    if (text == "lambda") return AtomKind::Lambda;
    if (text == "vee") return AtomKind::Vee;
    if (text == "xi") return AtomKind::Xi;
    if (text == "delta") return AtomKind::Delta;
    throw ConfigError("unknown atom kind '" + std::string(text) + "'");
}

Level parse_level(char c) {
    switch (c) {
    case 'g': return Level::g;
    case 'e': return Level::e;
    case 'i': return Level::i;
    default: throw ConfigError(std::string("unknown level '") + c + "'");
    }
}

LevelPair parse_level_pair(std::string_view text) {
    if (text.size() != 2) throw ConfigError("transition label must have two letters: '" + std::string(text) + "'");
    return {parse_level(text[0]), parse_level(text[1])};
}

std::string to_string(LevelPair p) {
    return std::string(to_string(p.from)) + std::string(to_string(p.to));
}

const std::vector<LevelPair>& allowed_transitions(AtomKind kind) {
    using L = Level;
    static const std::vector<LevelPair> two_level{{L::g, L::e}};
    static const std::vector<LevelPair> lambda{{L::g, L::i}, {L::e, L::i}};
    static const std::vector<LevelPair> vee{{L::i, L::e}, {L::i, L::g}};
    static const std::vector<LevelPair> xi{{L::g, L::i}, {L::i, L::e}};
    static const std::vector<LevelPair> delta{{L::g, L::e}, {L::g, L::i}, {L::e, L::i}};
    switch (kind) {
    case AtomKind::TwoLevel: return two_level;
    case AtomKind::Lambda: return lambda;
    case AtomKind::Vee: return vee;
    case AtomKind::Xi: return xi;
    case AtomKind::Delta: return delta;
    }
    return two_level;
}

Level reference_level(AtomKind kind) { return kind == AtomKind::Vee ? Level::i : Level::g; }

double transition_detuning(const SystemSpec& spec, std::size_t atom, LevelPair p) {
    const auto& a = spec.atoms.at(atom);
    return (a.frequency(p.to) - a.frequency(p.from)) - spec.cavity.frequency;
}

// ------------------------------ operators -----------------------------------

Operator build_bare_hamiltonian(const SystemSpec& spec) {
    const auto sig = spec.signature();
    const auto a = destroy(spec.cavity.n_max);
    Operator h = embed(two_pi * spec.cavity.frequency * (dagger(a) * a), 0, sig);
    for (std::size_t q = 0; q < spec.atoms.size(); ++q) {
        const auto& atom = spec.atoms[q];
        for (Index l = 0; l < atom.level_count(); ++l) {
            const double w = atom.frequency(static_cast<Level>(l));
            if (w != 0.0) h += embed(two_pi * w * transition(atom.level_count(), l, l), q + 1, sig);
        }
    }
    return h;
}

Operator build_interaction(const SystemSpec& spec) {
    const auto sig = spec.signature();
    const Operator a = embed(destroy(spec.cavity.n_max), 0, sig);
    Operator h = Operator::zero(sig);
    for (std::size_t q = 0; q < spec.atoms.size(); ++q) {
        const auto& atom = spec.atoms[q];
        for (const auto& [p, g] : atom.couplings) {
            if (g == 0.0) continue;
            const Operator up = embed(transition(atom.level_count(), level_index(p.to), level_index(p.from)),
                                      q + 1, sig);
            const Operator term = two_pi * g * (a * up);
            h += term + dagger(term);
        }
    }
    return h;
}

Operator build_static_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    return build_bare_hamiltonian(spec) + build_interaction(spec);
}

std::vector<DriveTerm> build_drive_terms(const SystemSpec& spec) {
    const auto sig = spec.signature();
    std::vector<DriveTerm> out;
    for (std::size_t q = 0; q < spec.atoms.size(); ++q) {
        const auto& atom = spec.atoms[q];
        for (const auto& d : atom.drives) {
            Operator op = embed(transition(atom.level_count(), level_index(d.transition.to),
                                           level_index(d.transition.from)),
                                q + 1, sig);
            out.push_back({two_pi * d.amplitude * op, two_pi * d.frequency, d.phase});
        }
    }
    return out;
}

std::vector<CollapseChannel> build_collapse_channels(const SystemSpec& spec) {
    const auto sig = spec.signature();
    std::vector<CollapseChannel> out;
    if (spec.cavity.decay > 0.0) {
        out.push_back({embed(destroy(spec.cavity.n_max), 0, sig), two_pi * spec.cavity.decay, "kappa"});
    }
    for (const auto& [key, rate] : spec.relaxation) {
        if (rate <= 0.0) continue;
        const auto& atom = spec.atoms.at(key.atom);
        Operator op = embed(transition(atom.level_count(), level_index(key.jump.to), level_index(key.jump.from)),
                            key.atom + 1, sig);
        const std::string label = "q" + std::to_string(key.atom + 1) + ":" +
                                  std::string(to_string(key.jump.to)) + std::string(to_string(key.jump.from));
        out.push_back({std::move(op), two_pi * rate, label});
    }
    return out;
}

Index bare_index(const DimSignature& sig, Index photons, const std::vector<Level>& levels) {
    if (levels.size() + 1 != sig.slots()) {
        throw std::invalid_argument("bare state needs one level per atom");
    }
    std::vector<Index> idx{photons};
    for (Level l : levels) idx.push_back(level_index(l));
    return sig.flat_index(idx);
}

State bare_state(const DimSignature& sig, Index photons, const std::vector<Level>& levels) {
    return State::basis(sig, bare_index(sig, photons, levels));
}

State bare_state(const SystemSpec& spec, Index photons, const std::vector<Level>& levels) {
    return bare_state(spec.signature(), photons, levels);
}

std::pair<Index, std::vector<Level>> parse_bare_label(std::string_view label, std::size_t atoms) {
    std::size_t pos = 0;
    while (pos < label.size() && std::isdigit(static_cast<unsigned char>(label[pos]))) ++pos;
    if (pos == 0) throw ConfigError("state label '" + std::string(label) + "' must start with a photon number");
    const Index photons = std::stol(std::string(label.substr(0, pos)));
    if (label.size() - pos != atoms) {
        throw ConfigError("state label '" + std::string(label) + "' needs one level per atom");
    }
    std::vector<Level> levels;
    for (; pos < label.size(); ++pos) levels.push_back(parse_level(label[pos]));
    return {photons, levels};
}

State superposition(const DimSignature& sig,
                    const std::vector<std::pair<Index, std::vector<Level>>>& components) {
    State::Vector v = State::Vector::Zero(sig.total());
    for (const auto& [n, levels] : components) v(bare_index(sig, n, levels)) += 1.0;
    return State::normalized_ket(sig, v);
}

Operator excitation_number(const SystemSpec& spec) {
    if (spec.atoms.size() != 2 || spec.atoms[0].level_count() != 3) {
        throw ConfigError("excitation number needs a three-level atom followed by a second atom");
    }
    const auto sig = spec.signature();
    const auto a = destroy(spec.cavity.n_max);
    return embed(dagger(a) * a, 0, sig) + embed(transition(3, 2, 2), 1, sig) +
           embed(transition(spec.atoms[1].level_count(), 1, 1), 2, sig);
}

SystemSpec with_cavity_frequency(SystemSpec spec, double frequency_ghz) {
    spec.cavity.frequency = frequency_ghz;
    return spec;
}

SystemSpec with_drive_frequency(SystemSpec spec, double frequency_ghz) {
    for (auto& atom : spec.atoms) {
        for (auto& d : atom.drives) d.frequency = frequency_ghz;
    }
    return spec;
}

SystemSpec with_scaled_couplings(SystemSpec spec, double s) {
    for (auto& atom : spec.atoms) {
        for (auto& [p, g] : atom.couplings) g *= s;
        for (auto& d : atom.drives) d.amplitude *= s;
    }
    return spec;
}

// ------------------------------ rotating frame ------------------------------

std::optional<Eigen::VectorXd> drive_frame(const SystemSpec& spec) {
    spec.validate();
    // Unknowns: photon frequency, then three level frequencies per atom.
    const Index unknowns = 1 + 3 * static_cast<Index>(spec.atoms.size());
    auto var = [](std::size_t q, Level l) { return 1 + 3 * static_cast<Index>(q) + level_index(l); };

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    for (std::size_t q = 0; q < spec.atoms.size(); ++q) {
        const auto& atom = spec.atoms[q];
        for (const auto& [p, g] : atom.couplings) {
            if (g == 0.0) continue;
            Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(unknowns);
            r(var(q, p.to)) += 1.0;
            r(var(q, p.from)) -= 1.0;
            r(0) -= 1.0;
            rows.push_back(r);
            rhs.push_back(0.0);
        }
        for (const auto& d : atom.drives) {
            if (d.amplitude == 0.0) continue;
            Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(unknowns);
            r(var(q, d.transition.to)) += 1.0;
            r(var(q, d.transition.from)) -= 1.0;
            rows.push_back(r);
            rhs.push_back(two_pi * d.frequency);
        }
        // Gauge: the reference level of every atom rotates at zero frequency.
        Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(unknowns);
        r(var(q, reference_level(atom.kind))) = 1.0;
        rows.push_back(r);
        rhs.push_back(0.0);
    }

    Eigen::MatrixXd A(static_cast<Index>(rows.size()), unknowns);
    Eigen::VectorXd b(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        A.row(static_cast<Index>(k)) = rows[k];
        b(static_cast<Index>(k)) = rhs[k];
    }
    const Eigen::VectorXd x = A.completeOrthogonalDecomposition().solve(b);
    if ((A * x - b).norm() > 1e-9 * (1.0 + b.norm())) return std::nullopt;

    const auto sig = spec.signature();
    Eigen::VectorXd f(sig.total());
    for (Index flat = 0; flat < sig.total(); ++flat) {
        const auto levels = sig.levels_of(flat);
        double v = static_cast<double>(levels[0]) * x(0);
        for (std::size_t q = 0; q < spec.atoms.size(); ++q) v += x(var(q, static_cast<Level>(levels[q + 1])));
        f(flat) = v;
    }
    return f;
}

std::optional<Operator> rotating_frame_hamiltonian(const SystemSpec& spec) {
    const auto frame = drive_frame(spec);
    if (!frame) return std::nullopt;
    Operator h = build_static_hamiltonian(spec);
    Operator::Matrix m = h.matrix();
    m.diagonal() -= frame->cast<Operator::Scalar>();
    for (const auto& d : build_drive_terms(spec)) {
        const Operator::Matrix term = d.op.matrix() * std::polar(1.0, -d.phase);
        m += term + term.adjoint();
    }
    return Operator(h.signature(), std::move(m));
}

} // namespace cqed
