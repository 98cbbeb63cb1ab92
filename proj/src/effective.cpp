#include "cqed/effective.hpp"

#include <cmath>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

using L = Level;

double nonzero(double delta, const char* name) {
    if (delta == 0.0) throw SingularDetuning(std::string("detuning ") + name + " is zero");
    return delta;
}

const DriveSpec* find_drive(const AtomSpec& atom, LevelPair p) {
    for (const auto& d : atom.drives) {
        if (d.transition == p) return &d;
    }
    return nullptr;
}

double qubit_frequency(const AtomSpec& atom) { return atom.frequency(L::e) - atom.frequency(L::g); }

std::string format_ratio(double r) {
    std::ostringstream os;
    os.precision(3);
    os << r;
    return os.str();
}

} // namespace

ModelFamily classify(const SystemSpec& spec) {
    if (spec.atoms.size() != 2) return ModelFamily::Other;
    const auto& a = spec.atoms[0];
    const auto& b = spec.atoms[1];
    const bool driven = !a.drives.empty() || !b.drives.empty();
    if (a.kind == AtomKind::Lambda && b.kind == AtomKind::TwoLevel) {
        if (!driven) return ModelFamily::LambdaTwoLevel;
        if (b.drives.empty()) return ModelFamily::DrivenLambdaTwoLevel;
        return ModelFamily::Other;
    }
    if (driven) return ModelFamily::Other;
    if (a.kind == AtomKind::Vee && b.kind == AtomKind::TwoLevel) return ModelFamily::VeeTwoLevel;
    if (a.kind == AtomKind::Delta && b.kind == AtomKind::Delta) return ModelFamily::TwoDelta;
    return ModelFamily::Other;
}

std::string_view to_string(ModelFamily family) {
    switch (family) {
    case ModelFamily::LambdaTwoLevel: return "lambda+two_level";
    case ModelFamily::VeeTwoLevel: return "vee+two_level";
    case ModelFamily::TwoDelta: return "delta+delta";
    case ModelFamily::DrivenLambdaTwoLevel: return "driven lambda+two_level";
    case ModelFamily::Other: return "other";
    }
    return "?";
}

// ------------------------------ closed forms --------------------------------

double chi_lambda(double g_p, double g_s, double g_2, const Detunings& det) {
    const double dp = nonzero(det.p, "Delta_p");
    const double ds = nonzero(det.s, "Delta_s");
    const double d2 = nonzero(det.two, "Delta_2");
    return (g_s * g_2 / 3.0) * (1.0 / ds + 1.0 / d2) * (g_p / dp) +
           (g_p * g_s / 3.0) * (1.0 / dp + 1.0 / ds) * (g_2 / d2);
}

double chi_vee(double g_p, double g_s, double g_2, const Detunings& det) {
    const double dp = nonzero(det.p, "Delta_p");
    const double ds = nonzero(det.s, "Delta_s");
    const double d2 = nonzero(det.two, "Delta_2");
    return (g_s * g_p / 3.0) * (1.0 / dp + 1.0 / ds) * (g_2 / d2) +
           (g_s * g_2 / 3.0) * (1.0 / ds + 1.0 / d2) * (g_p / dp);
}

double chi_drive(double epsilon, double g_s, double g_2, const Detunings& det, double delta_d) {
    const double dd = nonzero(delta_d, "Delta_d");
    const double ds = nonzero(det.s, "Delta_s");
    const double d2 = nonzero(det.two, "Delta_2");
    return (g_s * g_2 / 3.0) * (1.0 / ds + 1.0 / d2) * (epsilon / dd) +
           (epsilon * g_s / 3.0) * (1.0 / dd + 1.0 / ds) * (g_2 / d2);
}

double chi_circuit(const CircuitAtom& first, const CircuitAtom& second) {
    const double dp1 = nonzero(first.det.p, "Delta_p(1)");
    const double ds1 = nonzero(first.det.s, "Delta_s(1)");
    const double d21 = nonzero(first.det.two, "Delta_2(1)");
    const double dp2 = nonzero(second.det.p, "Delta_p(2)");
    const double ds2 = nonzero(second.det.s, "Delta_s(2)");
    const double d22 = nonzero(second.det.two, "Delta_2(2)");
    return (first.g_ei * second.g_ge / 3.0) * (1.0 / ds1 + 1.0 / d22) * (first.g_gi / dp1) +
           (first.g_gi * first.g_ei / 3.0) * (1.0 / dp1 + 1.0 / ds1) * (second.g_ge / d22) +
           (second.g_ei * first.g_ge / 3.0) * (1.0 / ds2 + 1.0 / d21) * (second.g_gi / dp2) +
           (second.g_gi * second.g_ei / 3.0) * (1.0 / dp2 + 1.0 / ds2) * (first.g_ge / d21);
}

double chi_circuit(const SystemSpec& spec) {
    if (classify(spec) != ModelFamily::TwoDelta) throw ConfigError("chi_circuit needs two Delta atoms");
    const auto det = circuit_detunings(spec);
    auto atom = [&](std::size_t q) {
        const auto& a = spec.atoms[q];
        return CircuitAtom{a.coupling({L::g, L::i}), a.coupling({L::e, L::i}), a.coupling({L::g, L::e}), det[q]};
    };
    return chi_circuit(atom(0), atom(1));
}

Detunings lambda_detunings(const SystemSpec& spec) {
    return {transition_detuning(spec, 0, {L::g, L::i}), transition_detuning(spec, 0, {L::e, L::i}),
            transition_detuning(spec, 1, {L::g, L::e})};
}

Detunings vee_detunings(const SystemSpec& spec) {
    return {transition_detuning(spec, 0, {L::i, L::e}), transition_detuning(spec, 0, {L::i, L::g}),
            transition_detuning(spec, 1, {L::g, L::e})};
}

std::array<Detunings, 2> circuit_detunings(const SystemSpec& spec) {
    std::array<Detunings, 2> out;
    for (std::size_t q = 0; q < 2; ++q) {
        out[q] = {transition_detuning(spec, q, {L::g, L::i}), transition_detuning(spec, q, {L::e, L::i}),
                  transition_detuning(spec, q, {L::g, L::e})};
    }
    return out;
}

DriveDetunings drive_detunings(const SystemSpec& spec) {
    const auto& atom = spec.atoms.at(0);
    const DriveSpec* pump = find_drive(atom, {L::g, L::i});
    const DriveSpec* stokes = find_drive(atom, {L::e, L::i});
    if (!pump && !stokes) throw ConfigError("drive detunings need a drive on the three-level atom");
    const double wd = pump ? pump->frequency : stokes->frequency;
    const double wd_prime = stokes ? stokes->frequency : wd;
    return {atom.frequency(L::i) - atom.frequency(L::g) - wd, atom.frequency(L::i) - atom.frequency(L::e) - wd_prime};
}

std::optional<double> analytic_chi(const SystemSpec& spec) {
    const auto family = classify(spec);
    switch (family) {
    case ModelFamily::LambdaTwoLevel: {
        const auto& a = spec.atoms[0];
        return chi_lambda(a.coupling({L::g, L::i}), a.coupling({L::e, L::i}), spec.atoms[1].coupling({L::g, L::e}),
                          lambda_detunings(spec));
    }
    case ModelFamily::VeeTwoLevel: {
        const auto& a = spec.atoms[0];
        return chi_vee(a.coupling({L::i, L::e}), a.coupling({L::i, L::g}), spec.atoms[1].coupling({L::g, L::e}),
                       vee_detunings(spec));
    }
    case ModelFamily::TwoDelta: return chi_circuit(spec);
    case ModelFamily::DrivenLambdaTwoLevel: {
        const auto& a = spec.atoms[0];
        const DriveSpec* pump = find_drive(a, {L::g, L::i});
        const double eps = pump ? pump->amplitude : 0.0;
        return chi_drive(eps, a.coupling({L::e, L::i}), spec.atoms[1].coupling({L::g, L::e}), lambda_detunings(spec),
                         drive_detunings(spec).d);
    }
    case ModelFamily::Other: return std::nullopt;
    }
    return std::nullopt;
}

// ------------------------------ renormalization -----------------------------

Eigen::VectorXd second_order_energies(const Operator& h) {
    const auto& m = h.matrix();
    const Index n = m.rows();
    Eigen::VectorXd out(n);
    for (Index a = 0; a < n; ++a) {
        const double ea = m(a, a).real();
        double shift = 0.0;
        for (Index b = 0; b < n; ++b) {
            if (b == a || m(a, b) == Operator::Scalar(0)) continue;
            const double gap = ea - m(b, b).real();
            if (gap == 0.0) {
                throw SingularDetuning("second-order shift: coupled bare states " + std::to_string(a) + " and " +
                                       std::to_string(b) + " are degenerate");
            }
            shift += std::norm(m(a, b)) / gap;
        }
        out(a) = ea + shift;
    }
    return out;
}

double matching_guess(const std::function<Operator(double)>& hamiltonian_at, Index a, Index b, double x0) {
    // The direct a-b element is dropped: it would make the two energies repel instead of cross.
    auto f = [&](double x) {
        const Operator h = hamiltonian_at(x);
        Operator::Matrix m = h.matrix();
        m(a, b) = m(b, a) = 0.0;
        const Eigen::VectorXd e = second_order_energies(Operator(h.signature(), std::move(m)));
        return (e(a) - e(b)) / two_pi;
    };
    double x_prev = x0, f_prev = f(x0);
    double x = x0 + 1e-3, fx = f(x);
    for (int it = 0; it < 60 && std::abs(x - x_prev) > 1e-13; ++it) {
        if (fx == f_prev) break;
        const double next = x - fx * (x - x_prev) / (fx - f_prev);
        x_prev = x;
        f_prev = fx;
        x = next;
        fx = f(x);
    }
    return x;
}

std::map<std::string, ShiftedFrequency> renormalized_frequencies(const SystemSpec& spec) {
    spec.validate();
    const auto family = classify(spec);
    std::map<std::string, ShiftedFrequency> out;

    if (family == ModelFamily::LambdaTwoLevel || family == ModelFamily::DrivenLambdaTwoLevel) {
        const auto& a = spec.atoms[0];
        const auto det = lambda_detunings(spec);
        const double gp = a.coupling({L::g, L::i}), gs = a.coupling({L::e, L::i});
        const double g2 = spec.atoms[1].coupling({L::g, L::e});
        const double p = gp * gp / nonzero(det.p, "Delta_p");
        const double s = gs * gs / nonzero(det.s, "Delta_s");
        const double t = g2 * g2 / nonzero(det.two, "Delta_2");
        out["cavity"] = {spec.cavity.frequency - p - t, 0.0};
        out["qubit1"] = {qubit_frequency(a), p - s};
        out["qubit2"] = {qubit_frequency(spec.atoms[1]) + t, 2.0 * t};
        out["aux"] = {a.frequency(L::i) + p + s, p + s};
        return out;
    }
    if (family == ModelFamily::VeeTwoLevel) {
        const auto& a = spec.atoms[0];
        const auto det = vee_detunings(spec);
        const double gp = a.coupling({L::i, L::e}), gs = a.coupling({L::i, L::g});
        const double g2 = spec.atoms[1].coupling({L::g, L::e});
        const double p = gp * gp / nonzero(det.p, "Delta_p");
        const double s = gs * gs / nonzero(det.s, "Delta_s");
        const double t = g2 * g2 / nonzero(det.two, "Delta_2");
        out["cavity"] = {spec.cavity.frequency + s - t, 0.0};
        out["qubit1"] = {qubit_frequency(a) + (p - s), p - s};
        out["qubit2"] = {qubit_frequency(spec.atoms[1]) + t, 2.0 * t};
        return out;
    }

    // Second-order shifts of bare product states.
    const auto sig = spec.signature();
    const Eigen::VectorXd e = second_order_energies(build_static_hamiltonian(spec)) / two_pi;
    const std::vector<Level> ground(spec.atoms.size(), L::g);
    auto energy = [&](Index n, std::vector<Level> levels) { return e(bare_index(sig, n, levels)); };
    out["cavity"] = {energy(1, ground) - energy(0, ground), 0.0};
    for (std::size_t q = 0; q < spec.atoms.size(); ++q) {
        auto excited = ground;
        excited[q] = L::e;
        const double c = energy(0, excited) - energy(0, ground);
        out["qubit" + std::to_string(q + 1)] = {c, energy(1, excited) - energy(1, ground) - c};
    }
    if (spec.atoms[0].level_count() == 3) {
        auto aux = ground;
        aux[0] = L::i;
        const double c = energy(0, aux) - energy(0, ground);
        out["aux"] = {c, energy(1, aux) - energy(1, ground) - c};
    }
    return out;
}

bool EffectiveParams::dispersive_valid() const {
    return std::all_of(ratios.begin(), ratios.end(), [](const DispersiveRatio& r) { return r.ratio < 1.0; });
}

std::optional<double> EffectiveParams::period_ns() const {
    if (!chi || *chi == 0.0) return std::nullopt;
    return 3.14159265358979323846 / (two_pi * std::abs(*chi));
}

EffectiveParams effective_params(const SystemSpec& spec, double warn_ratio) {
    spec.validate();
    EffectiveParams out;
    out.family = classify(spec);
    out.chi = analytic_chi(spec);

    switch (out.family) {
    case ModelFamily::LambdaTwoLevel: out.detunings = {lambda_detunings(spec)}; break;
    case ModelFamily::DrivenLambdaTwoLevel:
        out.detunings = {lambda_detunings(spec)};
        out.drive = drive_detunings(spec);
        break;
    case ModelFamily::VeeTwoLevel: out.detunings = {vee_detunings(spec)}; break;
    case ModelFamily::TwoDelta: {
        const auto det = circuit_detunings(spec);
        out.detunings = {det[0], det[1]};
        break;
    }
    case ModelFamily::Other: break;
    }

    for (std::size_t q = 0; q < spec.atoms.size(); ++q) {
        const auto& atom = spec.atoms[q];
        const std::string prefix = "q" + std::to_string(q + 1) + ":";
        for (const auto& [p, g] : atom.couplings) {
            if (g == 0.0) continue;
            const double delta = transition_detuning(spec, q, p);
            if (delta == 0.0) throw SingularDetuning("transition " + prefix + to_string(p) + " is resonant with the cavity");
            out.ratios.push_back({prefix + to_string(p), g, delta, g / std::abs(delta)});
        }
        for (const auto& d : atom.drives) {
            if (d.amplitude == 0.0) continue;
            const double delta = atom.frequency(d.transition.to) - atom.frequency(d.transition.from) - d.frequency;
            if (delta == 0.0) throw SingularDetuning("drive on " + prefix + to_string(d.transition) + " is resonant");
            out.ratios.push_back({prefix + "drive:" + to_string(d.transition), d.amplitude, delta,
                                  d.amplitude / std::abs(delta)});
        }
    }
    for (const auto& r : out.ratios) {
        if (r.ratio >= 1.0) {
            out.warnings.push_back("not dispersive: g/|Delta| = " + format_ratio(r.ratio) + " on " + r.transition);
        } else if (r.ratio >= warn_ratio) {
            out.warnings.push_back("weakly dispersive: g/|Delta| = " + format_ratio(r.ratio) + " on " + r.transition +
                                   " (warning threshold " + format_ratio(warn_ratio) + ")");
        }
    }

    out.renormalized = renormalized_frequencies(spec);
    return out;
}

// ------------------------------ Schrieffer-Wolff ----------------------------

Operator sw_generator(const SystemSpec& spec) {
    spec.validate();
    const auto family = classify(spec);
    if (family != ModelFamily::LambdaTwoLevel && family != ModelFamily::VeeTwoLevel &&
        family != ModelFamily::TwoDelta) {
        throw ConfigError("sw_generator: unsupported model family " + std::string(to_string(family)));
    }
    const auto sig = spec.signature();
    const Operator adag = embed(create(spec.cavity.n_max), 0, sig);
    Operator x = Operator::zero(sig);
    for (std::size_t q = 0; q < spec.atoms.size(); ++q) {
        const auto& atom = spec.atoms[q];
        for (const auto& [p, g] : atom.couplings) {
            if (g == 0.0) continue;
            const double delta = transition_detuning(spec, q, p);
            if (delta == 0.0) throw SingularDetuning("sw_generator: resonant transition " + to_string(p));
            const Operator down = embed(transition(atom.level_count(), static_cast<Index>(p.from),
                                                   static_cast<Index>(p.to)),
                                        q + 1, sig);
            const Operator term = (g / delta) * (adag * down);
            x += term - dagger(term);
        }
    }
    return x;
}

double generator_residual(const Operator& h0, const Operator& h_int, const Operator& x) {
    const double scale = frobenius_norm(h_int);
    if (scale == 0.0) return frobenius_norm(commutator(h0, x));
    return frobenius_norm(commutator(h0, x) + h_int) / scale;
}

Operator bch_effective(const Operator& h0, const Operator& h_int, const Operator& x, double tolerance) {
    const double residual = generator_residual(h0, h_int, x);
    if (residual > tolerance) {
        throw ValidationError("bch_effective: generator identity violated, residual " + std::to_string(residual));
    }
    const Operator c = commutator(h_int, x);
    return h0 + 0.5 * c + (1.0 / 3.0) * commutator(c, x);
}

Operator secular_projection(const Operator& h, const Operator& h0, double window) {
    require_same_signature(h.signature(), h0.signature(), "secular_projection");
    Operator::Matrix m = h.matrix();
    const auto& e = h0.matrix();
    for (Index a = 0; a < m.rows(); ++a) {
        for (Index b = 0; b < m.cols(); ++b) {
            if (a != b && std::abs(e(a, a).real() - e(b, b).real()) > window) m(a, b) = 0.0;
        }
    }
    return {h.signature(), std::move(m)};
}

// ------------------------------ effective models ----------------------------

DimSignature effective_signature(const SystemSpec& spec) {
    if (classify(spec) == ModelFamily::DrivenLambdaTwoLevel) return DimSignature{1, 2, 2};
    return DimSignature{spec.cavity.n_max + 1, 2, 2};
}

Operator build_effective_hamiltonian(const SystemSpec& spec, const EffectiveOptions& options) {
    spec.validate();
    const auto family = classify(spec);
    if (family == ModelFamily::Other) {
        throw ConfigError("no effective model for family " + std::string(to_string(family)));
    }
    const double chi = *analytic_chi(spec);
    const auto sig = effective_signature(spec);
    const Operator s1 = embed(transition(2, 1, 0), 1, sig);
    const Operator s2 = embed(transition(2, 1, 0), 2, sig);

    if (family == ModelFamily::DrivenLambdaTwoLevel) {
        const DriveSpec* pump = find_drive(spec.atoms[0], {L::g, L::i});
        const double phase = pump ? pump->phase : 0.0;
        const Operator term = (effective_coupling(chi) * std::polar(1.0, -phase)) * (s1 * s2);
        return term + dagger(term);
    }

    const Operator a = embed(destroy(spec.cavity.n_max), 0, sig);
    const Operator n = dagger(a) * a;
    const Operator p1 = s1 * dagger(s1);
    const Operator p2 = s2 * dagger(s2);
    const Operator id = Operator::identity(sig);

    ShiftedFrequency wc{options.cavity_frequency.value_or(spec.cavity.frequency), 0.0};
    ShiftedFrequency w1{qubit_frequency(spec.atoms[0]), 0.0};
    ShiftedFrequency w2{qubit_frequency(spec.atoms[1]), 0.0};
    if (options.renormalized) {
        const auto r = renormalized_frequencies(spec);
        if (!options.cavity_frequency) wc = r.at("cavity");
        w1 = r.at("qubit1");
        w2 = r.at("qubit2");
    }
    Operator h = two_pi * (wc.constant * n + (w1.constant * id + w1.per_photon * n) * p1 +
                           (w2.constant * id + w2.per_photon * n) * p2);
    const Operator term = effective_coupling(chi) * (a * s1 * s2);
    return h + term + dagger(term);
}

} // namespace cqed
