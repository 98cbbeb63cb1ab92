#include "cqed/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cqed/dynamics.hpp"
#include "cqed/effective.hpp"
#include "cqed/errors.hpp"
#include "cqed/observables.hpp"
#include "cqed/scenario.hpp"

namespace cqed {

namespace {

using L = Level;

AtomSpec random_atom(AtomKind kind, std::mt19937& rng) {
    std::uniform_real_distribution<double> low(3.5, 4.5), high(6.5, 7.5), mid(2.5, 3.5), g(0.05, 0.2);
    AtomSpec a;
    a.kind = kind;
    switch (kind) {
    case AtomKind::TwoLevel:
        a.level_frequencies = {{L::g, 0.0}, {L::e, low(rng)}};
        a.couplings = {{{L::g, L::e}, g(rng)}};
        break;
    case AtomKind::Lambda:
        a.level_frequencies = {{L::g, 0.0}, {L::e, low(rng)}, {L::i, high(rng)}};
        a.couplings = {{{L::g, L::i}, g(rng)}, {{L::e, L::i}, g(rng)}};
        break;
    case AtomKind::Vee:
        a.level_frequencies = {{L::i, 0.0}, {L::g, mid(rng)}, {L::e, high(rng)}};
        a.couplings = {{{L::i, L::e}, g(rng)}, {{L::i, L::g}, g(rng)}};
        break;
    case AtomKind::Xi:
        a.level_frequencies = {{L::g, 0.0}, {L::i, low(rng)}, {L::e, high(rng) + 1.0}};
        a.couplings = {{{L::g, L::i}, g(rng)}, {{L::i, L::e}, g(rng)}};
        break;
    case AtomKind::Delta:
        a.level_frequencies = {{L::g, 0.0}, {L::e, low(rng)}, {L::i, high(rng)}};
        a.couplings = {{{L::g, L::e}, g(rng)}, {{L::g, L::i}, g(rng)}, {{L::e, L::i}, g(rng)}};
        break;
    }
    return a;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Suite {
    ValidationReport report;

    void add(std::string name, double value, std::string limit, bool pass) {
        report.checks.push_back({std::move(name), value, std::move(limit), pass});
    }
};

double generator_residual_of(const SystemSpec& spec) {
    return generator_residual(build_bare_hamiltonian(spec), build_interaction(spec), sw_generator(spec));
}

} // namespace

std::vector<SystemSpec> random_specs(AtomKind first_kind, AtomKind second_kind, unsigned count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> cavity(7.8, 8.2);
    std::vector<SystemSpec> out;
    for (unsigned k = 0; k < count; ++k) {
        SystemSpec s;
        s.cavity = {cavity(rng), 3, 0.0};
        s.atoms = {random_atom(first_kind, rng), random_atom(second_kind, rng)};
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

double exact_doublet_splitting(const SystemSpec& spec, double range_half_width) {
    const ScanProblem problem = full_scan_problem(spec, "1gg", "0ee");
    ScanOptions o;
    o.objective = Objective::MinGap;
    const double guess = matching_estimate(problem, spec.cavity.frequency);
    o.lo = guess - range_half_width;
    o.hi = guess + range_half_width;
    return run_scan(problem, o).best.value;
}

Operator::Scalar bch_resonant_element(const SystemSpec& spec) {
    const Operator h = bch_effective(build_bare_hamiltonian(spec), build_interaction(spec), sw_generator(spec));
    const DimSignature sig = spec.signature();
    const Index a = bare_index(sig, 1, {L::g, L::g});
    const Index b = bare_index(sig, 0, {L::e, L::e});
    return h(b, a);
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string ValidationReport::table() const {
    std::size_t width = 5;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    std::ostringstream os;
    os << std::left;
    os.width(static_cast<std::streamsize>(width));
    os << "check" << "  " << "value" << std::string(10, ' ') << "limit" << std::string(15, ' ') << "result\n";
    for (const auto& c : checks) {
        os.width(static_cast<std::streamsize>(width));
        os << c.name << "  ";
        std::ostringstream v;
        v.precision(6);
        v << c.value;
        os.width(15);
        os << v.str();
        os.width(20);
        os << c.limit << (c.pass ? "pass" : "FAIL") << "\n";
    }
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    os << (all_pass() ? "all checks passed\n" : "validation FAILED\n");
    return os.str();
}

ValidationReport run_validation(const ValidationOptions& options) {
    Suite s;
    const SystemSpec circuit = preset("fig5").spec;
    const SystemSpec lambda = preset("lambda").spec;
    const SystemSpec vee = preset("vee").spec;
    const SystemSpec driven = preset("ghz").spec;

    // Generator identities at the preset parameters and at random dispersive points.
    struct Family {
        const char* name;
        const SystemSpec* spec;
        AtomKind first, second;
    };
    const Family families[] = {{"lambda", &lambda, AtomKind::Lambda, AtomKind::TwoLevel},
                               {"vee", &vee, AtomKind::Vee, AtomKind::TwoLevel},
                               {"two-delta", &circuit, AtomKind::Delta, AtomKind::Delta}};
    for (const auto& f : families) {
        const double r = generator_residual_of(*f.spec);
        s.add(std::string("generator identity, ") + f.name + " preset", r, "<= 1e-9", r <= 1e-9);
        double worst = 0.0;
        for (const auto& spec : random_specs(f.first, f.second, options.random_sets, options.seed)) {
            worst = std::max(worst, generator_residual_of(spec));
        }
        s.add(std::string("generator identity, ") + f.name + " random x" + std::to_string(options.random_sets),
              worst, "<= 1e-9", worst <= 1e-9);
    }

    // chi ~ s^3 under a common rescaling of every coupling.
    {
        double worst = 0.0;
        for (const SystemSpec* spec : {&lambda, &vee, &circuit, &driven}) {
            const double chi = *analytic_chi(*spec);
            for (double sc : {0.5, 0.8, 1.25}) {
                worst = std::max(worst, relative(*analytic_chi(with_scaled_couplings(*spec, sc)), sc * sc * sc * chi));
            }
        }
        s.add("cubic scaling of chi", worst, "<= 1e-12", worst <= 1e-12);
    }

    // Closed forms against each other.
    {
        const auto& a = lambda.atoms[0];
        const Detunings det = lambda_detunings(lambda);
        const double gp = a.coupling({L::g, L::i}), gs = a.coupling({L::e, L::i}),
                     g2 = lambda.atoms[1].coupling({L::g, L::e});
        const double r1 = relative(chi_drive(gp, gs, g2, det, det.p), chi_lambda(gp, gs, g2, det));
        s.add("chi_drive = chi_lambda with (eps, Delta_d) -> (g_p, Delta_p)", r1, "<= 1e-12", r1 <= 1e-12);

        const auto det2 = circuit_detunings(circuit);
        const auto& q = circuit.atoms[0];
        const CircuitAtom atom{q.coupling({L::g, L::i}), q.coupling({L::e, L::i}), q.coupling({L::g, L::e}), det2[0]};
        const double single = chi_lambda(atom.g_gi, atom.g_ei, circuit.atoms[1].coupling({L::g, L::e}), det2[0]);
        const double r2 = relative(chi_circuit(atom, atom), 2.0 * single);
        s.add("chi_circuit(identical atoms) = 2 chi_lambda", r2, "<= 1e-12", r2 <= 1e-12);

        const double r3 = relative(*analytic_chi(vee), *analytic_chi(lambda));
        s.add("V preset mirrors Lambda preset", r3, "<= 1e-12", r3 <= 1e-12);
    }

    // Exact diagonalisation and the third-order BCH element against the closed form.
    {
        const double chi = options.chi_scale * chi_circuit(circuit);
        const double split = exact_doublet_splitting(circuit);
        const double r = relative(2.0 * std::abs(chi), split);
        s.add("exact doublet splitting vs 2 chi (two-delta)", r, "<= 0.10", r <= 0.10);

        const auto element = bch_resonant_element(circuit);
        const double rb = std::abs(element - Operator::Scalar(effective_coupling(chi))) / std::abs(effective_coupling(chi));
        s.add("BCH <0ee|H|1gg> vs -chi (two-delta)", rb, "<= 0.10", rb <= 0.10);

        const double chi_l = options.chi_scale * chi_lambda(lambda.atoms[0].coupling({L::g, L::i}),
                                                            lambda.atoms[0].coupling({L::e, L::i}),
                                                            lambda.atoms[1].coupling({L::g, L::e}),
                                                            lambda_detunings(lambda));
        const double rl = relative(2.0 * std::abs(chi_l), exact_doublet_splitting(lambda));
        s.add("exact doublet splitting vs 2 chi (lambda)", rl, "<= 0.10", rl <= 0.10);

        const Operator h = bch_effective(build_bare_hamiltonian(circuit), build_interaction(circuit),
                                         sw_generator(circuit));
        const Operator p = secular_projection(h, build_bare_hamiltonian(circuit));
        const double herm = (p.matrix() - p.matrix().adjoint()).cwiseAbs().maxCoeff() / p.max_abs();
        s.add("BCH resonant block Hermitian", herm, "<= 1e-12", herm <= 1e-12);
    }

    // Excitation number: conserved by Lambda + two-level, broken by Delta atoms.
    {
        const Operator n = excitation_number(lambda);
        const Operator h = build_static_hamiltonian(lambda);
        const double c = frobenius_norm(commutator(h, n)) / frobenius_norm(h);
        s.add("[H, N] = 0 (lambda)", c, "<= 1e-12", c <= 1e-12);

        SolverOptions opt;
        opt.keep_states = true;
        const auto tr = evolve_schrodinger(h, {}, labelled_state(h.signature(), "1gg"), {0.0, 300.0, 301}, {}, opt);
        double mean = 0.0, sq = 0.0;
        for (const auto& st : tr.states) {
            const double v = expectation(n, st).real();
            mean += v;
            sq += v * v;
        }
        mean /= static_cast<double>(tr.states.size());
        const double var = std::max(0.0, sq / static_cast<double>(tr.states.size()) - mean * mean);
        s.add("<N> variance along a lambda trajectory", var, "<= 1e-10", var <= 1e-10);

        const Operator hd = build_static_hamiltonian(circuit);
        const Operator nd = excitation_number(circuit);
        const double cd = frobenius_norm(commutator(hd, nd)) / frobenius_norm(hd);
        s.add("[H, N] != 0 (two-delta)", cd, "> 1e-6", cd > 1e-6);
    }

    // Dynamics against closed forms and against each other.
    {
        const DimSignature sig{1, 2};
        const double g = 1e-3;
        const Operator sx = embed(transition(2, 1, 0) + transition(2, 0, 1), 1, sig);
        const Operator h = (two_pi * g) * sx;
        const auto tr = evolve_schrodinger(h, {}, State::basis(sig, 0), {0.0, 500.0, 51},
                                           {qubit_excitation(sig, 1)});
        double err = 0.0;
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            const double exact = std::pow(std::sin(two_pi * g * tr.times[k]), 2);
            err = std::max(err, std::abs(tr.traces[0][k] - exact));
        }
        s.add("Rabi flop vs sin^2(2 pi g t)", err, "<= 1e-8", err <= 1e-8);

        const DimSignature cav{2, 2};
        const double kappa = 1e-3;
        const Operator a = embed(destroy(1), 0, cav);
        const auto td = evolve_lindblad(Operator::zero(cav), {}, {{a, two_pi * kappa, "kappa"}},
                                        State::basis(cav, 2), {0.0, 300.0, 31}, {mean_photon(cav)});
        double derr = 0.0;
        for (std::size_t k = 0; k < td.times.size(); ++k) {
            derr = std::max(derr, std::abs(td.traces[0][k] - std::exp(-two_pi * kappa * td.times[k])));
        }
        s.add("cavity decay vs exp(-kappa t)", derr, "<= 1e-6", derr <= 1e-6);

        const Operator hc = build_static_hamiltonian(circuit);
        const State psi0 = labelled_state(hc.signature(), "1gg");
        // Explicit RK error on rho is not positivity-preserving; at rtol 1e-9 the
        // smallest eigenvalue of a pure state drifts below -1e-8 within ~50 ns.
        SolverOptions opt;
        opt.keep_states = true;
        opt.rtol = 1e-11;
        opt.atol = 1e-14;
        const TimeGrid grid{0.0, 100.0, 101};
        const auto ts = evolve_schrodinger(hc, {}, psi0, grid, {}, opt);
        const auto tl = evolve_lindblad(hc, {}, {}, psi0, grid, {}, opt);
        double worst = 1.0;
        for (std::size_t k = 0; k < ts.states.size(); ++k) {
            worst = std::min(worst, state_fidelity(tl.states[k], ts.states[k]));
        }
        s.add("Lindblad without channels vs Schroedinger", 1.0 - worst, "<= 1e-6", 1.0 - worst <= 1e-6);

        const Operator u = propagator_expm(hc, 100.0);
        const State exact = State::normalized_ket(hc.signature(), u.matrix() * psi0.vector());
        const double f = 1.0 - state_fidelity(ts.final_state, exact);
        s.add("propagator vs integrator, 100 ns", f, "<= 1e-8", f <= 1e-8);
    }

    // Presets must sit in the dispersive regime.
    for (const auto& name : preset_names()) {
        const auto params = effective_params(preset(name).spec, options.warn_ratio);
        double worst = 0.0;
        for (const auto& r : params.ratios) worst = std::max(worst, r.ratio);
        s.add("dispersive ratio, preset " + name, worst, "< 1", worst < 1.0);
        for (const auto& w : params.warnings) s.report.warnings.push_back("preset " + name + ": " + w);
    }

    if (options.config) {
        const auto params = effective_params(options.config->spec, options.warn_ratio);
        const std::string label = options.config->name.empty() ? "config" : options.config->name;
        for (const auto& w : params.warnings) s.report.warnings.push_back(label + ": " + w);
    }
    return s.report;
}

} // namespace cqed
