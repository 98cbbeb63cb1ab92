#include "test_util.hpp"

#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"
#include "cqed/observables.hpp"
#include "cqed/scenario.hpp"

using namespace cqed;

namespace {

double max_trace_difference(const Trajectory& a, const Trajectory& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.traces.size(); ++j)
        for (std::size_t k = 0; k < a.times.size(); ++k) worst = std::max(worst, std::abs(a.traces[j][k] - b.traces[j][k]));
    return worst;
}

/// fig5 model at its preset cavity frequency.
struct Fig5 {
    RunConfig config = preset("fig5");
    Operator h = build_static_hamiltonian(config.spec);
    State psi0 = labelled_state(h.signature(), "1gg");
    std::vector<Observable> obs = trace_observables(h.signature(), standard_trace_names());
};

} // namespace

TEST_CASE("time grid") {
    const TimeGrid g{0.0, 2.0, 5};
    const auto t = g.times();
    CHECK(t == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK_THROWS_AS((TimeGrid{1.0, 1.0, 5}.validate()), ConfigError);
    CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 1}.validate()), ConfigError);
}

TEST_CASE("zero Hamiltonian leaves the state unchanged") {
    const DimSignature sig{3, 2};
    Eigen::VectorXcd v(6);
    v << 0.1, 0.2i, 0.3, -0.4, 0.5, 0.6i;
    const State psi = State::normalized_ket(sig, v);
    SolverOptions opt;
    opt.keep_states = true;
    const auto tr = evolve_schrodinger(Operator::zero(sig), {}, psi, {0.0, 100.0, 11}, {}, opt);
    for (const auto& s : tr.states) CHECK((s.vector() - psi.vector()).norm() <= 1e-14);
}

TEST_CASE("two-level Rabi flop") {
    const DimSignature sig{1, 2};
    const double g = 1e-3;  // GHz
    const Operator h = (two_pi * g) * embed(transition(2, 1, 0) + transition(2, 0, 1), 1, sig);
    const auto tr = evolve_schrodinger(h, {}, State::basis(sig, 0), {0.0, 500.0, 101}, {qubit_excitation(sig, 1)});
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        CHECK(std::abs(tr.traces[0][k] - std::pow(std::sin(two_pi * g * tr.times[k]), 2)) <= 1e-8);
    }
    // sin^2(2 pi g t) has period 1 / (2 g) = 500 ns
    CHECK(tr.traces[0].back() <= 1e-8);
    CHECK(tr.traces[0][50] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("resonant drive is evaluated at stage times") {
    // H = w |e><e| + eps (e^{-i w t} |e><g| + h.c.) gives P_e = sin^2(eps t) exactly.
    const DimSignature sig{1, 2};
    const double w = two_pi * 5.0, eps = two_pi * 2e-3;
    const Operator h = w * embed(transition(2, 1, 1), 1, sig);
    const DriveTerm d{eps * embed(transition(2, 1, 0), 1, sig), w, 0.0};
    // Lab-frame 5 GHz phases: at the default rtol the norm drifts past 1e-8 within ~100 ns.
    SolverOptions tight;
    tight.rtol = 1e-11;
    tight.atol = 1e-14;
    const auto tr =
        evolve_schrodinger(h, {d}, State::basis(sig, 0), {0.0, 200.0, 41}, {qubit_excitation(sig, 1)}, tight);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        CHECK(std::abs(tr.traces[0][k] - std::pow(std::sin(eps * tr.times[k]), 2)) <= 1e-7);
    }

    const DriveTerm inert{0.0 * d.op, w, 0.0};
    SolverOptions opt;
    opt.keep_states = true;
    const auto a = evolve_schrodinger(h, {}, State::basis(sig, 0), {0.0, 50.0, 11}, {}, opt);
    const auto b = evolve_schrodinger(h, {inert}, State::basis(sig, 0), {0.0, 50.0, 11}, {}, opt);
    for (std::size_t k = 0; k < a.states.size(); ++k) CHECK((a.states[k].vector() - b.states[k].vector()).norm() <= 1e-12);
}

TEST_CASE("cavity decay") {
    const DimSignature sig{2, 2};
    const double kappa = two_pi * 1e-3;
    const Operator a = embed(destroy(1), 0, sig);
    const auto tr = evolve_lindblad(Operator::zero(sig), {}, {{a, kappa, "kappa"}}, State::basis(sig, 2),
                                    {0.0, 500.0, 51}, {mean_photon(sig)});
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        CHECK(std::abs(tr.traces[0][k] - std::exp(-kappa * tr.times[k])) <= 1e-6);
    }
    CHECK(tr.stats.max_trace_drift <= 1e-8);
}

TEST_CASE("master equation without channels reproduces the Schroedinger evolution") {
    Fig5 m;
    SolverOptions opt;
    opt.keep_states = true;
    opt.rtol = 1e-11;
    opt.atol = 1e-14;
    const TimeGrid grid{0.0, 150.0, 151};
    const auto ts = evolve_schrodinger(m.h, {}, m.psi0, grid, m.obs, opt);
    const auto tl = evolve_lindblad(m.h, {}, {}, m.psi0, grid, m.obs, opt);
    for (std::size_t k = 0; k < ts.states.size(); ++k) {
        CHECK(state_fidelity(tl.states[k], ts.states[k]) >= 1.0 - 1e-6);
    }
    CHECK(max_trace_difference(ts, tl) <= 1e-6);
    CHECK(tl.stats.min_eigenvalue >= -1e-8);
}

TEST_CASE("positivity check reports a loose master-equation run") {
    Fig5 m;
    SolverOptions opt;
    opt.rtol = 1e-6;
    opt.atol = 1e-9;
    CHECK_THROWS_AS(evolve_lindblad(m.h, {}, {}, m.psi0, {0.0, 100.0, 101}, {}, opt), IntegrationError);
}

TEST_CASE("norm drift raises an integration error") {
    Fig5 m;
    SolverOptions opt;
    opt.rtol = 1e-4;
    opt.atol = 1e-7;
    CHECK_THROWS_AS(evolve_schrodinger(m.h, {}, m.psi0, {0.0, 200.0, 21}, {}, opt), IntegrationError);
}

TEST_CASE("propagator") {
    Fig5 m;
    const Operator u0 = propagator_expm(m.h, 0.0);
    CHECK((u0.matrix() - Eigen::MatrixXcd::Identity(m.h.dim(), m.h.dim())).cwiseAbs().maxCoeff() <= 1e-12);

    const Operator u1 = propagator_expm(m.h, 37.0), u2 = propagator_expm(m.h, 81.5);
    const Operator u12 = propagator_expm(m.h, 118.5);
    CHECK(((u1 * u2).matrix() - u12.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(((dagger(u12) * u12).matrix() - Eigen::MatrixXcd::Identity(m.h.dim(), m.h.dim())).cwiseAbs().maxCoeff() <= 1e-10);

    const auto tr = evolve_schrodinger(m.h, {}, m.psi0, {0.0, 2000.0, 3}, {});
    const State exact = State::normalized_ket(m.h.signature(), propagator_expm(m.h, 2000.0).matrix() * m.psi0.vector());
    CHECK(state_fidelity(tr.final_state, exact) >= 1.0 - 1e-8);
}

TEST_CASE("halving the tolerance changes no trace point by more than 1e-6") {
    Fig5 m;
    SolverOptions a, b;
    b.rtol = a.rtol / 2;
    b.atol = a.atol / 2;
    const TimeGrid grid{0.0, 1000.0, 1001};
    CHECK(max_trace_difference(evolve_schrodinger(m.h, {}, m.psi0, grid, m.obs, a),
                               evolve_schrodinger(m.h, {}, m.psi0, grid, m.obs, b)) <= 1e-6);
}

TEST_CASE("fixed-step RK4 reference agrees with the adaptive integrator") {
    const DimSignature sig{1, 2};
    const double g = 1e-2;
    const Operator h = (two_pi * g) * embed(transition(2, 1, 0) + transition(2, 0, 1), 1, sig);
    SolverOptions fixed;
    fixed.method = Method::FixedRk4;
    fixed.fixed_step = 0.01;
    const TimeGrid grid{0.0, 50.0, 26};
    const auto a = evolve_schrodinger(h, {}, State::basis(sig, 0), grid, {qubit_excitation(sig, 1)});
    const auto b = evolve_schrodinger(h, {}, State::basis(sig, 0), grid, {qubit_excitation(sig, 1)}, fixed);
    CHECK(max_trace_difference(a, b) <= 1e-9);
}

TEST_CASE("excitation number stays fixed along a Lambda trajectory") {
    const SystemSpec spec = test::lambda_spec();
    const Operator h = build_static_hamiltonian(spec);
    const Observable n{"N", excitation_number(spec)};
    const auto tr = evolve_schrodinger(h, {}, bare_state(spec, 1, {test::Level::g, test::Level::g}),
                                       {0.0, 500.0, 501}, {n});
    const auto& v = tr.traces[0];
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    CHECK(var / double(v.size()) <= 1e-10);
}

TEST_CASE("top Fock population is tracked") {
    const DimSignature sig{3, 2};
    const State top = State::basis(sig, sig.flat_index({2, 0}));
    CHECK(top_fock_population(top) == 1.0);
    const auto tr = evolve_schrodinger(Operator::zero(sig), {}, top, {0.0, 1.0, 2}, {});
    CHECK(tr.stats.truncation_flag);
}
