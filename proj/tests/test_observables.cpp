#include "test_util.hpp"

#include "cqed/dynamics.hpp"
#include "cqed/effective.hpp"
#include "cqed/errors.hpp"
#include "cqed/observables.hpp"
#include "cqed/scenario.hpp"

using namespace cqed;

namespace {

double value(const Observable& o, const State& s) { return expectation(o.op, s).real(); }

} // namespace

TEST_CASE("registry values on bare states") {
    const DimSignature sig{4, 3, 3};
    const State one_gg = State::basis(sig, sig.flat_index({1, 0, 0}));
    const State zero_ee = State::basis(sig, sig.flat_index({0, 1, 1}));
    const State zero_eg = State::basis(sig, sig.flat_index({0, 1, 0}));
    const State zero_ig = State::basis(sig, sig.flat_index({0, 2, 0}));

    CHECK(value(mean_photon(sig), one_gg) == 1.0);
    CHECK(value(mean_photon(sig), zero_ee) == 0.0);
    for (std::size_t q : {1u, 2u}) {
        CHECK(value(qubit_excitation(sig, q), zero_ee) == 1.0);
        CHECK(value(qubit_excitation(sig, q), one_gg) == 0.0);
        CHECK(value(leakage(sig, q), one_gg) == 0.0);
    }
    CHECK(value(leakage(sig, 1), zero_ig) == 1.0);
    CHECK(value(leakage(sig, 2), zero_ig) == 0.0);
    CHECK(value(g2_qubits(sig), zero_ee) == 1.0);
    CHECK(value(g2_qubits(sig), zero_eg) == 0.0);
    CHECK(value(population(sig, "1gg"), one_gg) == 1.0);
    CHECK(value(population(sig, "0ee"), one_gg) == 0.0);

    CHECK(mean_photon(sig).name == "n_cav");
    CHECK(observable(sig, "leak_q2").name == "leak_q2");
    CHECK(observable(sig, "pop_2ie").op(sig.flat_index({2, 2, 1}), sig.flat_index({2, 2, 1})) == Operator::Scalar(1));
    CHECK_THROWS_AS(observable(sig, "purity"), ConfigError);
    CHECK_THROWS_AS(observable(sig, "exc_q3"), ConfigError);

    const DimSignature two{2, 3, 2};
    CHECK(leakage(two, 2).op.max_abs() == 0.0);
}

TEST_CASE("populations over a complete basis sum to one") {
    const DimSignature sig{3, 3, 2};
    std::mt19937 rng(2);
    Eigen::VectorXcd v(sig.total());
    std::normal_distribution<double> d;
    for (Index k = 0; k < v.size(); ++k) v(k) = {d(rng), d(rng)};
    const State psi = State::normalized_ket(sig, v);
    const char levels[3] = {'g', 'e', 'i'};
    double sum = 0.0;
    for (int n = 0; n < 3; ++n)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 2; ++b) sum += value(population(sig, std::to_string(n) + levels[a] + levels[b]), psi);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expectations of registry observables are real and G2 is bounded by the marginals") {
    const DimSignature sig{3, 3, 3};
    std::mt19937 rng(17);
    std::normal_distribution<double> d;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd m(sig.total(), 3);
        for (Index r = 0; r < m.rows(); ++r)
            for (Index c = 0; c < 3; ++c) m(r, c) = {d(rng), d(rng)};
        Eigen::MatrixXcd rho = m * m.adjoint();
        rho /= rho.trace();
        const State s = State::density(sig, rho);
        for (const auto& name : standard_trace_names()) CHECK(std::abs(expectation(observable(sig, name).op, s).imag()) <= 1e-10);
        const double g2 = value(g2_qubits(sig), s);
        CHECK(g2 <= std::min(value(qubit_excitation(sig, 1), s), value(qubit_excitation(sig, 2), s)) + 1e-15);
    }
}

TEST_CASE("state fidelity") {
    const DimSignature sig{1, 2, 2};
    const State gg = State::basis(sig, 0), ee = State::basis(sig, 3);
    CHECK(state_fidelity(gg, gg) == 1.0);
    CHECK(state_fidelity(gg, ee) == 0.0);
    const State ghz = superposition(sig, {{0, {Level::g, Level::g}}, {0, {Level::e, Level::e}}});
    CHECK(state_fidelity(gg, ghz) == doctest::Approx(0.5));
    CHECK(state_fidelity(ghz.to_density(), ghz) == doctest::Approx(1.0));
    CHECK_THROWS(state_fidelity(gg, State::basis(DimSignature{2}, 0)));
}

TEST_CASE("driven effective model reaches the GHZ state at pi / (4 chi_d)") {
    const RunConfig ghz = preset("ghz");
    const double chi_d = *analytic_chi(ghz.spec);
    const Operator h = build_effective_hamiltonian(ghz.spec);
    const DimSignature sig = h.signature();
    const State target = superposition(sig, {{0, {Level::g, Level::g}}, {0, {Level::e, Level::e}}});
    const double t = 1.0 / (8.0 * std::abs(chi_d));  // pi / (4 * 2 pi |chi_d|)
    const State psi = State::normalized_ket(sig, propagator_expm(h, t).matrix() * State::basis(sig, 0).vector());
    CHECK(std::abs(state_fidelity(psi, target) - 1.0) <= 1e-9);

    const Trajectory tr = evolve_schrodinger(h, {}, State::basis(sig, 0), {0.0, t, 2}, {});
    CHECK(std::abs(state_fidelity(tr.final_state, target) - 1.0) <= 1e-9);
}

TEST_CASE("effective Rabi flop passes n_cav = 0.5 at a quarter period") {
    const SystemSpec spec = test::circuit_spec();
    EffectiveOptions opt;
    opt.cavity_frequency = 8.0;
    const Operator h = build_effective_hamiltonian(spec, opt);
    const DimSignature sig = h.signature();
    const double period = *effective_params(spec).period_ns();
    const auto tr = evolve_schrodinger(h, {}, State::basis(sig, sig.flat_index({1, 0, 0})), {0.0, period / 4, 2},
                                       {mean_photon(sig), population(sig, "0ee")});
    CHECK(tr.traces[0].back() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(tr.traces[1].back() == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("rotating frame transform") {
    const DimSignature sig{1, 2};
    Eigen::VectorXcd v(2);
    v << 1.0, 1.0;
    const State psi = State::normalized_ket(sig, v);
    Eigen::VectorXd f(2);
    f << 0.0, 2.0;
    const State r = to_rotating_frame(psi, f, test::pi / 4);
    CHECK(std::abs(r.vector()(1) - std::polar(1.0 / std::sqrt(2.0), test::pi / 2)) <= 1e-15);
    const State rd = to_rotating_frame(psi.to_density(), f, test::pi / 4);
    CHECK((rd.density_matrix() - r.density_matrix()).norm() <= 1e-15);
}
