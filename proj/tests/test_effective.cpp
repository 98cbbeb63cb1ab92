#include "test_util.hpp"

#include "cqed/dynamics.hpp"
#include "cqed/effective.hpp"
#include "cqed/errors.hpp"
#include "cqed/validate.hpp"

using namespace cqed;
using test::Level;

namespace {

// Closed form written out independently of the library.
double chi_formula(double gp, double gs, double g2, double dp, double ds, double d2) {
    return gs * g2 / 3.0 * (1.0 / ds + 1.0 / d2) * gp / dp + gp * gs / 3.0 * (1.0 / dp + 1.0 / ds) * g2 / d2;
}

double circuit_chi_by_hand() {
    const double wc = 7.9655, we = 4.0, wi = 7.0, gge = 0.12, gei = 0.18, ggi = 0.10;
    const double dp = wi - wc, ds = wi - we - wc, d2 = we - wc;
    // identical atoms: the four terms pair up into twice one Lambda-style pair
    return 2.0 * chi_formula(ggi, gei, gge, dp, ds, d2);
}

} // namespace

TEST_CASE("chi_lambda arithmetic") {
    const Detunings unit{1.0, 1.0, 1.0};
    CHECK(chi_lambda(0.1, 0.1, 0.1, unit) == doctest::Approx(1.3333333333e-3).epsilon(1e-9));
    CHECK(chi_lambda(0.0, 0.1, 0.1, unit) == 0.0);
    CHECK(chi_lambda(0.1, 0.0, 0.1, unit) == 0.0);
    CHECK(chi_lambda(0.1, 0.1, 0.0, unit) == 0.0);

    const Detunings d{-0.97, -4.97, -3.97};
    const double v = chi_lambda(0.1, 0.18, 0.12, d);
    CHECK(v == doctest::Approx(chi_formula(0.1, 0.18, 0.12, -0.97, -4.97, -3.97)).epsilon(1e-14));
    // Every term carries two inverse detunings, so reversing all of them keeps chi.
    CHECK(chi_lambda(0.1, 0.18, 0.12, {0.97, 4.97, 3.97}) == doctest::Approx(v).epsilon(1e-14));
    CHECK(chi_lambda(-0.1, 0.18, 0.12, d) == doctest::Approx(-v).epsilon(1e-14));

    CHECK_THROWS_AS(chi_lambda(0.1, 0.1, 0.1, {0.0, 1.0, 1.0}), SingularDetuning);
    CHECK_THROWS_AS(chi_lambda(0.1, 0.1, 0.1, {1.0, 1.0, 0.0}), SingularDetuning);
}

TEST_CASE("chi_vee and chi_drive identities") {
    const Detunings d{-0.9, -2.1, 1.7};
    CHECK(chi_vee(0.1, 0.2, 0.15, d) == doctest::Approx(chi_lambda(0.1, 0.2, 0.15, d)).epsilon(1e-14));
    CHECK(chi_vee(0.0, 0.2, 0.15, d) == 0.0);
    // Far-detuned Delta_s leaves only the 1/(Delta_p Delta_2) parts of both terms.
    CHECK(chi_vee(0.1, 0.2, 0.15, {-0.9, 1e12, 1.7}) ==
          doctest::Approx(2.0 * 0.1 * 0.2 * 0.15 / (3.0 * -0.9 * 1.7)).epsilon(1e-10));

    CHECK(chi_drive(0.0, 0.2, 0.15, d, -1.3) == 0.0);
    CHECK(chi_drive(0.07, 0.2, 0.15, d, -1.3) ==
          doctest::Approx(chi_lambda(0.07, 0.2, 0.15, {-1.3, d.s, d.two})).epsilon(1e-14));
}

TEST_CASE("circuit coupling and the analytic period") {
    const SystemSpec spec = test::circuit_spec();
    const double chi = chi_circuit(spec);
    CHECK(chi == doctest::Approx(circuit_chi_by_hand()).epsilon(1e-13));
    CHECK(std::abs(chi) == doctest::Approx(1.126e-3).epsilon(1e-3));

    const EffectiveParams p = effective_params(spec);
    REQUIRE(p.period_ns());
    CHECK(std::abs(*p.period_ns() - 444.0) <= 1.0);
    // pi / (2 pi chi) in ns
    CHECK(*p.period_ns() == doctest::Approx(1.0 / (2.0 * std::abs(chi))).epsilon(1e-12));

    const auto det = circuit_detunings(spec);
    CircuitAtom a{0.10, 0.18, 0.12, det[0]};
    const double lam = chi_lambda(a.g_gi, a.g_ei, a.g_ge, det[0]);
    CHECK(chi_circuit(a, a) == doctest::Approx(2.0 * lam).epsilon(1e-14));

    CircuitAtom b = a;
    b.g_gi = 0.0;
    CHECK(chi_circuit(a, b) == doctest::Approx(lam).epsilon(1e-14));
    CHECK(chi_circuit(b, a) == doctest::Approx(lam).epsilon(1e-14));
}

TEST_CASE("chi scales with the cube of the couplings") {
    const std::vector<SystemSpec> specs{test::circuit_spec(), test::lambda_spec(), preset("vee").spec};
    for (const auto& spec : specs) {
        const double chi = *analytic_chi(spec);
        for (double s : {0.5, 0.8, 1.25}) {
            const double scaled = *analytic_chi(with_scaled_couplings(spec, s));
            CHECK(std::abs(scaled - s * s * s * chi) <= 1e-15 * std::abs(chi));
        }
    }
}

TEST_CASE("V family mirrors Lambda under the level map") {
    const double v = *analytic_chi(preset("vee").spec);
    const double l = *analytic_chi(preset("lambda").spec);
    CHECK(v == doctest::Approx(l).epsilon(1e-12));
}

TEST_CASE("singular detunings and dispersive warnings") {
    SystemSpec spec = test::lambda_spec();
    spec.cavity.frequency = 7.0;  // omega_i - omega_c = 0
    CHECK_THROWS_AS(effective_params(spec), SingularDetuning);
    CHECK_THROWS_AS(sw_generator(spec), SingularDetuning);

    SystemSpec weak = test::lambda_spec(7.97, 0.1, 0.18, 0.12);
    weak.atoms[1].level_frequencies[Level::e] = 7.97 - 0.24;  // g_2 / |Delta_2| = 0.5
    const EffectiveParams p = effective_params(weak);
    REQUIRE_FALSE(p.warnings.empty());
    CHECK(p.warnings.front().find("0.5") != std::string::npos);
    CHECK(p.dispersive_valid());

    CHECK(effective_params(test::circuit_spec()).warnings.empty());
}

TEST_CASE("zero coupling has no period") {
    SystemSpec spec = test::lambda_spec(7.97, 0.0, 0.18, 0.12);
    const EffectiveParams p = effective_params(spec);
    REQUIRE(p.chi);
    CHECK(*p.chi == 0.0);
    CHECK_FALSE(p.period_ns());
}

TEST_CASE("renormalized frequencies") {
    SystemSpec bare = test::lambda_spec(7.97, 0.0, 0.0, 0.0);
    for (const auto& [k, f] : renormalized_frequencies(bare)) CHECK(f.per_photon == 0.0);
    const auto rb = renormalized_frequencies(bare);
    CHECK(rb.at("cavity").constant == 7.97);
    CHECK(rb.at("qubit1").constant == 4.0);
    CHECK(rb.at("qubit2").constant == 4.0);
    CHECK(rb.at("aux").constant == 7.0);

    const double gp = 0.1;
    const auto r = renormalized_frequencies(test::lambda_spec(7.97, gp, 0.0, 0.0));
    const double dp = 7.0 - 7.97;
    CHECK(r.at("cavity").constant == doctest::Approx(7.97 - gp * gp / dp).epsilon(1e-14));
    CHECK(r.at("aux").constant - 7.0 == doctest::Approx(gp * gp / dp).epsilon(1e-12));
}

TEST_CASE("Schrieffer-Wolff generator") {
    for (const SystemSpec& spec : {test::circuit_spec(), test::lambda_spec(), preset("vee").spec}) {
        const Operator x = sw_generator(spec);
        CHECK((x.matrix() + x.matrix().adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(generator_residual(build_bare_hamiltonian(spec), build_interaction(spec), x) <= 1e-9);
    }
    for (auto kinds : {std::pair{AtomKind::Lambda, AtomKind::TwoLevel}, std::pair{AtomKind::Vee, AtomKind::TwoLevel},
                       std::pair{AtomKind::Delta, AtomKind::Delta}}) {
        for (const auto& spec : random_specs(kinds.first, kinds.second, 20, 99)) {
            const Operator x = sw_generator(spec);
            CHECK(generator_residual(build_bare_hamiltonian(spec), build_interaction(spec), x) <= 1e-9);
        }
    }
    const Operator x0 = sw_generator(with_scaled_couplings(test::circuit_spec(), 0.0));
    CHECK(x0.max_abs() == 0.0);
}

TEST_CASE("third-order BCH expansion") {
    const SystemSpec spec = test::circuit_spec();
    const Operator h0 = build_bare_hamiltonian(spec);
    const Operator hi = build_interaction(spec);
    const Operator x = sw_generator(spec);

    const Operator zero = Operator::zero(h0.signature());
    CHECK(bch_effective(h0, zero, zero).matrix() == h0.matrix());
    CHECK_THROWS_AS(bch_effective(h0, hi, 2.0 * x), ValidationError);

    const Operator heff = bch_effective(h0, hi, x);
    const DimSignature sig = heff.signature();
    const Index a = sig.flat_index({1, 0, 0}), b = sig.flat_index({0, 1, 1});
    const double chi_rad = two_pi * circuit_chi_by_hand();
    CHECK(std::abs(std::abs(heff(b, a)) - std::abs(chi_rad)) <= 0.10 * std::abs(chi_rad));
    CHECK(std::abs(heff(b, a) - std::conj(heff(a, b))) <= 1e-15);
    CHECK(heff(b, a).real() * chi_rad < 0.0);  // element is -chi

    // Diagonal: second-order shifts of |0gg> and |1gg> for the Lambda model.
    const double wc = 7.97, gp = 0.1, g2 = 0.12;
    const SystemSpec lam = test::lambda_spec(wc, gp, 0.18, g2);
    const Operator hl = bch_effective(build_bare_hamiltonian(lam), build_interaction(lam), sw_generator(lam));
    const DimSignature sl = hl.signature();
    const double dp = 7.0 - wc, d2 = 4.0 - wc;
    CHECK(std::abs(hl(sl.flat_index({0, 0, 0}), sl.flat_index({0, 0, 0})).real() / two_pi) <= 1e-6);
    const double e1 = hl(sl.flat_index({1, 0, 0}), sl.flat_index({1, 0, 0})).real() / two_pi;
    CHECK(std::abs(e1 - (wc - gp * gp / dp - g2 * g2 / d2)) <= 1e-6);
}

TEST_CASE("effective Hamiltonian") {
    const SystemSpec spec = test::circuit_spec();
    const Operator h = build_effective_hamiltonian(spec);
    const DimSignature sig = h.signature();
    CHECK(sig == DimSignature({4, 2, 2}));
    CHECK(h.is_hermitian());
    const Index a = sig.flat_index({1, 0, 0}), b = sig.flat_index({0, 1, 1});
    CHECK(std::abs(h(b, a) + two_pi * circuit_chi_by_hand()) <= 1e-15);

    // Matching is exact at omega_c = omega_1 + omega_2: a two-state Rabi flop sin^2(chi t).
    EffectiveOptions opt;
    opt.cavity_frequency = 8.0;
    const Operator hm = build_effective_hamiltonian(spec, opt);
    const State psi0 = State::basis(sig, a);
    const double chi_rad = two_pi * std::abs(circuit_chi_by_hand());
    for (double t : {50.0, 111.0, 222.0, 400.0}) {
        const Eigen::VectorXcd psi = propagator_expm(hm, t).matrix() * psi0.vector();
        CHECK(std::norm(psi(b)) == doctest::Approx(std::pow(std::sin(chi_rad * t), 2)).epsilon(1e-10));
    }

    SystemSpec off = with_scaled_couplings(spec, 0.0);
    const Operator h0 = build_effective_hamiltonian(off, opt);
    CHECK(h0.matrix().isDiagonal(0.0));
}

TEST_CASE("driven effective model") {
    const RunConfig ghz = preset("ghz");
    const EffectiveParams p = effective_params(ghz.spec);
    CHECK(p.family == ModelFamily::DrivenLambdaTwoLevel);
    REQUIRE(p.chi);
    const auto& a = ghz.spec.atoms[0];
    const double eps = a.drives[0].amplitude;
    const auto det = lambda_detunings(ghz.spec);
    const DriveDetunings dd = drive_detunings(ghz.spec);
    CHECK(dd.d == doctest::Approx(7.0 - 7.9835));
    CHECK(*p.chi == doctest::Approx(chi_formula(eps, a.coupling({Level::e, Level::i}), 0.12, dd.d, det.s, det.two)));

    const Operator h = build_effective_hamiltonian(ghz.spec);
    CHECK(h.signature() == DimSignature({1, 2, 2}));
}
