// effective.hpp - dispersive effective theory: detunings, analytic couplings,
// renormalized frequencies, Schrieffer-Wolff generator and third-order BCH.
//
// Analytic quantities are linear frequencies in GHz. The chi_* functions
// return the closed-form values. In the bare product basis the resonant
// matrix element <0,e,e|H_eff|1,g,g> equals -chi, so effective Hamiltonians
// are assembled with coupling -chi (see effective_coupling()).

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cqed/model.hpp"

namespace cqed {

enum class ModelFamily {
    LambdaTwoLevel,        // Lambda atom + two-level atom
    VeeTwoLevel,           // V atom + two-level atom
    TwoDelta,              // two Delta atoms (circuit implementation)
    DrivenLambdaTwoLevel,  // Lambda atom with classical drives + two-level atom
    Other,
};

ModelFamily classify(const SystemSpec& spec);
std::string_view to_string(ModelFamily family);

/// Detunings of the three virtual transitions, GHz.
/// Lambda: p = w_i - w_c, s = w_i - w_e - w_c, two = w_2 - w_c.
/// V:      p = w_e - w_c, s = w_g - w_c (w_i = 0).
/// Delta:  per atom, two = w_e - w_c of that atom.
struct Detunings {
    double p = 0.0;
    double s = 0.0;
    double two = 0.0;
};

/// d = w_i - w_d, d_prime = w_i - w_e - w_d.
struct DriveDetunings {
    double d = 0.0;
    double d_prime = 0.0;
};

double chi_lambda(double g_p, double g_s, double g_2, const Detunings& det);
double chi_vee(double g_p, double g_s, double g_2, const Detunings& det);
double chi_drive(double epsilon, double g_s, double g_2, const Detunings& det, double delta_d);

struct CircuitAtom {
    double g_gi = 0.0;
    double g_ei = 0.0;
    double g_ge = 0.0;
    Detunings det;
};

double chi_circuit(const CircuitAtom& first, const CircuitAtom& second);
double chi_circuit(const SystemSpec& spec);

Detunings lambda_detunings(const SystemSpec& spec);
Detunings vee_detunings(const SystemSpec& spec);
std::array<Detunings, 2> circuit_detunings(const SystemSpec& spec);
DriveDetunings drive_detunings(const SystemSpec& spec);

/// constant + per_photon * a^dag a
struct ShiftedFrequency {
    double constant = 0.0;
    double per_photon = 0.0;
};

struct DispersiveRatio {
    std::string transition;  // e.g. "q1:gi" or "q1:drive:gi"
    double coupling = 0.0;   // GHz
    double detuning = 0.0;   // GHz
    double ratio = 0.0;      // coupling / |detuning|
};

struct EffectiveParams {
    ModelFamily family = ModelFamily::Other;
    std::optional<double> chi;                         // GHz; absent when no closed form applies
    std::vector<Detunings> detunings;                  // one entry, or one per atom for two Delta atoms
    std::optional<DriveDetunings> drive;
    std::map<std::string, ShiftedFrequency> renormalized;  // cavity, qubit1, qubit2, aux
    std::vector<DispersiveRatio> ratios;
    std::vector<std::string> warnings;

    [[nodiscard]] bool dispersive_valid() const;
    /// pi / |chi| in ns (chi converted to rad/ns); empty when chi is zero or absent.
    [[nodiscard]] std::optional<double> period_ns() const;
};

inline constexpr double default_dispersive_warning = 0.25;

/// Throws SingularDetuning when a coupled transition is exactly resonant.
EffectiveParams effective_params(const SystemSpec& spec, double warn_ratio = default_dispersive_warning);

/// Closed-form chi for the family of spec, GHz.
std::optional<double> analytic_chi(const SystemSpec& spec);

/// Bare-basis resonant matrix element in rad/ns for a closed-form chi.
inline double effective_coupling(double chi_ghz) { return -two_pi * chi_ghz; }

/// Closed forms for Lambda and V families; second-order
/// perturbation theory on the bare basis for everything else.
std::map<std::string, ShiftedFrequency> renormalized_frequencies(const SystemSpec& spec);

/// E_a + sum_b |V_ab|^2 / (E_a - E_b) with E = diag(H), V = offdiag(H); rad/ns.
Eigen::VectorXd second_order_energies(const Operator& h);

/// Frequency x (GHz) near x0 where the second-order energies of bare states a and b cross.
double matching_guess(const std::function<Operator(double)>& hamiltonian_at, Index a, Index b, double x0);

// ------------------------------ Schrieffer-Wolff ----------------------------

/// X = sum g/Delta a^dag |from><to| - h.c. over every coupled transition; rad/ns units cancel.
Operator sw_generator(const SystemSpec& spec);

/// ||[H0, X] + H_I||_F / ||H_I||_F (0 when H_I = 0).
double generator_residual(const Operator& h0, const Operator& h_int, const Operator& x);

inline constexpr double generator_tolerance = 1e-9;

/// H0 + 1/2 [H_I, X] + 1/3 [[H_I, X], X]. Throws ValidationError when X does not solve [H0, X] = -H_I.
Operator bch_effective(const Operator& h0, const Operator& h_int, const Operator& x,
                       double tolerance = generator_tolerance);

/// Keeps diagonal entries and couplings between bare states whose H0 energies
/// differ by at most window (rad/ns).
Operator secular_projection(const Operator& h, const Operator& h0, double window = two_pi * 0.05);

// ------------------------------ effective models ----------------------------

struct EffectiveOptions {
    bool renormalized = false;
    std::optional<double> cavity_frequency;  // GHz; defaults to the spec value
};

/// w_c a^dag a + w1 s1+s1- + w2 s2+s2- + (-chi a s1+ s2+ + h.c.) on [n_max+1, 2, 2],
/// or for driven specs the interaction-picture -chi_d (e^{-i phi} s1+ s2+ + h.c.) on [1, 2, 2].
Operator build_effective_hamiltonian(const SystemSpec& spec, const EffectiveOptions& options = {});

/// Signature of the effective model for spec.
DimSignature effective_signature(const SystemSpec& spec);

} // namespace cqed
