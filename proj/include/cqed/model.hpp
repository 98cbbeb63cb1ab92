// model.hpp - declarative cavity + atoms description and the full RWA Hamiltonians
//
// Configuration values are linear frequencies in GHz (omega / 2pi). Every
// operator produced here is in angular units, rad/ns, so that time is in ns.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqed/operator.hpp"

namespace cqed {

inline constexpr double two_pi = 6.283185307179586476925286766559;

enum class AtomKind { TwoLevel, Lambda, Vee, Xi, Delta };

/// Level labels double as basis indices inside an atom slot.
enum class Level : int { g = 0, e = 1, i = 2 };

/// A directed transition. As a cavity coupling, (from, to) contributes
/// g * a |to><from| + h.c.; as a drive it contributes eps e^{-i(w t + phi)} |to><from| + h.c.
/// As a relaxation channel it is the jump operator |to><from|.
struct LevelPair {
    Level from = Level::g;
    Level to = Level::e;

    friend auto operator<=>(const LevelPair&, const LevelPair&) = default;
};

struct DriveSpec {
    LevelPair transition;
    double amplitude = 0.0;  // GHz
    double frequency = 0.0;  // GHz
    double phase = 0.0;      // rad
};

struct AtomSpec {
    AtomKind kind = AtomKind::TwoLevel;
    std::map<Level, double> level_frequencies;  // GHz; a missing level sits at 0
    std::map<LevelPair, double> couplings;      // GHz
    std::vector<DriveSpec> drives;

    [[nodiscard]] Index level_count() const noexcept { return kind == AtomKind::TwoLevel ? 2 : 3; }
    [[nodiscard]] double frequency(Level l) const;
    [[nodiscard]] double coupling(LevelPair p) const;
};

struct CavitySpec {
    double frequency = 0.0;  // GHz
    Index n_max = 1;
    double decay = 0.0;      // kappa, GHz
};

struct RelaxationKey {
    std::size_t atom = 0;    // 0-based
    LevelPair jump;          // jump operator |jump.to><jump.from|

    friend auto operator<=>(const RelaxationKey&, const RelaxationKey&) = default;
};

struct SystemSpec {
    CavitySpec cavity;
    std::vector<AtomSpec> atoms;
    std::map<RelaxationKey, double> relaxation;  // GHz

    [[nodiscard]] DimSignature signature() const;
    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

// ------------------------------ labels --------------------------------------

std::string_view to_string(AtomKind kind);
std::string_view to_string(Level level);
AtomKind parse_atom_kind(std::string_view text);
Level parse_level(char c);
/// "gi" -> {g, i}
LevelPair parse_level_pair(std::string_view text);
std::string to_string(LevelPair p);

/// Transitions that may carry a cavity coupling or a drive for this kind.
const std::vector<LevelPair>& allowed_transitions(AtomKind kind);
/// Level whose frequency is the energy zero: g, except i for V atoms.
Level reference_level(AtomKind kind);

/// Detuning (w_to - w_from) - w_c of a coupled transition, GHz.
double transition_detuning(const SystemSpec& spec, std::size_t atom, LevelPair p);

// ------------------------------ operators -----------------------------------

/// H = w_c a^dag a + sum_q sum_j w_j |j><j| + sum g (a |to><from| + h.c.), drives excluded.
Operator build_static_hamiltonian(const SystemSpec& spec);

/// Diagonal (uncoupled) part of the static Hamiltonian.
Operator build_bare_hamiltonian(const SystemSpec& spec);

/// Coupling part H_I of the static Hamiltonian.
Operator build_interaction(const SystemSpec& spec);

struct DriveTerm {
    Operator op;             // amplitude * |to><from|, rad/ns
    double frequency = 0.0;  // rad/ns
    double phase = 0.0;
};

/// One term per drive; assembled as op e^{-i(w t + phi)} + h.c. during integration.
std::vector<DriveTerm> build_drive_terms(const SystemSpec& spec);

struct CollapseChannel {
    Operator op;
    double rate = 0.0;       // rad/ns
    std::string label;
};

/// Cavity decay plus every atom relaxation channel with a positive rate.
std::vector<CollapseChannel> build_collapse_channels(const SystemSpec& spec);

/// Product basis ket |n, l_1, l_2, ...>.
State bare_state(const SystemSpec& spec, Index photons, const std::vector<Level>& levels);
State bare_state(const DimSignature& sig, Index photons, const std::vector<Level>& levels);

/// Parses labels such as "1gg" or "0ee" (photon count then one level per atom).
std::pair<Index, std::vector<Level>> parse_bare_label(std::string_view label, std::size_t atoms);
Index bare_index(const DimSignature& sig, Index photons, const std::vector<Level>& levels);

/// Normalised sum of bare kets, e.g. (|0,g,g> + |0,e,e>)/sqrt(2).
State superposition(const DimSignature& sig,
                    const std::vector<std::pair<Index, std::vector<Level>>>& components);

/// N = a^dag a + |i><i|_1 + |e><e|_2. Conserved by the Lambda + two-level model,
/// not by two Delta atoms.
Operator excitation_number(const SystemSpec& spec);

/// Copy of spec with the cavity frequency replaced.
SystemSpec with_cavity_frequency(SystemSpec spec, double frequency_ghz);
/// Copy of spec with every drive frequency replaced.
SystemSpec with_drive_frequency(SystemSpec spec, double frequency_ghz);
/// Copy of spec with every coupling and drive amplitude multiplied by s.
SystemSpec with_scaled_couplings(SystemSpec spec, double s);

// ------------------------------ rotating frame ------------------------------

/// Diagonal frame generator F (rad/ns, one entry per basis state) such that
/// e^{iFt}(H(t) - F)e^{-iFt} is time independent, when one exists.
/// F assigns a frequency to each photon and atom level; every drive fixes
/// F_to - F_from = w_d and every cavity coupling fixes F_to - F_from = F_photon.
std::optional<Eigen::VectorXd> drive_frame(const SystemSpec& spec);

/// Time-independent Hamiltonian H_static - F + sum (A e^{-i phi} + h.c.) in the frame of drive_frame().
std::optional<Operator> rotating_frame_hamiltonian(const SystemSpec& spec);

} // namespace cqed
