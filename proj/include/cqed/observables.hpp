// observables.hpp - named bare-basis observables recorded along trajectories
//
// Registry names: n_cav, exc_q<q>, leak_q<q>, g2, pop_<label> where <label>
// is a bare state such as 1gg. Atom numbers q start at 1.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cqed/operator.hpp"

namespace cqed {

struct Observable {
    std::string name;
    Operator op;
};

Observable mean_photon(const DimSignature& sig);
Observable qubit_excitation(const DimSignature& sig, std::size_t q);
/// Projector onto |i>_q; the zero operator for two-level atoms.
Observable leakage(const DimSignature& sig, std::size_t q);
Observable g2_qubits(const DimSignature& sig);
Observable population(const DimSignature& sig, std::string_view label);

/// Looks a name up in the registry; throws ConfigError for unknown names.
Observable observable(const DimSignature& sig, std::string_view name);
std::vector<Observable> observables(const DimSignature& sig, const std::vector<std::string>& names);

/// Columns of the evolve CSV, in order (time excluded).
const std::vector<std::string>& standard_trace_names();

/// |<target|psi>|^2 or <target|rho|target>; the target must be a ket.
double state_fidelity(const State& state, const State& target);

/// e^{i F t} applied to a lab-frame ket or density matrix, F diagonal (rad/ns).
State to_rotating_frame(const State& lab, const Eigen::VectorXd& frame, double t);

} // namespace cqed
