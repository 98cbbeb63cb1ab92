// dynamics.hpp - Schroedinger and Lindblad time evolution with sampled observables
//
// Hamiltonians and rates are in rad/ns, times in ns. Drive terms are
// assembled as A e^{-i(w t + phi)} + h.c. and evaluated at every stage time.

#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/model.hpp"
#include "cqed/observables.hpp"

namespace cqed {

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 2000.0;
    Index n_samples = 2001;

    void validate() const;
    [[nodiscard]] std::vector<double> times() const;
};

enum class Method { Dop853, FixedRk4 };

struct SolverOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    Method method = Method::Dop853;
    double fixed_step = 1e-3;                 // ns, FixedRk4 only
    double max_step = std::numeric_limits<double>::infinity();
    double norm_tolerance = 1e-8;             // |norm - 1| for kets
    double trace_tolerance = 1e-8;            // |tr rho - 1|
    double positivity_tolerance = 1e-8;       // min eigenvalue >= -tol
    double top_fock_limit = 1e-6;             // population of |n_max> that flags truncation
    bool keep_states = false;                 // store the state at every sample
};

struct SolverStats {
    long steps = 0;
    long rejected = 0;
    long rhs_evals = 0;
    double max_error_norm = 0.0;
    double max_norm_drift = 0.0;    // kets: max |<psi|psi> - 1| before renormalisation
    double max_trace_drift = 0.0;   // density matrices
    double min_eigenvalue = 0.0;    // density matrices
    double max_top_fock = 0.0;
    bool truncation_flag = false;   // max_top_fock exceeded top_fock_limit
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> traces;   // traces[k] belongs to names[k]
    State final_state = State::basis(DimSignature{1}, 0);
    std::vector<State> states;                  // filled when keep_states is set
    SolverStats stats;

    [[nodiscard]] bool has_trace(std::string_view name) const;
    [[nodiscard]] const std::vector<double>& trace(std::string_view name) const;
};

Trajectory evolve_schrodinger(const Operator& h, const std::vector<DriveTerm>& drives, const State& psi0,
                              const TimeGrid& grid, const std::vector<Observable>& observables,
                              const SolverOptions& options = {});

/// Kets are promoted to density matrices.
Trajectory evolve_lindblad(const Operator& h, const std::vector<DriveTerm>& drives,
                           const std::vector<CollapseChannel>& channels, const State& rho0, const TimeGrid& grid,
                           const std::vector<Observable>& observables, const SolverOptions& options = {});

/// e^{-iHt} from the eigendecomposition of a time-independent Hermitian H.
Operator propagator_expm(const Operator& h, double t);

/// Population of the top Fock level of slot 0.
double top_fock_population(const State& state);

} // namespace cqed
