#include "cqed/dynamics.hpp"

#include <sstream>

#include "cqed/errors.hpp"
#include "cqed/rk.hpp"

namespace cqed {

namespace {

using Scalar = Operator::Scalar;
using Vector = Operator::Vector;
using Matrix = Operator::Matrix;
using Sparse = Operator::SparseMatrix;
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr Scalar minus_i{0.0, -1.0};

/// Observable prepared for fast sampling: diagonal operators keep only their diagonal.
struct Probe {
    bool diagonal = false;
    Eigen::VectorXd diag;
    Matrix full;
};

std::vector<Probe> prepare(const std::vector<Observable>& obs, const DimSignature& sig) {
    std::vector<Probe> out;
    for (const auto& o : obs) {
        require_same_signature(o.op.signature(), sig, "observable");
        const Matrix& m = o.op.matrix();
        Probe p;
        Matrix off = m;
        off.diagonal().setZero();
        if (off.cwiseAbs().maxCoeff() == 0.0) {
            p.diagonal = true;
            p.diag = m.diagonal().real();
        } else {
            p.full = m;
        }
        out.push_back(std::move(p));
    }
    return out;
}

double measure(const Probe& p, const Vector& psi) {
    if (p.diagonal) return (p.diag.array() * psi.array().abs2()).sum();
    return psi.dot(p.full * psi).real();
}

double measure(const Probe& p, const RowMatrix& rho) {
    if (p.diagonal) return (p.diag.array() * rho.diagonal().real().array()).sum();
    return (rho.array() * p.full.transpose().array()).sum().real();
}

/// Index range [begin, end) of basis states whose photon number is n_max.
std::pair<Index, Index> top_block(const DimSignature& sig) {
    const Index block = sig.total() / sig[0];
    return {(sig[0] - 1) * block, sig.total()};
}

struct DriveOps {
    Sparse a, a_dag;
    double frequency, phase;
};

std::vector<DriveOps> prepare_drives(const std::vector<DriveTerm>& drives, const DimSignature& sig) {
    std::vector<DriveOps> out;
    for (const auto& d : drives) {
        require_same_signature(d.op.signature(), sig, "drive term");
        out.push_back({d.op.sparse(), dagger(d.op).sparse(), d.frequency, d.phase});
    }
    return out;
}

Trajectory make_trajectory(const TimeGrid& grid, const std::vector<Observable>& obs, State final_state) {
    Trajectory tr{grid.times(), {}, {}, std::move(final_state), {}, {}};
    for (const auto& o : obs) {
        tr.names.push_back(o.name);
        tr.traces.emplace_back(static_cast<std::size_t>(grid.n_samples), 0.0);
    }
    return tr;
}

template <typename State_, typename Rhs, typename Sample>
rk::Stats integrate(const SolverOptions& options, Rhs&& rhs, State_& y, const std::vector<double>& times,
                    Sample&& sample) {
    double t = times.front();
    sample(0, t, y);
    auto run = [&](auto& stepper) {
        for (std::size_t k = 1; k < times.size(); ++k) {
            stepper.advance(rhs, t, y, times[k]);
            sample(k, t, y);
        }
        return stepper.stats();
    };
    if (options.method == Method::FixedRk4) {
        rk::FixedRk4<State_> stepper(options.fixed_step);
        return run(stepper);
    }
    rk::Dop853<State_> stepper({options.rtol, options.atol}, options.max_step);
    return run(stepper);
}

void copy_stats(SolverStats& out, const rk::Stats& s) {
    out.steps = s.accepted;
    out.rejected = s.rejected;
    out.rhs_evals = s.rhs_evals;
    out.max_error_norm = s.max_error_norm;
}

} // namespace

void TimeGrid::validate() const {
    if (!(t_end > t_start)) throw ConfigError("time grid needs t_end > t_start");
    if (n_samples < 2) throw ConfigError("time grid needs at least 2 samples");
}

std::vector<double> TimeGrid::times() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(n_samples));
    const double step = (t_end - t_start) / static_cast<double>(n_samples - 1);
    for (Index k = 0; k < n_samples; ++k) out[static_cast<std::size_t>(k)] = t_start + step * static_cast<double>(k);
    out.back() = t_end;
    return out;
}

bool Trajectory::has_trace(std::string_view name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& Trajectory::trace(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("trajectory has no trace '" + std::string(name) + "'");
    return traces[static_cast<std::size_t>(it - names.begin())];
}

double top_fock_population(const State& state) {
    const auto& sig = state.signature();
    const auto [begin, end] = top_block(sig);
    if (state.is_ket()) return state.data().col(0).segment(begin, end - begin).squaredNorm();
    return state.data().diagonal().real().segment(begin, end - begin).sum();
}

Operator propagator_expm(const Operator& h, double t) {
    const auto spec = eig_herm(h);
    const Vector phases = (minus_i * t * spec.values.cast<Scalar>()).array().exp();
    return {h.signature(), spec.vectors * phases.asDiagonal() * spec.vectors.adjoint()};
}

Trajectory evolve_schrodinger(const Operator& h, const std::vector<DriveTerm>& drives, const State& psi0,
                              const TimeGrid& grid, const std::vector<Observable>& observables,
                              const SolverOptions& options) {
    if (!psi0.is_ket()) throw std::invalid_argument("evolve_schrodinger: initial state must be a ket");
    const auto& sig = psi0.signature();
    require_same_signature(h.signature(), sig, "evolve_schrodinger");
    if (!h.is_hermitian()) throw std::invalid_argument("evolve_schrodinger: Hamiltonian is not Hermitian");

    // Removing <H> only changes the global phase but lets the stepper take longer steps.
    const double e_ref = expectation(h, psi0).real();
    const Sparse hs = (h - e_ref * Operator::identity(sig)).sparse();
    const auto ops = prepare_drives(drives, sig);
    const auto probes = prepare(observables, sig);
    const auto [top_begin, top_end] = top_block(sig);
    const bool has_fock = sig[0] > 1;

    Vector work(sig.total());
    auto rhs = [&](double t, const Vector& y, Vector& dy) {
        dy.noalias() = hs * y;
        for (const auto& d : ops) {
            const Scalar c = std::polar(1.0, -(d.frequency * t + d.phase));
            work.noalias() = d.a * y;
            dy += c * work;
            work.noalias() = d.a_dag * y;
            dy += std::conj(c) * work;
        }
        dy *= minus_i;
    };

    Trajectory tr = make_trajectory(grid, observables, psi0);
    const double t0 = grid.t_start;
    auto restore = [&](double t, const Vector& y) -> Vector { return std::polar(1.0, -e_ref * (t - t0)) * y; };

    auto sample = [&](std::size_t k, double t, const Vector& y) {
        const double drift = std::abs(y.norm() - 1.0);
        tr.stats.max_norm_drift = std::max(tr.stats.max_norm_drift, drift);
        if (drift > options.norm_tolerance) {
            std::ostringstream os;
            os << "Schroedinger integration lost normalisation: |norm - 1| = " << drift << " at t = " << t
               << " ns (tolerance " << options.norm_tolerance << ", rtol " << options.rtol << ")";
            throw IntegrationError(os.str());
        }
        for (std::size_t j = 0; j < probes.size(); ++j) tr.traces[j][k] = measure(probes[j], y);
        if (has_fock) {
            tr.stats.max_top_fock = std::max(tr.stats.max_top_fock, y.segment(top_begin, top_end - top_begin).squaredNorm());
        }
        if (options.keep_states) tr.states.push_back(State::normalized_ket(sig, restore(t, y)));
    };

    Vector y = psi0.vector();
    const auto stats = integrate(options, rhs, y, tr.times, sample);
    copy_stats(tr.stats, stats);
    tr.stats.truncation_flag = tr.stats.max_top_fock > options.top_fock_limit;
    tr.final_state = State::normalized_ket(sig, restore(tr.times.back(), y));
    return tr;
}

Trajectory evolve_lindblad(const Operator& h, const std::vector<DriveTerm>& drives,
                           const std::vector<CollapseChannel>& channels, const State& rho0, const TimeGrid& grid,
                           const std::vector<Observable>& observables, const SolverOptions& options) {
    const auto& sig = rho0.signature();
    require_same_signature(h.signature(), sig, "evolve_lindblad");
    if (!h.is_hermitian()) throw std::invalid_argument("evolve_lindblad: Hamiltonian is not Hermitian");

    // d rho = -i H_nh rho + h.c. + sum rate L rho L^dag with H_nh = H - (i/2) sum rate L^dag L.
    Matrix h_nh = h.matrix();
    // Each jump keeps its nonzero entries; L rho L^dag is accumulated entrywise in O(nnz^2).
    struct Entry {
        Index row, col;
        Scalar value;
    };
    std::vector<std::vector<Entry>> jumps;
    for (const auto& ch : channels) {
        require_same_signature(ch.op.signature(), sig, "collapse channel");
        if (ch.rate < 0.0) throw std::invalid_argument("evolve_lindblad: negative rate");
        if (ch.rate == 0.0) continue;
        h_nh -= Scalar(0.0, 0.5 * ch.rate) * (ch.op.matrix().adjoint() * ch.op.matrix());
        std::vector<Entry> entries;
        const Sparse l = ch.op.sparse();
        const double amplitude = std::sqrt(ch.rate);
        for (Index r = 0; r < l.outerSize(); ++r) {
            for (Sparse::InnerIterator it(l, r); it; ++it) entries.push_back({it.row(), it.col(), amplitude * it.value()});
        }
        jumps.push_back(std::move(entries));
    }
    const Sparse hs = Operator(sig, h_nh).sparse();
    const auto ops = prepare_drives(drives, sig);
    const auto probes = prepare(observables, sig);
    const auto [top_begin, top_end] = top_block(sig);
    const bool has_fock = sig[0] > 1;
    const Index n = sig.total();

    RowMatrix m(n, n), b(n, n);
    auto rhs = [&](double t, const RowMatrix& rho, RowMatrix& drho) {
        m.noalias() = hs * rho;
        for (const auto& d : ops) {
            const Scalar f = std::polar(1.0, -(d.frequency * t + d.phase));
            b.noalias() = d.a * rho;
            m += f * b;
            b.noalias() = d.a_dag * rho;
            m += std::conj(f) * b;
        }
        m *= minus_i;
        drho = m + m.adjoint();
        for (const auto& entries : jumps) {
            for (const auto& p : entries) {
                for (const auto& q : entries) drho(p.row, q.row) += p.value * rho(p.col, q.col) * std::conj(q.value);
            }
        }
    };

    Trajectory tr = make_trajectory(grid, observables, rho0.to_density());
    tr.stats.min_eigenvalue = std::numeric_limits<double>::infinity();

    auto finish_state = [&](const RowMatrix& rho_sym) {
        const double trace = rho_sym.trace().real();
        StateTolerance tol;
        tol.min_eigenvalue = -options.positivity_tolerance;
        return State::density(sig, Matrix(rho_sym / trace), tol);
    };

    auto sample = [&](std::size_t k, double t, const RowMatrix& rho) {
        const RowMatrix sym = 0.5 * (rho + rho.adjoint());
        const double drift = std::abs(sym.trace().real() - 1.0);
        tr.stats.max_trace_drift = std::max(tr.stats.max_trace_drift, drift);
        Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(sym), Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        tr.stats.min_eigenvalue = std::min(tr.stats.min_eigenvalue, min_eig);
        if (drift > options.trace_tolerance || min_eig < -options.positivity_tolerance) {
            std::ostringstream os;
            os << "master equation integration left the state space at t = " << t << " ns: |tr rho - 1| = " << drift
               << ", min eigenvalue = " << min_eig << " (tolerances " << options.trace_tolerance << ", "
               << options.positivity_tolerance << ")";
            throw IntegrationError(os.str());
        }
        for (std::size_t j = 0; j < probes.size(); ++j) tr.traces[j][k] = measure(probes[j], sym);
        if (has_fock) {
            tr.stats.max_top_fock =
                std::max(tr.stats.max_top_fock, sym.diagonal().real().segment(top_begin, top_end - top_begin).sum());
        }
        if (options.keep_states) tr.states.push_back(finish_state(sym));
    };

    RowMatrix rho = rho0.density_matrix();
    const auto stats = integrate(options, rhs, rho, tr.times, sample);
    copy_stats(tr.stats, stats);
    tr.stats.truncation_flag = tr.stats.max_top_fock > options.top_fock_limit;
    tr.final_state = finish_state(0.5 * (rho + rho.adjoint()));
    return tr;
}

} // namespace cqed
