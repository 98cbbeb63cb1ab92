#include "cqed/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "cqed/effective.hpp"
#include "cqed/errors.hpp"

namespace cqed {

namespace {

using Scalar = Operator::Scalar;

constexpr double golden = 0.6180339887498948482;
constexpr double sample_spacing_ns = 0.025;

// Amplitude <target|e^{-iHt}|initial> as sum_k w_k e^{-i E_k t}.
struct Transfer {
    Eigen::VectorXd energies;
    Eigen::VectorXcd weights;

    Transfer(const Operator& h, Index initial, Index target) {
        const auto spec = eig_herm(h);
        std::vector<Index> keep;
        for (Index k = 0; k < spec.values.size(); ++k) {
            const Scalar w = spec.vectors(target, k) * std::conj(spec.vectors(initial, k));
            if (std::abs(w) > 1e-14) keep.push_back(k);
        }
        energies.resize(static_cast<Index>(keep.size()));
        weights.resize(static_cast<Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) {
            const Index k = keep[j];
            energies(static_cast<Index>(j)) = spec.values(k);
            weights(static_cast<Index>(j)) = spec.vectors(target, k) * std::conj(spec.vectors(initial, k));
        }
    }

    [[nodiscard]] double probability(double t) const {
        Scalar amp = 0;
        for (Index k = 0; k < energies.size(); ++k) amp += weights(k) * std::polar(1.0, -energies(k) * t);
        return std::norm(amp);
    }
};

// Golden-section maximisation of f on [a, b] down to width tol; returns (x, f(x)).
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol, std::vector<ScanSample>* trail = nullptr) {
    double c = b - golden * (b - a), d = a + golden * (b - a);
    double fc = f(c), fd = f(d);
    if (trail) trail->insert(trail->end(), {{c, fc}, {d, fd}});
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - golden * (b - a);
            fc = f(c);
            if (trail) trail->push_back({c, fc});
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + golden * (b - a);
            fd = f(d);
            if (trail) trail->push_back({d, fd});
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

std::optional<double> analytic_window(const SystemSpec& spec) {
    try {
        const auto chi = analytic_chi(spec);
        if (!chi || *chi == 0.0) return std::nullopt;
        return 1.5 * 0.5 / std::abs(*chi);  // 1.5 pi / |2 pi chi|
    } catch (const SingularDetuning&) {
        return std::nullopt;
    }
}

Index label_index(const DimSignature& sig, std::string_view label) {
    const auto [n, levels] = parse_bare_label(label, sig.slots() - 1);
    if (n >= sig[0]) throw ConfigError("state '" + std::string(label) + "' exceeds the Fock truncation");
    return bare_index(sig, n, levels);
}

} // namespace

std::string_view to_string(Objective objective) {
    return objective == Objective::PeakTransfer ? "peak_transfer" : "min_gap";
}

Objective parse_objective(std::string_view text) {
    if (text == "peak_transfer" || text == "peak") return Objective::PeakTransfer;
    if (text == "min_gap" || text == "gap") return Objective::MinGap;
    throw ConfigError("unknown scan objective '" + std::string(text) + "' (peak_transfer, min_gap)");
}

std::pair<double, double> peak_transfer(const Operator& h, Index initial, Index target, double window_ns,
                                        Index samples) {
    if (!(window_ns > 0.0)) throw std::invalid_argument("peak_transfer: window must be positive");
    const Transfer tr(h, initial, target);
    const Index n = std::max<Index>({samples, static_cast<Index>(window_ns / sample_spacing_ns), 3});
    const double dt = window_ns / static_cast<double>(n - 1);

    // Phasors advanced by a fixed rotation per sample.
    Eigen::VectorXcd z = tr.weights;
    Eigen::VectorXcd step(tr.energies.size());
    for (Index k = 0; k < step.size(); ++k) step(k) = std::polar(1.0, -tr.energies(k) * dt);

    Index best = 0;
    double best_p = -1.0;
    for (Index j = 0; j < n; ++j) {
        const double p = std::norm(z.sum());
        if (p > best_p) {
            best_p = p;
            best = j;
        }
        z = z.cwiseProduct(step);
    }
    const double lo = std::max(0.0, (best - 1) * dt), hi = std::min(window_ns, (best + 1) * dt);
    auto [t, p] = golden_max([&](double x) { return tr.probability(x); }, lo, hi, 1e-6);
    const double p_grid = tr.probability(best * dt);
    if (p_grid > p) return {p_grid, best * dt};
    return {p, t};
}

double dressed_gap(const Operator& h, Index initial, Index target) {
    const auto spec = eig_herm(h);
    const Eigen::VectorXd weight =
        spec.vectors.row(initial).cwiseAbs2().transpose() + spec.vectors.row(target).cwiseAbs2().transpose();
    Index first = 0;
    weight.maxCoeff(&first);
    Eigen::VectorXd rest = weight;
    rest(first) = -1.0;
    Index second = 0;
    rest.maxCoeff(&second);
    if (weight(first) < 0.5 || weight(second) < 0.5) {
        std::ostringstream os;
        os << "ambiguous dressed-state identification: overlaps " << weight(first) << " and " << weight(second)
           << " with the bare pair (need >= 0.5)";
        throw ValidationError(os.str());
    }
    return std::abs(spec.values(first) - spec.values(second)) / two_pi;
}

unsigned scan_threads(unsigned requested) {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) cap = std::min(cap, static_cast<unsigned>(v));
    }
    return requested ? std::min(requested, cap) : cap;
}

ScanResult run_scan(const ScanProblem& problem, const ScanOptions& options) {
    if (!(options.hi > options.lo)) throw ConfigError("scan range must satisfy lo < hi");
    if (options.grid_points < 3) throw ConfigError("scan needs at least 3 grid points");
    if (!(options.resolution > 0.0)) throw ConfigError("scan resolution must be positive");
    const bool peak = options.objective == Objective::PeakTransfer;
    if (peak && !problem.window_ns) {
        throw ConfigError("peak_transfer scan needs an observation window (no analytic coupling for this model)");
    }

    ScanResult result;
    result.parameter = problem.parameter;
    result.objective = options.objective;
    result.coarse_points = options.grid_points;
    if (peak) result.window_ns = *problem.window_ns;

    // Internally maximise: peak probability, or minus the gap.
    auto score = [&](double x) {
        const Operator h = problem.hamiltonian(x);
        if (peak) return peak_transfer(h, problem.initial, problem.target, *problem.window_ns, options.window_samples).first;
        return -dressed_gap(h, problem.initial, problem.target);
    };

    const Index n = options.grid_points;
    std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] =
            options.lo + (options.hi - options.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }

    const unsigned workers = std::min<unsigned>(scan_threads(options.threads), static_cast<unsigned>(n));
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
        try {
            for (std::size_t i = w; i < xs.size(); i += workers) ys[i] = score(xs[i]);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    const auto it = std::max_element(ys.begin(), ys.end());
    const auto k = static_cast<std::size_t>(it - ys.begin());
    if (k == 0 || k + 1 == xs.size()) {
        std::ostringstream os;
        os << "no bracketing extremum in [" << options.lo << ", " << options.hi << "] GHz: the "
           << to_string(options.objective) << " optimum sits on the range boundary at " << xs[k];
        throw ValidationError(os.str());
    }

    std::vector<ScanSample> trail;
    for (std::size_t i = 0; i < xs.size(); ++i) trail.push_back({xs[i], ys[i]});
    const std::size_t coarse = trail.size();
    golden_max(score, xs[k - 1], xs[k + 1], options.resolution, &trail);
    result.refine_steps = static_cast<Index>(trail.size() - coarse);

    const auto best = std::max_element(trail.begin(), trail.end(),
                                       [](const ScanSample& a, const ScanSample& b) { return a.value < b.value; });
    result.best = *best;
    for (auto& s : trail) {
        if (!peak) s.value = -s.value;
    }
    if (!peak) result.best.value = -result.best.value;
    std::sort(trail.begin(), trail.end(), [](const ScanSample& a, const ScanSample& b) { return a.x < b.x; });
    result.samples = std::move(trail);

    if (peak) {
        const Operator h = problem.hamiltonian(result.best.x);
        result.time_of_peak_ns =
            peak_transfer(h, problem.initial, problem.target, *problem.window_ns, options.window_samples).second;
    }
    return result;
}

double scan_parameter(const SystemSpec& spec) {
    for (const auto& atom : spec.atoms) {
        if (!atom.drives.empty()) return atom.drives.front().frequency;
    }
    return spec.cavity.frequency;
}

SystemSpec apply_scan_value(const SystemSpec& spec, double x) {
    for (const auto& atom : spec.atoms) {
        if (!atom.drives.empty()) return with_drive_frequency(spec, x);
    }
    return with_cavity_frequency(spec, x);
}

ScanProblem full_scan_problem(const SystemSpec& spec, std::string_view initial, std::string_view target) {
    spec.validate();
    ScanProblem p;
    const DimSignature sig = spec.signature();
    p.initial = label_index(sig, initial);
    p.target = label_index(sig, target);
    p.window_ns = analytic_window(spec);

    const bool driven = std::any_of(spec.atoms.begin(), spec.atoms.end(),
                                    [](const AtomSpec& a) { return !a.drives.empty(); });
    if (driven) {
        if (!rotating_frame_hamiltonian(spec)) {
            throw ConfigError("drive frequency scan needs a rotating frame in which the driven model is static");
        }
        p.parameter = "omega_d";
        p.hamiltonian = [spec](double x) { return *rotating_frame_hamiltonian(with_drive_frequency(spec, x)); };
    } else {
        p.parameter = "omega_c";
        p.hamiltonian = [spec](double x) { return build_static_hamiltonian(with_cavity_frequency(spec, x)); };
    }
    return p;
}

ScanProblem effective_scan_problem(const SystemSpec& spec, std::string_view initial, std::string_view target) {
    if (classify(spec) == ModelFamily::DrivenLambdaTwoLevel) {
        throw ConfigError("the driven effective model has no cavity frequency to scan");
    }
    ScanProblem p;
    const DimSignature sig = effective_signature(spec);
    p.initial = label_index(sig, initial);
    p.target = label_index(sig, target);
    p.window_ns = analytic_window(spec);
    p.parameter = "omega_c";
    p.hamiltonian = [spec](double x) {
        EffectiveOptions opt;
        opt.cavity_frequency = x;
        return build_effective_hamiltonian(spec, opt);
    };
    return p;
}

double matching_estimate(const ScanProblem& problem, double x0) {
    return matching_guess(problem.hamiltonian, problem.initial, problem.target, x0);
}

} // namespace cqed
