#include "cqed/observables.hpp"

#include <charconv>

#include "cqed/errors.hpp"
#include "cqed/model.hpp"

namespace cqed {

namespace {

Operator level_projector(const DimSignature& sig, std::size_t q, Index level) {
    if (q < 1 || q >= sig.slots()) throw ConfigError("no atom " + std::to_string(q));
    return embed(transition(sig[q], level, level), q, sig);
}

std::size_t parse_atom_suffix(std::string_view name, std::string_view prefix) {
    std::size_t q = 0;
    const char* first = name.data() + prefix.size();
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, q);
    if (ec != std::errc{} || ptr != last) throw ConfigError("unknown observable '" + std::string(name) + "'");
    return q;
}

} // namespace

Observable mean_photon(const DimSignature& sig) {
    const auto a = destroy(sig[0] - 1);
    return {"n_cav", embed(dagger(a) * a, 0, sig)};
}

Observable qubit_excitation(const DimSignature& sig, std::size_t q) {
    return {"exc_q" + std::to_string(q), level_projector(sig, q, 1)};
}

Observable leakage(const DimSignature& sig, std::size_t q) {
    if (q < 1 || q >= sig.slots()) throw ConfigError("no atom " + std::to_string(q));
    const std::string name = "leak_q" + std::to_string(q);
    if (sig[q] < 3) return {name, Operator::zero(sig)};
    return {name, level_projector(sig, q, 2)};
}

Observable g2_qubits(const DimSignature& sig) {
    if (sig.slots() < 3) throw ConfigError("g2 needs two atoms");
    return {"g2", level_projector(sig, 1, 1) * level_projector(sig, 2, 1)};
}

Observable population(const DimSignature& sig, std::string_view label) {
    const auto [n, levels] = parse_bare_label(label, sig.slots() - 1);
    if (n >= sig[0]) throw ConfigError("state label '" + std::string(label) + "' exceeds the Fock truncation");
    for (std::size_t q = 0; q < levels.size(); ++q) {
        if (static_cast<Index>(levels[q]) >= sig[q + 1]) {
            throw ConfigError("state label '" + std::string(label) + "' uses a level atom " + std::to_string(q + 1) +
                              " does not have");
        }
    }
    const Index k = bare_index(sig, n, levels);
    Operator::Matrix m = Operator::Matrix::Zero(sig.total(), sig.total());
    m(k, k) = 1.0;
    return {"pop_" + std::string(label), Operator(sig, std::move(m))};
}

Observable observable(const DimSignature& sig, std::string_view name) {
    if (name == "n_cav") return mean_photon(sig);
    if (name == "g2") return g2_qubits(sig);
    if (name.starts_with("exc_q")) return qubit_excitation(sig, parse_atom_suffix(name, "exc_q"));
    if (name.starts_with("leak_q")) return leakage(sig, parse_atom_suffix(name, "leak_q"));
    if (name.starts_with("pop_")) return population(sig, name.substr(4));
    throw ConfigError("unknown observable '" + std::string(name) + "'");
}

std::vector<Observable> observables(const DimSignature& sig, const std::vector<std::string>& names) {
    std::vector<Observable> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(observable(sig, n));
    return out;
}

const std::vector<std::string>& standard_trace_names() {
    static const std::vector<std::string> names{"n_cav",  "exc_q1", "exc_q2",  "leak_q1",
                                                "leak_q2", "g2",     "pop_1gg", "pop_0ee"};
    return names;
}

double state_fidelity(const State& state, const State& target) {
    require_same_signature(state.signature(), target.signature(), "state_fidelity");
    if (target.is_ket()) {
        const auto phi = target.data().col(0);
        if (state.is_ket()) return std::norm(phi.dot(state.data().col(0)));
        return phi.dot(state.data() * phi).real();
    }
    throw std::invalid_argument("state_fidelity: target must be a ket");
}

State to_rotating_frame(const State& lab, const Eigen::VectorXd& frame, double t) {
    if (frame.size() != lab.signature().total()) throw std::invalid_argument("to_rotating_frame: size mismatch");
    const Operator::Vector phase = (Operator::Scalar(0, 1) * t * frame.cast<Operator::Scalar>()).array().exp();
    if (lab.is_ket()) return State::ket(lab.signature(), phase.cwiseProduct(lab.vector()));
    Operator::Matrix rho = phase.asDiagonal() * lab.data() * phase.conjugate().asDiagonal();
    return State::density(lab.signature(), std::move(rho));
}

} // namespace cqed
