#pragma once

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "cqed/config.hpp"
#include "cqed/model.hpp"

using namespace std::complex_literals;

namespace test {

using cqed::Index;
using cqed::Level;

inline constexpr double pi = 3.14159265358979323846;

/// Two Delta atoms with the circuit frequencies and couplings (GHz).
inline cqed::SystemSpec circuit_spec(double omega_c = 7.9655, Index n_max = 3) {
    cqed::SystemSpec spec;
    spec.cavity = {omega_c, n_max, 0.0};
    for (int q = 0; q < 2; ++q) {
        cqed::AtomSpec a;
        a.kind = cqed::AtomKind::Delta;
        a.level_frequencies = {{Level::e, 4.0}, {Level::i, 7.0}};
        a.couplings = {{{Level::g, Level::e}, 0.12}, {{Level::e, Level::i}, 0.18}, {{Level::g, Level::i}, 0.10}};
        spec.atoms.push_back(a);
    }
    return spec;
}

/// Lambda atom (g-i pump, e-i Stokes) plus a two-level atom.
inline cqed::SystemSpec lambda_spec(double omega_c = 7.97, double g_p = 0.1, double g_s = 0.18, double g_2 = 0.12,
                                    Index n_max = 3) {
    cqed::SystemSpec spec;
    spec.cavity = {omega_c, n_max, 0.0};
    cqed::AtomSpec l;
    l.kind = cqed::AtomKind::Lambda;
    l.level_frequencies = {{Level::e, 4.0}, {Level::i, 7.0}};
    l.couplings = {{{Level::g, Level::i}, g_p}, {{Level::e, Level::i}, g_s}};
    cqed::AtomSpec t;
    t.kind = cqed::AtomKind::TwoLevel;
    t.level_frequencies = {{Level::e, 4.0}};
    t.couplings = {{{Level::g, Level::e}, g_2}};
    spec.atoms = {l, t};
    return spec;
}

inline Eigen::MatrixXcd random_hermitian(Index n, std::mt19937& rng) {
    std::normal_distribution<double> d;
    Eigen::MatrixXcd m(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c) m(r, c) = {d(rng), d(rng)};
    return 0.5 * (m + m.adjoint());
}

inline Eigen::MatrixXcd random_unitary(Index n, std::mt19937& rng) {
    std::normal_distribution<double> d;
    Eigen::MatrixXcd m(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c) m(r, c) = {d(rng), d(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ();
}

} // namespace test
