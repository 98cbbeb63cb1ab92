// rk.hpp - explicit Runge-Kutta integrators for Eigen-valued ODEs
//
// Dop853 is the adaptive 8th-order Dormand-Prince pair with the combined
// 5th/3rd-order error estimator of Hairer & Wanner. FixedRk4 is the classic
// fixed-step method kept as a debugging reference.
//
// State may be any Eigen dense type (vector or matrix, real or complex).
// The right-hand side is called as rhs(t, y, dydt) and must fully
// overwrite dydt.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "cqed/errors.hpp"

namespace cqed::rk {

using Index = Eigen::Index;

struct Tolerance {
    double rtol = 1e-9;
    double atol = 1e-12;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
    double max_error_norm = 0.0;   // largest accepted scaled error estimate (<= 1)
    double min_step = std::numeric_limits<double>::infinity();
    double max_step = 0.0;
};

namespace detail {

// Dormand-Prince 8(5,3) tableau, 12 stages plus the FSAL evaluation.
struct Dop853Tableau {
    static constexpr int stages = 12;
    static constexpr std::array<double, 12> c{
        0.0,
        0.526001519587677318785587544488e-01,
        0.789002279381515978178381316732e-01,
        0.118350341907227396726757197510,
        0.281649658092772603273242802490,
        0.333333333333333333333333333333,
        0.25,
        0.307692307692307692307692307692,
        0.651282051282051282051282051282,
        0.6,
        0.857142857142857142857142857142,
        1.0};

    static constexpr std::array<std::array<double, 12>, 13> a{{
        {},
        {5.26001519587677318785587544488e-2},
        {1.97250569845378994544595329183e-2, 5.91751709536136983633785987549e-2},
        {2.95875854768068491816892993775e-2, 0.0, 8.87627564304205475450678981324e-2},
        {2.41365134159266685502369798665e-1, 0.0, -8.84549479328286085344864962717e-1,
         9.24834003261792003115737966543e-1},
        {3.7037037037037037037037037037e-2, 0.0, 0.0, 1.70828608729473871279604482173e-1,
         1.25467687566822425016691814123e-1},
        {3.7109375e-2, 0.0, 0.0, 1.70252211019544039314978060272e-1, 6.02165389804559606850219397283e-2,
         -1.7578125e-2},
        {3.70920001185047927108779319836e-2, 0.0, 0.0, 1.70383925712239993810214054705e-1,
         1.07262030446373284651809199168e-1, -1.53194377486244017527936158236e-2,
         8.27378916381402288758473766002e-3},
        {6.24110958716075717114429577812e-1, 0.0, 0.0, -3.36089262944694129406857109825,
         -8.68219346841726006818189891453e-1, 2.75920996994467083049415600797e1,
         2.01540675504778934086186788979e1, -4.34898841810699588477366255144e1},
        {4.77662536438264365890433908527e-1, 0.0, 0.0, -2.48811461997166764192642586468,
         -5.90290826836842996371446475743e-1, 2.12300514481811942347288949897e1,
         1.52792336328824235832596922938e1, -3.32882109689848629194453265587e1,
         -2.03312017085086261358222928593e-2},
        {-9.3714243008598732571704021658e-1, 0.0, 0.0, 5.18637242884406370830023853209,
         1.09143734899672957818500254654, -8.14978701074692612513997267357,
         -1.85200656599969598641566180701e1, 2.27394870993505042818970056734e1,
         2.49360555267965238987089396762, -3.0467644718982195003823669022},
        {2.27331014751653820792359768449, 0.0, 0.0, -1.05344954667372501984066689879e1,
         -2.00087205822486249909675718444, -1.79589318631187989172765950534e1,
         2.79488845294199600508499808837e1, -2.85899827713502369474065508674,
         -8.87285693353062954433549289258, 1.23605671757943030647266201528e1,
         6.43392746015763530355970484046e-1},
        // weights of the 8th-order solution
        {5.42937341165687622380535766363e-2, 0.0, 0.0, 0.0, 0.0, 4.45031289275240888144113950566,
         1.89151789931450038304281599044, -5.8012039600105847814672114227,
         3.1116436695781989440891606237e-1, -1.52160949662516078556178806805e-1,
         2.01365400804030348374776537501e-1, 4.47106157277725905176885569043e-2},
    }};

    static constexpr const std::array<double, 12>& b = a[12];

    // b minus the embedded 3rd-order weights
    static constexpr std::array<double, 12> e3{
        5.42937341165687622380535766363e-2 - 0.244094488188976377952755905512,
        0.0,
        0.0,
        0.0,
        0.0,
        4.45031289275240888144113950566,
        1.89151789931450038304281599044,
        -5.8012039600105847814672114227,
        3.1116436695781989440891606237e-1 - 0.733846688281611857341361741547,
        -1.52160949662516078556178806805e-1,
        2.01365400804030348374776537501e-1,
        4.47106157277725905176885569043e-2 - 0.220588235294117647058823529412e-1};

    static constexpr std::array<double, 12> e5{
        0.1312004499419488073250102996e-1, 0.0, 0.0, 0.0, 0.0, -0.1225156446376204440720569753e+1,
        -0.4957589496572501915214079952, 0.1664377182454986536961530415e+1,
        -0.3503288487499736816886487290, 0.3341791187130174790297318841,
        0.8192320648511571246570742613e-1, -0.2235530786388629525884427845e-1};
};

} // namespace detail

/// Adaptive DOP853 stepper. Holds its work buffers, so one instance per
/// integration; not thread-safe, but cheap to construct.
template <typename State>
class Dop853 {
public:
    using T = detail::Dop853Tableau;

    explicit Dop853(Tolerance tol = {}, double max_step = std::numeric_limits<double>::infinity())
        : tol_(tol), max_step_(max_step) {}

    /// Advance y from t to t_end. The last step is clipped so that t lands
    /// exactly on t_end. Step size carries over between calls.
    template <typename Rhs>
    void advance(Rhs&& rhs, double& t, State& y, double t_end) {
        if (t_end == t) return;
        const double dir = t_end > t ? 1.0 : -1.0;
        if (!fsal_valid_) {
            k_[0].resizeLike(y);
            rhs(t, y, k_[0]);
            ++stats_.rhs_evals;
            fsal_valid_ = true;
        }
        if (h_ == 0.0) h_ = initial_step(rhs, t, y, dir);

        while (dir * (t_end - t) > 0) {
            double h = std::min(std::abs(h_), max_step_);
            bool last = false;
            if (h >= std::abs(t_end - t)) {
                h = std::abs(t_end - t);
                last = true;
            }
            const double min_h = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
            if (h < min_h) throw IntegrationError("Dop853: step size underflow at t = " + std::to_string(t));

            const double hs = dir * h;
            const double err = attempt(rhs, t, y, hs);
            if (err < 1.0) {
                y.swap(y_new_);
                k_[0].swap(k_new_);
                t = last ? t_end : t + hs;
                ++stats_.accepted;
                stats_.max_error_norm = std::max(stats_.max_error_norm, err);
                stats_.min_step = std::min(stats_.min_step, h);
                stats_.max_step = std::max(stats_.max_step, h);
                const double factor =
                    err == 0.0 ? max_factor : std::min(max_factor, safety * std::pow(err, -1.0 / 8.0));
                // Keep the unclipped step for the next call when we only shortened to hit t_end.
                if (!last || h >= std::abs(h_)) h_ = dir * h * factor;
            } else {
                ++stats_.rejected;
                h_ = dir * h * std::max(min_factor, safety * std::pow(err, -1.0 / 8.0));
            }
            if (stats_.accepted + stats_.rejected > max_attempts) {
                throw IntegrationError("Dop853: step budget exhausted at t = " + std::to_string(t));
            }
        }
    }

    /// The right-hand side changed discontinuously (or y was modified externally).
    void reset_fsal() noexcept { fsal_valid_ = false; }

    [[nodiscard]] const Stats& stats() const noexcept { return stats_; }

private:
    static constexpr double safety = 0.9;
    static constexpr double min_factor = 0.2;
    static constexpr double max_factor = 10.0;
    static constexpr long max_attempts = 200'000'000;

    // Views of a state as a flat array of reals, so that the stage sums
    // vectorise (all tableau coefficients are real).
    static auto flat(State& s) {
        using Real = typename Eigen::NumTraits<typename State::Scalar>::Real;
        constexpr Index width = Eigen::NumTraits<typename State::Scalar>::IsComplex ? 2 : 1;
        return Eigen::Map<Eigen::Array<Real, Eigen::Dynamic, 1>>(reinterpret_cast<Real*>(s.data()), s.size() * width);
    }
    static auto flat(const State& s) {
        using Real = typename Eigen::NumTraits<typename State::Scalar>::Real;
        constexpr Index width = Eigen::NumTraits<typename State::Scalar>::IsComplex ? 2 : 1;
        return Eigen::Map<const Eigen::Array<Real, Eigen::Dynamic, 1>>(reinterpret_cast<const Real*>(s.data()),
                                                                       s.size() * width);
    }

    template <typename Rhs>
    double attempt(Rhs& rhs, double t, const State& y, double h) {
        for (int s = 1; s < T::stages; ++s) {
            stage_ = y;
            auto st = flat(stage_);
            for (int j = 0; j < s; ++j) {
                if (T::a[s][j] != 0.0) st += (h * T::a[s][j]) * flat(k_[j]);
            }
            k_[s].resizeLike(y);
            rhs(t + T::c[s] * h, stage_, k_[s]);
        }
        y_new_ = y;
        err5_.setZero(y.rows(), y.cols());
        err3_.setZero(y.rows(), y.cols());
        auto yn = flat(y_new_);
        auto e5 = flat(err5_);
        auto e3 = flat(err3_);
        for (int s = 0; s < T::stages; ++s) {
            const auto k = flat(k_[s]);
            if (T::b[s] != 0.0) yn += (h * T::b[s]) * k;
            if (T::e5[s] != 0.0) e5 += T::e5[s] * k;
            if (T::e3[s] != 0.0) e3 += T::e3[s] * k;
        }
        k_new_.resizeLike(y);
        rhs(t + h, y_new_, k_new_);
        stats_.rhs_evals += T::stages;

        const auto scale = (tol_.atol + tol_.rtol * y.array().abs().max(y_new_.array().abs())).eval();
        const double n5 = (err5_.array().abs2() / scale.square()).sum();
        const double n3 = (err3_.array().abs2() / scale.square()).sum();
        if (n5 == 0.0 && n3 == 0.0) return 0.0;
        const double denom = n5 + 0.01 * n3;
        return std::abs(h) * n5 / std::sqrt(denom * static_cast<double>(y.size()));
    }

    template <typename Rhs>
    double initial_step(Rhs& rhs, double t, const State& y, double dir) {
        const auto scale = (tol_.atol + tol_.rtol * y.array().abs()).eval();
        const double d0 = std::sqrt((y.array().abs() / scale).square().mean());
        const double d1 = std::sqrt((k_[0].array().abs() / scale).square().mean());
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, max_step_);
        State y1 = y + (dir * h0) * k_[0];
        State f1;
        f1.resizeLike(y);
        rhs(t + dir * h0, y1, f1);
        ++stats_.rhs_evals;
        const double d2 = std::sqrt(((f1 - k_[0]).array().abs() / scale).square().mean()) / h0;
        const double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                       : std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
        return dir * std::min({100.0 * h0, h1, max_step_});
    }

    Tolerance tol_;
    double max_step_;
    double h_ = 0.0;
    bool fsal_valid_ = false;
    std::array<State, T::stages> k_;
    State k_new_, stage_, y_new_, err5_, err3_;
    Stats stats_;
};

/// Classic fixed-step RK4. Steps are shortened to land on t_end.
template <typename State>
class FixedRk4 {
public:
    explicit FixedRk4(double step) : step_(step) {
        if (!(step > 0)) throw std::invalid_argument("FixedRk4: step must be positive");
    }

    template <typename Rhs>
    void advance(Rhs&& rhs, double& t, State& y, double t_end) {
        const double dir = t_end > t ? 1.0 : -1.0;
        while (dir * (t_end - t) > 0) {
            const double h = dir * std::min(step_, std::abs(t_end - t));
            k1_.resizeLike(y);
            k2_.resizeLike(y);
            k3_.resizeLike(y);
            k4_.resizeLike(y);
            rhs(t, y, k1_);
            tmp_ = y + (0.5 * h) * k1_;
            rhs(t + 0.5 * h, tmp_, k2_);
            tmp_ = y + (0.5 * h) * k2_;
            rhs(t + 0.5 * h, tmp_, k3_);
            tmp_ = y + h * k3_;
            rhs(t + h, tmp_, k4_);
            y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
            t = std::abs(t_end - t) <= std::abs(h) ? t_end : t + h;
            ++stats_.accepted;
            stats_.rhs_evals += 4;
        }
    }

    void reset_fsal() noexcept {}
    [[nodiscard]] const Stats& stats() const noexcept { return stats_; }

private:
    double step_;
    State k1_, k2_, k3_, k4_, tmp_;
    Stats stats_;
};

} // namespace cqed::rk
