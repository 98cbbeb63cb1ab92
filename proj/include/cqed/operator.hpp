// operator.hpp - operators and states on tensor-product Hilbert spaces
//
// Every operator carries the dimension signature of the space it acts on.
// Slot 0 is by convention the truncated cavity Fock space, slots 1.. are
// atoms whose levels are stored in the order g, e, i (indices 0, 1, 2).
// Basis ordering is row-major: slot 0 is the most significant digit, so
// the flat index of |n, j, k> on dims {N, d1, d2} is (n * d1 + j) * d2 + k.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cqed {

using Index = Eigen::Index;

class DimSignature {
public:
    DimSignature() = default;

    explicit DimSignature(std::vector<Index> dims) : dims_(std::move(dims)) { check(); }
    DimSignature(std::initializer_list<Index> dims) : dims_(dims) { check(); }

    [[nodiscard]] const std::vector<Index>& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t slots() const noexcept { return dims_.size(); }
    [[nodiscard]] Index operator[](std::size_t slot) const { return dims_.at(slot); }

    [[nodiscard]] Index total() const noexcept {
        return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>{});
    }

    /// Flat basis index of the product state with the given per-slot levels.
    [[nodiscard]] Index flat_index(std::span<const Index> levels) const {
        if (levels.size() != dims_.size()) {
            throw std::invalid_argument("flat_index: expected " + std::to_string(dims_.size()) +
                                        " levels, got " + std::to_string(levels.size()));
        }
        Index flat = 0;
        for (std::size_t s = 0; s < dims_.size(); ++s) {
            if (levels[s] < 0 || levels[s] >= dims_[s]) {
                throw std::out_of_range("flat_index: level " + std::to_string(levels[s]) +
                                        " out of range for slot " + std::to_string(s));
            }
            flat = flat * dims_[s] + levels[s];
        }
        return flat;
    }

    [[nodiscard]] Index flat_index(std::initializer_list<Index> levels) const {
        return flat_index(std::span<const Index>(levels.begin(), levels.size()));
    }

    /// Inverse of flat_index.
    [[nodiscard]] std::vector<Index> levels_of(Index flat) const {
        if (flat < 0 || flat >= total()) throw std::out_of_range("levels_of: index out of range");
        std::vector<Index> levels(dims_.size());
        for (std::size_t s = dims_.size(); s-- > 0;) {
            levels[s] = flat % dims_[s];
            flat /= dims_[s];
        }
        return levels;
    }

    friend bool operator==(const DimSignature&, const DimSignature&) = default;

    [[nodiscard]] std::string to_string() const {
        std::string out = "[";
        for (std::size_t s = 0; s < dims_.size(); ++s) {
            if (s) out += ",";
            out += std::to_string(dims_[s]);
        }
        return out + "]";
    }

private:
    void check() const {
        if (dims_.empty()) throw std::invalid_argument("DimSignature: no slots");
        if (dims_[0] < 1) throw std::invalid_argument("DimSignature: slot 0 must have dimension >= 1");
        for (std::size_t s = 1; s < dims_.size(); ++s) {
            if (dims_[s] < 2) {
                throw std::invalid_argument("DimSignature: slot " + std::to_string(s) +
                                            " must have dimension >= 2");
            }
        }
    }

    std::vector<Index> dims_{1};
};

inline void require_same_signature(const DimSignature& a, const DimSignature& b, const char* what) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(what) + ": signature mismatch " + a.to_string() +
                                    " vs " + b.to_string());
    }
}

/// Complex square matrix on a tensor-product space. Dense storage is the
/// reference representation; sparse() gives a compressed copy for hot loops.
template <typename Real = double>
class BasicOperator {
public:
    using RealScalar = Real;
    using Scalar = std::complex<Real>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

    BasicOperator() : BasicOperator(DimSignature{1}, Matrix::Zero(1, 1)) {}

    BasicOperator(DimSignature sig, Matrix data) : sig_(std::move(sig)), data_(std::move(data)) {
        const Index n = sig_.total();
        if (data_.rows() != n || data_.cols() != n) {
            throw std::invalid_argument("BasicOperator: matrix is " + std::to_string(data_.rows()) + "x" +
                                        std::to_string(data_.cols()) + " but signature " +
                                        sig_.to_string() + " needs " + std::to_string(n));
        }
    }

    static BasicOperator identity(const DimSignature& sig) {
        return {sig, Matrix::Identity(sig.total(), sig.total())};
    }
    static BasicOperator zero(const DimSignature& sig) {
        return {sig, Matrix::Zero(sig.total(), sig.total())};
    }

    [[nodiscard]] const DimSignature& signature() const noexcept { return sig_; }
    [[nodiscard]] const Matrix& matrix() const noexcept { return data_; }
    [[nodiscard]] Index dim() const noexcept { return data_.rows(); }
    [[nodiscard]] Scalar operator()(Index r, Index c) const { return data_(r, c); }

    [[nodiscard]] SparseMatrix sparse() const {
        SparseMatrix out = data_.sparseView(Scalar(0), Real(0));
        out.makeCompressed();
        return out;
    }

    [[nodiscard]] Real max_abs() const { return data_.size() ? data_.cwiseAbs().maxCoeff() : Real(0); }

    /// max|A - A^dagger| <= rel_tol * max|A|
    [[nodiscard]] bool is_hermitian(Real rel_tol = Real(1e-12)) const {
        const Real scale = max_abs();
        if (scale == Real(0)) return true;
        return (data_ - data_.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
    }

    BasicOperator& operator+=(const BasicOperator& rhs) {
        require_same_signature(sig_, rhs.sig_, "operator+");
        data_ += rhs.data_;
        return *this;
    }
    BasicOperator& operator-=(const BasicOperator& rhs) {
        require_same_signature(sig_, rhs.sig_, "operator-");
        data_ -= rhs.data_;
        return *this;
    }
    BasicOperator& operator*=(Scalar s) {
        data_ *= s;
        return *this;
    }

    friend BasicOperator operator+(BasicOperator lhs, const BasicOperator& rhs) { return lhs += rhs; }
    friend BasicOperator operator-(BasicOperator lhs, const BasicOperator& rhs) { return lhs -= rhs; }
    friend BasicOperator operator-(BasicOperator op) { return op *= Scalar(-1); }
    friend BasicOperator operator*(Scalar s, BasicOperator op) { return op *= s; }
    friend BasicOperator operator*(BasicOperator op, Scalar s) { return op *= s; }
    friend BasicOperator operator*(Real s, BasicOperator op) { return op *= Scalar(s); }
    friend BasicOperator operator*(BasicOperator op, Real s) { return op *= Scalar(s); }

    friend BasicOperator operator*(const BasicOperator& lhs, const BasicOperator& rhs) {
        require_same_signature(lhs.sig_, rhs.sig_, "operator*");
        return {lhs.sig_, lhs.data_ * rhs.data_};
    }

private:
    DimSignature sig_;
    Matrix data_;
};

using Operator = BasicOperator<double>;

// ------------------------------ single-slot builders ------------------------

/// Cavity lowering operator on n_max + 1 Fock states: a|n> = sqrt(n)|n-1>.
template <typename Real = double>
BasicOperator<Real> destroy(Index n_max) {
    if (n_max < 0) throw std::invalid_argument("destroy: n_max must be >= 0");
    using Op = BasicOperator<Real>;
    typename Op::Matrix m = Op::Matrix::Zero(n_max + 1, n_max + 1);
    for (Index n = 1; n <= n_max; ++n) m(n - 1, n) = std::sqrt(static_cast<Real>(n));
    return {DimSignature{n_max + 1}, std::move(m)};
}

template <typename Real = double>
BasicOperator<Real> create(Index n_max) {
    auto a = destroy<Real>(n_max);
    return {a.signature(), a.matrix().adjoint()};
}

/// |j><k| on a level_count-dimensional space.
template <typename Real = double>
BasicOperator<Real> transition(Index level_count, Index j, Index k) {
    if (level_count < 1) throw std::invalid_argument("transition: level_count must be >= 1");
    if (j < 0 || j >= level_count || k < 0 || k >= level_count) {
        throw std::out_of_range("transition: |" + std::to_string(j) + "><" + std::to_string(k) +
                                "| outside " + std::to_string(level_count) + " levels");
    }
    using Op = BasicOperator<Real>;
    typename Op::Matrix m = Op::Matrix::Zero(level_count, level_count);
    m(j, k) = 1;
    return {DimSignature{level_count}, std::move(m)};
}

/// I (x) ... (x) op (x) ... (x) I with op placed in `slot`.
template <typename Real>
BasicOperator<Real> embed(const BasicOperator<Real>& op, std::size_t slot, const DimSignature& sig) {
    using Op = BasicOperator<Real>;
    if (slot >= sig.slots()) throw std::out_of_range("embed: slot out of range");
    if (op.dim() != sig[slot]) {
        throw std::invalid_argument("embed: operator dimension " + std::to_string(op.dim()) +
                                    " does not match slot " + std::to_string(slot) + " of " +
                                    sig.to_string());
    }
    Index before = 1, after = 1;
    for (std::size_t s = 0; s < slot; ++s) before *= sig[s];
    for (std::size_t s = slot + 1; s < sig.slots(); ++s) after *= sig[s];
    typename Op::Matrix left = Op::Matrix::Identity(before, before);
    typename Op::Matrix right = Op::Matrix::Identity(after, after);
    typename Op::Matrix inner = Eigen::kroneckerProduct(op.matrix(), right).eval();
    return {sig, Eigen::kroneckerProduct(left, inner).eval()};
}

// ------------------------------ algebra -------------------------------------

template <typename Real>
BasicOperator<Real> dagger(const BasicOperator<Real>& a) {
    return {a.signature(), a.matrix().adjoint()};
}

template <typename Real>
BasicOperator<Real> commutator(const BasicOperator<Real>& a, const BasicOperator<Real>& b) {
    require_same_signature(a.signature(), b.signature(), "commutator");
    return {a.signature(), a.matrix() * b.matrix() - b.matrix() * a.matrix()};
}

template <typename Real>
Real frobenius_norm(const BasicOperator<Real>& a) {
    return a.matrix().norm();
}

// ------------------------------ states --------------------------------------

enum class StateKind { Ket, DensityMatrix };

struct StateTolerance {
    double norm = 1e-10;     // |<psi|psi> - 1| and |tr rho - 1|
    double hermitian = 1e-10;
    double min_eigenvalue = -1e-8;
};

/// Pure ket or density matrix. Construction validates the physical invariants.
template <typename Real = double>
class BasicState {
public:
    using Scalar = std::complex<Real>;
    using Matrix = typename BasicOperator<Real>::Matrix;
    using Vector = typename BasicOperator<Real>::Vector;

    static BasicState ket(DimSignature sig, Vector psi, const StateTolerance& tol = {}) {
        if (psi.size() != sig.total()) throw std::invalid_argument("ket: length does not match signature");
        const Real norm = psi.norm();
        if (std::abs(norm - Real(1)) > tol.norm) {
            throw std::invalid_argument("ket: norm " + std::to_string(norm) + " differs from 1");
        }
        BasicState s;
        s.sig_ = std::move(sig);
        s.kind_ = StateKind::Ket;
        s.data_ = std::move(psi);
        return s;
    }

    /// Ket from an unnormalised vector.
    static BasicState normalized_ket(DimSignature sig, const Vector& psi) {
        const Real norm = psi.norm();
        if (norm == Real(0)) throw std::invalid_argument("normalized_ket: zero vector");
        return ket(std::move(sig), psi / norm);
    }

    static BasicState density(DimSignature sig, Matrix rho, const StateTolerance& tol = {}) {
        const Index n = sig.total();
        if (rho.rows() != n || rho.cols() != n) {
            throw std::invalid_argument("density: matrix does not match signature");
        }
        const Scalar tr = rho.trace();
        if (std::abs(tr - Scalar(1)) > tol.norm) {
            throw std::invalid_argument("density: trace " + std::to_string(tr.real()) + " differs from 1");
        }
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol.hermitian) {
            throw std::invalid_argument("density: matrix is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < tol.min_eigenvalue) {
            throw std::invalid_argument("density: negative eigenvalue " +
                                        std::to_string(es.eigenvalues().minCoeff()));
        }
        BasicState s;
        s.sig_ = std::move(sig);
        s.kind_ = StateKind::DensityMatrix;
        s.data_ = std::move(rho);
        return s;
    }

    static BasicState basis(DimSignature sig, Index flat) {
        Vector v = Vector::Zero(sig.total());
        if (flat < 0 || flat >= v.size()) throw std::out_of_range("basis: index out of range");
        v(flat) = 1;
        return ket(std::move(sig), std::move(v));
    }

    [[nodiscard]] const DimSignature& signature() const noexcept { return sig_; }
    [[nodiscard]] StateKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_ket() const noexcept { return kind_ == StateKind::Ket; }

    /// Column vector for kets, full matrix for density matrices.
    [[nodiscard]] const Matrix& data() const noexcept { return data_; }

    [[nodiscard]] Vector vector() const {
        if (!is_ket()) throw std::logic_error("vector: state is a density matrix");
        return data_.col(0);
    }

    [[nodiscard]] Matrix density_matrix() const {
        if (is_ket()) return data_.col(0) * data_.col(0).adjoint();
        return data_;
    }

    [[nodiscard]] BasicState to_density() const {
        if (!is_ket()) return *this;
        BasicState s;
        s.sig_ = sig_;
        s.kind_ = StateKind::DensityMatrix;
        s.data_ = density_matrix();
        return s;
    }

private:
    BasicState() = default;

    DimSignature sig_;
    StateKind kind_ = StateKind::Ket;
    Matrix data_;
};

using State = BasicState<double>;

/// <psi|O|psi> for kets, tr(rho O) for density matrices.
template <typename Real>
std::complex<Real> expectation(const BasicOperator<Real>& op, const BasicState<Real>& state) {
    require_same_signature(op.signature(), state.signature(), "expectation");
    if (state.is_ket()) {
        const auto psi = state.data().col(0);
        return psi.dot(op.matrix() * psi);
    }
    return (state.data() * op.matrix()).trace();
}

// ------------------------------ spectra -------------------------------------

template <typename Real = double>
struct Spectrum {
    Eigen::Matrix<Real, Eigen::Dynamic, 1> values;            // ascending
    typename BasicOperator<Real>::Matrix vectors;             // columns
};

template <typename Real>
Spectrum<Real> eig_herm(const BasicOperator<Real>& op, Real rel_tol = Real(1e-10)) {
    if (!op.is_hermitian(rel_tol)) throw std::invalid_argument("eig_herm: operator is not Hermitian");
    using Matrix = typename BasicOperator<Real>::Matrix;
    const Matrix sym = (op.matrix() + op.matrix().adjoint()) * Real(0.5);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) throw std::runtime_error("eig_herm: decomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

} // namespace cqed
