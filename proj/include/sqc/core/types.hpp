// Dense complex types shared by every module.
//
// Qubit convention: qubit 0 is the most significant bit of an amplitude
// index, so for n qubits the basis state |b_0 b_1 ... b_{n-1}> sits at index
// sum_q b_q * 2^(n-1-q).

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace sqc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad shapes, qubit indices, permutations, or other malformed arguments.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed (non-convergence, non-finite values, rank loss).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A requested dimension exceeds the configured cap.
class SizeError : public Error {
public:
    using Error::Error;
};

namespace tol {
inline constexpr double kNormalization = 1e-10;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = 1e-10;
/// Relative threshold below which a singular value counts as zero.
inline constexpr double kRank = 1e-9;
/// Candidates whose residual norm falls below this are skipped during
/// isometry completion.
inline constexpr double kCompletion = 1e-8;
}  // namespace tol

/// Largest row or column count any dense operator may reach (2^14).
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 14;

/// Qubit count of a power-of-two dimension, or -1 if dim is not one.
inline int qubits_for_dimension(std::size_t dim) {
    if (dim == 0 || !std::has_single_bit(dim)) {
        return -1;
    }
    return std::countr_zero(dim);
}

inline bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

/// Normalized pure state over num_qubits qubits.
class PureState {
public:
    /// Takes ownership of already-normalized amplitudes. Throws InvalidArgument
    /// if the length is not a power of two or the norm differs from 1 by more
    /// than 1e-10.
    explicit PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
        const int n = qubits_for_dimension(static_cast<std::size_t>(amplitudes_.size()));
        if (n < 0) {
            throw InvalidArgument("state length " + std::to_string(amplitudes_.size()) +
                                  " is not a power of two");
        }
        if (!all_finite(amplitudes_)) {
            throw InvalidArgument("state has non-finite amplitudes");
        }
        const double norm = amplitudes_.norm();
        if (std::abs(norm - 1.0) > tol::kNormalization) {
            throw InvalidArgument("state is not normalized (norm " + std::to_string(norm) + ")");
        }
        num_qubits_ = n;
    }

    /// Rescales v to unit norm. Throws InvalidArgument for a zero vector.
    static PureState normalized(const ComplexVector& v) {
        const double norm = v.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw InvalidArgument("cannot normalize a zero or non-finite vector");
        }
        return PureState(v / norm);
    }

    static PureState from_real(const RealVector& v) {
        return normalized(v.cast<Complex>());
    }

    static PureState basis(int num_qubits, std::size_t index) {
        const auto dim = std::size_t{1} << num_qubits;
        if (index >= dim) {
            throw InvalidArgument("basis index out of range");
        }
        ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return PureState(std::move(v));
    }

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dimension() const { return amplitudes_.size(); }
    const ComplexVector& amplitudes() const { return amplitudes_; }
    Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

private:
    ComplexVector amplitudes_;
    int num_qubits_ = 0;
};

/// Density operator over num_qubits qubits: Hermitian, unit trace, PSD.
class DensityMatrix {
public:
    /// Validates Hermiticity and trace (1e-10) and positive semidefiniteness
    /// (smallest eigenvalue >= -1e-10).
    explicit DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols()) {
            throw InvalidArgument("density matrix must be square");
        }
        const int n = qubits_for_dimension(static_cast<std::size_t>(entries_.rows()));
        if (n < 0) {
            throw InvalidArgument("density matrix dimension is not a power of two");
        }
        if (!all_finite(entries_)) {
            throw InvalidArgument("density matrix has non-finite entries");
        }
        const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
        if (herm > tol::kHermitian) {
            throw InvalidArgument("density matrix is not Hermitian (defect " +
                                  std::to_string(herm) + ")");
        }
        const Complex tr = entries_.trace();
        if (std::abs(tr - Complex(1.0, 0.0)) > tol::kTrace) {
            throw InvalidArgument("density matrix trace is " + std::to_string(tr.real()));
        }
        // Symmetrize so downstream eigen-solvers see an exactly Hermitian input.
        entries_ = (0.5 * (entries_ + entries_.adjoint())).eval();
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(entries_, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalError("eigenvalue check of density matrix failed");
        }
        if (es.eigenvalues().minCoeff() < -tol::kPsd) {
            throw InvalidArgument("density matrix is not positive semidefinite (min eigenvalue " +
                                  std::to_string(es.eigenvalues().minCoeff()) + ")");
        }
        num_qubits_ = n;
    }

    static DensityMatrix from_pure(const PureState& s) {
        return DensityMatrix(s.amplitudes() * s.amplitudes().adjoint());
    }

    int num_qubits() const { return num_qubits_; }
    Eigen::Index dimension() const { return entries_.rows(); }
    const ComplexMatrix& matrix() const { return entries_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

    double purity() const { return (entries_ * entries_).trace().real(); }

private:
    ComplexMatrix entries_;
    int num_qubits_ = 0;
};

}  // namespace sqc
