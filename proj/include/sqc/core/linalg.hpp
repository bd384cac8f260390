// Dense complex linear algebra: SVD, Hermitian eigendecomposition,
// Kronecker products and isometry completion.

#pragma once

#include "sqc/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace sqc {

struct SvdResult {
    ComplexMatrix u;     // rows x p, orthonormal columns
    RealVector sigma;    // p values, descending
    ComplexMatrix vdag;  // p x cols, orthonormal rows
};

struct EigResult {
    RealVector values;     // descending
    ComplexMatrix vectors; // column k pairs with values(k)
};

namespace detail {

/// Indices of v sorted by descending value; ties keep their original order.
inline std::vector<Eigen::Index> descending_order(const RealVector& v) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });
    return idx;
}

/// Gram-Schmidt extension of the first `filled` orthonormal columns of q to a
/// full orthonormal set, drawing candidates from the canonical basis in index
/// order. Two orthogonalization passes keep the result unitary to ~1e-15.
inline void extend_orthonormal(ComplexMatrix& q, Eigen::Index filled) {
    const Eigen::Index dim = q.rows();
    Eigen::Index next = filled;
    for (Eigen::Index e = 0; e < dim && next < q.cols(); ++e) {
        ComplexVector cand = ComplexVector::Zero(dim);
        cand(e) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < next; ++j) {
                cand -= q.col(j) * q.col(j).dot(cand);
            }
        }
        const double norm = cand.norm();
        if (norm < tol::kCompletion) {
            continue;
        }
        q.col(next++) = cand / norm;
    }
    if (next < q.cols()) {
        throw NumericalError("could not extend orthonormal set: input is rank deficient");
    }
}

/// One-sided (Hestenes) Jacobi SVD for rows >= cols.
inline SvdResult jacobi_svd_tall(const ComplexMatrix& m) {
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    ComplexMatrix w = m;
    ComplexMatrix v = ComplexMatrix::Identity(cols, cols);

    constexpr int kMaxSweeps = 80;
    const double eps = std::numeric_limits<double>::epsilon();
    const double threshold = eps * static_cast<double>(rows);
    // columns below this squared norm are rounding noise; rotating them
    // against each other never settles
    const double negligible = threshold * threshold * m.squaredNorm();
    bool converged = cols < 2;
    int sweep = 0;
    for (; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (Eigen::Index p = 0; p + 1 < cols; ++p) {
            for (Eigen::Index q = p + 1; q < cols; ++q) {
                const double alpha = w.col(p).squaredNorm();
                const double beta = w.col(q).squaredNorm();
                const Complex gamma = w.col(p).dot(w.col(q));  // w_p^H w_q
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= threshold * std::sqrt(alpha * beta) ||
                    std::min(alpha, beta) <= negligible) {
                    continue;
                }
                converged = false;
                const Complex phase = gamma / g;  // e^{i phi}
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const Complex sp = s * std::conj(phase);
                const Complex cp = c * std::conj(phase);
                for (Eigen::Index i = 0; i < rows; ++i) {
                    const Complex a = w(i, p);
                    const Complex b = w(i, q);
                    w(i, p) = c * a - sp * b;
                    w(i, q) = s * a + cp * b;
                }
                for (Eigen::Index i = 0; i < cols; ++i) {
                    const Complex a = v(i, p);
                    const Complex b = v(i, q);
                    v(i, p) = c * a - sp * b;
                    v(i, q) = s * a + cp * b;
                }
            }
        }
    }
    if (!converged) {
        throw NumericalError("Jacobi SVD did not converge after " + std::to_string(sweep) +
                             " sweeps");
    }

    RealVector norms(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        norms(j) = w.col(j).norm();
    }
    const auto order = descending_order(norms);

    SvdResult out;
    out.u = ComplexMatrix::Zero(rows, cols);
    out.sigma = RealVector::Zero(cols);
    ComplexMatrix vs(cols, cols);
    const double smax = cols > 0 ? norms(order[0]) : 0.0;
    Eigen::Index filled = 0;
    for (Eigen::Index k = 0; k < cols; ++k) {
        const Eigen::Index j = order[static_cast<std::size_t>(k)];
        out.sigma(k) = norms(j);
        vs.col(k) = v.col(j);
        // Columns with (numerically) vanishing norm carry no direction; they
        // are rebuilt from the canonical basis below.
        if (norms(j) > smax * 1e-14 && norms(j) > 0.0) {
            out.u.col(k) = w.col(j) / norms(j);
            filled = k + 1;
        }
    }
    if (filled < cols) {
        ComplexMatrix head = out.u.leftCols(filled);
        ComplexMatrix full(rows, cols);
        full.leftCols(filled) = head;
        extend_orthonormal(full, filled);
        out.u = full;
    }
    out.vdag = vs.adjoint();
    return out;
}

}  // namespace detail

/// Thin singular value decomposition m = u * diag(sigma) * vdag with
/// p = min(rows, cols) singular values sorted descending (ties keep column
/// order). Zero singular values get canonical-basis-completed left vectors.
inline SvdResult svd(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw InvalidArgument("svd of an empty matrix");
    }
    if (!all_finite(m)) {
        throw InvalidArgument("svd input has non-finite entries");
    }
    if (m.rows() >= m.cols()) {
        return detail::jacobi_svd_tall(m);
    }
    // m^H = u' s v'^H  =>  m = v' s u'^H
    SvdResult t = detail::jacobi_svd_tall(m.adjoint());
    SvdResult out;
    out.u = t.vdag.adjoint();
    out.sigma = std::move(t.sigma);
    out.vdag = t.u.adjoint();
    return out;
}

/// Numerical rank with the relative 1e-9 threshold.
inline Eigen::Index numerical_rank(const RealVector& sigma) {
    if (sigma.size() == 0) {
        return 0;
    }
    const double cutoff = tol::kRank * sigma.maxCoeff();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > 0.0 && sigma(i) >= cutoff) {
            ++r;
        }
    }
    return r;
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
/// Each eigenvector is phased so its largest-magnitude entry is real positive.
inline EigResult hermitian_eig(const ComplexMatrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw InvalidArgument("hermitian_eig needs a non-empty square matrix");
    }
    if (!all_finite(h)) {
        throw InvalidArgument("hermitian_eig input has non-finite entries");
    }
    const double defect = (h - h.adjoint()).norm();
    if (defect > 1e-8 * std::max(1.0, h.norm())) {
        throw InvalidArgument("matrix is not Hermitian (symmetry defect " +
                              std::to_string(defect) + ")");
    }
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigensolver failed");
    }
    const RealVector& vals = es.eigenvalues();
    const auto order = detail::descending_order(vals);
    EigResult out;
    out.values.resize(vals.size());
    out.vectors.resize(h.rows(), h.cols());
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        const Eigen::Index j = order[static_cast<std::size_t>(k)];
        out.values(k) = vals(j);
        ComplexVector vec = es.eigenvectors().col(j);
        Eigen::Index big = 0;
        vec.cwiseAbs().maxCoeff(&big);
        const Complex ph = vec(big) / std::abs(vec(big));
        out.vectors.col(k) = vec * std::conj(ph);
    }
    return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                          std::size_t max_dim = kMaxDimension) {
    const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
    if (rows > max_dim || cols > max_dim) {
        throw SizeError("Kronecker product of size " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " exceeds cap " + std::to_string(max_dim));
    }
    ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexVector kron_vector(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

/// Extends a matrix with orthonormal columns to a target_cols-wide matrix
/// with orthonormal columns (square and unitary when target_cols == rows).
/// The first columns are returned unchanged; extra columns are canonical
/// basis vectors orthogonalized in index order, skipping candidates whose
/// residual norm is below 1e-8.
inline ComplexMatrix complete_isometry(const ComplexMatrix& w, Eigen::Index target_cols) {
    if (w.rows() == 0 || w.cols() == 0) {
        throw InvalidArgument("complete_isometry of an empty matrix");
    }
    if (target_cols < w.cols() || target_cols > w.rows()) {
        throw InvalidArgument("complete_isometry target must lie in [cols, rows]");
    }
    const ComplexMatrix gram = w.adjoint() * w;
    const double defect = (gram - ComplexMatrix::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        throw NumericalError("complete_isometry input columns are not orthonormal (defect " +
                             std::to_string(defect) + ")");
    }
    ComplexMatrix out(w.rows(), target_cols);
    out.leftCols(w.cols()) = w;
    detail::extend_orthonormal(out, w.cols());
    return out;
}

}  // namespace sqc
