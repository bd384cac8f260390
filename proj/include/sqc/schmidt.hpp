// Schmidt decomposition of pure states across arbitrary qubit bipartitions,
// low-rank truncation and exhaustive minimal-bond-dimension search.

#pragma once

#include "sqc/core/linalg.hpp"
#include "sqc/core/qubits.hpp"
#include "sqc/core/types.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace sqc {

/// Split of the register into block A (latent) and block B (trash). Each
/// block lists qubit indices in the order they take inside the block, so
/// block_a[0] is the most significant qubit of the A-register index.
struct Bipartition {
    std::vector<int> block_a;
    std::vector<int> block_b;

    int num_qubits() const { return static_cast<int>(block_a.size() + block_b.size()); }
    int n_a() const { return static_cast<int>(block_a.size()); }
    int n_b() const { return static_cast<int>(block_b.size()); }

    /// Throws InvalidArgument unless the blocks are nonempty, disjoint and
    /// cover 0..n-1 (n = num_qubits, or the given count when >= 0).
    void validate(int expected_qubits = -1) const {
        if (block_a.empty() || block_b.empty()) {
            throw InvalidArgument("bipartition blocks must both be nonempty");
        }
        const int n = num_qubits();
        if (expected_qubits >= 0 && n != expected_qubits) {
            throw InvalidArgument("bipartition covers " + std::to_string(n) + " qubits, state has " +
                                  std::to_string(expected_qubits));
        }
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (const auto* block : {&block_a, &block_b}) {
            for (int q : *block) {
                if (q < 0 || q >= n || seen[static_cast<std::size_t>(q)]) {
                    throw InvalidArgument("bipartition blocks must be disjoint and cover 0..n-1");
                }
                seen[static_cast<std::size_t>(q)] = true;
            }
        }
    }

    /// Permutation that moves block A to the most significant positions
    /// followed by block B.
    QubitPermutation to_canonical() const {
        QubitPermutation perm(static_cast<std::size_t>(num_qubits()));
        int pos = 0;
        for (int q : block_a) perm[static_cast<std::size_t>(q)] = pos++;
        for (int q : block_b) perm[static_cast<std::size_t>(q)] = pos++;
        return perm;
    }

    /// Copy with n_A >= n_B, swapping the blocks if needed; .second records
    /// whether a swap happened.
    std::pair<Bipartition, bool> canonicalized() const {
        if (n_a() >= n_b()) {
            return {*this, false};
        }
        return {Bipartition{block_b, block_a}, true};
    }

    /// Leading n - n_b qubits in block A, trailing n_b qubits in block B.
    static Bipartition trailing(int num_qubits, int n_b) {
        if (n_b < 1 || n_b >= num_qubits) {
            throw InvalidArgument("trash block size must lie in [1, n-1]");
        }
        Bipartition p;
        for (int q = 0; q < num_qubits; ++q) {
            (q < num_qubits - n_b ? p.block_a : p.block_b).push_back(q);
        }
        return p;
    }

    /// Block B as given, block A the ascending complement.
    static Bipartition from_trash(int num_qubits, std::vector<int> block_b) {
        Bipartition p;
        std::vector<bool> in_b(static_cast<std::size_t>(num_qubits), false);
        for (int q : block_b) {
            if (q < 0 || q >= num_qubits) {
                throw InvalidArgument("trash qubit " + std::to_string(q) + " out of range");
            }
            in_b[static_cast<std::size_t>(q)] = true;
        }
        for (int q = 0; q < num_qubits; ++q) {
            if (!in_b[static_cast<std::size_t>(q)]) p.block_a.push_back(q);
        }
        p.block_b = std::move(block_b);
        p.validate(num_qubits);
        return p;
    }

    friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

struct SchmidtForm {
    ComplexMatrix u;     // 2^{n_A} x 2^m, Schmidt vectors of block A
    ComplexMatrix v;     // 2^{n_B} x 2^m, right singular vectors; the B-side
                         // Schmidt vectors are the columns of v.conjugate()
    RealVector lambdas;  // 2^m coefficients, descending
    int rank = 0;        // number of nonzero coefficients
    int measure = 0;     // ceil(log2(rank))
    Bipartition bipartition;

    Eigen::Index padded_width() const { return lambdas.size(); }
};

/// ceil(log2(k)) for k >= 1.
inline int schmidt_measure(int k) {
    if (k < 1) {
        throw InvalidArgument("Schmidt rank must be positive");
    }
    int m = 0;
    while ((1 << m) < k) ++m;
    return m;
}

/// 2^{n_A} x 2^{n_B} matrix whose (a, b) entry is the amplitude of the basis
/// state whose block-A bits spell a and block-B bits spell b.
inline ComplexMatrix reshape_state(const PureState& state, const Bipartition& part) {
    part.validate(state.num_qubits());
    const ComplexVector permuted = permute_amplitudes(state.amplitudes(), part.to_canonical());
    const Eigen::Index rows = Eigen::Index{1} << part.n_a();
    const Eigen::Index cols = Eigen::Index{1} << part.n_b();
    ComplexMatrix m(rows, cols);
    for (Eigen::Index a = 0; a < rows; ++a) {
        for (Eigen::Index b = 0; b < cols; ++b) {
            m(a, b) = permuted(a * cols + b);
        }
    }
    return m;
}

/// Inverse of reshape_state.
inline PureState unreshape_state(const ComplexMatrix& m, const Bipartition& part) {
    part.validate();
    if (m.rows() != (Eigen::Index{1} << part.n_a()) || m.cols() != (Eigen::Index{1} << part.n_b())) {
        throw InvalidArgument("matrix shape does not match bipartition");
    }
    ComplexVector flat(m.size());
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            flat(a * m.cols() + b) = m(a, b);
        }
    }
    return PureState(permute_amplitudes(flat, inverse_permutation(part.to_canonical())));
}

inline SchmidtForm schmidt_decompose(const PureState& state, const Bipartition& part) {
    const ComplexMatrix m = reshape_state(state, part);
    const SvdResult s = svd(m);
    const int rank = static_cast<int>(numerical_rank(s.sigma));
    if (rank == 0) {
        throw NumericalError("state has zero Schmidt rank");
    }
    const int measure = schmidt_measure(rank);
    const Eigen::Index width = Eigen::Index{1} << measure;

    SchmidtForm f;
    f.u = s.u.leftCols(width);
    f.v = s.vdag.adjoint().leftCols(width);
    f.lambdas = s.sigma.head(width);
    f.rank = rank;
    f.measure = measure;
    f.bipartition = part;
    return f;
}

/// Sum_i lambda_i (u col i) (x) conj(v col i), in the original qubit order.
inline ComplexVector schmidt_reconstruct(const SchmidtForm& f) {
    const ComplexMatrix m = f.u * f.lambdas.cast<Complex>().asDiagonal() * f.v.adjoint();
    ComplexVector flat(m.size());
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            flat(a * m.cols() + b) = m(a, b);
        }
    }
    return permute_amplitudes(flat, inverse_permutation(f.bipartition.to_canonical()));
}

struct Truncation {
    SchmidtForm form;
    double loss = 0.0;  // sum of squared dropped coefficients
};

/// Keeps the r largest coefficients and renormalizes them.
inline Truncation truncate(const SchmidtForm& form, int r) {
    if (r < 1 || r > form.rank) {
        throw InvalidArgument("truncation rank " + std::to_string(r) + " outside [1, " +
                              std::to_string(form.rank) + "]");
    }
    double loss = 0.0;
    for (Eigen::Index i = r; i < form.lambdas.size(); ++i) {
        loss += form.lambdas(i) * form.lambdas(i);
    }
    const int measure = schmidt_measure(r);
    const Eigen::Index width = Eigen::Index{1} << measure;

    Truncation t;
    t.loss = loss;
    t.form.bipartition = form.bipartition;
    t.form.rank = r;
    t.form.measure = measure;
    t.form.u = form.u.leftCols(width);
    t.form.v = form.v.leftCols(width);
    t.form.lambdas = RealVector::Zero(width);
    t.form.lambdas.head(r) = form.lambdas.head(r) / form.lambdas.head(r).norm();
    return t;
}

struct BondSearchResult {
    Bipartition bipartition;
    int rank = 0;
};

/// Exhaustive search over all C(n, n_b) choices of block B for the smallest
/// numerical Schmidt rank; ties go to the lexicographically smallest block B.
inline BondSearchResult search_min_bond(const PureState& state, int n_b) {
    const int n = state.num_qubits();
    if (n_b < 1 || n_b > n / 2) {
        throw InvalidArgument("n_b must lie in [1, floor(n/2)]");
    }
    std::vector<int> combo(static_cast<std::size_t>(n_b));
    for (int i = 0; i < n_b; ++i) combo[static_cast<std::size_t>(i)] = i;

    BondSearchResult best;
    best.rank = -1;
    while (true) {
        const Bipartition part = Bipartition::from_trash(n, combo);
        const int r = static_cast<int>(numerical_rank(svd(reshape_state(state, part)).sigma));
        if (best.rank < 0 || r < best.rank) {
            best.rank = r;
            best.bipartition = part;
        }
        // next combination in lexicographic order
        int i = n_b - 1;
        while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - n_b + i) --i;
        if (i < 0) break;
        ++combo[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n_b; ++j) {
            combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return best;
}

}  // namespace sqc
