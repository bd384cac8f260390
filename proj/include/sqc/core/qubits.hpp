// Qubit-register tensor operations: permutations, partial traces and
// placement of block operators into a register.

#pragma once

#include "sqc/core/linalg.hpp"
#include "sqc/core/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace sqc {

/// perm[q] is the new position of qubit q.
using QubitPermutation = std::vector<int>;

inline void validate_permutation(std::span<const int> perm, int num_qubits) {
    if (static_cast<int>(perm.size()) != num_qubits) {
        throw InvalidArgument("permutation has " + std::to_string(perm.size()) +
                              " entries for " + std::to_string(num_qubits) + " qubits");
    }
    std::vector<bool> seen(static_cast<std::size_t>(num_qubits), false);
    for (int p : perm) {
        if (p < 0 || p >= num_qubits || seen[static_cast<std::size_t>(p)]) {
            throw InvalidArgument("invalid qubit permutation");
        }
        seen[static_cast<std::size_t>(p)] = true;
    }
}

inline QubitPermutation inverse_permutation(std::span<const int> perm) {
    QubitPermutation inv(perm.size());
    for (std::size_t q = 0; q < perm.size(); ++q) {
        inv[static_cast<std::size_t>(perm[q])] = static_cast<int>(q);
    }
    return inv;
}

/// Basis index after moving the bit of every qubit q to position perm[q].
inline std::size_t permute_index(std::size_t index, std::span<const int> perm) {
    const int n = static_cast<int>(perm.size());
    std::size_t out = 0;
    for (int q = 0; q < n; ++q) {
        const std::size_t bit = (index >> (n - 1 - q)) & 1U;
        out |= bit << (n - 1 - perm[static_cast<std::size_t>(q)]);
    }
    return out;
}

namespace detail {
inline std::vector<std::size_t> index_map(std::span<const int> perm) {
    const std::size_t dim = std::size_t{1} << perm.size();
    std::vector<std::size_t> map(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        map[i] = permute_index(i, perm);
    }
    return map;
}
}  // namespace detail

inline ComplexVector permute_amplitudes(const ComplexVector& v, std::span<const int> perm) {
    const int n = qubits_for_dimension(static_cast<std::size_t>(v.size()));
    validate_permutation(perm, n);
    const auto map = detail::index_map(perm);
    ComplexVector out(v.size());
    for (std::size_t i = 0; i < map.size(); ++i) {
        out(static_cast<Eigen::Index>(map[i])) = v(static_cast<Eigen::Index>(i));
    }
    return out;
}

inline PureState permute_qubits(const PureState& state, std::span<const int> perm) {
    return PureState(permute_amplitudes(state.amplitudes(), perm));
}

/// P * m * P^T where P is the basis permutation induced by perm.
inline ComplexMatrix permute_operator(const ComplexMatrix& m, std::span<const int> perm) {
    const int n = qubits_for_dimension(static_cast<std::size_t>(m.rows()));
    if (m.rows() != m.cols() || n < 0) {
        throw InvalidArgument("permute_operator needs a square power-of-two matrix");
    }
    validate_permutation(perm, n);
    const auto map = detail::index_map(perm);
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t j = 0; j < map.size(); ++j) {
        for (std::size_t i = 0; i < map.size(); ++i) {
            out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

/// Reduced operator on the qubits in `keep`; the result's qubit order follows
/// the order of `keep`.
inline ComplexMatrix partial_trace_matrix(const ComplexMatrix& rho, std::span<const int> keep) {
    const int n = qubits_for_dimension(static_cast<std::size_t>(rho.rows()));
    if (rho.rows() != rho.cols() || n < 0) {
        throw InvalidArgument("partial_trace needs a square power-of-two matrix");
    }
    if (keep.empty()) {
        throw InvalidArgument("partial_trace keep set is empty");
    }
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int q : keep) {
        if (q < 0 || q >= n || kept[static_cast<std::size_t>(q)]) {
            throw InvalidArgument("partial_trace keep set has an invalid or repeated qubit");
        }
        kept[static_cast<std::size_t>(q)] = true;
    }
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (!kept[static_cast<std::size_t>(q)]) {
            traced.push_back(q);
        }
    }
    const auto nk = keep.size();
    const auto kd = std::size_t{1} << nk;
    const auto td = std::size_t{1} << traced.size();

    // Full index from (kept bits, traced bits), kept/traced in list order.
    auto spread = [n](std::size_t bits, std::span<const int> qubits) {
        std::size_t out = 0;
        const auto m = qubits.size();
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t bit = (bits >> (m - 1 - k)) & 1U;
            out |= bit << (n - 1 - qubits[k]);
        }
        return out;
    };
    std::vector<std::size_t> kidx(kd), tidx(td);
    for (std::size_t i = 0; i < kd; ++i) kidx[i] = spread(i, keep);
    for (std::size_t t = 0; t < td; ++t) tidx[t] = spread(t, traced);

    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kd), static_cast<Eigen::Index>(kd));
    for (std::size_t i = 0; i < kd; ++i) {
        for (std::size_t j = 0; j < kd; ++j) {
            Complex acc = 0.0;
            for (std::size_t t = 0; t < td; ++t) {
                acc += rho(static_cast<Eigen::Index>(kidx[i] | tidx[t]),
                           static_cast<Eigen::Index>(kidx[j] | tidx[t]));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    return DensityMatrix(partial_trace_matrix(rho.matrix(), keep));
}

/// Operator on the whole register equal to op_a on qubits block_a and op_b on
/// qubits block_b (each block in its listed order).
inline ComplexMatrix place_blocks(const ComplexMatrix& op_a, std::span<const int> block_a,
                                  const ComplexMatrix& op_b, std::span<const int> block_b) {
    const int n = static_cast<int>(block_a.size() + block_b.size());
    QubitPermutation to_canonical(static_cast<std::size_t>(n), -1);
    for (int q : block_a) {
        if (q < 0 || q >= n) throw InvalidArgument("block qubit out of range");
    }
    for (int q : block_b) {
        if (q < 0 || q >= n) throw InvalidArgument("block qubit out of range");
    }
    int pos = 0;
    for (int q : block_a) to_canonical[static_cast<std::size_t>(q)] = pos++;
    for (int q : block_b) to_canonical[static_cast<std::size_t>(q)] = pos++;
    validate_permutation(to_canonical, n);
    return permute_operator(kron(op_a, op_b), inverse_permutation(to_canonical));
}

}  // namespace sqc
