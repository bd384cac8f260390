// Schmidt compressor: builds the compression unitary C from a typical state,
// simulates compression / decompression with a configurable reference
// state, and reports reconstruction fidelity.
//
// With M_psi = U S V^dagger the reshaped typical state,
//     C = (prod_i CNOT_i) (U (x) V*)^{-1}
// maps the typical state to sum_i lambda_i |i>_A |0>_B. CNOT_i joins the
// i-th least significant qubit of block A (control) to the i-th least
// significant qubit of block B (target), i = 0..m-1: those are the bits that
// vary across |i>, i < 2^m.

#pragma once

#include "sqc/core/linalg.hpp"
#include "sqc/core/qubits.hpp"
#include "sqc/core/types.hpp"
#include "sqc/schmidt.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqc {

/// Widest register for which C is materialized densely.
inline constexpr int kMaxCompressorQubits = 12;

enum class ReferencePolicy {
    zero,                   // (|0><0|)^{(x) n_B}
    top_eigenvector,        // dominant eigenvector of the trash state
    per_qubit_eigenvector,  // product of dominant eigenvectors of each trash qubit
};

inline std::string_view to_string(ReferencePolicy p) {
    switch (p) {
        case ReferencePolicy::zero: return "zero";
        case ReferencePolicy::top_eigenvector: return "opt1";
        case ReferencePolicy::per_qubit_eigenvector: return "opt2";
    }
    return "zero";
}

inline ReferencePolicy parse_policy(std::string_view s) {
    if (s == "zero") return ReferencePolicy::zero;
    if (s == "opt1") return ReferencePolicy::top_eigenvector;
    if (s == "opt2") return ReferencePolicy::per_qubit_eigenvector;
    throw InvalidArgument("unknown reference policy '" + std::string(s) + "' (zero|opt1|opt2)");
}

struct CnotPair {
    int control = 0;  // qubit in block A
    int target = 0;   // qubit in block B
    friend bool operator==(const CnotPair&, const CnotPair&) = default;
};

struct CompressorModel {
    PureState typical_state{ComplexVector::Ones(1)};
    Bipartition bipartition;
    SchmidtForm schmidt;
    ComplexMatrix u_inv;  // (completed U)^dagger on block A
    ComplexMatrix v_inv;  // (completed V*)^{-1} on block B
    std::vector<CnotPair> cnot_pairs;
    ComplexMatrix full_matrix_c;  // 2^n x 2^n, original qubit order

    int num_qubits() const { return bipartition.num_qubits(); }
};

namespace detail {

/// Permutation matrix of the CNOT layer in block-A-first order.
inline ComplexMatrix cnot_layer(int n_a, int n_b, int m) {
    const Eigen::Index dim = Eigen::Index{1} << (n_a + n_b);
    const std::size_t mask = (std::size_t{1} << m) - 1;
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        const auto a = static_cast<std::size_t>(idx) >> n_b;
        const auto b = static_cast<std::size_t>(idx) & ((std::size_t{1} << n_b) - 1);
        const auto out = (a << n_b) | (b ^ (a & mask));
        p(static_cast<Eigen::Index>(out), idx) = 1.0;
    }
    return p;
}

inline std::vector<CnotPair> cnot_pairs_for(const Bipartition& part, int m) {
    std::vector<CnotPair> pairs;
    for (int i = 0; i < m; ++i) {
        pairs.push_back({part.block_a[static_cast<std::size_t>(part.n_a() - 1 - i)],
                         part.block_b[static_cast<std::size_t>(part.n_b() - 1 - i)]});
    }
    return pairs;
}

inline void check_register(int n) {
    if (n > kMaxCompressorQubits) {
        throw SizeError("compressor limited to " + std::to_string(kMaxCompressorQubits) +
                        " qubits, got " + std::to_string(n));
    }
}

}  // namespace detail

/// Assembles C from the stored block unitaries (used by the builder and the
/// deserializer so both agree bit for bit).
inline ComplexMatrix assemble_compressor(const Bipartition& part, const ComplexMatrix& u_inv,
                                         const ComplexMatrix& v_inv, int measure) {
    const ComplexMatrix canonical =
        detail::cnot_layer(part.n_a(), part.n_b(), measure) * kron(u_inv, v_inv);
    return permute_operator(canonical, inverse_permutation(part.to_canonical()));
}

inline CompressorModel build_compressor(const PureState& typical, const Bipartition& part) {
    part.validate(typical.num_qubits());
    detail::check_register(typical.num_qubits());

    CompressorModel model{typical, part, schmidt_decompose(typical, part), {}, {}, {}, {}};
    const SchmidtForm& sf = model.schmidt;
    const ComplexMatrix u_full = complete_isometry(sf.u, sf.u.rows());
    const ComplexMatrix vconj_full = complete_isometry(sf.v.conjugate(), sf.v.rows());
    model.u_inv = u_full.adjoint();
    model.v_inv = vconj_full.adjoint();
    model.cnot_pairs = detail::cnot_pairs_for(part, sf.measure);
    model.full_matrix_c = assemble_compressor(part, model.u_inv, model.v_inv, sf.measure);
    return model;
}

/// Register-wide unitary (U (x) V*) (prod CNOT) (S (x) I_B) mapping |0...0>
/// to the typical state; S is any unitary on block A whose first column holds
/// the Schmidt coefficients.
inline ComplexMatrix build_state_preparation(const PureState& typical, const Bipartition& part) {
    const CompressorModel model = build_compressor(typical, part);
    const Eigen::Index dim_a = Eigen::Index{1} << part.n_a();
    const Eigen::Index dim_b = Eigen::Index{1} << part.n_b();
    ComplexMatrix lambda_col = ComplexMatrix::Zero(dim_a, 1);
    lambda_col.topRows(model.schmidt.lambdas.size()) = model.schmidt.lambdas.cast<Complex>();
    lambda_col /= lambda_col.norm();
    const ComplexMatrix loader = complete_isometry(lambda_col, dim_a);
    const ComplexMatrix canonical =
        kron(model.u_inv.adjoint(), model.v_inv.adjoint()) *
        detail::cnot_layer(part.n_a(), part.n_b(), model.schmidt.measure) *
        kron(loader, ComplexMatrix::Identity(dim_b, dim_b));
    return permute_operator(canonical, inverse_permutation(part.to_canonical()));
}

struct CompressedState {
    DensityMatrix rho_l;  // latent, block-A order
    DensityMatrix rho_t;  // trash, block-B order
};

inline void check_input(const CompressorModel& model, const PureState& input) {
    if (input.num_qubits() != model.num_qubits()) {
        throw InvalidArgument("input has " + std::to_string(input.num_qubits()) +
                              " qubits, compressor expects " + std::to_string(model.num_qubits()));
    }
}

/// Latent and trash states of an arbitrary register unitary applied to input.
inline CompressedState compress_with(const ComplexMatrix& unitary, const Bipartition& part,
                                     const PureState& input) {
    const ComplexVector y = unitary * input.amplitudes();
    const ComplexMatrix rho_c = y * y.adjoint();
    return {DensityMatrix(partial_trace_matrix(rho_c, part.block_a)),
            DensityMatrix(partial_trace_matrix(rho_c, part.block_b))};
}

inline CompressedState compress(const CompressorModel& model, const PureState& input) {
    check_input(model, input);
    return compress_with(model.full_matrix_c, model.bipartition, input);
}

/// Shot-based tomography settings; absent means exact partial traces.
struct ShotConfig {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

struct TrashTomography {
    DensityMatrix full;                   // block-B order
    std::vector<DensityMatrix> per_qubit; // one per block-B qubit, in block order
};

namespace detail {

inline const std::array<ComplexMatrix, 4>& paulis() {
    static const std::array<ComplexMatrix, 4> p = [] {
        std::array<ComplexMatrix, 4> out;
        out[0] = ComplexMatrix::Identity(2, 2);
        out[1] = ComplexMatrix::Zero(2, 2);
        out[1](0, 1) = out[1](1, 0) = 1.0;
        out[2] = ComplexMatrix::Zero(2, 2);
        out[2](0, 1) = Complex(0, -1);
        out[2](1, 0) = Complex(0, 1);
        out[3] = ComplexMatrix::Zero(2, 2);
        out[3](0, 0) = 1.0;
        out[3](1, 1) = -1.0;
        return out;
    }();
    return p;
}

/// Estimates <P> from `shots` +/-1 outcomes drawn with P(+1) = (1 + <P>)/2.
inline double sample_expectation(double exact, std::uint64_t shots, std::mt19937_64& rng) {
    const double p = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> dist(shots, p);
    const auto plus = dist(rng);
    return 2.0 * static_cast<double>(plus) / static_cast<double>(shots) - 1.0;
}

/// Clips negative eigenvalues to zero and renormalizes the trace.
inline ComplexMatrix project_to_density(const ComplexMatrix& m) {
    const EigResult e = hermitian_eig(0.5 * (m + m.adjoint()));
    RealVector vals = e.values.cwiseMax(0.0);
    const double total = vals.sum();
    if (!(total > 0.0)) {
        throw NumericalError("tomography estimate has no positive spectrum");
    }
    vals /= total;
    ComplexMatrix out = e.vectors * vals.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    return 0.5 * (out + out.adjoint());
}

/// Pauli-expectation tomography of rho (exact expectations then sampled).
inline ComplexMatrix sampled_tomography(const ComplexMatrix& rho, std::uint64_t shots,
                                        std::mt19937_64& rng) {
    const int n = qubits_for_dimension(static_cast<std::size_t>(rho.rows()));
    const std::size_t strings = std::size_t{1} << (2 * n);
    ComplexMatrix est = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (std::size_t code = 0; code < strings; ++code) {
        ComplexMatrix pauli = ComplexMatrix::Identity(1, 1);
        for (int q = 0; q < n; ++q) {
            const auto which = (code >> (2 * (n - 1 - q))) & 3U;
            pauli = kron(pauli, paulis()[which]);
        }
        double expval = 1.0;
        if (code != 0) {
            const double exact = (rho * pauli).trace().real();
            expval = sample_expectation(exact, shots, rng);
        }
        est += expval * pauli;
    }
    est /= static_cast<double>(std::size_t{1} << n);
    return project_to_density(est);
}

}  // namespace detail

/// Trash-register tomography: the full trash state and each trash qubit's
/// reduced state. Exact mode uses partial traces; shot mode samples every
/// Pauli expectation with `shots` repetitions and projects the estimate
/// back onto density matrices.
inline TrashTomography tomography_of(const DensityMatrix& rho_t,
                                     const std::optional<ShotConfig>& shots = std::nullopt) {
    const int nb = rho_t.num_qubits();
    if (!shots) {
        std::vector<DensityMatrix> singles;
        for (int q = 0; q < nb; ++q) {
            const int keep[] = {q};
            singles.push_back(partial_trace(rho_t, keep));
        }
        return {rho_t, std::move(singles)};
    }
    if (shots->shots == 0) {
        throw InvalidArgument("tomography needs a positive shot count");
    }
    std::mt19937_64 rng(shots->seed);
    DensityMatrix full(detail::sampled_tomography(rho_t.matrix(), shots->shots, rng));
    std::vector<DensityMatrix> singles;
    for (int q = 0; q < nb; ++q) {
        const int keep[] = {q};
        const ComplexMatrix exact = partial_trace_matrix(rho_t.matrix(), keep);
        singles.emplace_back(detail::sampled_tomography(exact, shots->shots, rng));
    }
    return {std::move(full), std::move(singles)};
}

inline TrashTomography tomography_trash(const CompressorModel& model, const PureState& input,
                                        const std::optional<ShotConfig>& shots = std::nullopt) {
    return tomography_of(compress(model, input).rho_t, shots);
}

/// Reference state injected into the trash register before decompression.
inline ComplexMatrix reference_state(ReferencePolicy policy, int n_b,
                                     const TrashTomography* tomo) {
    const Eigen::Index dim = Eigen::Index{1} << n_b;
    switch (policy) {
        case ReferencePolicy::zero: {
            ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
            r(0, 0) = 1.0;
            return r;
        }
        case ReferencePolicy::top_eigenvector: {
            if (tomo == nullptr) throw InvalidArgument("opt1 needs trash tomography");
            const EigResult e = hermitian_eig(tomo->full.matrix());
            const ComplexVector v = e.vectors.col(0);
            return v * v.adjoint();
        }
        case ReferencePolicy::per_qubit_eigenvector: {
            if (tomo == nullptr) throw InvalidArgument("opt2 needs trash tomography");
            ComplexMatrix r = ComplexMatrix::Identity(1, 1);
            for (const auto& single : tomo->per_qubit) {
                const EigResult e = hermitian_eig(single.matrix());
                const ComplexVector v = e.vectors.col(0);
                r = kron(r, ComplexMatrix(v * v.adjoint()));
            }
            return r;
        }
    }
    throw InvalidArgument("unknown reference policy");
}

/// C^dagger (rho_l (x) rho_ref) C with rho_l on block A and rho_ref on block B.
inline ComplexMatrix decompress_with(const ComplexMatrix& unitary, const Bipartition& part,
                                     const ComplexMatrix& rho_l, const ComplexMatrix& rho_ref) {
    const ComplexMatrix joined = place_blocks(rho_l, part.block_a, rho_ref, part.block_b);
    return unitary.adjoint() * joined * unitary;
}

/// <x| rho |x>, checking the imaginary residual and the [0, 1] range at
/// 1e-10 before clamping.
inline double state_fidelity(const PureState& x, const ComplexMatrix& rho) {
    const Complex f = x.amplitudes().dot(rho * x.amplitudes());
    if (std::abs(f.imag()) > 1e-10) {
        throw NumericalError("fidelity has imaginary residual " + std::to_string(f.imag()));
    }
    if (f.real() < -1e-10 || f.real() > 1.0 + 1e-10) {
        throw NumericalError("fidelity " + std::to_string(f.real()) + " outside [0, 1]");
    }
    return std::clamp(f.real(), 0.0, 1.0);
}

struct RoundtripResult {
    DensityMatrix rho_l;
    DensityMatrix rho_t;
    DensityMatrix rho_f;
    double fidelity = 0.0;
};

/// Full compress / reference-swap / decompress cycle for any register
/// unitary (the Schmidt compressor or a trained ansatz).
inline RoundtripResult roundtrip_with(const ComplexMatrix& unitary, const Bipartition& part,
                                      const PureState& input, ReferencePolicy policy,
                                      const std::optional<ShotConfig>& shots = std::nullopt) {
    CompressedState c = compress_with(unitary, part, input);
    std::optional<TrashTomography> tomo;
    if (policy != ReferencePolicy::zero) {
        tomo = tomography_of(c.rho_t, shots);
    }
    const ComplexMatrix ref = reference_state(policy, part.n_b(), tomo ? &*tomo : nullptr);
    DensityMatrix rho_f(decompress_with(unitary, part, c.rho_l.matrix(), ref));
    const double f = state_fidelity(input, rho_f.matrix());
    return {std::move(c.rho_l), std::move(c.rho_t), std::move(rho_f), f};
}

inline RoundtripResult roundtrip(const CompressorModel& model, const PureState& input,
                                 ReferencePolicy policy,
                                 const std::optional<ShotConfig>& shots = std::nullopt) {
    check_input(model, input);
    return roundtrip_with(model.full_matrix_c, model.bipartition, input, policy, shots);
}

}  // namespace sqc
