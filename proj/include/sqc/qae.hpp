// Variational quantum-autoencoder baseline: a layered R_y ansatz trained to
// drive the trash register to |0...0>, scored with the same roundtrip
// pipeline as the Schmidt compressor.

#pragma once

#include "sqc/compressor.hpp"
#include "sqc/optim/nelder_mead.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace sqc {

enum class GateKind { ry, cnot, cz };

struct Gate {
    GateKind kind = GateKind::ry;
    int q0 = 0;      // rotated qubit, or control
    int q1 = -1;     // target of a two-qubit gate
    int param = -1;  // theta index of a rotation
};

struct AnsatzLayout {
    int num_qubits = 0;
    std::vector<Gate> gates;
    std::string name;

    int parameter_count() const {
        int k = 0;
        for (const auto& g : gates) k += g.kind == GateKind::ry;
        return k;
    }
    int entangler_count() const { return static_cast<int>(gates.size()) - parameter_count(); }
};

/// `rotation_layers` layers of R_y on every qubit. A nearest-neighbour line of
/// entanglers follows every layer, or every layer but the last when
/// `final_rotation` is set.
inline AnsatzLayout layered_ansatz(int num_qubits, int rotation_layers, GateKind entangler, bool final_rotation,
                                   std::string name) {
    if (num_qubits < 1 || rotation_layers < 1 || entangler == GateKind::ry) {
        throw InvalidArgument("ansatz needs qubits, layers and a two-qubit entangler");
    }
    AnsatzLayout a{num_qubits, {}, std::move(name)};
    int p = 0;
    for (int l = 0; l < rotation_layers; ++l) {
        for (int q = 0; q < num_qubits; ++q) a.gates.push_back({GateKind::ry, q, -1, p++});
        if (final_rotation && l == rotation_layers - 1) break;
        for (int q = 0; q + 1 < num_qubits; ++q) a.gates.push_back({entangler, q, q + 1, -1});
    }
    return a;
}

/// 6 qubits, 60 rotations, 45 CNOTs.
inline AnsatzLayout cnot_ansatz() { return layered_ansatz(6, 10, GateKind::cnot, true, "ry-cnot-60-45"); }

/// 5 qubits, 50 rotations, 40 CZs.
inline AnsatzLayout cz_ansatz() { return layered_ansatz(5, 10, GateKind::cz, false, "ry-cz-50-40"); }

namespace detail {

inline void check_theta(const AnsatzLayout& layout, const RealVector& theta) {
    if (theta.size() != layout.parameter_count()) {
        throw InvalidArgument("theta has " + std::to_string(theta.size()) + " entries, ansatz needs " +
                              std::to_string(layout.parameter_count()));
    }
}

/// Applies the circuit to every column of `states` (rows = amplitudes).
template <typename Matrix>
void apply_ansatz(const AnsatzLayout& layout, const RealVector& theta, Matrix& states) {
    const int n = layout.num_qubits;
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (states.rows() != dim) throw InvalidArgument("state dimension does not match the ansatz");
    auto bit_of = [n](int q) { return Eigen::Index{1} << (n - 1 - q); };
    for (const Gate& g : layout.gates) {
        switch (g.kind) {
            case GateKind::ry: {
                const double c = std::cos(0.5 * theta(g.param));
                const double s = std::sin(0.5 * theta(g.param));
                const Eigen::Index b = bit_of(g.q0);
                for (Eigen::Index i = 0; i < dim; ++i) {
                    if (i & b) continue;
                    auto r0 = states.row(i);
                    auto r1 = states.row(i | b);
                    for (Eigen::Index k = 0; k < states.cols(); ++k) {
                        const auto a0 = r0(k), a1 = r1(k);
                        r0(k) = c * a0 - s * a1;
                        r1(k) = s * a0 + c * a1;
                    }
                }
                break;
            }
            case GateKind::cnot: {
                const Eigen::Index cb = bit_of(g.q0), tb = bit_of(g.q1);
                for (Eigen::Index i = 0; i < dim; ++i) {
                    if ((i & cb) && !(i & tb)) states.row(i).swap(states.row(i | tb));
                }
                break;
            }
            case GateKind::cz: {
                const Eigen::Index mask = bit_of(g.q0) | bit_of(g.q1);
                for (Eigen::Index i = 0; i < dim; ++i) {
                    if ((i & mask) == mask) states.row(i) *= -1.0;
                }
                break;
            }
        }
    }
}

inline Eigen::Index trash_mask(int n, const std::vector<int>& trash) {
    Eigen::Index mask = 0;
    for (int q : trash) {
        if (q < 0 || q >= n) throw InvalidArgument("trash qubit out of range");
        mask |= Eigen::Index{1} << (n - 1 - q);
    }
    return mask;
}

}  // namespace detail

inline ComplexMatrix ansatz_unitary(const AnsatzLayout& layout, const RealVector& theta) {
    detail::check_theta(layout, theta);
    ComplexMatrix u = ComplexMatrix::Identity(Eigen::Index{1} << layout.num_qubits, Eigen::Index{1} << layout.num_qubits);
    detail::apply_ansatz(layout, theta, u);
    return u;
}

/// Training states as matrix columns; real when every amplitude is real.
struct StateBatch {
    Eigen::MatrixXd real;
    ComplexMatrix complex;
    bool is_real = true;

    Eigen::Index size() const { return is_real ? real.cols() : complex.cols(); }
};

inline StateBatch make_batch(const std::vector<PureState>& states) {
    if (states.empty()) throw InvalidArgument("training set is empty");
    const Eigen::Index dim = states.front().dimension();
    StateBatch b;
    b.complex.resize(dim, static_cast<Eigen::Index>(states.size()));
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].dimension() != dim) throw InvalidArgument("training states differ in size");
        b.complex.col(static_cast<Eigen::Index>(k)) = states[k].amplitudes();
    }
    b.is_real = b.complex.imag().cwiseAbs().maxCoeff() == 0.0;
    if (b.is_real) {
        b.real = b.complex.real();
        b.complex.resize(0, 0);
    }
    return b;
}

/// Per-state probability that the trash qubits read |0...0> after the ansatz.
inline RealVector trash_zero_probabilities(const AnsatzLayout& layout, const RealVector& theta,
                                           const StateBatch& batch, const std::vector<int>& trash) {
    detail::check_theta(layout, theta);
    const Eigen::Index mask = detail::trash_mask(layout.num_qubits, trash);
    auto probs = [&](const auto& out) {
        RealVector p = RealVector::Zero(out.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            if ((i & mask) == 0) p += out.row(i).cwiseAbs2().transpose();
        }
        return p;
    };
    if (batch.is_real) {
        Eigen::MatrixXd out = batch.real;
        detail::apply_ansatz(layout, theta, out);
        return probs(out);
    }
    ComplexMatrix out = batch.complex;
    detail::apply_ansatz(layout, theta, out);
    return probs(out);
}

/// Mean <0...0| rho_t |0...0> over the batch; the quantity a SWAP test
/// against |0...0> estimates.
inline double trash_objective(const AnsatzLayout& layout, const RealVector& theta, const StateBatch& batch,
                              const std::vector<int>& trash) {
    return std::clamp(trash_zero_probabilities(layout, theta, batch, trash).mean(), 0.0, 1.0);
}

/// Shot-based SWAP-test estimate of trash_objective: each state's ancilla
/// reads 0 with probability (1 + p)/2.
inline double swap_test_estimate(const AnsatzLayout& layout, const RealVector& theta, const StateBatch& batch,
                                 const std::vector<int>& trash, std::uint64_t shots_per_state,
                                 std::uint64_t seed) {
    if (shots_per_state == 0) throw InvalidArgument("SWAP test needs a positive shot count");
    const RealVector p = trash_zero_probabilities(layout, theta, batch, trash);
    std::mt19937_64 rng(seed);
    std::uint64_t zeros = 0;
    for (double pi : p) {
        std::binomial_distribution<std::uint64_t> dist(shots_per_state, std::clamp(0.5 * (1.0 + pi), 0.0, 1.0));
        zeros += dist(rng);
    }
    const double total = static_cast<double>(shots_per_state) * static_cast<double>(p.size());
    return 2.0 * static_cast<double>(zeros) / total - 1.0;
}

/// 1000 evaluations; standard coefficients and a unit step beat the
/// dimension-adaptive ones on this 60-parameter landscape.
inline optim::NelderMeadConfig default_qae_optimizer() {
    optim::NelderMeadConfig c;
    c.max_evaluations = 1000;
    c.initial_step = 1.0;
    c.adaptive = false;
    return c;
}

struct QaeConfig {
    AnsatzLayout layout = cnot_ansatz();
    std::vector<int> trash{0, 1, 2};
    optim::NelderMeadConfig optimizer = default_qae_optimizer();
    std::uint64_t seed = 0;
};

struct TrainState {
    RealVector theta;
    RealVector initial_theta;
    double objective = 0.0;               // best mean trash fidelity
    std::vector<double> objective_trace;  // best-so-far after each evaluation
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
};

inline RealVector initial_theta(const AnsatzLayout& layout, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    RealVector t(layout.parameter_count());
    for (auto& x : t) x = u(rng);
    return t;
}

inline TrainState train_qae(const std::vector<PureState>& training, const QaeConfig& cfg) {
    const StateBatch batch = make_batch(training);
    if (batch.complex.rows() != (Eigen::Index{1} << cfg.layout.num_qubits) &&
        batch.real.rows() != (Eigen::Index{1} << cfg.layout.num_qubits)) {
        throw InvalidArgument("training states do not match the ansatz width");
    }
    TrainState st;
    st.initial_theta = initial_theta(cfg.layout, cfg.seed);
    const auto f = [&](const RealVector& t) { return -trash_objective(cfg.layout, t, batch, cfg.trash); };
    const optim::OptimizeResult r = optim::minimize(f, st.initial_theta, cfg.optimizer);
    st.theta = r.x;
    st.evaluations = r.evaluations;
    st.restarts = r.restarts;
    st.objective = r.evaluations ? -r.value : trash_objective(cfg.layout, st.theta, batch, cfg.trash);
    st.objective_trace.reserve(r.trace.size());
    for (double v : r.trace) st.objective_trace.push_back(-v);
    return st;
}

/// Latent block = the qubits outside the trash set.
inline Bipartition qae_bipartition(int num_qubits, const std::vector<int>& trash) {
    Bipartition part;
    part.block_b = trash;
    for (int q = 0; q < num_qubits; ++q) {
        if (std::find(trash.begin(), trash.end(), q) == trash.end()) part.block_a.push_back(q);
    }
    part.validate(num_qubits);
    return part;
}

/// Roundtrip fidelity with the ansatz in place of C and a |0...0> reference.
inline double qae_roundtrip_fidelity(const ComplexMatrix& unitary, const std::vector<int>& trash,
                                     const PureState& input) {
    return roundtrip_with(unitary, qae_bipartition(input.num_qubits(), trash), input, ReferencePolicy::zero)
        .fidelity;
}

inline double qae_roundtrip_fidelity(const RealVector& theta, const AnsatzLayout& layout,
                                     const std::vector<int>& trash, const PureState& input) {
    if (input.num_qubits() != layout.num_qubits) throw InvalidArgument("input does not match the ansatz width");
    return qae_roundtrip_fidelity(ansatz_unitary(layout, theta), trash, input);
}

}  // namespace sqc
