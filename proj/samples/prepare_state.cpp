// Finds the weakest-entangled cut of a 6-qubit state and checks that the
// Schmidt preparation circuit reproduces it.

#include "sqc/costmodel.hpp"

#include <cstdio>
#include <random>

using namespace sqc;

int main() {
    // (|000> + |111>) on qubits {0,2,4} times a random state on {1,3,5}
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    ComplexVector v = ComplexVector::Zero(64);
    ComplexVector other(8);
    for (auto& x : other) x = Complex(g(rng), g(rng));
    other.normalize();
    for (std::size_t i = 0; i < 64; ++i) {
        const std::size_t even = ((i >> 5) & 1) << 2 | ((i >> 3) & 1) << 1 | ((i >> 1) & 1);
        const std::size_t odd = ((i >> 4) & 1) << 2 | ((i >> 2) & 1) << 1 | (i & 1);
        if (even == 0 || even == 7) v(static_cast<Eigen::Index>(i)) = other(static_cast<Eigen::Index>(odd)) / std::sqrt(2.0);
    }
    const PureState state(v);

    const BondSearchResult best = search_min_bond(state, 3);
    std::printf("block B = {");
    for (std::size_t k = 0; k < best.bipartition.block_b.size(); ++k) {
        std::printf("%s%d", k ? ", " : "", best.bipartition.block_b[k]);
    }
    std::printf("}, Schmidt rank %d\n", best.rank);

    const ComplexMatrix prep = build_state_preparation(state, best.bipartition);
    std::printf("preparation fidelity %.12f\n", std::norm(state.amplitudes().dot(prep.col(0))));
    const CostReport cost = cost_of_model(build_compressor(state, best.bipartition));
    std::printf("cost case %s, %lld CNOTs\n", std::string(to_string(cost.cost_case)).c_str(),
                static_cast<long long>(cost.total_ceil));
    return 0;
}
