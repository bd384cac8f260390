#include "sqc/compressor.hpp"
#include "sqc/dataio.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>

using namespace sqc;

namespace {

PureState random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexVector v(Eigen::Index{1} << n);
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return PureState::normalized(v);
}

PureState random_nonnegative(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RealVector v(Eigen::Index{1} << n);
    for (auto& x : v) x = u(rng);
    return PureState::from_real(v);
}

PureState ghz(int n) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n);
    v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
    return PureState(v);
}

// lambda on block A (original qubit order), |0> on block B
ComplexVector latent_target(const CompressorModel& m) {
    const Bipartition& p = m.bipartition;
    ComplexVector canon = ComplexVector::Zero(Eigen::Index{1} << p.num_qubits());
    for (Eigen::Index i = 0; i < m.schmidt.lambdas.size(); ++i) {
        canon(i << p.n_b()) = m.schmidt.lambdas(i);
    }
    return permute_amplitudes(canon, inverse_permutation(p.to_canonical()));
}

double unitarity_defect(const ComplexMatrix& c) {
    return (c.adjoint() * c - ComplexMatrix::Identity(c.rows(), c.cols())).norm();
}

Bipartition random_bipartition(int n, std::mt19937_64& rng) {
    std::vector<int> q(static_cast<std::size_t>(n));
    std::iota(q.begin(), q.end(), 0);
    std::shuffle(q.begin(), q.end(), rng);
    const int na = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    return {std::vector<int>(q.begin(), q.begin() + na), std::vector<int>(q.begin() + na, q.end())};
}

const std::vector<PreparedSet>& digits() {
    static const std::vector<PreparedSet> sets = preprocess(ingest(SQC_DEFAULT_DATASET), {});
    return sets;
}

}  // namespace

TEST(BuildCompressor, BellTypical) {
    const PureState bell = ghz(2);
    const CompressorModel m = build_compressor(bell, {{0}, {1}});
    ASSERT_EQ(m.cnot_pairs.size(), 1U);
    EXPECT_EQ(m.cnot_pairs[0], (CnotPair{0, 1}));
    const ComplexVector out = m.full_matrix_c * bell.amplitudes();
    ComplexVector expected = ComplexVector::Zero(4);
    expected(0) = expected(2) = 1.0 / std::sqrt(2.0);
    EXPECT_LE((out - expected).norm(), 1e-10);
}

TEST(BuildCompressor, ProductTypicalHasNoCnots) {
    const PureState zero = PureState::basis(2, 0);
    const CompressorModel m = build_compressor(zero, {{0}, {1}});
    EXPECT_EQ(m.schmidt.measure, 0);
    EXPECT_TRUE(m.cnot_pairs.empty());
    EXPECT_LE((m.full_matrix_c - kron(m.u_inv, m.v_inv)).norm(), 1e-15);
    EXPECT_LE((m.u_inv.leftCols(1).adjoint() - m.schmidt.u.adjoint()).norm(), 1e-15);
    EXPECT_LE((m.v_inv.topRows(1) - m.schmidt.v.transpose()).norm(), 1e-15);
}

TEST(BuildCompressor, CnotPairsUseLeastSignificantQubits) {
    std::mt19937_64 rng(12);
    const PureState s = random_state(6, rng);
    const Bipartition p{{0, 2, 4}, {5, 3, 1}};
    const CompressorModel m = build_compressor(s, p);
    ASSERT_EQ(m.schmidt.measure, 3);
    EXPECT_EQ(m.cnot_pairs, (std::vector<CnotPair>{{4, 1}, {2, 3}, {0, 5}}));
}

TEST(BuildCompressor, RandomModelsMapTypicalToLatent) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const PureState s = trial % 2 ? random_state(n, rng) : random_nonnegative(n, rng);
        const CompressorModel m = build_compressor(s, random_bipartition(n, rng));
        EXPECT_LE(unitarity_defect(m.full_matrix_c), 1e-10);
        EXPECT_LE((m.full_matrix_c * s.amplitudes() - latent_target(m)).norm(), 1e-10);
        EXPECT_EQ(static_cast<int>(m.cnot_pairs.size()), m.schmidt.measure);
    }
}

TEST(BuildCompressor, DigitClassZero) {
    const PreparedSet& set = digits().at(0);
    const PureState typical = typical_state(set.train);
    const CompressorModel m = build_compressor(typical, Bipartition::trailing(6, 3));
    EXPECT_LE((m.full_matrix_c * typical.amplitudes() - latent_target(m)).norm(), 1e-10);
}

TEST(BuildCompressor, RejectsOversizedRegister) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << 13);
    v(0) = 1.0;
    EXPECT_THROW(build_compressor(PureState(v), Bipartition::trailing(13, 6)), SizeError);
    EXPECT_THROW(build_compressor(ghz(2), {{0}, {2}}), InvalidArgument);
}

TEST(StatePreparation, PreparesTypical) {
    const PureState bell = ghz(2);
    const ComplexMatrix prep = build_state_preparation(bell, {{0}, {1}});
    EXPECT_LE((prep.col(0) - bell.amplitudes()).norm(), 1e-10);

    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const PureState s = random_state(4, rng);
        const BondSearchResult best = search_min_bond(s, 2);
        const ComplexMatrix p = build_state_preparation(s, best.bipartition);
        EXPECT_LE(unitarity_defect(p), 1e-10);
        EXPECT_GE(std::norm(s.amplitudes().dot(p.col(0))), 1.0 - 1e-10);
    }

    const PureState g = ghz(4);
    const CompressorModel gm = build_compressor(g, {{0, 1}, {2, 3}});
    EXPECT_EQ(gm.schmidt.measure, 1);
    EXPECT_LE((build_state_preparation(g, {{0, 1}, {2, 3}}).col(0) - g.amplitudes()).norm(), 1e-10);
}

TEST(Compress, TypicalLeavesTrashInZero) {
    std::mt19937_64 rng(15);
    const PureState s = random_state(5, rng);
    const CompressorModel m = build_compressor(s, Bipartition::from_trash(5, {1, 3}));
    const CompressedState c = compress(m, s);
    ComplexMatrix zero = ComplexMatrix::Zero(4, 4);
    zero(0, 0) = 1.0;
    EXPECT_LE((c.rho_t.matrix() - zero).norm(), 1e-10);
}

TEST(Compress, LatentSpectrumIsProjectionWeights) {
    // input = |u_j> (x) |v*_k>, a product of Schmidt modes: rho_l holds |alpha|^2
    std::mt19937_64 rng(16);
    const PureState s = random_state(4, rng);
    const Bipartition p{{0, 1}, {2, 3}};
    const CompressorModel m = build_compressor(s, p);
    const ComplexVector canon = kron_vector(ComplexVector(m.schmidt.u.col(1)),
                                            ComplexVector(m.schmidt.v.col(2).conjugate()));
    const PureState x(permute_amplitudes(canon, inverse_permutation(p.to_canonical())));
    const CompressedState c = compress(m, x);
    // C|u_1>|v*_2> = |1>|2 xor 1> = |1>|3>: latent |1>, trash |3>
    EXPECT_NEAR(c.rho_l.matrix()(1, 1).real(), 1.0, 1e-10);
    EXPECT_NEAR(c.rho_t.matrix()(3, 3).real(), 1.0, 1e-10);
}

TEST(Compress, BellModelBruteForce) {
    const CompressorModel m = build_compressor(ghz(2), {{0}, {1}});
    // C = CNOT(0 -> 1) (u_inv (x) v_inv), assembled by hand
    ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    ComplexMatrix c(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k) c(r, k) = m.u_inv(r >> 1, k >> 1) * m.v_inv(r & 1, k & 1);
    c = cnot * c;
    EXPECT_LE((c - m.full_matrix_c).norm(), 1e-15);
    const ComplexVector y = c * PureState::basis(2, 0).amplitudes();
    ComplexMatrix rho_l(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            rho_l(a, b) = y(2 * a) * std::conj(y(2 * b)) + y(2 * a + 1) * std::conj(y(2 * b + 1));
    EXPECT_LE((compress(m, PureState::basis(2, 0)).rho_l.matrix() - rho_l).norm(), 1e-14);
}

TEST(Compress, SpectralSymmetryAndPurity) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const Bipartition p = random_bipartition(n, rng);
        const CompressorModel m = build_compressor(random_state(n, rng), p);
        const CompressedState c = compress(m, random_state(n, rng));
        EXPECT_NEAR(c.rho_l.purity(), c.rho_t.purity(), 1e-10);
        const RealVector el = hermitian_eig(c.rho_l.matrix()).values;
        const RealVector et = hermitian_eig(c.rho_t.matrix()).values;
        const Eigen::Index k = std::min(el.size(), et.size());
        EXPECT_LE((el.head(k) - et.head(k)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Compress, RejectsDimensionMismatch) {
    const CompressorModel m = build_compressor(ghz(2), {{0}, {1}});
    EXPECT_THROW(compress(m, ghz(3)), InvalidArgument);
    EXPECT_THROW(roundtrip(m, ghz(3), ReferencePolicy::zero), InvalidArgument);
}

TEST(Compress, ProjectionSignature) {
    std::mt19937_64 rng(18);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const Bipartition p = random_bipartition(n, rng);
        const CompressorModel m = build_compressor(random_state(n, rng), p);
        const PureState x = random_state(n, rng);
        const ComplexVector y =
            permute_amplitudes(m.full_matrix_c * x.amplitudes(), p.to_canonical());
        const ComplexVector xc = permute_amplitudes(x.amplitudes(), p.to_canonical());
        for (Eigen::Index i = 0; i < m.schmidt.lambdas.size(); ++i) {
            const ComplexVector mode = kron_vector(ComplexVector(m.schmidt.u.col(i)),
                                                   ComplexVector(m.schmidt.v.col(i).conjugate()));
            EXPECT_LE(std::abs(y(i << p.n_b()) - mode.dot(xc)), 1e-10);
        }
    }
}

TEST(Roundtrip, TypicalIsLossless) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const PureState s = random_state(n, rng);
        const CompressorModel m = build_compressor(s, random_bipartition(n, rng));
        for (auto policy : {ReferencePolicy::zero, ReferencePolicy::top_eigenvector,
                            ReferencePolicy::per_qubit_eigenvector}) {
            EXPECT_GE(roundtrip(m, s, policy).fidelity, 1.0 - 1e-10) << to_string(policy);
        }
    }
}

TEST(Roundtrip, MatchesExplicitFormula) {
    std::mt19937_64 rng(20);
    const Bipartition p = Bipartition::from_trash(4, {0, 3});
    const CompressorModel m = build_compressor(random_state(4, rng), p);
    const PureState x = random_state(4, rng);
    const RoundtripResult r = roundtrip(m, x, ReferencePolicy::zero);
    // canonical-order brute force: C' = P C P^T, rho_f' = C'^+ (rho_l (x) |00><00|) C'
    const ComplexMatrix cc = permute_operator(m.full_matrix_c, p.to_canonical());
    ComplexMatrix ref = ComplexMatrix::Zero(4, 4);
    ref(0, 0) = 1.0;
    const ComplexMatrix f = cc.adjoint() * kron(r.rho_l.matrix(), ref) * cc;
    const ComplexVector xc = permute_amplitudes(x.amplitudes(), p.to_canonical());
    EXPECT_NEAR(r.fidelity, xc.dot(f * xc).real(), 1e-12);
    EXPECT_LE((permute_operator(r.rho_f.matrix(), p.to_canonical()) - f).norm(), 1e-12);
}

TEST(Roundtrip, FidelityBoundsOnRandomPairs) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const CompressorModel m = build_compressor(random_state(n, rng), random_bipartition(n, rng));
        const PureState x = random_state(n, rng);
        for (auto policy : {ReferencePolicy::zero, ReferencePolicy::top_eigenvector,
                            ReferencePolicy::per_qubit_eigenvector}) {
            const double f = roundtrip(m, x, policy).fidelity;
            EXPECT_GE(f, 0.0);
            EXPECT_LE(f, 1.0);
        }
    }
}

TEST(ReferenceState, Policies) {
    const ComplexMatrix z = reference_state(ReferencePolicy::zero, 2, nullptr);
    EXPECT_EQ(z(0, 0), Complex(1.0));
    EXPECT_EQ(z.cwiseAbs().sum(), 1.0);
    EXPECT_THROW(reference_state(ReferencePolicy::top_eigenvector, 2, nullptr), InvalidArgument);

    // trash state |1><1| (x) diag(0.3, 0.7): opt1 picks |11>, opt2 picks |1>|1>
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(1, 1) = 1.0;
    ComplexMatrix b = ComplexMatrix::Zero(2, 2);
    b(0, 0) = 0.3;
    b(1, 1) = 0.7;
    const TrashTomography t = tomography_of(DensityMatrix(kron(a, b)));
    const ComplexMatrix o1 = reference_state(ReferencePolicy::top_eigenvector, 2, &t);
    const ComplexMatrix o2 = reference_state(ReferencePolicy::per_qubit_eigenvector, 2, &t);
    EXPECT_NEAR(o1(3, 3).real(), 1.0, 1e-12);
    EXPECT_NEAR(o2(3, 3).real(), 1.0, 1e-12);
}

TEST(ReferenceState, PolicyParsing) {
    EXPECT_EQ(parse_policy("opt1"), ReferencePolicy::top_eigenvector);
    EXPECT_EQ(parse_policy(to_string(ReferencePolicy::per_qubit_eigenvector)),
              ReferencePolicy::per_qubit_eigenvector);
    EXPECT_THROW(parse_policy("opt3"), InvalidArgument);
}

TEST(Tomography, ExactMode) {
    const TrashTomography t = tomography_of(DensityMatrix::from_pure(PureState::basis(1, 0)));
    EXPECT_EQ(t.full.matrix()(0, 0), Complex(1.0));
    ASSERT_EQ(t.per_qubit.size(), 1U);

    std::mt19937_64 rng(22);
    const PureState s = random_state(4, rng);
    const CompressorModel m = build_compressor(s, Bipartition::trailing(4, 2));
    const PureState x = random_state(4, rng);
    const TrashTomography tt = tomography_trash(m, x);
    const ComplexVector y = m.full_matrix_c * x.amplitudes();
    const ComplexMatrix rho = y * y.adjoint();
    const int q2[] = {2};
    const int q3[] = {3};
    EXPECT_LE((tt.per_qubit[0].matrix() - partial_trace_matrix(rho, q2)).norm(), 1e-12);
    EXPECT_LE((tt.per_qubit[1].matrix() - partial_trace_matrix(rho, q3)).norm(), 1e-12);
}

TEST(Tomography, ShotModeRejectsZeroShots) {
    const DensityMatrix rho = DensityMatrix::from_pure(PureState::basis(1, 0));
    EXPECT_THROW(tomography_of(rho, ShotConfig{0, 1}), InvalidArgument);
}

TEST(Tomography, MaximallyMixedBlochVectorNearZero) {
    const DensityMatrix mixed(0.5 * ComplexMatrix::Identity(2, 2));
    const std::uint64_t shots = 10000;
    const TrashTomography t = tomography_of(mixed, ShotConfig{shots, 5});
    const ComplexMatrix& r = t.per_qubit[0].matrix();
    const double x = 2.0 * r(0, 1).real();
    const double y = -2.0 * r(0, 1).imag();
    const double z = (r(0, 0) - r(1, 1)).real();
    const double bound = 3.0 / std::sqrt(static_cast<double>(shots));
    EXPECT_LE(std::abs(x), bound);
    EXPECT_LE(std::abs(y), bound);
    EXPECT_LE(std::abs(z), bound);
}

TEST(Tomography, ShotEstimatesConvergeAtInverseSqrtRate) {
    std::mt19937_64 rng(23);
    const PureState s = random_state(4, rng);
    const CompressorModel m = build_compressor(s, Bipartition::trailing(4, 2));
    const DensityMatrix rho_t = compress(m, random_state(4, rng)).rho_t;
    std::vector<double> errors;
    for (std::uint64_t shots : {1000ULL, 10000ULL, 100000ULL}) {
        double mean_err = 0.0;
        const int reps = 20;
        for (int rep = 0; rep < reps; ++rep) {
            const TrashTomography t = tomography_of(rho_t, ShotConfig{shots, 100ULL + rep});
            mean_err += (t.full.matrix() - rho_t.matrix()).norm() / reps;
        }
        errors.push_back(mean_err);
        // 15 sampled Pauli strings with variance <= 1/shots each; the Frobenius
        // error of sum_P d_P P / 4 then has RMS <= sqrt(15) / 2 / sqrt(shots)
        EXPECT_LE(mean_err * std::sqrt(static_cast<double>(shots)), 3.0) << shots;
    }
    // two decades of shots buy one decade of accuracy
    EXPECT_GE(errors[0] / errors[2], 5.0);
    EXPECT_LE(errors[0] / errors[2], 20.0);
}
