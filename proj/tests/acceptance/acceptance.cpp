// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "sqc/classifier.hpp"
#include "sqc/costmodel.hpp"
#include "sqc/experiments.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

using namespace sqc;

namespace {

// Reference values per label 0..9.
constexpr std::array<double, 10> kSqcFidelity{0.841, 0.679, 0.736, 0.725, 0.709, 0.706, 0.772, 0.689, 0.713, 0.671};
constexpr std::array<double, 10> kOpt1Fidelity{0.859, 0.794, 0.780, 0.740, 0.736, 0.730, 0.792, 0.718, 0.746, 0.703};
constexpr std::array<double, 10> kPhiAvg{0.8850, 0.4825, 0.5622, 0.6943, 0.8341, 0.6975, 0.7927, 0.7354, 0.5296, 0.5792};
constexpr std::array<double, 10> kPhiStd{0.0334, 0.0141, 0.0124, 0.0217, 0.0222, 0.0230, 0.0243, 0.0156, 0.0228, 0.0148};
constexpr std::array<double, 10> kQaeFidelity{0.815, 0.700, 0.715, 0.699, 0.694, 0.705, 0.744, 0.703, 0.694, 0.633};

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

PureState random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexVector v(Eigen::Index{1} << n);
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return PureState::normalized(v);
}

// A state of Schmidt rank <= r across `part`, built from r random product terms.
PureState random_low_rank(const Bipartition& part, int r, std::mt19937_64& rng) {
    ComplexMatrix m = ComplexMatrix::Zero(Eigen::Index{1} << part.n_a(), Eigen::Index{1} << part.n_b());
    for (int k = 0; k < r; ++k) {
        m += random_state(part.n_a(), rng).amplitudes() * random_state(part.n_b(), rng).amplitudes().transpose();
    }
    return unreshape_state(m / m.norm(), part);
}

Bipartition random_bipartition(int n, std::mt19937_64& rng) {
    std::vector<int> q(static_cast<std::size_t>(n));
    std::iota(q.begin(), q.end(), 0);
    std::shuffle(q.begin(), q.end(), rng);
    const int na = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    return {std::vector<int>(q.begin(), q.begin() + na), std::vector<int>(q.begin() + na, q.end())};
}

std::string misses(const std::vector<std::pair<int, double>>& m) {
    if (m.empty()) return "no misses";
    std::ostringstream s;
    s << m.size() << " misses:";
    for (const auto& [label, d] : m) s << ' ' << label << '(' << fmt("%+.3f", d) << ')';
    return s.str();
}

// ---------------------------------------------------------------- criterion 7

struct Check {
    std::string name;
    bool pass = true;
    double worst = 0.0;
    void observe(double err, double bound) {
        worst = std::max(worst, err);
        if (!(err <= bound)) pass = false;
    }
};

Check linear_algebra_suite() {
    Check c{"svd/eig/spectrum x1000"};
    std::mt19937_64 rng(701);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 5;
        const PureState s = random_state(n, rng);
        const Bipartition part = random_bipartition(n, rng);
        const ComplexMatrix m = reshape_state(s, part);
        const SvdResult d = svd(m);
        c.observe((d.u * d.sigma.cast<Complex>().asDiagonal() * d.vdag - m).norm(), 1e-10);

        const ComplexMatrix rho_a = m * m.adjoint();
        const EigResult e = hermitian_eig(rho_a);
        for (Eigen::Index k = 0; k < e.values.size(); ++k) {
            c.observe((rho_a * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm(), 1e-10);
        }

        // reduced-state spectrum from an explicit partial trace equals lambda^2
        const ComplexMatrix full = s.amplitudes() * s.amplitudes().adjoint();
        const RealVector spec = hermitian_eig(partial_trace_matrix(full, part.block_a)).values;
        const SchmidtForm f = schmidt_decompose(s, part);
        for (Eigen::Index k = 0; k < spec.size(); ++k) {
            const double lam2 = k < f.lambdas.size() ? f.lambdas(k) * f.lambdas(k) : 0.0;
            c.observe(std::abs(spec(k) - lam2), 1e-10);
        }
    }
    return c;
}

Check truncation_suite() {
    Check c{"truncation identity x500"};
    std::mt19937_64 rng(702);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + trial % 5;
        const PureState s = random_state(n, rng);
        const SchmidtForm f = schmidt_decompose(s, random_bipartition(n, rng));
        const int r = 1 + static_cast<int>(rng() % static_cast<unsigned>(f.rank));
        const Truncation t = truncate(f, r);
        double kept = 0.0;
        for (int k = 0; k < r; ++k) kept += f.lambdas(k) * f.lambdas(k);
        c.observe(std::abs(t.loss - (1.0 - kept)), 1e-12);
        c.observe(std::abs(t.loss - (1.0 - std::norm(s.amplitudes().dot(schmidt_reconstruct(t.form))))), 1e-12);
    }
    return c;
}

Check compressor_suite() {
    Check c{"compressor x500"};
    std::mt19937_64 rng(703);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + trial % 5;
        const Bipartition part = random_bipartition(n, rng);
        const int max_rank = 1 << std::min(part.n_a(), part.n_b());
        const PureState typical = trial % 2 ? random_state(n, rng)
                                            : random_low_rank(part, 1 + static_cast<int>(rng() % max_rank), rng);
        const CompressorModel m = build_compressor(typical, part);
        const auto dim = m.full_matrix_c.rows();
        c.observe((m.full_matrix_c.adjoint() * m.full_matrix_c - ComplexMatrix::Identity(dim, dim)).norm(), 1e-10);
        c.observe(1.0 - roundtrip(m, typical, ReferencePolicy::zero).fidelity, 1e-10);
        const PureState x = random_state(n, rng);
        for (auto p : {ReferencePolicy::zero, ReferencePolicy::top_eigenvector, ReferencePolicy::per_qubit_eigenvector}) {
            const double f = roundtrip(m, x, p).fidelity;
            c.observe(f < 0.0 || f > 1.0 ? 1.0 : 0.0, 0.0);
        }
    }
    return c;
}

Check average_suite() {
    Check c{"average optimality x100"};
    std::mt19937_64 rng(704);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int count = 1 + static_cast<int>(rng() % 30);
        std::vector<PureState> states;
        for (int i = 0; i < count; ++i) {
            RealVector v(64);
            for (auto& x : v) x = u(rng);
            states.push_back(PureState::from_real(v));
        }
        ComplexVector avg = ComplexVector::Zero(64);
        for (const auto& s : states) avg += s.amplitudes();
        avg /= static_cast<double>(count);
        const double base = total_distance(states, avg);
        for (int k = 0; k < 10; ++k) {
            ComplexVector dir(64);
            for (auto& x : dir) x = Complex(g(rng), g(rng));
            dir.normalize();
            c.observe(base - total_distance(states, avg + 1e-3 * dir), 0.0);
        }
        c.observe((RunningMean(states.front()).mean() - states.front().amplitudes()).norm(), 0.0);
    }
    return c;
}

Check gradient_suite() {
    Check c{"gradient vs finite differences"};
    std::mt19937_64 rng(705);
    std::normal_distribution<double> g;
    LabeledFeatures d;
    for (int i = 0; i < 60; ++i) {
        RealVector x(16);
        for (auto& v : x) v = g(rng);
        d.x.push_back(x);
        d.y.push_back(i % 4 == 0);
    }
    std::vector<std::size_t> rows(60);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    for (int trial = 0; trial < 20; ++trial) {
        RealVector w(16);
        for (auto& v : w) v = g(rng);
        const double b = g(rng);
        const LossGradient lg = loss_and_gradient(w, b, d, rows);
        const double h = 1e-6;
        for (Eigen::Index i = 0; i <= 16; ++i) {
            RealVector wp = w, wm = w;
            double bp = b, bm = b;
            if (i < 16) {
                wp(i) += h;
                wm(i) -= h;
            } else {
                bp += h;
                bm -= h;
            }
            const double fd = (loss_and_gradient(wp, bp, d, rows).loss - loss_and_gradient(wm, bm, d, rows).loss) / (2 * h);
            const double an = i < 16 ? lg.grad_w(i) : lg.grad_b;
            c.observe(std::abs(an - fd) / std::max(1.0, std::abs(fd)), 1e-6);
        }
    }
    return c;
}

Check phi_suite() {
    Check c{"phi exhaustive <=20"};
    for (int tp = 0; tp <= 20; ++tp)
        for (int fp = 0; fp <= 20; ++fp)
            for (int tn = 0; tn <= 20; ++tn)
                for (int fn = 0; fn <= 20; ++fn) {
                    // Pearson correlation of the truth and prediction indicators
                    const double n = tp + fp + tn + fn;
                    double expect = 0.0;
                    if (n > 0) {
                        const double mt = (tp + fn) / n, mp = (tp + fp) / n;
                        const double cov = tp / n - mt * mp;
                        const double vt = mt * (1 - mt), vp = mp * (1 - mp);
                        expect = (vt > 0 && vp > 0) ? cov / std::sqrt(vt * vp) : 0.0;
                    }
                    c.observe(std::abs(phi_coefficient({tp, fp, tn, fn}) - expect), 1e-12);
                }
    return c;
}

Check tomography_suite() {
    Check c{"shot tomography rate"};
    std::mt19937_64 rng(706);
    std::vector<double> errors;
    const PureState typical = random_state(4, rng);
    const CompressorModel m = build_compressor(typical, Bipartition::trailing(4, 2));
    const DensityMatrix rho_t = compress(m, random_state(4, rng)).rho_t;
    for (std::uint64_t shots : {1000ULL, 10000ULL, 100000ULL}) {
        double err = 0.0;
        const int reps = 30;
        for (int r = 0; r < reps; ++r) {
            err += (tomography_of(rho_t, ShotConfig{shots, 900ULL + r}).full.matrix() - rho_t.matrix()).norm() / reps;
        }
        errors.push_back(err);
        c.observe(err * std::sqrt(static_cast<double>(shots)), 3.0);
    }
    const double ratio = errors[0] / errors[2];
    c.observe(std::abs(std::log10(ratio) - 1.0), 0.3);
    return c;
}

}  // namespace

int main() {
    const std::string dataset = SQC_DEFAULT_DATASET;
    std::vector<Sample> samples;
    try {
        samples = ingest(dataset);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cannot load %s: %s\n", dataset.c_str(), e.what());
        for (int id = 1; id <= 6; ++id) {
            if (id != 4) report(id, false, "dataset criterion", "dataset missing");
        }
        return 1;
    }
    ExperimentConfig cfg;
    cfg.dataset = dataset;

    // 1: typical state of every class is reconstructed exactly
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto sets = preprocess(samples, {});
        double worst = 0.0;
        for (const auto& s : sets) {
            const PureState t = typical_state(s.train);
            const CompressorModel m = build_compressor(t, Bipartition::trailing(6, 3));
            worst = std::max(worst, 1.0 - roundtrip(m, t, ReferencePolicy::zero).fidelity);
        }
        const double dt = seconds_since(t0);
        report(1, worst <= 1e-10 && dt < 1.0, "lossless typical state",
               "max 1-F " + fmt("%.2e", worst) + ", " + fmt("%.2f", dt) + " s");
    }

    // 2 and 3: fidelity per label and reference policy, 20 splits
    {
        const auto t0 = std::chrono::steady_clock::now();
        const FidelityBench b = run_fidelity_bench(samples, cfg);
        const double dt = seconds_since(t0);
        std::vector<std::pair<int, double>> miss2, miss3;
        bool ordered = true;
        for (std::size_t l = 0; l < b.rows.size(); ++l) {
            const double zero = b.rows[l].by_policy[0].avg;
            const double opt1 = b.rows[l].by_policy[1].avg;
            const double opt2 = b.rows[l].by_policy[2].avg;
            if (std::abs(zero - kSqcFidelity[l]) > 0.05) miss2.emplace_back(static_cast<int>(l), zero - kSqcFidelity[l]);
            if (std::abs(opt1 - kOpt1Fidelity[l]) > 0.05) miss3.emplace_back(static_cast<int>(l), opt1 - kOpt1Fidelity[l]);
            if (!(opt1 >= opt2 && opt2 >= zero - 0.005)) ordered = false;
        }
        report(2, miss2.empty() && dt < 60.0, "SQC fidelity per label within 0.05, " +
                   std::to_string(cfg.fidelity_seeds) + " splits",
               misses(miss2) + ", " + fmt("%.1f", dt) + " s for all policies");
        report(3, ordered && miss3.empty(), "opt1 >= opt2 >= zero - 0.005 and opt1 within 0.05",
               std::string(ordered ? "ordered" : "ordering violated") + ", " + misses(miss3));
    }

    // 4: cost model
    {
        const CostReport r = cnot_count(3, 3, 3);
        bool converging = true;
        double previous_gap = 1.0, gap = 1.0;
        for (int s = 1; s <= 10; ++s) {
            const double ratio = static_cast<double>(cnot_count(s, s, s).total_ceil) / std::ldexp(1.0, 2 * s);
            gap = std::abs(ratio - 23.0 / 24.0);
            if (s >= 3 && gap >= previous_gap) converging = false;
            previous_gap = gap;
        }
        report(4, r.total_ceil == 43 && converging && gap < 5e-3, "cnot_count(3,3,3) = 43, ratio -> 23/24",
               "total " + std::to_string(r.total_ceil) + ", gap at s=10 " + fmt("%.2e", gap));
    }

    // 5: one-vs-rest phi, 10 repetitions
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rows = run_classify_bench(samples, cfg);
        const double dt = seconds_since(t0);
        std::vector<std::pair<int, double>> miss;
        bool std_order = true;
        for (std::size_t l = 0; l < rows.size(); ++l) {
            const double d = rows[l].phi.avg - kPhiAvg[l];
            if (std::abs(d) > 0.08) miss.emplace_back(static_cast<int>(l), d);
            const double ratio = rows[l].phi.std / kPhiStd[l];
            if (!(ratio >= 0.1 && ratio <= 10.0)) std_order = false;
        }
        report(5, miss.empty() && std_order && dt < 300.0, "phi per label within 0.08, std same order",
               misses(miss) + ", std " + (std_order ? "same order" : "off by >10x") + ", " + fmt("%.1f", dt) + " s");
    }

    // 6: variational baseline, soft: at most 2 labels may miss
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rows = run_qae_bench(samples, cfg);
        const double dt = seconds_since(t0);
        std::vector<std::pair<int, double>> miss;
        for (std::size_t l = 0; l < rows.size(); ++l) {
            const double d = rows[l].qae.avg - kQaeFidelity[l];
            if (std::abs(d) > 0.08) miss.emplace_back(static_cast<int>(l), d);
        }
        report(6, miss.size() <= 2 && dt < 1800.0, "QAE fidelity per label within 0.08 (<= 2 misses)",
               misses(miss) + ", " + std::to_string(cfg.qae_seeds) + " splits, " + fmt("%.1f", dt) + " s");
    }

    // 7: property suite
    {
        const std::vector<std::function<Check()>> suites{linear_algebra_suite, truncation_suite, compressor_suite,
                                                         average_suite,        gradient_suite,   phi_suite,
                                                         tomography_suite};
        bool all = true;
        std::ostringstream detail;
        for (const auto& run : suites) {
            Check c;
            try {
                c = run();
            } catch (const std::exception& e) {
                c.pass = false;
                c.name += std::string(" threw ") + e.what();
            }
            all = all && c.pass;
            detail << (detail.tellp() > 0 ? "; " : "") << c.name << (c.pass ? " ok" : " FAILED") << " worst "
                   << fmt("%.1e", c.worst);
        }
        report(7, all, "property suite", detail.str());
    }

    return failures == 0 ? 0 : 1;
}
