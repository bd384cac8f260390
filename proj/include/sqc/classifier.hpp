// One-class classification from trash-register tomography: each trash qubit's
// reduced density matrix gives 8 real features, fed to a single sigmoid unit
// trained with Adam on binary cross-entropy. Evaluated with the phi (Matthews)
// coefficient.

#pragma once

#include "sqc/compressor.hpp"
#include "sqc/core/types.hpp"
#include "sqc/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace sqc {

inline constexpr int kFeaturesPerQubit = 8;

/// Row-major (Re, Im) pairs of each trash qubit's 2x2 density matrix, qubits
/// in block-B order.
using FeatureVector = RealVector;

namespace detail {

/// 2x2 reduced state of qubit q of an n-qubit vector.
inline ComplexMatrix single_qubit_reduction(const ComplexVector& y, int n, int q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    ComplexMatrix r = ComplexMatrix::Zero(2, 2);
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(y.size()); ++idx) {
        if (idx & bit) continue;
        const Complex a0 = y(static_cast<Eigen::Index>(idx));
        const Complex a1 = y(static_cast<Eigen::Index>(idx | bit));
        r(0, 0) += std::norm(a0);
        r(0, 1) += a0 * std::conj(a1);
        r(1, 1) += std::norm(a1);
    }
    r(1, 0) = std::conj(r(0, 1));
    return r;
}

inline void append_features(const ComplexMatrix& rho, FeatureVector& out, Eigen::Index offset) {
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            out(offset++) = rho(i, j).real();
            out(offset++) = rho(i, j).imag();
        }
    }
}

}  // namespace detail

/// Features of one input. Exact mode uses partial traces; shot mode estimates
/// each qubit's Pauli expectations from `shots->shots` samples.
inline FeatureVector extract_features(const CompressorModel& model, const PureState& input,
                                      const std::optional<ShotConfig>& shots = std::nullopt) {
    check_input(model, input);
    if (shots && shots->shots == 0) {
        throw InvalidArgument("tomography needs a positive shot count");
    }
    const ComplexVector y = model.full_matrix_c * input.amplitudes();
    const int n = model.num_qubits();
    const auto& trash = model.bipartition.block_b;
    FeatureVector f(kFeaturesPerQubit * static_cast<Eigen::Index>(trash.size()));
    std::optional<std::mt19937_64> rng;
    if (shots) rng.emplace(shots->seed);
    for (std::size_t k = 0; k < trash.size(); ++k) {
        ComplexMatrix rho = detail::single_qubit_reduction(y, n, trash[k]);
        if (shots) rho = detail::sampled_tomography(rho, shots->shots, *rng);
        detail::append_features(rho, f, kFeaturesPerQubit * static_cast<Eigen::Index>(k));
    }
    return f;
}

/// Rebuilds the 2x2 density matrix stored at qubit slot k of a feature vector.
inline ComplexMatrix decode_qubit_block(const FeatureVector& f, int k) {
    ComplexMatrix rho(2, 2);
    Eigen::Index o = kFeaturesPerQubit * k;
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j, o += 2) rho(i, j) = Complex(f(o), f(o + 1));
    }
    return rho;
}

struct AdamConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainConfig {
    AdamConfig adam;
    std::size_t batch_size = 25;
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
};

struct ClassifierModel {
    RealVector weights;
    double bias = 0.0;
    TrainConfig config;

    double probability(const FeatureVector& x) const {
        const double z = weights.dot(x) + bias;
        return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    }
    int predict(const FeatureVector& x, double threshold = 0.5) const {
        return probability(x) >= threshold ? 1 : 0;
    }
};

struct LabeledFeatures {
    std::vector<FeatureVector> x;
    std::vector<int> y;  // 1 = target class
};

struct LossGradient {
    double loss = 0.0;
    RealVector grad_w;
    double grad_b = 0.0;
};

/// Mean binary cross-entropy of sigma(w x + b) over the selected rows and
/// its gradient.
inline LossGradient loss_and_gradient(const RealVector& w, double b, const LabeledFeatures& data,
                                      const std::vector<std::size_t>& rows) {
    LossGradient out;
    out.grad_w = RealVector::Zero(w.size());
    for (auto r : rows) {
        const FeatureVector& x = data.x[r];
        const double z = w.dot(x) + b;
        const double y = data.y[r];
        // log(1 + e^z) - y z, evaluated without overflow
        const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        out.loss += softplus - y * z;
        const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        out.grad_w += (p - y) * x;
        out.grad_b += p - y;
    }
    const double inv = 1.0 / static_cast<double>(rows.size());
    out.loss *= inv;
    out.grad_w *= inv;
    out.grad_b *= inv;
    return out;
}

struct TrainResult {
    ClassifierModel model;
    std::vector<double> loss_trace;  // batch loss before each update
};

/// Adam on mini-batches drawn without replacement; zero-initialized weights.
inline TrainResult train_classifier(const LabeledFeatures& data, const TrainConfig& cfg) {
    if (data.x.empty() || data.x.size() != data.y.size()) {
        throw InvalidArgument("training set is empty or labels do not match features");
    }
    bool has_pos = false, has_neg = false;
    for (int y : data.y) {
        if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
        (y ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw InvalidArgument("training set needs both target and non-target samples");
    }
    if (cfg.batch_size == 0) {
        throw InvalidArgument("batch size must be positive");
    }
    const Eigen::Index d = data.x.front().size();
    for (const auto& x : data.x) {
        if (x.size() != d) throw InvalidArgument("feature vectors differ in length");
    }

    TrainResult res;
    res.model.weights = RealVector::Zero(d);
    res.model.config = cfg;
    RealVector m_w = RealVector::Zero(d), v_w = RealVector::Zero(d);
    double m_b = 0.0, v_b = 0.0;
    const AdamConfig& a = cfg.adam;

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(data.x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = std::min(cfg.batch_size, order.size());
    std::vector<std::size_t> rows(batch);

    for (std::size_t it = 1; it <= cfg.iterations; ++it) {
        // partial Fisher-Yates: the first `batch` slots become the batch
        for (std::size_t i = 0; i < batch; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
            std::swap(order[i], order[pick(rng)]);
            rows[i] = order[i];
        }
        const LossGradient g = loss_and_gradient(res.model.weights, res.model.bias, data, rows);
        res.loss_trace.push_back(g.loss);

        m_w = a.beta1 * m_w + (1.0 - a.beta1) * g.grad_w;
        v_w = a.beta2 * v_w + (1.0 - a.beta2) * g.grad_w.cwiseProduct(g.grad_w);
        m_b = a.beta1 * m_b + (1.0 - a.beta1) * g.grad_b;
        v_b = a.beta2 * v_b + (1.0 - a.beta2) * g.grad_b * g.grad_b;
        const double c1 = 1.0 - std::pow(a.beta1, static_cast<double>(it));
        const double c2 = 1.0 - std::pow(a.beta2, static_cast<double>(it));
        res.model.weights.array() -=
            a.learning_rate * (m_w.array() / c1) / ((v_w.array() / c2).sqrt() + a.epsilon);
        res.model.bias -= a.learning_rate * (m_b / c1) / (std::sqrt(v_b / c2) + a.epsilon);
    }
    return res;
}

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    void add(int truth, int predicted) {
        if (truth) {
            (predicted ? tp : fn) += 1;
        } else {
            (predicted ? fp : tn) += 1;
        }
    }
};

/// (TP TN - FP FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN)); 0 when any factor
/// of the denominator is 0.
inline double phi_coefficient(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0) {
        throw InvalidArgument("confusion counts must be nonnegative");
    }
    const double a = static_cast<double>(c.tp + c.fp);
    const double b = static_cast<double>(c.tp + c.fn);
    const double d = static_cast<double>(c.tn + c.fp);
    const double e = static_cast<double>(c.tn + c.fn);
    if (a == 0.0 || b == 0.0 || d == 0.0 || e == 0.0) {
        return 0.0;
    }
    const double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                       static_cast<double>(c.fp) * static_cast<double>(c.fn);
    return std::clamp(num / std::sqrt(a * b * d * e), -1.0, 1.0);
}

inline ConfusionCounts confusion(const ClassifierModel& model, const LabeledFeatures& data,
                                 double threshold = 0.5) {
    ConfusionCounts c;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        c.add(data.y[i], model.predict(data.x[i], threshold));
    }
    return c;
}

/// Setup of one one-vs-rest experiment.
struct ClassifyConfig {
    int trash_qubits = 2;
    std::size_t pool_per_class = 150;  // training samples taken from each class
    std::size_t replication = 9;       // copies of each target sample in the pool
    std::size_t test_per_class = 20;
    double threshold = 0.5;
    TrainConfig train;
    std::optional<ShotConfig> shots;
};

struct ClassifyRun {
    ConfusionCounts counts;
    double phi = 0.0;
    double final_loss = 0.0;
};

namespace detail {
inline std::optional<ShotConfig> shots_for(const std::optional<ShotConfig>& base, std::uint64_t salt) {
    if (!base) return std::nullopt;
    return ShotConfig{base->shots, derive_seed(base->seed, salt)};
}
}  // namespace detail

/// Trains and evaluates the one-vs-rest classifier for `label` on prepared
/// per-class sets (ascending label order). The compressor is built from the
/// target class's pool samples.
inline ClassifyRun classify_once(const std::vector<PreparedSet>& sets, int label,
                                 const ClassifyConfig& cfg) {
    const PreparedSet* target = nullptr;
    for (const auto& s : sets) {
        if (s.class_label == label) target = &s;
    }
    if (target == nullptr) {
        throw InvalidArgument("no samples of label " + std::to_string(label));
    }
    for (const auto& s : sets) {
        if (s.train.size() < cfg.pool_per_class) {
            throw InvalidArgument("class " + std::to_string(s.class_label) + " has " +
                                  std::to_string(s.train.size()) + " training samples, pool needs " +
                                  std::to_string(cfg.pool_per_class));
        }
        if (s.test.size() < cfg.test_per_class) {
            throw InvalidArgument("class " + std::to_string(s.class_label) +
                                  " has too few test samples");
        }
    }
    const std::vector<PureState> pool(target->train.begin(),
                                      target->train.begin() + static_cast<std::ptrdiff_t>(cfg.pool_per_class));
    const int n = pool.front().num_qubits();
    const CompressorModel model =
        build_compressor(typical_state(pool), Bipartition::trailing(n, cfg.trash_qubits));

    LabeledFeatures train, test;
    std::uint64_t salt = 0;
    for (const auto& s : sets) {
        const int y = s.class_label == label ? 1 : 0;
        const std::size_t copies = y ? cfg.replication : 1;
        for (std::size_t i = 0; i < cfg.pool_per_class; ++i) {
            const FeatureVector f = extract_features(model, s.train[i], detail::shots_for(cfg.shots, salt++));
            for (std::size_t c = 0; c < copies; ++c) {
                train.x.push_back(f);
                train.y.push_back(y);
            }
        }
        for (std::size_t i = 0; i < cfg.test_per_class; ++i) {
            test.x.push_back(extract_features(model, s.test[i], detail::shots_for(cfg.shots, salt++)));
            test.y.push_back(y);
        }
    }
    const TrainResult tr = train_classifier(train, cfg.train);
    ClassifyRun run;
    run.counts = confusion(tr.model, test, cfg.threshold);
    run.phi = phi_coefficient(run.counts);
    run.final_loss = tr.loss_trace.empty() ? 0.0 : tr.loss_trace.back();
    return run;
}

/// Population mean and standard deviation.
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& v) {
    if (v.empty()) return {};
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / static_cast<double>(v.size()))};
}

}  // namespace sqc
