// Digit-dataset ingestion, preprocessing into 6-qubit amplitude states and
// typical-state (average) computation.

#pragma once

#include "sqc/core/types.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sqc {

inline constexpr int kFeatureCount = 64;

class DataError : public Error {
public:
    using Error::Error;
};

struct Sample {
    std::array<double, kFeatureCount> features{};
    int label = 0;
};

/// Parses one CSV row of 64 nonnegative integer features and a label 0..9.
inline Sample parse_sample_line(std::string_view line, std::size_t line_no) {
    Sample s;
    std::size_t field = 0;
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        return DataError("line " + std::to_string(line_no) + ": " + why);
    };
    while (true) {
        const std::size_t comma = line.find(',', pos);
        std::string_view tok = line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos);
        while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
        while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
        long value = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
            throw fail("field " + std::to_string(field + 1) + " is not an integer");
        }
        if (field < kFeatureCount) {
            if (value < 0) throw fail("negative pixel value");
            s.features[field] = static_cast<double>(value);
        } else if (field == kFeatureCount) {
            if (value < 0 || value > 9) throw fail("label " + std::to_string(value) + " outside 0..9");
            s.label = static_cast<int>(value);
        }
        ++field;
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (field != kFeatureCount + 1) {
        throw fail("expected 65 fields, found " + std::to_string(field));
    }
    return s;
}

inline std::vector<Sample> ingest(std::istream& in) {
    std::vector<Sample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_sample_line(line, line_no));
    }
    return out;
}

inline std::vector<Sample> ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open dataset '" + path + "'");
    }
    return ingest(in);
}

/// Which samples the standardization and min-max statistics are fitted on.
enum class ScalingScope {
    dataset,      // every ingested sample, all classes
    class_train,  // the class's own training subset
};

enum class MinMaxMode {
    per_feature,  // each feature mapped onto [0, 1] independently
    global,       // one min and max over the whole standardized matrix
};

struct PreprocessConfig {
    std::uint64_t seed = 7;
    std::size_t train_size = 160;
    std::size_t test_size = 20;
    /// When a class holds fewer than train_size + test_size samples, train on
    /// whatever remains after the test split instead of failing.
    bool allow_short_train = true;
    ScalingScope scope = ScalingScope::dataset;
    MinMaxMode minmax = MinMaxMode::per_feature;
};

struct FeatureStats {
    std::array<double, kFeatureCount> mean{};
    std::array<double, kFeatureCount> stddev{};
    std::array<double, kFeatureCount> min{};  // of the standardized features
    std::array<double, kFeatureCount> max{};
};

struct PreparedSet {
    int class_label = 0;
    std::vector<PureState> train;
    std::vector<PureState> test;
    std::vector<std::size_t> train_rows;  // indices into the ingested samples
    std::vector<std::size_t> test_rows;
    FeatureStats stats;
    std::uint64_t seed = 0;
};

namespace detail {

inline FeatureStats fit_stats(const std::vector<Sample>& samples, const std::vector<std::size_t>& rows,
                              MinMaxMode minmax) {
    FeatureStats st;
    const double count = static_cast<double>(rows.size());
    for (int f = 0; f < kFeatureCount; ++f) {
        double sum = 0.0;
        for (auto r : rows) sum += samples[r].features[f];
        const double mean = sum / count;
        double ss = 0.0;
        for (auto r : rows) {
            const double d = samples[r].features[f] - mean;
            ss += d * d;
        }
        st.mean[f] = mean;
        st.stddev[f] = std::sqrt(ss / count);
    }
    auto standardize = [&](double x, int f) {
        return st.stddev[f] > 0.0 ? (x - st.mean[f]) / st.stddev[f] : 0.0;
    };
    st.min.fill(std::numeric_limits<double>::infinity());
    st.max.fill(-std::numeric_limits<double>::infinity());
    for (auto r : rows) {
        for (int f = 0; f < kFeatureCount; ++f) {
            const double z = standardize(samples[r].features[f], f);
            st.min[f] = std::min(st.min[f], z);
            st.max[f] = std::max(st.max[f], z);
        }
    }
    if (minmax == MinMaxMode::global) {
        const double lo = *std::min_element(st.min.begin(), st.min.end());
        const double hi = *std::max_element(st.max.begin(), st.max.end());
        st.min.fill(lo);
        st.max.fill(hi);
    }
    return st;
}

inline PureState apply_stats(const Sample& s, const FeatureStats& st) {
    RealVector v(kFeatureCount);
    for (int f = 0; f < kFeatureCount; ++f) {
        if (!(st.stddev[f] > 0.0)) {
            v(f) = 0.0;  // constant feature, also under a global min-max
            continue;
        }
        const double z = (s.features[f] - st.mean[f]) / st.stddev[f];
        const double range = st.max[f] - st.min[f];
        // Values outside the fitted range (unseen test rows) are clipped.
        v(f) = range > 0.0 ? std::clamp((z - st.min[f]) / range, 0.0, 1.0) : 0.0;
    }
    if (!(v.norm() > 0.0)) {
        throw DataError("sample scales to the zero vector and cannot be normalized");
    }
    return PureState::from_real(v);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic child seed for a (seed, salt) pair.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return detail::mix_seed(seed, salt);
}

/// Splits every class present in `samples` into test / train subsets (shuffled
/// by seed), standardizes each feature to zero mean and unit variance,
/// rescales to [0, 1] and L2-normalizes each sample into a 6-qubit state.
/// Zero-variance features map to 0. Sets are returned in ascending label order.
inline std::vector<PreparedSet> preprocess(const std::vector<Sample>& samples,
                                           const PreprocessConfig& cfg) {
    if (samples.empty()) {
        throw DataError("no samples to preprocess");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        by_class[samples[i].label].push_back(i);
    }

    std::vector<std::size_t> all_rows(samples.size());
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
    std::optional<FeatureStats> shared;
    if (cfg.scope == ScalingScope::dataset) {
        shared = detail::fit_stats(samples, all_rows, cfg.minmax);
    }

    std::vector<PreparedSet> out;
    for (auto& [label, rows] : by_class) {
        const std::size_t need = cfg.train_size + cfg.test_size;
        if (rows.size() < need && (!cfg.allow_short_train || rows.size() <= cfg.test_size)) {
            throw DataError("class " + std::to_string(label) + " has " + std::to_string(rows.size()) +
                            " samples, split needs " + std::to_string(need));
        }
        std::mt19937_64 rng(detail::mix_seed(cfg.seed, static_cast<std::uint64_t>(label)));
        std::vector<std::size_t> shuffled = rows;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);

        PreparedSet set;
        set.class_label = label;
        set.seed = cfg.seed;
        set.test_rows.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(cfg.test_size));
        const std::size_t train_n = std::min(cfg.train_size, shuffled.size() - cfg.test_size);
        set.train_rows.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(cfg.test_size),
                              shuffled.begin() + static_cast<std::ptrdiff_t>(cfg.test_size + train_n));
        set.stats = shared ? *shared : detail::fit_stats(samples, set.train_rows, cfg.minmax);
        for (auto r : set.train_rows) set.train.push_back(detail::apply_stats(samples[r], set.stats));
        for (auto r : set.test_rows) set.test.push_back(detail::apply_stats(samples[r], set.stats));
        out.push_back(std::move(set));
    }
    return out;
}

namespace detail {
inline void require_nonnegative_real(const PureState& s) {
    for (Eigen::Index i = 0; i < s.dimension(); ++i) {
        if (std::abs(s[i].imag()) > 1e-12 || s[i].real() < -1e-12) {
            throw InvalidArgument("typical state needs real nonnegative amplitudes");
        }
    }
}
}  // namespace detail

/// Running (unnormalized) average of states; the typical state is its
/// direction.
class RunningMean {
public:
    explicit RunningMean(const PureState& first)
        : mean_(first.amplitudes()), count_(1) {
        detail::require_nonnegative_real(first);
    }

    RunningMean(ComplexVector mean, std::size_t count) : mean_(std::move(mean)), count_(count) {
        if (count_ < 1) throw InvalidArgument("running mean needs a positive count");
    }

    /// mean' = (M mean + x) / (M + 1)
    void add(const PureState& x) {
        if (x.dimension() != mean_.size()) {
            throw InvalidArgument("state dimension differs from running mean");
        }
        detail::require_nonnegative_real(x);
        const double m = static_cast<double>(count_);
        mean_ = (m * mean_ + x.amplitudes()) / (m + 1.0);
        ++count_;
    }

    const ComplexVector& mean() const { return mean_; }
    std::size_t count() const { return count_; }

    PureState typical() const {
        if (!(mean_.norm() > 0.0)) {
            throw NumericalError("average state has zero length");
        }
        return PureState::normalized(mean_);
    }

private:
    ComplexVector mean_;
    std::size_t count_;
};

/// Component-wise mean of the states, renormalized.
inline PureState typical_state(const std::vector<PureState>& states) {
    if (states.empty()) {
        throw InvalidArgument("typical state of an empty set");
    }
    ComplexVector sum = ComplexVector::Zero(states.front().dimension());
    for (const auto& s : states) {
        if (s.dimension() != sum.size()) throw InvalidArgument("states differ in dimension");
        detail::require_nonnegative_real(s);
        sum += s.amplitudes();
    }
    sum /= static_cast<double>(states.size());
    if (!(sum.norm() > 0.0)) {
        throw NumericalError("average state has zero length");
    }
    return PureState::normalized(sum);
}

/// Sum of squared L2 distances between each state and a candidate vector.
inline double total_distance(const std::vector<PureState>& states, const ComplexVector& candidate) {
    double d = 0.0;
    for (const auto& s : states) {
        if (s.dimension() != candidate.size()) throw InvalidArgument("states differ in dimension");
        d += (s.amplitudes() - candidate).squaredNorm();
    }
    return d;
}

/// Adds one state to an average of `count` states and returns the updated
/// average (unnormalized; call RunningMean::typical for the state).
inline RunningMean incremental_update(const ComplexVector& average, std::size_t count,
                                      const PureState& new_state) {
    RunningMean rm(average, count);
    rm.add(new_state);
    return rm;
}

}  // namespace sqc
