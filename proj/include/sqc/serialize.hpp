// JSON containers for compressor models and prepared datasets. Reals are
// written with 17 significant digits, so every binary64 value round-trips
// exactly.

#pragma once

#include "sqc/compressor.hpp"
#include "sqc/dataio.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <utility>

namespace sqc {

using Json = nlohmann::json;

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline Json reals_to_json(const RealVector& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

inline double json_real(const Json& j) {
    if (!j.is_number()) throw InvalidArgument("expected a number, found " + std::string(j.type_name()));
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw InvalidArgument("non-finite number in model");
    return x;
}

inline RealVector reals_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidArgument("expected an array of reals");
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = json_real(j[i]);
    return v;
}

// Column-major real and imaginary parts.
inline Json matrix_to_json(const ComplexMatrix& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const Json& re = j.at("re");
    const Json& im = j.at("im");
    if (rows < 0 || cols < 0 || re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size()) {
        throw InvalidArgument("matrix shape does not match its entries");
    }
    ComplexMatrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r, ++k) m(r, c) = Complex(json_real(re[k]), json_real(im[k]));
    }
    return m;
}

inline void require_unitary(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols() ||
        (m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())).norm() > 1e-8) {
        throw InvalidArgument(std::string(what) + " is not unitary");
    }
}

}  // namespace detail

inline Json model_to_json(const CompressorModel& model, ReferencePolicy policy) {
    const SchmidtForm& s = model.schmidt;
    return {
        {"format", "sqc-compressor"},
        {"version", kModelFormatVersion},
        {"n", model.num_qubits()},
        {"block_a", model.bipartition.block_a},
        {"block_b", model.bipartition.block_b},
        {"typical", detail::matrix_to_json(model.typical_state.amplitudes())},
        {"lambdas", detail::reals_to_json(s.lambdas)},
        {"rank", s.rank},
        {"measure", s.measure},
        {"schmidt_u", detail::matrix_to_json(s.u)},
        {"schmidt_v", detail::matrix_to_json(s.v)},
        // completed unitaries, so the completion columns travel with the model
        {"u_inv", detail::matrix_to_json(model.u_inv)},
        {"v_inv", detail::matrix_to_json(model.v_inv)},
        {"policy", std::string(to_string(policy))},
    };
}

struct LoadedModel {
    CompressorModel model;
    ReferencePolicy policy = ReferencePolicy::zero;
};

/// Rebuilds the model from its stored parts; C is reassembled, not read.
inline LoadedModel model_from_json(const Json& j) {
    try {
        if (j.at("format") != "sqc-compressor" || j.at("version") != kModelFormatVersion) {
            throw InvalidArgument("not a version " + std::to_string(kModelFormatVersion) + " compressor model");
        }
        LoadedModel out;
        CompressorModel& m = out.model;
        m.bipartition = {j.at("block_a").get<std::vector<int>>(), j.at("block_b").get<std::vector<int>>()};
        const int n = j.at("n").get<int>();
        m.bipartition.validate(n);
        detail::check_register(n);
        const ComplexMatrix typical = detail::matrix_from_json(j.at("typical"));
        if (typical.cols() != 1) throw InvalidArgument("typical state must be a column");
        m.typical_state = PureState(typical.col(0));
        if (m.typical_state.num_qubits() != n) throw InvalidArgument("typical state size does not match n");

        SchmidtForm& s = m.schmidt;
        s.bipartition = m.bipartition;
        s.lambdas = detail::reals_from_json(j.at("lambdas"));
        s.rank = j.at("rank").get<int>();
        s.measure = j.at("measure").get<int>();
        s.u = detail::matrix_from_json(j.at("schmidt_u"));
        s.v = detail::matrix_from_json(j.at("schmidt_v"));
        if (s.measure < 0 || s.measure > m.bipartition.n_b() || s.measure > m.bipartition.n_a() ||
            s.lambdas.size() != (Eigen::Index{1} << s.measure) || s.rank < 1 || s.rank > s.lambdas.size() ||
            s.u.cols() != s.lambdas.size() || s.v.cols() != s.lambdas.size()) {
            throw InvalidArgument("inconsistent Schmidt data");
        }

        m.u_inv = detail::matrix_from_json(j.at("u_inv"));
        m.v_inv = detail::matrix_from_json(j.at("v_inv"));
        if (m.u_inv.rows() != (Eigen::Index{1} << m.bipartition.n_a()) ||
            m.v_inv.rows() != (Eigen::Index{1} << m.bipartition.n_b())) {
            throw InvalidArgument("block unitary sizes do not match the bipartition");
        }
        detail::require_unitary(m.u_inv, "u_inv");
        detail::require_unitary(m.v_inv, "v_inv");
        m.cnot_pairs = detail::cnot_pairs_for(m.bipartition, s.measure);
        m.full_matrix_c = assemble_compressor(m.bipartition, m.u_inv, m.v_inv, s.measure);
        out.policy = parse_policy(j.at("policy").get<std::string>());
        return out;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed model: ") + e.what());
    }
}

inline Json prepared_to_json(const PreparedSet& set) {
    auto states = [](const std::vector<PureState>& v) {
        Json a = Json::array();
        for (const auto& s : v) a.push_back(detail::reals_to_json(s.amplitudes().real()));
        return a;
    };
    return {
        {"format", "sqc-prepared"},
        {"class_label", set.class_label},
        {"seed", set.seed},
        {"train_rows", set.train_rows},
        {"test_rows", set.test_rows},
        {"stats",
         {{"mean", set.stats.mean}, {"stddev", set.stats.stddev}, {"min", set.stats.min}, {"max", set.stats.max}}},
        {"train", states(set.train)},
        {"test", states(set.test)},
    };
}

inline PreparedSet prepared_from_json(const Json& j) {
    try {
        if (j.at("format") != "sqc-prepared") throw InvalidArgument("not a prepared set");
        PreparedSet set;
        set.class_label = j.at("class_label").get<int>();
        set.seed = j.at("seed").get<std::uint64_t>();
        set.train_rows = j.at("train_rows").get<std::vector<std::size_t>>();
        set.test_rows = j.at("test_rows").get<std::vector<std::size_t>>();
        const Json& st = j.at("stats");
        set.stats.mean = st.at("mean").get<std::array<double, kFeatureCount>>();
        set.stats.stddev = st.at("stddev").get<std::array<double, kFeatureCount>>();
        set.stats.min = st.at("min").get<std::array<double, kFeatureCount>>();
        set.stats.max = st.at("max").get<std::array<double, kFeatureCount>>();
        auto states = [](const Json& a) {
            std::vector<PureState> v;
            for (const auto& s : a) v.emplace_back(ComplexVector(detail::reals_from_json(s).cast<Complex>()));
            return v;
        };
        set.train = states(j.at("train"));
        set.test = states(j.at("test"));
        if (set.train.size() != set.train_rows.size() || set.test.size() != set.test_rows.size()) {
            throw InvalidArgument("state and row counts differ");
        }
        return set;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed prepared set: ") + e.what());
    }
}

inline void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed for " + path);
}

inline Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

}  // namespace sqc
