// Benchmark drivers behind the CLI: fidelity tables per reference policy,
// one-class classification, and the QAE comparison. All randomness derives
// from the config's root seed; outputs are CSV plus JSON with the resolved
// config written alongside.

#pragma once

#include "sqc/classifier.hpp"
#include "sqc/compressor.hpp"
#include "sqc/dataio.hpp"
#include "sqc/qae.hpp"
#include "sqc/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sqc {

struct ExperimentConfig {
    std::string dataset;
    std::uint64_t seed = 7;
    std::size_t train_size = 160;
    std::size_t test_size = 20;
    // fidelity tables
    int fidelity_trash_qubits = 3;
    std::vector<ReferencePolicy> policies{ReferencePolicy::zero, ReferencePolicy::top_eigenvector,
                                          ReferencePolicy::per_qubit_eigenvector};
    std::size_t fidelity_seeds = 20;
    // classification
    int classify_trash_qubits = 2;
    std::size_t repetitions = 10;
    // QAE baseline
    std::size_t qae_seeds = 3;
    std::size_t qae_evaluations = 1000;
    std::string qae_layout = "ry-cnot-60-45";
    std::optional<std::uint64_t> shots;
    std::string out_dir = "results";
};

inline Json config_to_json(const ExperimentConfig& c) {
    Json pol = Json::array();
    for (auto p : c.policies) pol.push_back(std::string(to_string(p)));
    return {{"dataset", c.dataset},
            {"seed", c.seed},
            {"train_size", c.train_size},
            {"test_size", c.test_size},
            {"fidelity_trash_qubits", c.fidelity_trash_qubits},
            {"policies", pol},
            {"fidelity_seeds", c.fidelity_seeds},
            {"classify_trash_qubits", c.classify_trash_qubits},
            {"repetitions", c.repetitions},
            {"qae_seeds", c.qae_seeds},
            {"qae_evaluations", c.qae_evaluations},
            {"qae_layout", c.qae_layout},
            {"shots", c.shots ? Json(*c.shots) : Json(nullptr)},
            {"out_dir", c.out_dir}};
}

inline ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c;
    try {
        c.dataset = j.value("dataset", c.dataset);
        c.seed = j.value("seed", c.seed);
        c.train_size = j.value("train_size", c.train_size);
        c.test_size = j.value("test_size", c.test_size);
        c.fidelity_trash_qubits = j.value("fidelity_trash_qubits", c.fidelity_trash_qubits);
        if (j.contains("policies")) {
            c.policies.clear();
            for (const auto& p : j.at("policies")) c.policies.push_back(parse_policy(p.get<std::string>()));
        }
        c.fidelity_seeds = j.value("fidelity_seeds", c.fidelity_seeds);
        c.classify_trash_qubits = j.value("classify_trash_qubits", c.classify_trash_qubits);
        c.repetitions = j.value("repetitions", c.repetitions);
        c.qae_seeds = j.value("qae_seeds", c.qae_seeds);
        c.qae_evaluations = j.value("qae_evaluations", c.qae_evaluations);
        c.qae_layout = j.value("qae_layout", c.qae_layout);
        if (j.contains("shots") && !j.at("shots").is_null()) c.shots = j.at("shots").get<std::uint64_t>();
        c.out_dir = j.value("out_dir", c.out_dir);
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("bad config: ") + e.what());
    }
    return c;
}

inline AnsatzLayout layout_by_name(const std::string& name) {
    if (name == cnot_ansatz().name) return cnot_ansatz();
    if (name == cz_ansatz().name) return cz_ansatz();
    throw InvalidArgument("unknown ansatz layout '" + name + "' (ry-cnot-60-45|ry-cz-50-40)");
}

/// Avg = mean of per-seed means, Std = mean of per-seed population stds.
struct LabelStats {
    double avg = 0.0;
    double std = 0.0;
};

namespace detail {

inline LabelStats pool_seeds(const std::vector<MeanStd>& per_seed) {
    LabelStats s;
    if (per_seed.empty()) return s;
    for (const auto& m : per_seed) {
        s.avg += m.mean;
        s.std += m.std;
    }
    s.avg /= static_cast<double>(per_seed.size());
    s.std /= static_cast<double>(per_seed.size());
    return s;
}

inline PreprocessConfig split_config(const ExperimentConfig& c, std::uint64_t seed) {
    PreprocessConfig pc;
    pc.seed = seed;
    pc.train_size = c.train_size;
    pc.test_size = c.test_size;
    return pc;
}

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

inline CompressorModel class_compressor(const PreparedSet& set, int trash_qubits) {
    const PureState t = typical_state(set.train);
    return build_compressor(t, Bipartition::trailing(t.num_qubits(), trash_qubits));
}

inline std::vector<double> test_fidelities(const CompressorModel& model, const PreparedSet& set,
                                           ReferencePolicy policy, std::optional<std::uint64_t> shots,
                                           std::uint64_t seed) {
    std::vector<double> f;
    f.reserve(set.test.size());
    for (std::size_t i = 0; i < set.test.size(); ++i) {
        std::optional<ShotConfig> sc;
        if (shots) sc = ShotConfig{*shots, derive_seed(seed, i)};
        f.push_back(roundtrip(model, set.test[i], policy, sc).fidelity);
    }
    return f;
}

}  // namespace detail

struct FidelityRow {
    int label = 0;
    std::vector<LabelStats> by_policy;  // same order as config.policies
    int rank = 0;                       // Schmidt rank of the first seed's typical state
};

struct FidelityBench {
    std::vector<ReferencePolicy> policies;
    std::vector<FidelityRow> rows;
};

inline FidelityBench run_fidelity_bench(const std::vector<Sample>& samples, const ExperimentConfig& cfg) {
    if (cfg.fidelity_seeds == 0 || cfg.policies.empty()) {
        throw InvalidArgument("fidelity bench needs at least one seed and one policy");
    }
    FidelityBench bench{cfg.policies, {}};
    std::vector<std::vector<std::vector<MeanStd>>> acc;  // label, policy, seed
    for (std::size_t s = 0; s < cfg.fidelity_seeds; ++s) {
        const std::uint64_t seed = derive_seed(cfg.seed, s);
        const auto sets = preprocess(samples, detail::split_config(cfg, seed));
        if (acc.empty()) {
            acc.assign(sets.size(), std::vector<std::vector<MeanStd>>(cfg.policies.size()));
            for (const auto& set : sets) bench.rows.push_back({set.class_label, {}, 0});
        }
        for (std::size_t l = 0; l < sets.size(); ++l) {
            const CompressorModel model = detail::class_compressor(sets[l], cfg.fidelity_trash_qubits);
            if (s == 0) bench.rows[l].rank = model.schmidt.rank;
            for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
                acc[l][p].push_back(mean_std(
                    detail::test_fidelities(model, sets[l], cfg.policies[p], cfg.shots, derive_seed(seed, 1000 + l))));
            }
        }
    }
    for (std::size_t l = 0; l < bench.rows.size(); ++l) {
        for (const auto& per_seed : acc[l]) bench.rows[l].by_policy.push_back(detail::pool_seeds(per_seed));
    }
    return bench;
}

inline std::string policy_column(ReferencePolicy p) {
    switch (p) {
        case ReferencePolicy::zero: return "Zero";
        case ReferencePolicy::top_eigenvector: return "Opt1";
        case ReferencePolicy::per_qubit_eigenvector: return "Opt2";
    }
    return "?";
}

inline std::string to_csv(const FidelityBench& b) {
    std::ostringstream out;
    out << "Label";
    for (auto p : b.policies) out << ',' << policy_column(p) << " Avg," << policy_column(p) << " Std";
    out << '\n';
    for (const auto& r : b.rows) {
        out << r.label;
        for (const auto& s : r.by_policy) out << ',' << detail::fmt(s.avg) << ',' << detail::fmt(s.std);
        out << '\n';
    }
    return out.str();
}

inline Json to_json(const FidelityBench& b) {
    Json rows = Json::array();
    for (const auto& r : b.rows) {
        Json cols = Json::object();
        for (std::size_t p = 0; p < b.policies.size(); ++p) {
            cols[std::string(to_string(b.policies[p]))] = {{"avg", r.by_policy[p].avg}, {"std", r.by_policy[p].std}};
        }
        rows.push_back({{"label", r.label}, {"schmidt_rank", r.rank}, {"fidelity", cols}});
    }
    return {{"table", "fidelity"}, {"rows", rows}};
}

struct ClassifyRow {
    int label = 0;
    LabelStats phi;
    std::vector<ClassifyRun> runs;
};

inline std::vector<ClassifyRow> run_classify_bench(const std::vector<Sample>& samples, const ExperimentConfig& cfg) {
    if (cfg.repetitions == 0) throw InvalidArgument("classification needs at least one repetition");
    std::vector<ClassifyRow> rows;
    for (std::size_t r = 0; r < cfg.repetitions; ++r) {
        const std::uint64_t seed = derive_seed(cfg.seed, 1'000'000 + r);
        const auto sets = preprocess(samples, detail::split_config(cfg, seed));
        if (rows.empty()) {
            for (const auto& s : sets) rows.push_back({s.class_label, {}, {}});
        }
        for (std::size_t l = 0; l < sets.size(); ++l) {
            ClassifyConfig cc;
            cc.trash_qubits = cfg.classify_trash_qubits;
            cc.test_per_class = cfg.test_size;
            cc.train.seed = derive_seed(seed, 100 + l);
            if (cfg.shots) cc.shots = ShotConfig{*cfg.shots, derive_seed(seed, 200 + l)};
            rows[l].runs.push_back(classify_once(sets, rows[l].label, cc));
        }
    }
    for (auto& row : rows) {
        std::vector<double> phis;
        for (const auto& run : row.runs) phis.push_back(run.phi);
        const MeanStd ms = mean_std(phis);
        row.phi = {ms.mean, ms.std};
    }
    return rows;
}

inline std::string to_csv(const std::vector<ClassifyRow>& rows) {
    std::ostringstream out;
    out << "Label,Avg,Std\n";
    for (const auto& r : rows) out << r.label << ',' << detail::fmt(r.phi.avg) << ',' << detail::fmt(r.phi.std) << '\n';
    return out.str();
}

inline Json to_json(const std::vector<ClassifyRow>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) {
        Json runs = Json::array();
        for (const auto& run : r.runs) {
            runs.push_back({{"phi", run.phi},
                            {"tp", run.counts.tp},
                            {"fp", run.counts.fp},
                            {"tn", run.counts.tn},
                            {"fn", run.counts.fn},
                            {"final_loss", run.final_loss}});
        }
        out.push_back({{"label", r.label}, {"phi_avg", r.phi.avg}, {"phi_std", r.phi.std}, {"runs", runs}});
    }
    return {{"table", "classification"}, {"rows", out}};
}

struct QaeRow {
    int label = 0;
    LabelStats qae;
    LabelStats sqc;
    double objective = 0.0;  // mean trained trash fidelity
};

/// Trains one ansatz per label and seed on the training split and compares
/// test fidelities with the zero-reference Schmidt compressor on the same
/// split. Uses the first qae_seeds seeds of the fidelity bench.
inline std::vector<QaeRow> run_qae_bench(const std::vector<Sample>& samples, const ExperimentConfig& cfg) {
    if (cfg.qae_seeds == 0) throw InvalidArgument("QAE bench needs at least one seed");
    QaeConfig qc;
    qc.layout = layout_by_name(cfg.qae_layout);
    qc.optimizer.max_evaluations = cfg.qae_evaluations;
    std::vector<QaeRow> rows;
    std::vector<std::vector<MeanStd>> qae_acc, sqc_acc;
    for (std::size_t s = 0; s < cfg.qae_seeds; ++s) {
        const std::uint64_t seed = derive_seed(cfg.seed, s);
        const auto sets = preprocess(samples, detail::split_config(cfg, seed));
        if (rows.empty()) {
            for (const auto& set : sets) rows.push_back({set.class_label, {}, {}, 0.0});
            qae_acc.resize(sets.size());
            sqc_acc.resize(sets.size());
        }
        for (std::size_t l = 0; l < sets.size(); ++l) {
            if (sets[l].train.front().num_qubits() != qc.layout.num_qubits) {
                throw InvalidArgument("ansatz " + qc.layout.name + " does not fit " +
                                      std::to_string(sets[l].train.front().num_qubits()) + "-qubit data");
            }
            qc.seed = derive_seed(seed, 2000 + l);
            const TrainState st = train_qae(sets[l].train, qc);
            const ComplexMatrix u = ansatz_unitary(qc.layout, st.theta);
            std::vector<double> f;
            for (const auto& x : sets[l].test) f.push_back(qae_roundtrip_fidelity(u, qc.trash, x));
            qae_acc[l].push_back(mean_std(f));
            rows[l].objective += st.objective / static_cast<double>(cfg.qae_seeds);
            const CompressorModel model = detail::class_compressor(sets[l], static_cast<int>(qc.trash.size()));
            sqc_acc[l].push_back(mean_std(detail::test_fidelities(model, sets[l], ReferencePolicy::zero,
                                                                  std::nullopt, 0)));
        }
    }
    for (std::size_t l = 0; l < rows.size(); ++l) {
        rows[l].qae = detail::pool_seeds(qae_acc[l]);
        rows[l].sqc = detail::pool_seeds(sqc_acc[l]);
    }
    return rows;
}

inline std::string to_csv(const std::vector<QaeRow>& rows) {
    std::ostringstream out;
    out << "Label,QAE Avg,QAE Std,SQC Avg,SQC Std\n";
    for (const auto& r : rows) {
        out << r.label << ',' << detail::fmt(r.qae.avg) << ',' << detail::fmt(r.qae.std) << ','
            << detail::fmt(r.sqc.avg) << ',' << detail::fmt(r.sqc.std) << '\n';
    }
    return out.str();
}

inline Json to_json(const std::vector<QaeRow>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) {
        out.push_back({{"label", r.label},
                       {"qae", {{"avg", r.qae.avg}, {"std", r.qae.std}}},
                       {"sqc", {{"avg", r.sqc.avg}, {"std", r.sqc.std}}},
                       {"train_objective", r.objective}});
    }
    return {{"table", "qae"}, {"rows", out}};
}

/// Writes <dir>/<stem>.csv, <dir>/<stem>.json and <dir>/config.json.
inline void write_outputs(const ExperimentConfig& cfg, const std::string& stem, const std::string& csv,
                          const Json& json) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw Error("cannot create output directory " + cfg.out_dir + ": " + ec.message());
    const fs::path dir(cfg.out_dir);
    {
        std::ofstream out(dir / (stem + ".csv"), std::ios::binary);
        out << csv;
        if (!out) throw Error("write failed for " + (dir / (stem + ".csv")).string());
    }
    write_json((dir / (stem + ".json")).string(), json);
    write_json((dir / "config.json").string(), config_to_json(cfg));
}

}  // namespace sqc
