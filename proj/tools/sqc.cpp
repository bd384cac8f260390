// Command-line front end: benchmarks over the digit dataset, the CNOT cost
// model and state-preparation checks.

#include "sqc/costmodel.hpp"
#include "sqc/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#ifndef SQC_DEFAULT_DATASET
#define SQC_DEFAULT_DATASET "data/optdigits.csv"
#endif

using namespace sqc;

namespace {

struct Options {
    std::string config_file;
    std::string dataset = SQC_DEFAULT_DATASET;
    std::optional<std::uint64_t> seed;
    std::optional<int> trash_qubits;
    std::optional<std::string> policy;
    std::optional<std::uint64_t> shots;
    std::optional<std::string> out;
    std::optional<std::size_t> seeds;
    std::optional<std::size_t> repetitions;
    std::optional<std::size_t> evaluations;
    std::optional<std::string> layout;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_file, "JSON config from a previous run");
    cmd->add_option("--dataset", o.dataset, "optdigits CSV (64 features + label per row)");
    cmd->add_option("--seed", o.seed, "root seed");
    cmd->add_option("--out", o.out, "output directory");
}

ExperimentConfig resolve(const Options& o, bool dataset_given) {
    ExperimentConfig c = o.config_file.empty() ? ExperimentConfig{} : config_from_json(read_json(o.config_file));
    if (dataset_given || c.dataset.empty()) c.dataset = o.dataset;
    if (o.seed) c.seed = *o.seed;
    if (o.shots) {
        if (*o.shots == 0) throw InvalidArgument("--shots must be positive");
        c.shots = *o.shots;
    }
    if (o.out) c.out_dir = *o.out;
    if (o.policy) c.policies = {parse_policy(*o.policy)};
    if (o.repetitions) c.repetitions = *o.repetitions;
    if (o.evaluations) c.qae_evaluations = *o.evaluations;
    if (o.layout) c.qae_layout = *o.layout;
    return c;
}

std::vector<Sample> load_dataset(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        throw DataError("dataset '" + path +
                        "' not found; pass --dataset or fetch it with tools/fetch_optdigits.py");
    }
    return ingest(path);
}

Json cost_json(const CostReport& r) {
    return {{"case", std::string(to_string(r.cost_case))},
            {"n_a", r.n_a},
            {"n_b", r.n_b},
            {"m", r.m},
            {"cnot_a", r.cnot_a},
            {"cnot_b", r.cnot_b},
            {"cnot_entangle", r.cnot_entangle},
            {"total_ceil", r.total_ceil}};
}

PureState read_state(const std::string& path) {
    const Json j = read_json(path);
    ComplexVector v;
    try {
        if (j.is_array()) {
            v.resize(static_cast<Eigen::Index>(j.size()));
            for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
        } else {
            const auto re = j.at("re").get<std::vector<double>>();
            const auto im = j.value("im", std::vector<double>(re.size(), 0.0));
            if (im.size() != re.size()) throw InvalidArgument("re and im differ in length");
            v.resize(static_cast<Eigen::Index>(re.size()));
            for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
        }
    } catch (const Json::exception& e) {
        throw InvalidArgument(path + ": expected an array of reals or {\"re\": [...], \"im\": [...]}: " + e.what());
    }
    return PureState(v);
}

Json prep_verify(const PureState& state, std::optional<int> n_b_opt) {
    const int n = state.num_qubits();
    if (n < 2) throw InvalidArgument("state preparation needs at least 2 qubits");
    const int n_b = n_b_opt.value_or(n / 2);
    const BondSearchResult best = search_min_bond(state, n_b);
    const ComplexMatrix prep = build_state_preparation(state, best.bipartition);
    const double fidelity = std::norm(state.amplitudes().dot(prep.col(0)));
    const CompressorModel model = build_compressor(state, best.bipartition);
    return {{"num_qubits", n},
            {"block_a", best.bipartition.block_a},
            {"block_b", best.bipartition.block_b},
            {"rank", best.rank},
            {"measure", model.schmidt.measure},
            {"lambdas", detail::reals_to_json(model.schmidt.lambdas.head(model.schmidt.rank))},
            {"prep_fidelity", fidelity},
            {"typical_roundtrip_fidelity", roundtrip(model, state, ReferencePolicy::zero).fidelity},
            {"cost", cost_json(cost_of_model(model))}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schmidt quantum compressor toolkit"};
    app.require_subcommand(1);
    Options o;

    auto* fid = app.add_subcommand("fidelity-bench", "per-label roundtrip fidelity for each reference policy");
    add_common(fid, o);
    fid->add_option("--trash-qubits", o.trash_qubits, "trash register size (default 3)");
    fid->add_option("--policy", o.policy, "only this reference policy: zero, opt1 or opt2");
    fid->add_option("--shots", o.shots, "tomography shots per Pauli string (default exact)");
    fid->add_option("--seeds", o.seeds, "number of train/test splits (default 20)");

    auto* cls = app.add_subcommand("classify", "one-vs-rest classification from trash tomography");
    add_common(cls, o);
    cls->add_option("--trash-qubits", o.trash_qubits, "trash register size (default 2)");
    cls->add_option("--shots", o.shots, "tomography shots per Pauli string (default exact)");
    cls->add_option("--repetitions", o.repetitions, "fresh splits per label (default 10)");

    auto* qae = app.add_subcommand("qae-bench", "variational autoencoder baseline against the compressor");
    add_common(qae, o);
    qae->add_option("--seeds", o.seeds, "number of train/test splits (default 3)");
    qae->add_option("--evaluations", o.evaluations, "objective evaluations per training (default 1000)");
    qae->add_option("--layout", o.layout, "ansatz: ry-cnot-60-45 or ry-cz-50-40");

    int n_a = 3, n_b = 3, m = 3;
    auto* cost = app.add_subcommand("cost", "CNOT count of the compressor circuit");
    cost->add_option("--n-a", n_a, "latent block size")->required();
    cost->add_option("--n-b", n_b, "trash block size")->required();
    cost->add_option("--m", m, "Schmidt measure")->required();

    std::string state_file;
    auto* prep = app.add_subcommand("prep-verify", "bipartition search and state-preparation check");
    prep->add_option("state", state_file, "JSON amplitudes: [reals] or {\"re\": [...], \"im\": [...]}")->required();
    prep->add_option("--trash-qubits", o.trash_qubits, "block B size (default floor(n/2))");

    CLI11_PARSE(app, argc, argv);

    try {
        const bool dataset_given = app.got_subcommand(fid) ? fid->count("--dataset") > 0
                                   : app.got_subcommand(cls) ? cls->count("--dataset") > 0
                                   : app.got_subcommand(qae) ? qae->count("--dataset") > 0
                                                             : false;
        if (app.got_subcommand(cost)) {
            std::cout << cost_json(cnot_count(n_a, n_b, m)).dump(2) << '\n';
        } else if (app.got_subcommand(prep)) {
            std::cout << prep_verify(read_state(state_file), o.trash_qubits).dump(2) << '\n';
        } else if (app.got_subcommand(fid)) {
            ExperimentConfig c = resolve(o, dataset_given);
            if (o.trash_qubits) c.fidelity_trash_qubits = *o.trash_qubits;
            if (o.seeds) c.fidelity_seeds = *o.seeds;
            const FidelityBench b = run_fidelity_bench(load_dataset(c.dataset), c);
            write_outputs(c, "fidelity", to_csv(b), to_json(b));
            std::cout << to_csv(b);
        } else if (app.got_subcommand(cls)) {
            ExperimentConfig c = resolve(o, dataset_given);
            if (o.trash_qubits) c.classify_trash_qubits = *o.trash_qubits;
            const auto rows = run_classify_bench(load_dataset(c.dataset), c);
            write_outputs(c, "classify", to_csv(rows), to_json(rows));
            std::cout << to_csv(rows);
        } else if (app.got_subcommand(qae)) {
            ExperimentConfig c = resolve(o, dataset_given);
            if (o.seeds) c.qae_seeds = *o.seeds;
            const auto rows = run_qae_bench(load_dataset(c.dataset), c);
            write_outputs(c, "qae", to_csv(rows), to_json(rows));
            std::cout << to_csv(rows);
        }
    } catch (const std::exception& e) {
        std::cerr << "sqc: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
