// Builds the compressor for one digit class, reports test-set fidelity for
// each reference policy and saves the model as JSON.

#include "sqc/costmodel.hpp"
#include "sqc/serialize.hpp"

#include <cstdio>
#include <cstdlib>

using namespace sqc;

int main(int argc, char** argv) {
    const int label = argc > 1 ? std::atoi(argv[1]) : 0;
    const std::string dataset = argc > 2 ? argv[2] : SQC_DEFAULT_DATASET;
    try {
        const auto sets = preprocess(ingest(dataset), {});
        const PreparedSet& set = sets.at(static_cast<std::size_t>(label));
        const CompressorModel model = build_compressor(typical_state(set.train), Bipartition::trailing(6, 3));
        std::printf("label %d: Schmidt rank %d, measure %d, %lld CNOTs\n", label, model.schmidt.rank,
                    model.schmidt.measure, static_cast<long long>(cost_of_model(model).total_ceil));
        for (auto policy : {ReferencePolicy::zero, ReferencePolicy::top_eigenvector,
                            ReferencePolicy::per_qubit_eigenvector}) {
            double sum = 0.0;
            for (const auto& x : set.test) sum += roundtrip(model, x, policy).fidelity;
            std::printf("  %-5s mean test fidelity %.4f\n", std::string(to_string(policy)).c_str(),
                        sum / static_cast<double>(set.test.size()));
        }
        const std::string path = "digit" + std::to_string(label) + "_model.json";
        write_json(path, model_to_json(model, ReferencePolicy::zero));
        std::printf("model written to %s\n", path.c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "compress_digit: %s\n", e.what());
        return 1;
    }
    return 0;
}
