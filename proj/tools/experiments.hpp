#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vbcent/graph.hpp"
#include "vbcent/netgen.hpp"
#include "vbcent/optim.hpp"
#include "vbcent/sir.hpp"
#include "vbcent/vbcgp.hpp"

namespace vbcent {

// Noise experiment: generate, corrupt, fit, score, one tidy CSV row per
// (network, sigma2, Ns, seed, method).

struct NoiseNetworkSpec {
    std::string name;
    std::function<WeightedDigraph(std::uint64_t seed)> generate;
};

// Comma-separated tokens `er:<n>:<p>` / `ba:<n>:<m_attach>`.
std::vector<NoiseNetworkSpec> parse_network_specs(const std::string& text);

struct NoiseRow {
    std::string network;
    double sigma2 = 0.0;
    int ns = 1;
    int seed = 0; // repeat index
    std::string method; // "vbc" or "baseline"
    double kendall = 0.0;
    double top10 = 0.0;
};

struct NoiseExperimentConfig {
    std::vector<NoiseNetworkSpec> networks;
    std::vector<double> sigma2s = {1.0, 5.0, 10.0};
    std::vector<int> ns_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int repeats = 15;
    int topk = 10;
    CgOptions optimizer;
};

std::vector<NoiseRow> run_noise_experiment(const NoiseExperimentConfig& cfg,
                                           std::uint64_t root_seed);
void write_noise_csv(std::ostream& out, const std::vector<NoiseRow>& rows);

// ARD relevance experiments: attribute-driven graphs where one dimension (or
// none) moves the weights. Each fit runs from the median-heuristic start and
// from one "dimension k is short" start per dimension; the bound picks the
// posterior, so the reported relevance reflects the landscape rather than a
// single basin.

struct RelevanceFitConfig {
    int inducing = 15;
    double shrunk_init = 0.5; // probed dimension starts short
    double grown_init = 5.0;  // the others start long
    CgOptions optimizer{.max_iter = 4000};
};

struct RelevanceFit {
    VbcGpPosterior posterior;
    VbcFitReport report;
    std::vector<double> init_lengthscales; // the winning start
};

RelevanceFit fit_relevance(const ObservationDataset& data, const RelevanceFitConfig& cfg,
                           std::uint64_t kmeans_seed);

struct RelevanceRow {
    int seed = 0;
    std::vector<double> init_lengthscales;
    std::vector<double> lengthscales;
    int top_dim = -1;
    bool separated = false; // top lengthscale under half of every other
    bool collapsed = false; // some lengthscale fell under 10% of its start
};

struct RelevanceExperimentConfig {
    AttributeGraphSpec graph{.n = 60, .d = 3, .lengthscale = 0.15, .relevant_dim = 0};
    double sigma2 = 0.1;
    int samples_per_node = 20;
    int repeats = 15;
    RelevanceFitConfig fit;
};

// Planted mode: the graph is driven by graph.relevant_dim alone.
std::vector<RelevanceRow> run_planted_experiment(const RelevanceExperimentConfig& cfg,
                                                 std::uint64_t root_seed);
// Null mode: the graph is real but the attributes are redrawn independently
// of it, so every dimension is pure noise.
std::vector<RelevanceRow> run_null_experiment(const RelevanceExperimentConfig& cfg,
                                              std::uint64_t root_seed);

// Vaccination experiment: train VBC-GP on a small contact network, vaccinate
// the top-k by several score sources, compare SIR outcomes with common random
// numbers, then repeat on a larger population using predicted centralities only.

struct VaccineExperimentConfig {
    int train_population = 360;
    int test_population = 2000;
    double vaccinate_frac = 0.3;
    int runs = 100;
    int observation_rounds = 3;
    double observation_variance = 1e-4;
    int inducing = 30;
    bool include_fullgp = true;
    bool generalize = true;
    SirConfig sir; // seed field unused; streams derive from the root seed
    CgOptions optimizer;
};

struct VaccineStage {
    std::string stage; // "desk" or "general"
    int population = 0;
    int vaccinated = 0;
    int runs = 0;
    std::vector<StrategyOutcome> outcomes; // "none" first
};

struct VaccineResult {
    std::vector<VaccineStage> stages;
};

VaccineResult run_vaccine_experiment(const VaccineExperimentConfig& cfg,
                                     std::uint64_t root_seed);

// Tidy curves: stage,strategy,step,S,I,R (means across runs).
void write_vaccine_csv(std::ostream& out, const VaccineResult& res);
std::string vaccine_summary_json(const VaccineResult& res);

// 1 - strategy total / "none" total, for the named strategy within a stage.
double reduction_vs_none(const VaccineStage& stage, const std::string& name);

} // namespace vbcent
