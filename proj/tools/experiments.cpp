#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fullgp.hpp"
#include "vbcent/centrality.hpp"
#include "vbcent/errors.hpp"
#include "vbcent/graph_io.hpp"
#include "vbcent/kernel.hpp"
#include "vbcent/log.hpp"
#include "vbcent/metrics.hpp"
#include "vbcent/netgen.hpp"
#include "vbcent/rng.hpp"
#include "vbcent/vbc.hpp"
#include "vbcent/vbcgp.hpp"

namespace vbcent {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<int> random_subset(int n, int k, std::uint64_t seed) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    auto rng = rng::engine(seed);
    for (int t = 0; t < k; ++t) {
        std::uniform_int_distribution<int> pick(t, n - 1);
        std::swap(ids[t], ids[pick(rng)]);
    }
    ids.resize(k);
    return ids;
}

} // namespace

std::vector<NoiseNetworkSpec> parse_network_specs(const std::string& text) {
    std::vector<NoiseNetworkSpec> specs;
    for (const std::string& token : split(text, ',')) {
        if (token.empty()) continue;
        auto fields = split(token, ':');
        if (fields.size() != 3)
            throw ValidationError("network spec '" + token + "' is not kind:n:param");
        int n = 0;
        double param = 0.0;
        try {
            n = std::stoi(fields[1]);
            param = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw ValidationError("network spec '" + token + "' has non-numeric fields");
        }
        NoiseNetworkSpec spec;
        spec.name = fields[0] + std::to_string(n);
        if (fields[0] == "er") {
            spec.generate = [n, param](std::uint64_t seed) { return gen_er(n, param, seed); };
        } else if (fields[0] == "ba") {
            int m = static_cast<int>(param);
            spec.generate = [n, m](std::uint64_t seed) { return gen_ba(n, m, seed); };
        } else {
            throw ValidationError("unknown network kind '" + fields[0] + "'");
        }
        specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw ValidationError("no network specs given");
    return specs;
}

std::vector<NoiseRow> run_noise_experiment(const NoiseExperimentConfig& cfg,
                                           std::uint64_t root_seed) {
    if (cfg.repeats < 1) throw ValidationError("noise experiment needs repeats >= 1");
    if (cfg.networks.empty()) throw ValidationError("noise experiment needs networks");

    std::vector<NoiseRow> rows;
    for (const auto& spec : cfg.networks) {
        for (int r = 0; r < cfg.repeats; ++r) {
            std::string run_tag = "exp-noise/" + spec.name + "/" + std::to_string(r);
            WeightedDigraph g = spec.generate(rng::stream_seed(root_seed, run_tag + "/gen"));
            std::vector<double> ref = eigenvector_centrality(g).c;
            for (double sigma2 : cfg.sigma2s) {
                for (int ns : cfg.ns_values) {
                    NoiseSpec noise;
                    noise.sigma2 = sigma2;
                    noise.samples_per_node = ns;
                    noise.seed = rng::stream_seed(root_seed, run_tag + "/obs/" +
                                                                 format_double(sigma2) + "/" +
                                                                 std::to_string(ns));
                    ObservationDataset data = sample_observations(g, noise);

                    AveragedWeights avg = average_observations(data, g.node_count());
                    std::vector<double> bl = eigenvector_centrality(avg.graph()).c;
                    rows.push_back({spec.name, sigma2, ns, r, "baseline",
                                    kendall_tau(bl, ref), topk_overlap(bl, ref, cfg.topk)});

                    VbcFitOptions opts;
                    opts.optimizer = cfg.optimizer;
                    auto [post, report] =
                        fit_vbc(data, VbcPriors::vague(g.node_count()), {}, opts);
                    std::vector<double> c = post.centrality_mean();
                    rows.push_back({spec.name, sigma2, ns, r, "vbc", kendall_tau(c, ref),
                                    topk_overlap(c, ref, cfg.topk)});
                }
            }
            log_info("exp-noise: " + spec.name + " repeat " + std::to_string(r + 1) + "/" +
                     std::to_string(cfg.repeats) + " done");
        }
    }
    std::sort(rows.begin(), rows.end(), [](const NoiseRow& a, const NoiseRow& b) {
        return std::tie(a.network, a.sigma2, a.ns, a.seed, a.method) <
               std::tie(b.network, b.sigma2, b.ns, b.seed, b.method);
    });
    return rows;
}

void write_noise_csv(std::ostream& out, const std::vector<NoiseRow>& rows) {
    out << "network,sigma2,Ns,seed,method,kendall,top10\n";
    for (const auto& row : rows) {
        out << row.network << ',' << format_double(row.sigma2) << ',' << row.ns << ','
            << row.seed << ',' << row.method << ',' << format_double(row.kendall) << ','
            << format_double(row.top10) << '\n';
    }
}

namespace {

// Mirrors the standardization inside fit_vbcgp so the median-heuristic start
// can be recorded alongside the explicit ones.
std::vector<double> median_init_for(const Eigen::MatrixXd& X) {
    Eigen::MatrixXd Xstd = X.rowwise() - X.colwise().mean();
    for (int k = 0; k < Xstd.cols(); ++k) {
        double var = Xstd.col(k).squaredNorm() / std::max<int>(static_cast<int>(X.rows()) - 1, 1);
        Xstd.col(k) /= var > 0 ? std::sqrt(var) : 1.0;
    }
    return median_lengthscales(Xstd, KernelKind::ARD);
}

RelevanceRow score_relevance(int seed, const RelevanceFit& fit) {
    RelevanceRow row;
    row.seed = seed;
    row.init_lengthscales = fit.init_lengthscales;
    row.lengthscales = fit.posterior.gp.kernel.lengthscales;
    auto ranked = ard_relevance(fit.posterior);
    row.top_dim = ranked.front().first;
    if (ranked.size() > 1) row.separated = ranked[0].second < 0.5 * ranked[1].second;
    for (std::size_t k = 0; k < row.lengthscales.size(); ++k)
        if (row.lengthscales[k] < 0.1 * row.init_lengthscales[k]) row.collapsed = true;
    return row;
}

} // namespace

RelevanceFit fit_relevance(const ObservationDataset& data, const RelevanceFitConfig& cfg,
                           std::uint64_t kmeans_seed) {
    const int d = static_cast<int>(data.attributes.cols());
    if (d < 1) throw ValidationError("relevance fit needs attributes");

    std::vector<std::vector<double>> inits;
    inits.push_back(median_init_for(data.attributes));
    for (int k = 0; k < d; ++k) {
        std::vector<double> ls(d, cfg.grown_init);
        ls[k] = cfg.shrunk_init;
        inits.push_back(std::move(ls));
    }

    VbcGpFitOptions opts;
    opts.optimizer = cfg.optimizer;
    opts.kmeans_seed = kmeans_seed;
    RelevanceFit best;
    bool have = false;
    for (const auto& init : inits) {
        auto [post, report] =
            fit_vbcgp(data, GpPriors{}, KernelConfig::ard(init), cfg.inducing, opts);
        if (!have || report.final_bound > best.report.final_bound) {
            best.posterior = std::move(post);
            best.report = std::move(report);
            best.init_lengthscales = init;
            have = true;
        }
    }
    return best;
}

namespace {

std::vector<RelevanceRow> run_relevance(const RelevanceExperimentConfig& cfg,
                                        const AttributeGraphSpec& gspec, std::uint64_t root_seed,
                                        const std::string& name, bool severed) {
    if (cfg.repeats < 1) throw ValidationError("relevance experiment needs repeats >= 1");
    std::vector<RelevanceRow> rows;
    rows.reserve(cfg.repeats);
    for (int r = 0; r < cfg.repeats; ++r) {
        std::string tag = name + "/" + std::to_string(r);
        AttributeGraph ag = gen_attribute_graph(gspec, rng::stream_seed(root_seed, tag + "/gen"));
        if (severed) {
            auto attr_rng = rng::engine(rng::stream_seed(root_seed, tag + "/attrs"));
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (int i = 0; i < ag.attributes.rows(); ++i)
                for (int k = 0; k < ag.attributes.cols(); ++k) ag.attributes(i, k) = unif(attr_rng);
        }
        NoiseSpec noise{cfg.sigma2, cfg.samples_per_node,
                        rng::stream_seed(root_seed, tag + "/obs")};
        ObservationDataset data = sample_observations(ag.graph, noise);
        data.attributes = ag.attributes;
        rows.push_back(score_relevance(
            r, fit_relevance(data, cfg.fit, rng::stream_seed(root_seed, tag + "/kmeans"))));
        log_info(name + ": repeat " + std::to_string(r + 1) + "/" + std::to_string(cfg.repeats) +
                 " done");
    }
    return rows;
}

} // namespace

std::vector<RelevanceRow> run_planted_experiment(const RelevanceExperimentConfig& cfg,
                                                 std::uint64_t root_seed) {
    if (cfg.graph.relevant_dim < 0 || cfg.graph.relevant_dim >= cfg.graph.d)
        throw ValidationError("planted experiment needs a relevant dimension");
    return run_relevance(cfg, cfg.graph, root_seed, "exp-planted", false);
}

std::vector<RelevanceRow> run_null_experiment(const RelevanceExperimentConfig& cfg,
                                              std::uint64_t root_seed) {
    // Negative control: a huge generator lengthscale flattens every weight to
    // one, and the attributes are redrawn on top, so no dimension carries any
    // signal while the observation noise still jitters the baseline.
    AttributeGraphSpec gspec = cfg.graph;
    gspec.relevant_dim = -1;
    gspec.lengthscale = 1e6;
    return run_relevance(cfg, gspec, root_seed, "exp-null", true);
}

namespace {

VaccineStage run_stage(const std::string& name, const WeightedDigraph& g,
                       const std::vector<VaccinationStrategy>& strategies,
                       const VaccineExperimentConfig& cfg, std::uint64_t sir_seed) {
    VaccineStage stage;
    stage.stage = name;
    stage.population = g.node_count();
    stage.vaccinated = static_cast<int>(strategies.back().vaccinated.size());
    stage.runs = cfg.runs;
    stage.outcomes = compare_strategies(g, cfg.sir, strategies, cfg.runs, sir_seed);
    return stage;
}

} // namespace

VaccineResult run_vaccine_experiment(const VaccineExperimentConfig& cfg,
                                     std::uint64_t root_seed) {
    if (cfg.vaccinate_frac < 0 || cfg.vaccinate_frac > 1)
        throw ValidationError("vaccination fraction must be in [0,1]");
    if (cfg.test_population < 1 && cfg.generalize)
        throw ValidationError("generalization population must be positive");

    ContactPopulationSpec pop_spec;
    pop_spec.population = cfg.train_population;
    ContactPopulation pop =
        gen_contact_population(pop_spec, rng::stream_seed(root_seed, "exp-vaccine/train/pop"));
    const int n = pop.graph.node_count();
    log_info("exp-vaccine: training network has " + std::to_string(n) + " people, " +
             std::to_string(pop.graph.edge_count()) + " directed entries");

    ObservationDataset data = sample_contact_observations(
        pop.graph, rng::stream_seed(root_seed, "exp-vaccine/train/obs"),
        cfg.observation_rounds, cfg.observation_variance);
    data.attributes = pop.attributes;

    VbcGpFitOptions fit_opts;
    fit_opts.optimizer = cfg.optimizer;
    fit_opts.kmeans_seed = rng::stream_seed(root_seed, "exp-vaccine/train/kmeans");
    KernelConfig kernel =
        KernelConfig::ard(std::vector<double>(pop.attributes.cols(), 0.0));
    auto [model, report] = fit_vbcgp(data, GpPriors{}, kernel, cfg.inducing, fit_opts);
    log_info("exp-vaccine: VBC-GP fit done, bound " + format_double(report.final_bound) +
             " after " + std::to_string(report.iterations) + " iterations");

    // Rank by the latent location: the lognormal mean folds in the predictive
    // variance, which differs across nodes and scrambles an otherwise good
    // ordering.
    std::vector<double> vbcgp_scores;
    for (const auto& pred : predict_centrality(model, pop.attributes))
        vbcgp_scores.push_back(pred.location);

    const int k = static_cast<int>(cfg.vaccinate_frac * n);
    std::vector<VaccinationStrategy> strategies;
    strategies.push_back({"none", {}});
    // The random arm redraws its set every run, so it measures a typical
    // random campaign rather than one lucky subset.
    std::uint64_t rand_seed = rng::stream_seed(root_seed, "exp-vaccine/train/random");
    strategies.push_back({"random", {}, [n, k, rand_seed](int run) {
                              return random_subset(n, k, rng::substream(rand_seed, run));
                          }});
    if (cfg.include_fullgp) {
        AveragedWeights avg = average_observations(data, n);
        std::vector<double> bl = eigenvector_centrality(avg.graph()).c;
        int train_k = static_cast<int>(std::lround(0.8 * n));
        std::vector<int> train_ids =
            random_subset(n, train_k, rng::stream_seed(root_seed, "exp-vaccine/train/split"));
        Eigen::MatrixXd Xt(train_k, pop.attributes.cols());
        Eigen::VectorXd yt(train_k);
        for (int t = 0; t < train_k; ++t) {
            Xt.row(t) = pop.attributes.row(train_ids[t]);
            yt(t) = std::log(std::max(bl[train_ids[t]], 1e-8));
        }
        FullGpOptions gp_opts;
        gp_opts.optimizer = cfg.optimizer;
        FullGpModel gp = fit_fullgp(
            Xt, yt, KernelConfig::se(0.0), gp_opts);
        Eigen::VectorXd pred = predict_fullgp(gp, pop.attributes);
        std::vector<double> fullgp_scores(pred.data(), pred.data() + pred.size());
        strategies.push_back({"fullgp", vaccinate_topk(fullgp_scores, k)});
    }
    strategies.push_back({"vbcgp", vaccinate_topk(vbcgp_scores, k)});

    VaccineResult result;
    result.stages.push_back(run_stage("desk", pop.graph, strategies, cfg,
                                      rng::stream_seed(root_seed, "exp-vaccine/train/sir")));

    if (cfg.generalize) {
        ContactPopulationSpec test_spec = pop_spec;
        test_spec.population = cfg.test_population;
        ContactPopulation test_pop = gen_contact_population(
            test_spec, rng::stream_seed(root_seed, "exp-vaccine/test/pop"));
        const int tn = test_pop.graph.node_count();
        log_info("exp-vaccine: generalization network has " + std::to_string(tn) +
                 " people, " + std::to_string(test_pop.graph.edge_count()) +
                 " directed entries");

        std::vector<double> pred_scores;
        for (const auto& pred : predict_centrality(model, test_pop.attributes))
            pred_scores.push_back(pred.location);
        const int tk = static_cast<int>(cfg.vaccinate_frac * tn);
        std::vector<VaccinationStrategy> test_strategies;
        test_strategies.push_back({"none", {}});
        std::uint64_t test_rand = rng::stream_seed(root_seed, "exp-vaccine/test/random");
        test_strategies.push_back({"random", {}, [tn, tk, test_rand](int run) {
                                       return random_subset(tn, tk, rng::substream(test_rand, run));
                                   }});
        test_strategies.push_back({"vbcgp", vaccinate_topk(pred_scores, tk)});
        result.stages.push_back(run_stage("general", test_pop.graph, test_strategies, cfg,
                                          rng::stream_seed(root_seed, "exp-vaccine/test/sir")));
    }
    return result;
}

void write_vaccine_csv(std::ostream& out, const VaccineResult& res) {
    out << "stage,strategy,step,S,I,R\n";
    for (const auto& stage : res.stages)
        for (const auto& outcome : stage.outcomes)
            for (std::size_t t = 0; t < outcome.mean_S.size(); ++t)
                out << stage.stage << ',' << outcome.name << ',' << t << ','
                    << format_double(outcome.mean_S[t]) << ','
                    << format_double(outcome.mean_I[t]) << ','
                    << format_double(outcome.mean_R[t]) << '\n';
}

double reduction_vs_none(const VaccineStage& stage, const std::string& name) {
    const StrategyOutcome* none = nullptr;
    const StrategyOutcome* target = nullptr;
    for (const auto& outcome : stage.outcomes) {
        if (outcome.name == "none") none = &outcome;
        if (outcome.name == name) target = &outcome;
    }
    if (!none || !target)
        throw ValidationError("stage lacks a '" + name + "' or 'none' strategy");
    return 1.0 - target->mean_total_infected / none->mean_total_infected;
}

std::string vaccine_summary_json(const VaccineResult& res) {
    nlohmann::ordered_json root;
    root["stages"] = nlohmann::ordered_json::array();
    for (const auto& stage : res.stages) {
        nlohmann::ordered_json s;
        s["stage"] = stage.stage;
        s["population"] = stage.population;
        s["vaccinated"] = stage.vaccinated;
        s["runs"] = stage.runs;
        s["strategies"] = nlohmann::ordered_json::array();
        for (const auto& outcome : stage.outcomes) {
            nlohmann::ordered_json o;
            o["name"] = outcome.name;
            o["mean_total_infected"] = outcome.mean_total_infected;
            o["mean_peak_infected"] = outcome.mean_peak_infected;
            o["mean_peak_step"] = outcome.mean_peak_step;
            o["reduction_vs_none"] = reduction_vs_none(stage, outcome.name);
            s["strategies"].push_back(std::move(o));
        }
        root["stages"].push_back(std::move(s));
    }
    return root.dump(2) + "\n";
}

} // namespace vbcent
