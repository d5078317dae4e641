#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "experiments.hpp"
#include "fullgp.hpp"
#include "vbcent/centrality.hpp"
#include "vbcent/errors.hpp"
#include "vbcent/graph_io.hpp"
#include "vbcent/log.hpp"
#include "vbcent/metrics.hpp"
#include "vbcent/netgen.hpp"
#include "vbcent/rng.hpp"
#include "vbcent/vbc.hpp"
#include "vbcent/vbcgp.hpp"

namespace {

using namespace vbcent;

struct Globals {
    const Config& cfg;
    std::uint64_t seed;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ValidationError("write to '" + path + "' failed");
    log_info("wrote " + path);
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> values;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        if (cur.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(cur.c_str(), &end);
        if (end == cur.c_str() || *end != '\0')
            throw ValidationError(what + ": '" + cur + "' is not a number");
        values.push_back(v);
    }
    if (values.empty()) throw ValidationError(what + ": empty list");
    return values;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> values;
    for (double v : parse_double_list(text, what)) {
        int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw ValidationError(what + ": expected integers");
        values.push_back(i);
    }
    return values;
}

std::string require_path(const std::string& flag_value, const Globals& g,
                         const std::string& key) {
    std::string from_cfg = g.cfg.get_string(key, "");
    if (!flag_value.empty()) return flag_value;
    if (!from_cfg.empty()) return from_cfg;
    throw ValidationError("missing --" + key);
}

LoadedObservations load_graph_file(const std::string& path) {
    return load_observations_csv(path);
}

WeightedDigraph averaged_graph(const LoadedObservations& lo) {
    return graph_from_averaged(average_observations(lo.data, lo.n));
}

nlohmann::ordered_json scores_json(const std::vector<double>& c, const LabelMap& labels) {
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (int i = 0; i < labels.size(); ++i) m[labels.label_of_id[i]] = c[i];
    return m;
}

CgOptions optimizer_from_config(const Globals& g) {
    CgOptions opts;
    opts.max_iter = g.cfg.get_int("max_iter", opts.max_iter);
    opts.rel_tol = g.cfg.get_double("rel_tol", opts.rel_tol);
    return opts;
}

// ---- centrality ----

struct CentralityArgs {
    std::string graph, method, direction;
    double alpha = 0.0, beta = 0.0, tol = 0.0;
    int max_iter = 0;
    CLI::Option *o_method = nullptr, *o_direction = nullptr, *o_alpha = nullptr,
                *o_beta = nullptr, *o_tol = nullptr, *o_max_iter = nullptr;
};

void run_centrality(const Globals& g, const CentralityArgs& args) {
    std::string method = g.cfg.get_string("method", "eigen");
    if (args.o_method->count()) method = args.method;
    std::string direction = g.cfg.get_string("direction", "in");
    if (args.o_direction->count()) direction = args.direction;
    double alpha = g.cfg.get_double("alpha", 0.1);
    if (args.o_alpha->count()) alpha = args.alpha;
    double beta = g.cfg.get_double("beta", 1.0);
    if (args.o_beta->count()) beta = args.beta;
    double tol = g.cfg.get_double("tol", 1e-10);
    if (args.o_tol->count()) tol = args.tol;
    int max_iter = g.cfg.get_int("max_iter", 100000);
    if (args.o_max_iter->count()) max_iter = args.max_iter;
    std::string graph_path = require_path(args.graph, g, "graph");
    g.cfg.check_consumed();

    LoadedObservations lo = load_graph_file(graph_path);
    WeightedDigraph graph = averaged_graph(lo);

    nlohmann::ordered_json out;
    out["method"] = method;
    if (method == "degree") {
        Direction dir;
        if (direction == "in")
            dir = Direction::In;
        else if (direction == "out")
            dir = Direction::Out;
        else
            throw ValidationError("direction must be 'in' or 'out'");
        out["direction"] = direction;
        out["normalization"] = "raw";
        out["scores"] = scores_json(degree_centrality(graph, dir), lo.labels);
    } else if (method == "eigen") {
        EigenCentrality res = eigenvector_centrality(graph, tol, max_iter);
        out["normalization"] = "unit-l2";
        out["lambda1"] = res.lambda;
        out["iterations"] = res.iterations;
        out["residual"] = res.residual;
        out["scores"] = scores_json(res.c, lo.labels);
    } else if (method == "katz") {
        out["normalization"] = "raw";
        out["alpha"] = alpha;
        out["beta"] = beta;
        out["scores"] = scores_json(katz_centrality(graph, alpha, beta), lo.labels);
    } else {
        throw ValidationError("unknown method '" + method + "' (degree|eigen|katz)");
    }
    emit(g.out, out.dump(2) + "\n");
}

// ---- fit-vbc ----

struct FitVbcArgs {
    std::string observations, reference;
    CLI::Option* o_restrict = nullptr;
    bool restrict_scc = false;
};

void run_fit_vbc(const Globals& g, const FitVbcArgs& args) {
    std::string obs_path = require_path(args.observations, g, "observations");
    std::string ref_path = args.reference.empty() ? g.cfg.get_string("reference", "")
                                                  : args.reference;
    VbcFitOptions opts;
    opts.optimizer = optimizer_from_config(g);
    opts.restrict_to_largest_scc = g.cfg.get_bool("restrict_scc", false);
    if (args.o_restrict->count()) opts.restrict_to_largest_scc = args.restrict_scc;
    opts.init_floor = g.cfg.get_double("init_floor", 1e-8);
    double prior_mu = g.cfg.get_double("prior_mu", 0.0);
    double prior_sigma2 = g.cfg.get_double("prior_sigma2", 10.0);
    double prior_lambda_mu = g.cfg.get_double("prior_lambda_mu", 0.0);
    double prior_lambda_sigma2 = g.cfg.get_double("prior_lambda_sigma2", 10.0);
    g.cfg.check_consumed();

    LoadedObservations lo = load_observations_csv(obs_path);
    VbcPriors priors = VbcPriors::vague(lo.n, prior_mu, prior_sigma2);
    priors.mu_lambda = prior_lambda_mu;
    priors.sigma2_lambda = prior_lambda_sigma2;

    auto [post, report] = fit_vbc(lo.data, priors, {}, opts);
    emit(g.out, posterior_to_json(post, report, lo.labels.label_of_id));
    log_info("final bound " + format_double(report.final_bound) + " after " +
             std::to_string(report.iterations) + " iterations");

    if (!ref_path.empty()) {
        LoadedObservations ref = load_graph_file(ref_path);
        EigenCentrality res = eigenvector_centrality(averaged_graph(ref));
        std::vector<double> aligned(lo.n);
        for (int i = 0; i < lo.n; ++i)
            aligned[i] = res.c[ref.labels.require(lo.labels.label_of_id[i])];
        log_info("kendall vs reference: " +
                 format_double(kendall_tau(post.centrality_mean(), aligned)));
    }
}

// ---- fit-vbcgp ----

struct FitVbcGpArgs {
    std::string observations, attributes;
    int inducing = 0;
    CLI::Option *o_inducing = nullptr, *o_restrict = nullptr;
    bool restrict_scc = false;
};

void run_fit_vbcgp(const Globals& g, const FitVbcGpArgs& args) {
    std::string obs_path = require_path(args.observations, g, "observations");
    std::string attr_path = require_path(args.attributes, g, "attributes");
    int m = g.cfg.get_int("inducing", 15);
    if (args.o_inducing->count()) m = args.inducing;
    std::string kernel_kind = g.cfg.get_string("kernel", "ard");
    double lengthscale = g.cfg.get_double("lengthscale", 0.0);
    double amplitude2 = g.cfg.get_double("amplitude2", 1.0);
    VbcGpFitOptions opts;
    opts.optimizer = optimizer_from_config(g);
    opts.optimize_hyperparameters = g.cfg.get_bool("optimize_hypers", true);
    opts.restrict_to_largest_scc = g.cfg.get_bool("restrict_scc", false);
    if (args.o_restrict->count()) opts.restrict_to_largest_scc = args.restrict_scc;
    opts.init_floor = g.cfg.get_double("init_floor", 1e-8);
    opts.kmeans_seed = g.cfg.get_uint64("kmeans_seed",
                                        rng::stream_seed(g.seed, "fit-vbcgp/kmeans"));
    GpPriors priors;
    priors.mu_lambda = g.cfg.get_double("prior_lambda_mu", 0.0);
    priors.sigma2_lambda = g.cfg.get_double("prior_lambda_sigma2", 10.0);
    g.cfg.check_consumed();

    LoadedObservations lo = load_observations_csv(obs_path);
    lo.data.attributes = load_attributes_csv(attr_path, lo.labels);
    const int d = static_cast<int>(lo.data.attributes.cols());

    KernelConfig kernel = kernel_kind == "se"
                              ? KernelConfig::se(lengthscale, amplitude2)
                              : KernelConfig::ard(std::vector<double>(d, lengthscale),
                                                  amplitude2);
    if (kernel_kind != "se" && kernel_kind != "ard")
        throw ValidationError("kernel must be 'se' or 'ard'");

    auto [model, report] = fit_vbcgp(lo.data, priors, kernel, m, opts);
    emit(g.out, model_to_json(model, report));
    log_info("final bound " + format_double(report.final_bound) + " after " +
             std::to_string(report.iterations) + " iterations");
}

// ---- predict ----

struct PredictArgs {
    std::string model, attributes;
};

void run_predict(const Globals& g, const PredictArgs& args) {
    std::string model_path = require_path(args.model, g, "model");
    std::string attr_path = require_path(args.attributes, g, "attributes");
    g.cfg.check_consumed();

    VbcGpPosterior model = model_from_json(slurp(model_path));
    LabelMap labels;
    Eigen::MatrixXd X = load_attributes_csv(attr_path, labels, true);
    std::vector<CentralityPrediction> preds = predict_centrality(model, X);

    nlohmann::ordered_json out;
    out["nodes"] = nlohmann::ordered_json::object();
    for (int i = 0; i < labels.size(); ++i) {
        nlohmann::ordered_json p;
        p["location"] = preds[i].location;
        p["scale2"] = preds[i].scale2;
        p["mean"] = preds[i].mean;
        p["variance"] = preds[i].variance;
        out["nodes"][labels.label_of_id[i]] = std::move(p);
    }
    emit(g.out, out.dump(2) + "\n");
}

// ---- fullgp-baseline ----

struct FullGpArgs {
    std::string observations, attributes;
    CLI::Option* o_restrict = nullptr;
    bool restrict_scc = false;
};

void run_fullgp_baseline(const Globals& g, const FullGpArgs& args) {
    std::string obs_path = require_path(args.observations, g, "observations");
    std::string attr_path = require_path(args.attributes, g, "attributes");
    double train_fraction = g.cfg.get_double("train_fraction", 0.8);
    FullGpOptions gp_opts;
    gp_opts.noise_sigma2 = g.cfg.get_double("noise_sigma2", 1e-2);
    gp_opts.optimize_hyperparameters = g.cfg.get_bool("optimize_hypers", true);
    gp_opts.optimizer = optimizer_from_config(g);
    std::string kernel_kind = g.cfg.get_string("kernel", "se");
    double lengthscale = g.cfg.get_double("lengthscale", 0.0);
    double amplitude2 = g.cfg.get_double("amplitude2", 1.0);
    bool restrict_scc = g.cfg.get_bool("restrict_scc", false);
    if (args.o_restrict->count()) restrict_scc = args.restrict_scc;
    double init_floor = g.cfg.get_double("init_floor", 1e-8);
    g.cfg.check_consumed();
    if (train_fraction <= 0 || train_fraction > 1)
        throw ValidationError("train_fraction must be in (0,1]");

    LoadedObservations lo = load_observations_csv(obs_path);
    Eigen::MatrixXd X = load_attributes_csv(attr_path, lo.labels);
    WeightedDigraph graph = averaged_graph(lo);

    std::vector<int> kept(lo.n);
    std::iota(kept.begin(), kept.end(), 0);
    WeightedDigraph core = graph;
    if (!check_strongly_connected(graph)) {
        if (!restrict_scc)
            throw ValidationError(
                "averaged observation graph is not strongly connected "
                "(set restrict_scc to fit on the largest component)");
        SccRestriction scc = largest_scc(graph);
        core = scc.graph;
        kept = scc.old_of_new;
    }
    std::vector<double> bl = eigenvector_centrality(core).c;

    int train_k = static_cast<int>(std::lround(train_fraction * kept.size()));
    train_k = std::max(train_k, 1);
    std::vector<int> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    auto rng = rng::engine(rng::stream_seed(g.seed, "fullgp/split"));
    for (int t = 0; t < train_k; ++t) {
        std::uniform_int_distribution<int> pick(t, static_cast<int>(order.size()) - 1);
        std::swap(order[t], order[pick(rng)]);
    }
    Eigen::MatrixXd Xt(train_k, X.cols());
    Eigen::VectorXd yt(train_k);
    std::vector<std::string> train_labels;
    for (int t = 0; t < train_k; ++t) {
        int core_id = order[t];
        Xt.row(t) = X.row(kept[core_id]);
        yt(t) = std::log(std::max(bl[core_id], init_floor));
        train_labels.push_back(lo.labels.label_of_id[kept[core_id]]);
    }

    const int d = static_cast<int>(X.cols());
    KernelConfig kernel = kernel_kind == "se"
                              ? KernelConfig::se(lengthscale, amplitude2)
                              : KernelConfig::ard(std::vector<double>(d, lengthscale),
                                                  amplitude2);
    if (kernel_kind != "se" && kernel_kind != "ard")
        throw ValidationError("kernel must be 'se' or 'ard'");
    FullGpModel gp = fit_fullgp(Xt, yt, kernel, gp_opts);
    Eigen::VectorXd pred = predict_fullgp(gp, X);

    nlohmann::ordered_json out;
    out["method"] = "fullgp";
    out["train_fraction"] = train_fraction;
    out["train_nodes"] = train_labels;
    out["noise_sigma2"] = gp.noise_sigma2;
    out["lengthscales"] = gp.kernel.lengthscales;
    out["amplitude2"] = gp.kernel.amplitude2;
    out["log_marginal"] = gp.log_marginal;
    nlohmann::ordered_json scores = nlohmann::ordered_json::object();
    nlohmann::ordered_json log_scores = nlohmann::ordered_json::object();
    for (int i = 0; i < lo.n; ++i) {
        scores[lo.labels.label_of_id[i]] = std::exp(pred(i));
        log_scores[lo.labels.label_of_id[i]] = pred(i);
    }
    out["scores"] = std::move(scores);
    out["log_scores"] = std::move(log_scores);
    emit(g.out, out.dump(2) + "\n");
}

// ---- exp-noise ----

void run_exp_noise(const Globals& g) {
    NoiseExperimentConfig nc;
    nc.networks = parse_network_specs(g.cfg.get_string("networks", "er:50:0.2,ba:50:5"));
    nc.sigma2s = parse_double_list(g.cfg.get_string("sigma2", "1,5,10"), "sigma2");
    nc.ns_values = parse_int_list(g.cfg.get_string("ns", "1,2,3,4,5,6,7,8,9,10"), "ns");
    nc.repeats = g.cfg.get_int("repeats", 15);
    nc.topk = g.cfg.get_int("topk", 10);
    nc.optimizer = optimizer_from_config(g);
    g.cfg.check_consumed();

    std::vector<NoiseRow> rows = run_noise_experiment(nc, g.seed);
    std::ostringstream ss;
    write_noise_csv(ss, rows);
    emit(g.out, ss.str());
}

// ---- exp-vaccine ----

void run_exp_vaccine(const Globals& g) {
    VaccineExperimentConfig vc;
    vc.train_population = g.cfg.get_int("train_population", 360);
    vc.test_population = g.cfg.get_int("test_population", 2000);
    vc.vaccinate_frac = g.cfg.get_double("vaccinate_frac", 0.3);
    vc.runs = g.cfg.get_int("runs", 100);
    vc.observation_rounds = g.cfg.get_int("rounds", 3);
    vc.observation_variance = g.cfg.get_double("obs_variance", 0.5);
    vc.inducing = g.cfg.get_int("inducing", 30);
    vc.include_fullgp = g.cfg.get_bool("include_fullgp", true);
    vc.generalize = g.cfg.get_bool("generalize", true);
    vc.sir.p_transmit = g.cfg.get_double("p_transmit", 0.5);
    vc.sir.p_recover = g.cfg.get_double("p_recover", 0.1);
    vc.sir.initial_infected = g.cfg.get_double("initial_infected", 0.01);
    vc.sir.horizon = g.cfg.get_int("horizon", 1000);
    vc.optimizer = optimizer_from_config(g);
    g.cfg.check_consumed();

    VaccineResult res = run_vaccine_experiment(vc, g.seed);
    std::string prefix = g.out.empty() ? "exp-vaccine" : g.out;
    std::ostringstream ss;
    write_vaccine_csv(ss, res);
    write_text(prefix + ".trajectories.csv", ss.str());
    write_text(prefix + ".summary.json", vaccine_summary_json(res));
}

// ---- gen ----

struct GenArgs {
    std::string kind;
};

void run_gen(const Globals& g, const GenArgs& args) {
    std::string kind = args.kind.empty() ? g.cfg.get_string("kind", "") : args.kind;
    if (kind.empty()) throw ValidationError("missing --kind (er|ba|attribute|contact)");
    std::string prefix = g.out.empty() ? "network" : g.out;

    WeightedDigraph graph;
    Eigen::MatrixXd attrs;
    LabelMap labels;
    bool has_attrs = false;

    if (kind == "er" || kind == "ba") {
        int n = g.cfg.get_int("n", 50);
        if (kind == "er") {
            double p = g.cfg.get_double("p", 0.2);
            graph = gen_er(n, p, g.seed);
        } else {
            int m_attach = g.cfg.get_int("m_attach", 5);
            graph = gen_ba(n, m_attach, g.seed);
        }
    } else if (kind == "attribute") {
        AttributeGraphSpec spec;
        spec.n = g.cfg.get_int("n", spec.n);
        spec.d = g.cfg.get_int("d", spec.d);
        spec.lengthscale = g.cfg.get_double("lengthscale", spec.lengthscale);
        spec.threshold = g.cfg.get_double("threshold", spec.threshold);
        spec.relevant_dim = g.cfg.get_int("relevant_dim", spec.relevant_dim);
        spec.ring_weight = g.cfg.get_double("ring_weight", spec.ring_weight);
        AttributeGraph ag = gen_attribute_graph(spec, g.seed);
        graph = std::move(ag.graph);
        attrs = std::move(ag.attributes);
        has_attrs = true;
    } else if (kind == "contact") {
        ContactPopulationSpec spec;
        spec.population = g.cfg.get_int("population", spec.population);
        spec.classroom_size = g.cfg.get_int("classroom_size", spec.classroom_size);
        spec.classrooms_per_school =
            g.cfg.get_int("classrooms_per_school", spec.classrooms_per_school);
        spec.department_size = g.cfg.get_int("department_size", spec.department_size);
        spec.departments_per_firm =
            g.cfg.get_int("departments_per_firm", spec.departments_per_firm);
        spec.preschool_size = g.cfg.get_int("preschool_size", spec.preschool_size);
        spec.university_size = g.cfg.get_int("university_size", spec.university_size);
        spec.community_size = g.cfg.get_int("community_size", spec.community_size);
        ContactPopulation pop = gen_contact_population(spec, g.seed);
        graph = std::move(pop.graph);
        attrs = std::move(pop.attributes);
        has_attrs = true;
        for (int id : pop.original_ids) labels.intern(std::to_string(id));
    } else {
        throw ValidationError("unknown kind '" + kind + "' (er|ba|attribute|contact)");
    }
    if (labels.size() == 0)
        for (int i = 0; i < graph.node_count(); ++i) labels.intern(std::to_string(i));

    dump_graph_csv(prefix + ".graph.csv", graph, &labels);
    log_info("wrote " + prefix + ".graph.csv");
    if (has_attrs) {
        dump_attributes_csv(prefix + ".attrs.csv", attrs, &labels);
        log_info("wrote " + prefix + ".attrs.csv");
    }

    if (kind == "contact") {
        if (g.cfg.has("rounds") || g.cfg.has("obs_variance")) {
            ObservationDataset data = sample_contact_observations(
                graph, rng::stream_seed(g.seed, "gen/observations"),
                g.cfg.get_int("rounds", 1), g.cfg.get_double("obs_variance", 0.5));
            dump_observations_csv(prefix + ".obs.csv", data, &labels);
            log_info("wrote " + prefix + ".obs.csv");
        }
    } else if (g.cfg.has("sigma2") || g.cfg.has("ns")) {
        NoiseSpec noise;
        noise.sigma2 = g.cfg.get_double("sigma2", 0.0);
        noise.samples_per_node = g.cfg.get_int("ns", 1);
        noise.seed = rng::stream_seed(g.seed, "gen/observations");
        ObservationDataset data = sample_observations(graph, noise);
        dump_observations_csv(prefix + ".obs.csv", data, &labels);
        log_info("wrote " + prefix + ".obs.csv");
    }
    g.cfg.check_consumed();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"variational Bayesian network centrality toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "flat key=value config file");
    auto* o_seed = app.add_option("--seed", seed, "root seed for all random streams");
    app.add_option("--out", out_path, "output path (experiments: output prefix)");
    app.add_flag("--quiet", quiet, "silence warnings and progress logs");

    auto* sc_centrality =
        app.add_subcommand("centrality", "degree, eigenvector, or Katz scores for a graph");
    CentralityArgs cent;
    sc_centrality->add_option("--graph", cent.graph, "edge CSV (from,to,weight)");
    cent.o_method = sc_centrality->add_option("--method", cent.method, "degree|eigen|katz");
    cent.o_direction = sc_centrality->add_option("--direction", cent.direction,
                                                 "in|out (degree only)");
    cent.o_alpha = sc_centrality->add_option("--alpha", cent.alpha, "Katz attenuation");
    cent.o_beta = sc_centrality->add_option("--beta", cent.beta, "Katz base score");
    cent.o_tol = sc_centrality->add_option("--tol", cent.tol, "power-iteration tolerance");
    cent.o_max_iter = sc_centrality->add_option("--max-iter", cent.max_iter,
                                                "power-iteration cap");

    auto* sc_fit_vbc = app.add_subcommand("fit-vbc", "fit the variational centrality posterior");
    FitVbcArgs fvbc;
    sc_fit_vbc->add_option("--observations", fvbc.observations,
                           "edge-observation CSV (repeated rows = repeated samples)");
    sc_fit_vbc->add_option("--reference", fvbc.reference,
                           "reference graph CSV for a Kendall report");
    fvbc.o_restrict = sc_fit_vbc->add_flag("--restrict-scc", fvbc.restrict_scc,
                                           "fit on the largest strongly connected component");

    auto* sc_fit_vbcgp =
        app.add_subcommand("fit-vbcgp", "fit the sparse-GP attribute-to-centrality model");
    FitVbcGpArgs fgp;
    sc_fit_vbcgp->add_option("--observations", fgp.observations, "edge-observation CSV");
    sc_fit_vbcgp->add_option("--attributes", fgp.attributes, "node-attribute CSV");
    fgp.o_inducing = sc_fit_vbcgp->add_option("--inducing", fgp.inducing,
                                              "number of inducing points");
    fgp.o_restrict = sc_fit_vbcgp->add_flag("--restrict-scc", fgp.restrict_scc,
                                            "fit on the largest strongly connected component");

    auto* sc_predict =
        app.add_subcommand("predict", "predict centralities from a fitted model");
    PredictArgs pred;
    sc_predict->add_option("--model", pred.model, "model JSON from fit-vbcgp");
    sc_predict->add_option("--attributes", pred.attributes, "node-attribute CSV");

    auto* sc_fullgp = app.add_subcommand(
        "fullgp-baseline", "dense GP regression on averaged-weight centralities");
    FullGpArgs fbl;
    sc_fullgp->add_option("--observations", fbl.observations, "edge-observation CSV");
    sc_fullgp->add_option("--attributes", fbl.attributes, "node-attribute CSV");
    fbl.o_restrict = sc_fullgp->add_flag("--restrict-scc", fbl.restrict_scc,
                                         "train on the largest strongly connected component");

    auto* sc_exp_noise = app.add_subcommand(
        "exp-noise", "noise/sample-count sweep comparing VBC to the averaging baseline");
    auto* sc_exp_vaccine = app.add_subcommand(
        "exp-vaccine", "SIR vaccination comparison on generated contact networks");

    auto* sc_gen = app.add_subcommand("gen", "generate a synthetic network");
    GenArgs gen;
    sc_gen->add_option("--kind", gen.kind, "er|ba|attribute|contact");

    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    set_quiet(quiet);
    try {
        Config cfg = Config::load(config_path);
        if (!o_seed->count()) seed = cfg.get_uint64("seed", 0);
        Globals g{cfg, seed, out_path};
        if (*sc_centrality)
            run_centrality(g, cent);
        else if (*sc_fit_vbc)
            run_fit_vbc(g, fvbc);
        else if (*sc_fit_vbcgp)
            run_fit_vbcgp(g, fgp);
        else if (*sc_predict)
            run_predict(g, pred);
        else if (*sc_fullgp)
            run_fullgp_baseline(g, fbl);
        else if (*sc_exp_noise)
            run_exp_noise(g);
        else if (*sc_exp_vaccine)
            run_exp_vaccine(g);
        else if (*sc_gen)
            run_gen(g, gen);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
