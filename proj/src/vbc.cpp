#include "vbcent/vbc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "vbcent/centrality.hpp"
#include "vbcent/errors.hpp"
#include "vbcent/log.hpp"

namespace vbcent {

VbcPriors VbcPriors::vague(int n, double m, double s2) {
    VbcPriors p;
    p.mu.assign(n, m);
    p.sigma2.assign(n, s2);
    p.mu_lambda = m;
    p.sigma2_lambda = s2;
    return p;
}

void VbcPriors::validate(int n) const {
    if (static_cast<int>(mu.size()) != n || static_cast<int>(sigma2.size()) != n)
        throw ValidationError("prior dimensions do not match node count");
    for (double s : sigma2)
        if (!(s > 0)) throw ValidationError("prior variances must be positive");
    if (!(sigma2_lambda > 0)) throw ValidationError("prior variances must be positive");
}

std::vector<double> VbcPosterior::centrality_mean() const {
    std::vector<double> c(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) c[i] = std::exp(mu[i] + sigma2[i] / 2);
    return c;
}

std::pair<double, double> lognormal_moments(double mu, double sigma2) {
    if (sigma2 < 0) throw ValidationError("log-normal variance must be non-negative");
    double mean = std::exp(mu + sigma2 / 2);
    double variance = std::expm1(sigma2) * std::exp(2 * mu + sigma2);
    return {mean, variance};
}

double xi_approx(const std::vector<XiNeighbor>& neighbors) {
    if (neighbors.empty()) throw ValidationError("xi_approx needs at least one neighbor");
    double A = 0.0, B = 0.0;
    for (const auto& nb : neighbors) {
        if (nb.w < 0) throw ValidationError("observed weights must be non-negative");
        auto [e, v] = lognormal_moments(nb.mu, nb.sigma2);
        A += nb.w * e;
        B += nb.w * nb.w * v;
    }
    if (!(A > 0)) throw NumericError("xi_approx: weighted mean sum is zero");
    return std::log(A) - B / (2 * A * A);
}

double gaussian_kl(double mu_q, double s2_q, double mu_p, double s2_p) {
    if (!(s2_q > 0) || !(s2_p > 0)) throw ValidationError("KL requires positive variances");
    double d = mu_p - mu_q;
    return 0.5 * (s2_q / s2_p + d * d / s2_p - 1.0 - std::log(s2_q / s2_p));
}

double gaussian_kl(const Eigen::VectorXd& mu_q, const Eigen::MatrixXd& S_q,
                   const Eigen::VectorXd& mu_p, const Eigen::MatrixXd& S_p) {
    const auto d = mu_q.size();
    if (mu_p.size() != d || S_q.rows() != d || S_q.cols() != d || S_p.rows() != d ||
        S_p.cols() != d)
        throw ValidationError("KL dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> lp(S_p);
    if (lp.info() != Eigen::Success) throw NumericError("KL: p covariance is not positive definite");
    Eigen::LLT<Eigen::MatrixXd> lq(S_q);
    if (lq.info() != Eigen::Success) throw NumericError("KL: q covariance is not positive definite");

    double logdet_p = 0.0, logdet_q = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        logdet_p += 2 * std::log(lp.matrixL()(i, i));
        logdet_q += 2 * std::log(lq.matrixL()(i, i));
    }
    double trace = lp.solve(S_q).trace();
    Eigen::VectorXd diff = mu_p - mu_q;
    double maha = diff.dot(lp.solve(diff));
    return 0.5 * (trace + maha - static_cast<double>(d) + logdet_p - logdet_q);
}

Eigen::VectorXd vbc_pack(const VbcPosterior& post) {
    int n = post.n();
    Eigen::VectorXd x(2 * n + 3);
    for (int i = 0; i < n; ++i) {
        x[i] = post.mu[i];
        if (!(post.sigma2[i] > 0)) throw ValidationError("posterior variances must be positive");
        x[n + i] = std::log(post.sigma2[i]);
    }
    x[2 * n] = post.mu_lambda;
    if (!(post.sigma2_lambda > 0) || !(post.noise_sigma2 > 0))
        throw ValidationError("posterior variances must be positive");
    x[2 * n + 1] = std::log(post.sigma2_lambda);
    x[2 * n + 2] = std::log(post.noise_sigma2);
    return x;
}

VbcPosterior vbc_unpack(const Eigen::VectorXd& x, int n) {
    if (x.size() != 2 * n + 3) throw ValidationError("parameter vector has wrong size");
    VbcPosterior post;
    post.mu.assign(x.data(), x.data() + n);
    post.sigma2.resize(n);
    for (int i = 0; i < n; ++i) post.sigma2[i] = std::exp(x[n + i]);
    post.mu_lambda = x[2 * n];
    post.sigma2_lambda = std::exp(x[2 * n + 1]);
    post.noise_sigma2 = std::exp(x[2 * n + 2]);
    return post;
}

namespace {

// L2 and its gradient over the packed vector (mu, log sigma2, mu_l, log
// sigma2_l, log noise). grad may be null.
double l2_eval(const ObservationDataset& data, const VbcPriors& priors, const Eigen::VectorXd& x,
               Eigen::VectorXd* grad) {
    const int n = static_cast<int>(priors.mu.size());
    if (x.size() != 2 * n + 3) throw ValidationError("parameter vector has wrong size");
    const double mu_l = x[2 * n];
    const double s2_l = std::exp(x[2 * n + 1]);
    const double noise = std::exp(x[2 * n + 2]);

    if (grad) grad->setZero(2 * n + 3);

    // Per-node moments of exp(z) under q.
    Eigen::VectorXd E(n), V(n), s2(n);
    for (int i = 0; i < n; ++i) {
        s2[i] = std::exp(x[n + i]);
        E[i] = std::exp(x[i] + s2[i] / 2);
        V[i] = std::expm1(s2[i]) * std::exp(2 * x[i] + s2[i]);
    }

    double bound = 0.0;
    const double K = static_cast<double>(data.samples.size());
    double ssr = 0.0;
    for (const auto& sample : data.samples) {
        double A = 0.0, B = 0.0;
        for (const auto& [j, w] : sample.neighbors) {
            A += w * E[j];
            B += w * w * V[j];
        }
        if (!(A > 0)) throw NumericError("xi_approx: weighted mean sum is zero");
        double xi = std::log(A) - B / (2 * A * A);
        double r = xi - mu_l - x[sample.node];
        ssr += r * r;
        if (grad) {
            double q = -r / noise;              // d/dxi of the likelihood term
            double dxi_dA = 1.0 / A + B / (A * A * A);
            double dxi_dB = -1.0 / (2 * A * A);
            for (const auto& [j, w] : sample.neighbors) {
                double dA_dmu = w * E[j];
                double dB_dmu = w * w * 2 * V[j];
                double dV_ds2 = std::exp(2 * x[j] + s2[j]) * (2 * std::exp(s2[j]) - 1);
                double dA_ds = w * E[j] * (s2[j] / 2);    // chain through s = log sigma2
                double dB_ds = w * w * dV_ds2 * s2[j];
                (*grad)[j] += q * (dxi_dA * dA_dmu + dxi_dB * dB_dmu);
                (*grad)[n + j] += q * (dxi_dA * dA_ds + dxi_dB * dB_ds);
            }
            (*grad)[sample.node] += r / noise; // d/dmu_i of -(xi - mu_l - mu_i)^2/(2 noise)
            (*grad)[2 * n] += r / noise;
        }
    }
    bound += -0.5 * K * std::log(2 * std::numbers::pi * noise) - ssr / (2 * noise);
    if (grad) (*grad)[2 * n + 2] += noise * (-K / (2 * noise) + ssr / (2 * noise * noise));

    for (int i = 0; i < n; ++i) {
        bound -= gaussian_kl(x[i], s2[i], priors.mu[i], priors.sigma2[i]);
        if (grad) {
            (*grad)[i] -= (x[i] - priors.mu[i]) / priors.sigma2[i];
            (*grad)[n + i] -= 0.5 * (s2[i] / priors.sigma2[i] - 1.0);
        }
    }
    bound -= gaussian_kl(mu_l, s2_l, priors.mu_lambda, priors.sigma2_lambda);
    if (grad) {
        (*grad)[2 * n] -= (mu_l - priors.mu_lambda) / priors.sigma2_lambda;
        (*grad)[2 * n + 1] -= 0.5 * (s2_l / priors.sigma2_lambda - 1.0);
    }
    return bound;
}

} // namespace

double l2_bound(const ObservationDataset& data, const VbcPosterior& post, const VbcPriors& priors) {
    priors.validate(post.n());
    data.validate(post.n());
    return l2_eval(data, priors, vbc_pack(post), nullptr);
}

Eigen::VectorXd l2_gradient(const ObservationDataset& data, const VbcPosterior& post,
                            const VbcPriors& priors) {
    priors.validate(post.n());
    data.validate(post.n());
    Eigen::VectorXd grad;
    l2_eval(data, priors, vbc_pack(post), &grad);
    return grad;
}

namespace {

ObservationDataset restrict_dataset(const ObservationDataset& data,
                                    const std::vector<int>& new_of_old) {
    ObservationDataset out;
    out.attributes = data.attributes;
    for (const auto& s : data.samples) {
        if (new_of_old[s.node] == -1) continue;
        Observation kept;
        kept.node = s.node;
        for (const auto& [j, w] : s.neighbors)
            if (new_of_old[j] != -1) kept.neighbors.push_back({j, w});
        if (!kept.neighbors.empty()) out.samples.push_back(std::move(kept));
    }
    return out;
}

} // namespace

std::pair<VbcPosterior, VbcFitReport> fit_vbc(const ObservationDataset& data,
                                              const VbcPriors& priors,
                                              const std::optional<std::vector<double>>& init,
                                              const VbcFitOptions& opts) {
    const int n = static_cast<int>(priors.mu.size());
    priors.validate(n);
    data.validate(n);
    if (data.samples.empty()) throw ValidationError("fit_vbc needs at least one observation");
    for (const auto& s : data.samples) {
        double total = 0.0;
        for (const auto& [j, w] : s.neighbors) total += w;
        if (!(total > 0))
            throw ValidationError("observation sample with all-zero weights (node " +
                                  std::to_string(s.node) + ")");
    }

    auto avg = average_observations(data, n);
    WeightedDigraph g_bl = avg.graph();

    ObservationDataset working = data;
    std::vector<double> mu0(n), s0(n, std::log(0.1));
    double mu_l0;
    if (!check_strongly_connected(g_bl)) {
        if (!opts.restrict_to_largest_scc)
            throw ValidationError(
                "averaged observation graph is not strongly connected "
                "(set restrict_to_largest_scc to fit on the largest component)");
        auto scc = largest_scc(g_bl);
        log_info("restricting fit to largest SCC: " + std::to_string(scc.graph.node_count()) +
                 " of " + std::to_string(n) + " nodes");
        working = restrict_dataset(data, scc.new_of_old);
        if (working.samples.empty())
            throw ValidationError("no observations left after SCC restriction");
        auto eig = eigenvector_centrality(scc.graph);
        for (int i = 0; i < n; ++i) {
            if (scc.new_of_old[i] == -1) {
                mu0[i] = priors.mu[i];
                s0[i] = std::log(priors.sigma2[i]);
            } else {
                mu0[i] = std::log(std::max(eig.c[scc.new_of_old[i]], opts.init_floor));
            }
        }
        mu_l0 = std::log(eig.lambda);
    } else {
        auto eig = eigenvector_centrality(g_bl);
        for (int i = 0; i < n; ++i) mu0[i] = std::log(std::max(eig.c[i], opts.init_floor));
        mu_l0 = std::log(eig.lambda);
    }
    if (init) {
        if (static_cast<int>(init->size()) != n)
            throw ValidationError("init centrality vector has wrong length");
        for (int i = 0; i < n; ++i) mu0[i] = std::log(std::max((*init)[i], opts.init_floor));
    }

    Eigen::VectorXd x0(2 * n + 3);
    for (int i = 0; i < n; ++i) {
        x0[i] = mu0[i];
        x0[n + i] = s0[i];
    }
    x0[2 * n] = mu_l0;
    x0[2 * n + 1] = std::log(0.1);

    // Initial tied noise from the initial residuals.
    {
        x0[2 * n + 2] = 0.0;
        Eigen::VectorXd probe = x0;
        double ssr = 0.0;
        VbcPosterior p0 = vbc_unpack(probe, n);
        for (const auto& sample : working.samples) {
            std::vector<XiNeighbor> nbrs;
            nbrs.reserve(sample.neighbors.size());
            for (const auto& [j, w] : sample.neighbors) nbrs.push_back({w, p0.mu[j], p0.sigma2[j]});
            double r = xi_approx(nbrs) - p0.mu_lambda - p0.mu[sample.node];
            ssr += r * r;
        }
        double s2n = std::max(ssr / static_cast<double>(working.samples.size()), 1e-4);
        x0[2 * n + 2] = std::log(s2n);
    }

    Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        double bound;
        try {
            bound = l2_eval(working, priors, x, &grad);
        } catch (const NumericError&) {
            grad.setZero(x.size());
            return std::numeric_limits<double>::infinity();
        }
        grad = -grad;
        return -bound;
    };

    CgResult res = minimize_cg(objective, x0, opts.optimizer);
    if (!std::isfinite(res.f)) throw NumericError("VBC fit diverged to a non-finite bound");

    VbcFitReport report;
    report.final_bound = -res.f;
    report.iterations = res.iterations;
    report.grad_norm = res.grad.cwiseAbs().maxCoeff();
    report.converged = res.converged;
    report.bound_trace.reserve(res.trace.size());
    for (double f : res.trace) report.bound_trace.push_back(-f);
    return {vbc_unpack(res.x, n), report};
}

std::string posterior_to_json(const VbcPosterior& post, const VbcFitReport& report,
                              const std::vector<std::string>& labels) {
    nlohmann::ordered_json j;
    j["n"] = post.n();
    if (!labels.empty()) j["labels"] = labels;
    j["mu"] = post.mu;
    j["sigma2"] = post.sigma2;
    j["mu_lambda"] = post.mu_lambda;
    j["sigma2_lambda"] = post.sigma2_lambda;
    j["noise_sigma2"] = post.noise_sigma2;
    j["centrality_mean"] = post.centrality_mean();
    j["final_bound"] = report.final_bound;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    return j.dump(2) + "\n";
}

VbcPosterior posterior_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad posterior JSON: ") + e.what());
    }
    try {
        VbcPosterior post;
        post.mu = j.at("mu").get<std::vector<double>>();
        post.sigma2 = j.at("sigma2").get<std::vector<double>>();
        post.mu_lambda = j.at("mu_lambda").get<double>();
        post.sigma2_lambda = j.at("sigma2_lambda").get<double>();
        post.noise_sigma2 = j.at("noise_sigma2").get<double>();
        return post;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad posterior JSON: ") + e.what());
    }
}

} // namespace vbcent
