#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "vbcent/graph.hpp"
#include "vbcent/optim.hpp"

namespace vbcent {

// Gaussian priors on the log-centralities z_i and the log-eigenvalue z_lambda.
struct VbcPriors {
    std::vector<double> mu;      // per node
    std::vector<double> sigma2;  // per node, > 0
    double mu_lambda = 0.0;
    double sigma2_lambda = 10.0;

    static VbcPriors vague(int n, double m = 0.0, double s2 = 10.0);
    void validate(int n) const;
};

struct VbcPosterior {
    std::vector<double> mu;
    std::vector<double> sigma2;
    double mu_lambda = 0.0;
    double sigma2_lambda = 0.0;
    double noise_sigma2 = 0.0;  // tied likelihood noise

    int n() const { return static_cast<int>(mu.size()); }
    // Point estimate E[exp z_i] = exp(mu_i + sigma2_i / 2).
    std::vector<double> centrality_mean() const;
};

struct VbcFitReport {
    double final_bound = 0.0;
    int iterations = 0;
    double grad_norm = 0.0;  // infinity norm at the final point
    bool converged = false;
    std::vector<double> bound_trace;
};

struct VbcFitOptions {
    CgOptions optimizer;
    // By default the averaged graph must be strongly connected. With
    // restrict_to_largest_scc, nodes outside the largest SCC are kept at their
    // prior (their samples are dropped from the likelihood).
    bool restrict_to_largest_scc = false;
    double init_floor = 1e-8;  // clip baseline centralities before log
};

// Moments of exp(z) for z ~ N(mu, sigma2).
std::pair<double, double> lognormal_moments(double mu, double sigma2);

struct XiNeighbor {
    double w;       // observed weight, >= 0
    double mu;      // variational mean of the neighbor's z
    double sigma2;  // variational variance
};

// Second-order expansion of E[log sum_j w_j exp(z_j)]:
// log A - B / (2 A^2) with A = sum w E[exp z], B = sum w^2 V[exp z].
// Throws NumericError when the weighted sum A is zero.
double xi_approx(const std::vector<XiNeighbor>& neighbors);

// KL(N(mu_q, s2_q) || N(mu_p, s2_p)), univariate.
double gaussian_kl(double mu_q, double s2_q, double mu_p, double s2_p);

// KL(N(mu_q, S_q) || N(mu_p, S_p)); throws NumericError if either covariance
// fails Cholesky.
double gaussian_kl(const Eigen::VectorXd& mu_q, const Eigen::MatrixXd& S_q,
                   const Eigen::VectorXd& mu_p, const Eigen::MatrixXd& S_p);

// Variational lower bound L2 and its gradient in the unconstrained
// parameterization (mu_1..mu_n, log sigma2_1..n, mu_lambda, log sigma2_lambda,
// log noise_sigma2).
double l2_bound(const ObservationDataset& data, const VbcPosterior& post, const VbcPriors& priors);
Eigen::VectorXd l2_gradient(const ObservationDataset& data, const VbcPosterior& post,
                                                        const VbcPriors& priors);

// Pack and unpack the optimizer parameter vector (size 2n + 3).
Eigen::VectorXd vbc_pack(const VbcPosterior& post);
VbcPosterior vbc_unpack(const Eigen::VectorXd& x, int n);

// Maximize L2 by nonlinear conjugate gradients. init, when given, supplies the
// starting mu_i directly; otherwise mu_i starts at log of the averaged-weight
// eigenvector centrality (clipped below at init_floor).
std::pair<VbcPosterior, VbcFitReport> fit_vbc(const ObservationDataset& data,
                                                                                            const VbcPriors& priors,
                                                                                            const std::optional<std::vector<double>>& init = {},
                                                                                            const VbcFitOptions& opts = {});

// JSON round-trip of the posterior (ordered keys; optional node labels).
std::string posterior_to_json(const VbcPosterior& post, const VbcFitReport& report,
                                                            const std::vector<std::string>& labels = {});
VbcPosterior posterior_from_json(const std::string& text);

} // namespace vbcent
