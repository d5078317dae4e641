#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "vbcent/graph.hpp"
#include "vbcent/optim.hpp"
#include "vbcent/sparse_gp.hpp"
#include "vbcent/vbc.hpp"

namespace vbcent {

// Prior on the log-eigenvalue; the function prior is p(u) = N(0, Kmm).
struct GpPriors {
    double mu_lambda = 0.0;
    double sigma2_lambda = 10.0;
};

struct VbcGpPosterior {
    SparseGpState gp;
    double mu_lambda = 0.0;
    double sigma2_lambda = 0.0;
    double noise_sigma2 = 0.0;

    // Attribute standardization fitted on the training set; empty means identity.
    Eigen::VectorXd attr_mean;
    Eigen::VectorXd attr_std;

    // Predictive moments at the training nodes, cached after fitting.
    std::vector<PredictiveMoments> node_moments;

    Eigen::VectorXd standardize(const Eigen::VectorXd& x) const;
};

// Moments of exp(z_j) with z_j integrated over the conditional and q(u):
// E = exp(g + cond_var/2 + induce_var/2), V = (exp(induce_var) - 1) exp(2g + cond_var + induce_var)
// where g is the predictive mean. The variance tracks the spread induced by
// q(u); the conditional variance enters only through the mean correction.
std::pair<double, double> inducing_lognormal_moments(const SparseGpState& state,
                                                     const SparseGpCache& cache,
                                                     const Eigen::VectorXd& x);
std::pair<double, double> inducing_lognormal_moments(const PredictiveMoments& pm);

// Variational lower bound L4. Attributes are taken from data.attributes and
// standardized with the posterior's stored constants.
double l4_bound(const ObservationDataset& data, const VbcGpPosterior& post, const GpPriors& priors);

// Unconstrained parameter vector over which L4 is optimized:
// [m (M), lower triangle of L row-wise with softplus-parameterized diagonal
// (M(M+1)/2), mu_lambda, log sigma2_lambda, log noise_sigma2,
// log lengthscales (1 or d), log amplitude2], where S = L L'.
Eigen::VectorXd vbcgp_pack(const VbcGpPosterior& post);
VbcGpPosterior vbcgp_unpack(const Eigen::VectorXd& x, const VbcGpPosterior& like);

Eigen::VectorXd l4_gradient(const ObservationDataset& data, const VbcGpPosterior& post,
                                                        const GpPriors& priors);

struct VbcGpFitOptions {
    CgOptions optimizer;
    bool optimize_hyperparameters = true;
    bool restrict_to_largest_scc = false;
    double init_floor = 1e-8;
    std::uint64_t kmeans_seed = 0;
};

// kernel_init: an ARD kernel with a single lengthscale is broadcast to d; any
// nonpositive lengthscale requests the median-distance heuristic
// (median_lengthscales) on the standardized attributes.
std::pair<VbcGpPosterior, VbcFitReport> fit_vbcgp(const ObservationDataset& data,
                                                  const GpPriors& priors,
                                                  const KernelConfig& kernel_init, int m,
                                                  const VbcGpFitOptions& opts = {});

// Log-normal prediction at raw (unstandardized) attributes x.
struct CentralityPrediction {
    double location = 0.0;  // predictive mean of z
    double scale2 = 0.0;    // cond_var + induce_var
    double mean = 0.0;      // lognormal_moments(location, scale2)
    double variance = 0.0;
};
CentralityPrediction predict_centrality(const VbcGpPosterior& post, const Eigen::VectorXd& x);
std::vector<CentralityPrediction> predict_centrality(const VbcGpPosterior& post,
                                                     const Eigen::MatrixXd& X);

// Dimensions sorted by fitted lengthscale, most relevant (smallest) first.
// Requires an ARD kernel.
std::vector<std::pair<int, double>> ard_relevance(const VbcGpPosterior& post);

std::string model_to_json(const VbcGpPosterior& post, const VbcFitReport& report);
VbcGpPosterior model_from_json(const std::string& text);

} // namespace vbcent
