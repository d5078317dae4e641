#pragma once

#include <Eigen/Dense>

#include "vbcent/kernel.hpp"
#include "vbcent/optim.hpp"

namespace vbcent {

// Dense GP regression, used as the non-sparse reference for the attribute
// mapping: exact posterior on all training points, hyperparameters fitted by
// marginal-likelihood ascent.
struct FullGpModel {
    Eigen::MatrixXd X;       // standardized training inputs
    Eigen::VectorXd alpha;   // (K + noise I)^{-1} (y - y_mean)
    KernelConfig kernel;
    double noise_sigma2 = 1e-2;
    double y_mean = 0.0;
    Eigen::VectorXd attr_mean, attr_std;
    double log_marginal = 0.0;
};

struct FullGpOptions {
    double noise_sigma2 = 1e-2;
    bool optimize_hyperparameters = true;
    CgOptions optimizer;
};

// kernel_init follows the fit_vbcgp conventions: a single ARD lengthscale is
// broadcast to d, and nonpositive lengthscales request the median heuristic.
FullGpModel fit_fullgp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const KernelConfig& kernel_init, const FullGpOptions& opts = {});

// Predictive means at raw (unstandardized) query points.
Eigen::VectorXd predict_fullgp(const FullGpModel& model, const Eigen::MatrixXd& Xq);

} // namespace vbcent
