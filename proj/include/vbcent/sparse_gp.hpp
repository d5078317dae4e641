#pragma once

#include <Eigen/Dense>

#include "vbcent/kernel.hpp"

namespace vbcent {

// Variational sparse-GP state: q(u) = N(m, S) over function values at the
// inducing inputs Xm, with conditional p(z | u) = N(k' Kmm^-1 u, kappa - k' Kmm^-1 k).
struct SparseGpState {
    Eigen::MatrixXd Xm;  // m x d inducing inputs
    Eigen::VectorXd m;
    Eigen::MatrixXd S;
    KernelConfig kernel;

    int inducing_count() const { return static_cast<int>(Xm.rows()); }
    int dim() const { return static_cast<int>(Xm.cols()); }
    void validate() const;
};

// Cached factorization of Kmm for repeated conditionals.
struct SparseGpCache {
    Eigen::MatrixXd Kmm;  // with the jitter that made Cholesky succeed
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter_used = 0.0;

    explicit SparseGpCache(const SparseGpState& state);
    Eigen::VectorXd solve(const Eigen::VectorXd& v) const { return llt.solve(v); }
    Eigen::MatrixXd solve(const Eigen::MatrixXd& V) const { return llt.solve(V); }
};

struct PredictiveMoments {
    double mean = 0.0;        // k' Kmm^-1 m
    double cond_var = 0.0;    // kappa - k' Kmm^-1 k, clamped at 0
    double induce_var = 0.0;  // b' S b with b = Kmm^-1 k
    double variance() const { return cond_var + induce_var; }
};

PredictiveMoments predictive_moments(const SparseGpState& state, const SparseGpCache& cache,
                                     const Eigen::VectorXd& x);
PredictiveMoments predictive_moments(const SparseGpState& state, const Eigen::VectorXd& x);

} // namespace vbcent
