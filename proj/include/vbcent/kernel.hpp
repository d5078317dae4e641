#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace vbcent {

enum class KernelKind { SE, ARD };

// Squared-exponential kernel a^2 exp(-1/2 sum_k (x_k - x'_k)^2 / l_k^2).
// SE shares one lengthscale across dimensions; ARD keeps one per dimension.
// SE evaluation goes through the ARD code path with the shared value, so the
// two agree bitwise when the lengthscales match.
struct KernelConfig {
    KernelKind kind = KernelKind::SE;
    std::vector<double> lengthscales;  // size 1 for SE, d for ARD
    double amplitude2 = 1.0;
    double jitter = 1e-8;

    static KernelConfig se(double l, double a2 = 1.0);
    static KernelConfig ard(std::vector<double> ls, double a2 = 1.0);
    void validate(int d) const;
    // Per-dimension lengthscale regardless of kind.
    double lengthscale(int dim) const;
};

double kernel_eval(const KernelConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Gram matrix K(X, Y); X is n x d, Y is m x d row-major points.
Eigen::MatrixXd kernel_matrix(const KernelConfig& cfg, const Eigen::MatrixXd& X,
                                                            const Eigen::MatrixXd& Y);
Eigen::MatrixXd kernel_matrix(const KernelConfig& cfg, const Eigen::MatrixXd& X);

// Cholesky of A + jitter*I, escalating jitter tenfold (warn each time) up to
// max_jitter before throwing NumericError. Returns the factor and the jitter
// actually used.
struct CholeskyResult {
    Eigen::MatrixXd L;
    double jitter_used = 0.0;
};
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& A, double jitter = 1e-8,
                                                                        double max_jitter = 1e-2);

// k-means with k-means++ seeding, Lloyd iterations capped at 100, deterministic
// per seed. Empty clusters are reseeded at the farthest point. Identical-point
// degeneracies may yield duplicate centroids (warned).
Eigen::MatrixXd select_inducing_kmeans(const Eigen::MatrixXd& X, int m, std::uint64_t seed);

// Median-distance lengthscale heuristic: SE gets the median pairwise distance,
// ARD the per-dimension median absolute difference scaled by sqrt(d). Inputs
// subsampled beyond 512 points; zero medians fall back to 1.
std::vector<double> median_lengthscales(const Eigen::MatrixXd& X, KernelKind kind);

} // namespace vbcent
