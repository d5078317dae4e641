#include "vbcent/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vbcent/errors.hpp"
#include "vbcent/log.hpp"
#include "vbcent/rng.hpp"

namespace vbcent {

KernelConfig KernelConfig::se(double l, double a2) {
    KernelConfig cfg;
    cfg.kind = KernelKind::SE;
    cfg.lengthscales = {l};
    cfg.amplitude2 = a2;
    return cfg;
}

KernelConfig KernelConfig::ard(std::vector<double> ls, double a2) {
    KernelConfig cfg;
    cfg.kind = KernelKind::ARD;
    cfg.lengthscales = std::move(ls);
    cfg.amplitude2 = a2;
    return cfg;
}

void KernelConfig::validate(int d) const {
    if (kind == KernelKind::SE) {
        if (lengthscales.size() != 1) throw ValidationError("SE kernel takes one lengthscale");
    } else if (static_cast<int>(lengthscales.size()) != d) {
        throw ValidationError("ARD kernel needs one lengthscale per dimension");
    }
    for (double l : lengthscales)
        if (!(l > 0)) throw ValidationError("lengthscales must be positive");
    if (!(amplitude2 > 0)) throw ValidationError("kernel amplitude must be positive");
    if (jitter < 0) throw ValidationError("jitter must be non-negative");
}

double KernelConfig::lengthscale(int dim) const {
    return kind == KernelKind::SE ? lengthscales[0] : lengthscales[dim];
}

double kernel_eval(const KernelConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) throw ValidationError("kernel inputs differ in dimension");
    cfg.validate(static_cast<int>(x.size()));
    double q = 0.0;
    for (int k = 0; k < x.size(); ++k) {
        double dl = (x[k] - y[k]) / cfg.lengthscale(k);
        q += dl * dl;
    }
    return cfg.amplitude2 * std::exp(-0.5 * q);
}

Eigen::MatrixXd kernel_matrix(const KernelConfig& cfg, const Eigen::MatrixXd& X,
                              const Eigen::MatrixXd& Y) {
    if (X.cols() != Y.cols()) throw ValidationError("kernel inputs differ in dimension");
    cfg.validate(static_cast<int>(X.cols()));
    Eigen::MatrixXd K(X.rows(), Y.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < Y.rows(); ++j) {
            double q = 0.0;
            for (Eigen::Index k = 0; k < X.cols(); ++k) {
                double dl = (X(i, k) - Y(j, k)) / cfg.lengthscale(static_cast<int>(k));
                q += dl * dl;
            }
            K(i, j) = cfg.amplitude2 * std::exp(-0.5 * q);
        }
    return K;
}

Eigen::MatrixXd kernel_matrix(const KernelConfig& cfg, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd K = kernel_matrix(cfg, X, X);
    // Symmetrize exactly; the loop above already is, but keep the invariant robust
    // to future reorderings of the arithmetic.
    return (K + K.transpose()) / 2;
}

CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& A, double jitter, double max_jitter) {
    if (A.rows() != A.cols()) throw ValidationError("Cholesky needs a square matrix");
    double eps = jitter;
    while (true) {
        Eigen::MatrixXd B = A + eps * Eigen::MatrixXd::Identity(A.rows(), A.cols());
        Eigen::LLT<Eigen::MatrixXd> llt(B);
        if (llt.info() == Eigen::Success) {
            if (eps > jitter)
                log_warn("Cholesky jitter escalated to " + std::to_string(eps));
            return {Eigen::MatrixXd(llt.matrixL()), eps};
        }
        if (eps == 0.0) {
            eps = 1e-10;
        } else {
            eps *= 10;
        }
        if (eps > max_jitter)
            throw NumericError("Cholesky failed even with jitter " + std::to_string(max_jitter));
    }
}

Eigen::MatrixXd select_inducing_kmeans(const Eigen::MatrixXd& X, int m, std::uint64_t seed) {
    const int n = static_cast<int>(X.rows());
    if (n < 1) throw ValidationError("k-means needs at least one point");
    if (m < 1 || m > n) throw ValidationError("inducing count must be in [1, n]");

    auto rng = rng::engine(rng::combine(seed, rng::hash_name("kmeans++")));
    std::vector<int> centers;
    centers.reserve(m);
    std::uniform_int_distribution<int> first(0, n - 1);
    centers.push_back(first(rng));

    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    auto update_d2 = [&](int c) {
        for (int i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], (X.row(i) - X.row(c)).squaredNorm());
    };
    update_d2(centers[0]);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 1; k < m; ++k) {
        double total = 0.0;
        for (double v : d2) total += v;
        int pick;
        if (total > 0) {
            double target = unif(rng) * total, acc = 0.0;
            pick = n - 1;
            for (int i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target) { // strict: zero-distance (already chosen) points never win
                    pick = i;
                    break;
                }
            }
        } else {
            // all remaining points coincide with a chosen center
            pick = first(rng);
            log_warn("k-means++: degenerate input, duplicate centroids possible");
        }
        centers.push_back(pick);
        update_d2(pick);
    }

    Eigen::MatrixXd C(m, X.cols());
    for (int k = 0; k < m; ++k) C.row(k) = X.row(centers[k]);

    std::vector<int> assign(n, -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (X.row(i) - C.row(0)).squaredNorm();
            for (int k = 1; k < m; ++k) {
                double d = (X.row(i) - C.row(k)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(m, X.cols());
        std::vector<int> counts(m, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(assign[i]) += X.row(i);
            ++counts[assign[i]];
        }
        for (int k = 0; k < m; ++k) {
            if (counts[k] == 0) {
                // reseed an empty cluster at the point farthest from its centroid
                int far = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    double d = (X.row(i) - C.row(assign[i])).squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                C.row(k) = X.row(far);
            } else {
                C.row(k) = sums.row(k) / counts[k];
            }
        }
    }
    return C;
}

std::vector<double> median_lengthscales(const Eigen::MatrixXd& X, KernelKind kind) {
    const auto n = X.rows();
    const auto d = X.cols();
    if (n < 2) return std::vector<double>(kind == KernelKind::SE ? 1 : d, 1.0);

    std::vector<Eigen::Index> idx;
    Eigen::Index cap = std::min<Eigen::Index>(n, 512);
    for (Eigen::Index t = 0; t < cap; ++t) idx.push_back(t * n / cap);

    auto median_of = [](std::vector<double>& v) {
        auto mid = v.begin() + v.size() / 2;
        std::nth_element(v.begin(), mid, v.end());
        double m = *mid;
        return m > 0 ? m : 1.0;
    };

    if (kind == KernelKind::SE) {
        std::vector<double> dist;
        dist.reserve(idx.size() * (idx.size() - 1) / 2);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b)
                dist.push_back((X.row(idx[a]) - X.row(idx[b])).norm());
        return {median_of(dist)};
    }
    std::vector<double> ls(d);
    std::vector<double> diff;
    diff.reserve(idx.size() * (idx.size() - 1) / 2);
    for (Eigen::Index k = 0; k < d; ++k) {
        diff.clear();
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b)
                diff.push_back(std::abs(X(idx[a], k) - X(idx[b], k)));
        ls[k] = median_of(diff) * std::sqrt(static_cast<double>(d));
    }
    return ls;
}

} // namespace vbcent
