#include "vbcent/sparse_gp.hpp"

#include <cmath>

#include "vbcent/errors.hpp"
#include "vbcent/log.hpp"

namespace vbcent {

void SparseGpState::validate() const {
    kernel.validate(dim());
    const auto M = Xm.rows();
    if (m.size() != M || S.rows() != M || S.cols() != M)
        throw ValidationError("sparse-GP state dimensions disagree");
}

SparseGpCache::SparseGpCache(const SparseGpState& state) {
    state.validate();
    Eigen::MatrixXd K = kernel_matrix(state.kernel, state.Xm);
    auto chol = cholesky_with_jitter(K, state.kernel.jitter);
    jitter_used = chol.jitter_used;
    Kmm = K + jitter_used * Eigen::MatrixXd::Identity(K.rows(), K.cols());
    llt.compute(Kmm);
    if (llt.info() != Eigen::Success) throw NumericError("Kmm Cholesky failed");
}

PredictiveMoments predictive_moments(const SparseGpState& state, const SparseGpCache& cache,
                                     const Eigen::VectorXd& x) {
    if (x.size() != state.dim()) throw ValidationError("prediction input has wrong dimension");
    const auto M = state.Xm.rows();
    Eigen::VectorXd k(M);
    for (Eigen::Index j = 0; j < M; ++j)
        k[j] = kernel_eval(state.kernel, x, state.Xm.row(j).transpose());
    double kappa = state.kernel.amplitude2;
    Eigen::VectorXd b = cache.solve(k);

    PredictiveMoments pm;
    pm.mean = b.dot(state.m);
    pm.cond_var = kappa - k.dot(b);
    if (pm.cond_var < 0) {
        if (pm.cond_var < -1e-6)
            log_warn("conditional variance clamped from " + std::to_string(pm.cond_var));
        pm.cond_var = 0.0;
    }
    pm.induce_var = b.dot(state.S * b);
    if (pm.induce_var < 0) pm.induce_var = 0.0;
    return pm;
}

PredictiveMoments predictive_moments(const SparseGpState& state, const Eigen::VectorXd& x) {
    SparseGpCache cache(state);
    return predictive_moments(state, cache, x);
}

} // namespace vbcent
