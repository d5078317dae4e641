#include "fullgp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vbcent/errors.hpp"

namespace vbcent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Standardized {
    Eigen::MatrixXd X;
    Eigen::VectorXd mean, std;
};

Standardized standardize(const Eigen::MatrixXd& X) {
    Standardized s;
    const auto n = X.rows();
    s.mean = X.colwise().mean();
    Eigen::MatrixXd centered = X.rowwise() - s.mean.transpose();
    s.std = Eigen::VectorXd::Ones(X.cols());
    if (n > 1)
        s.std = (centered.array().square().colwise().sum() / double(n - 1))
                    .sqrt()
                    .matrix()
                    .transpose();
    for (Eigen::Index k = 0; k < s.std.size(); ++k)
        if (s.std(k) <= 0) s.std(k) = 1.0;
    s.X = centered.array().rowwise() / s.std.transpose().array();
    return s;
}

// theta = [log lengthscales (H), log amplitude2, log noise_sigma2]
KernelConfig config_at(const KernelConfig& proto, const Eigen::VectorXd& theta, int H) {
    KernelConfig cfg = proto;
    for (int h = 0; h < H; ++h) cfg.lengthscales[h] = std::exp(theta(h));
    cfg.amplitude2 = std::exp(theta(H));
    return cfg;
}

double neg_log_marginal(const Eigen::MatrixXd& X, const Eigen::VectorXd& yc,
                        const KernelConfig& proto, int H, const Eigen::VectorXd& theta,
                        Eigen::VectorXd& grad) {
    grad = Eigen::VectorXd::Zero(theta.size());
    if (theta.cwiseAbs().maxCoeff() > 30.0) return kInf;
    KernelConfig cfg = config_at(proto, theta, H);
    double sn2 = std::exp(theta(H + 1));
    const auto n = X.rows();

    Eigen::MatrixXd K = kernel_matrix(cfg, X);
    Eigen::MatrixXd Kn = K + sn2 * Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(Kn);
    if (llt.info() != Eigen::Success) return kInf;

    Eigen::VectorXd alpha = llt.solve(yc);
    double f = 0.5 * yc.dot(alpha) +
               llt.matrixL().toDenseMatrix().diagonal().array().log().sum() +
               0.5 * n * std::log(2.0 * std::numbers::pi);
    if (!std::isfinite(f)) return kInf;

    Eigen::MatrixXd M = alpha * alpha.transpose() -
                        llt.solve(Eigen::MatrixXd::Identity(n, n));
    for (int h = 0; h < H; ++h) {
        double acc = 0.0;
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b) {
                double d2;
                if (cfg.kind == KernelKind::ARD) {
                    double diff = X(a, h) - X(b, h);
                    d2 = diff * diff;
                } else {
                    d2 = (X.row(a) - X.row(b)).squaredNorm();
                }
                acc += M(a, b) * K(a, b) * d2 /
                       (cfg.lengthscales[h] * cfg.lengthscales[h]);
            }
        grad(h) = -0.5 * acc;
    }
    grad(H) = -0.5 * M.cwiseProduct(K).sum();
    grad(H + 1) = -0.5 * sn2 * M.trace();
    return f;
}

} // namespace

FullGpModel fit_fullgp(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const KernelConfig& kernel_init, const FullGpOptions& opts) {
    if (X.rows() != y.size()) throw ValidationError("GP inputs and targets disagree in length");
    if (X.rows() < 1) throw ValidationError("GP regression needs at least one point");
    if (opts.noise_sigma2 <= 0) throw ValidationError("GP noise variance must be positive");

    Standardized s = standardize(X);
    double y_mean = y.mean();
    Eigen::VectorXd yc = y.array() - y_mean;

    KernelConfig kern = kernel_init;
    if (kern.kind == KernelKind::ARD &&
        kern.lengthscales.size() == 1 && X.cols() > 1)
        kern.lengthscales.assign(static_cast<size_t>(X.cols()), kern.lengthscales[0]);
    bool auto_lengthscale = false;
    for (double l : kern.lengthscales)
        if (!(l > 0)) auto_lengthscale = true;
    if (auto_lengthscale) kern.lengthscales = median_lengthscales(s.X, kern.kind);
    kern.validate(static_cast<int>(X.cols()));

    const int H = static_cast<int>(kern.lengthscales.size());
    Eigen::VectorXd theta(H + 2);
    for (int h = 0; h < H; ++h) theta(h) = std::log(kern.lengthscales[h]);
    theta(H) = std::log(kern.amplitude2);
    theta(H + 1) = std::log(opts.noise_sigma2);

    double final_f;
    if (opts.optimize_hyperparameters) {
        auto objective = [&](const Eigen::VectorXd& t, Eigen::VectorXd& g) {
            return neg_log_marginal(s.X, yc, kern, H, t, g);
        };
        CgResult res = minimize_cg(objective, theta, opts.optimizer);
        theta = res.x;
        final_f = res.f;
    } else {
        Eigen::VectorXd g;
        final_f = neg_log_marginal(s.X, yc, kern, H, theta, g);
        if (!std::isfinite(final_f))
            throw NumericError("GP marginal likelihood is not finite at the initial point");
    }

    FullGpModel model;
    model.kernel = config_at(kern, theta, H);
    model.noise_sigma2 = std::exp(theta(H + 1));
    model.X = s.X;
    model.attr_mean = s.mean;
    model.attr_std = s.std;
    model.y_mean = y_mean;
    model.log_marginal = -final_f;

    const auto n = s.X.rows();
    Eigen::MatrixXd Kn = kernel_matrix(model.kernel, s.X) +
                         model.noise_sigma2 * Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(Kn);
    if (llt.info() != Eigen::Success)
        throw NumericError("GP covariance lost positive definiteness after fitting");
    model.alpha = llt.solve(yc);
    return model;
}

Eigen::VectorXd predict_fullgp(const FullGpModel& model, const Eigen::MatrixXd& Xq) {
    if (Xq.cols() != model.X.cols())
        throw ValidationError("query attribute dimension does not match the GP model");
    Eigen::MatrixXd Xs =
        (Xq.rowwise() - model.attr_mean.transpose()).array().rowwise() /
        model.attr_std.transpose().array();
    Eigen::MatrixXd Ks = kernel_matrix(model.kernel, model.X, Xs); // n x q
    return (Ks.transpose() * model.alpha).array() + model.y_mean;
}

} // namespace vbcent
