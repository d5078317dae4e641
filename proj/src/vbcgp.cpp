#include "vbcent/vbcgp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "vbcent/centrality.hpp"
#include "vbcent/errors.hpp"
#include "vbcent/log.hpp"
#include "vbcent/rng.hpp"

namespace vbcent {

Eigen::VectorXd VbcGpPosterior::standardize(const Eigen::VectorXd& x) const {
    if (attr_mean.size() == 0) return x;
    if (x.size() != attr_mean.size())
        throw ValidationError("attribute vector has wrong dimension");
    return (x - attr_mean).cwiseQuotient(attr_std);
}

namespace {

inline std::pair<double, double> exp_moments(double g, double cond_var, double induce_var) {
    double mean = std::exp(g + cond_var / 2 + induce_var / 2);
    double variance = std::expm1(induce_var) * std::exp(2 * g + cond_var + induce_var);
    return {mean, variance};
}

inline double softplus(double r) { return r > 30 ? r : std::log1p(std::exp(r)); }
inline double softplus_inv(double v) { return v > 30 ? v : std::log(std::expm1(v)); }
inline double sigmoid(double r) { return 1.0 / (1.0 + std::exp(-r)); }

} // namespace

std::pair<double, double> inducing_lognormal_moments(const PredictiveMoments& pm) {
    return exp_moments(pm.mean, pm.cond_var, pm.induce_var);
}

std::pair<double, double> inducing_lognormal_moments(const SparseGpState& state,
                                                     const SparseGpCache& cache,
                                                     const Eigen::VectorXd& x) {
    return inducing_lognormal_moments(predictive_moments(state, cache, x));
}

namespace {

// Fixed structure of an L4 evaluation: everything except the parameter vector.
struct L4Problem {
    const ObservationDataset& data; // samples only; attributes pre-standardized below
    Eigen::MatrixXd Xstd;           // n x d standardized training attributes
    GpPriors priors;
    Eigen::MatrixXd Xm;             // inducing inputs, fixed
    KernelKind kind;
    double jitter;
    int H; // hyperparameter count excluding amplitude (1 for SE, d for ARD)

    int M() const { return static_cast<int>(Xm.rows()); }
    int tri() const { return M() * (M() + 1) / 2; }
    int params() const { return M() + tri() + 3 + H + 1; }

    // Layout: [m, L lower-triangular row-wise (softplus diagonal), mu_lambda,
    // log sigma2_lambda, log noise, log lengthscales, log amplitude2].
    double eval(const Eigen::VectorXd& x, Eigen::VectorXd* grad, double* ssr_out) const;

    KernelConfig kernel_at(const Eigen::VectorXd& x) const {
        KernelConfig cfg;
        cfg.kind = kind;
        cfg.jitter = jitter;
        int base = M() + tri() + 3;
        cfg.lengthscales.resize(H);
        for (int h = 0; h < H; ++h) cfg.lengthscales[h] = std::exp(x[base + h]);
        cfg.amplitude2 = std::exp(x[base + H]);
        return cfg;
    }
};

double L4Problem::eval(const Eigen::VectorXd& x, Eigen::VectorXd* grad, double* ssr_out) const {
    const int m_count = M();
    const int t_count = tri();
    const int n = static_cast<int>(Xstd.rows());
    if (x.size() != params()) throw ValidationError("parameter vector has wrong size");

    const Eigen::VectorXd m = x.head(m_count);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m_count, m_count);
    Eigen::VectorXd diag_rho(m_count);
    {
        int pos = m_count;
        for (int a = 0; a < m_count; ++a)
            for (int b = 0; b <= a; ++b, ++pos) {
                if (a == b) {
                    diag_rho[a] = x[pos];
                    L(a, a) = softplus(x[pos]);
                } else {
                    L(a, b) = x[pos];
                }
            }
    }
    const double mu_l = x[m_count + t_count];
    const double s2_l = std::exp(x[m_count + t_count + 1]);
    const double noise = std::exp(x[m_count + t_count + 2]);
    const KernelConfig cfg = kernel_at(x);

    const Eigen::MatrixXd Ktilde = kernel_matrix(cfg, Xm);
    const auto chol = cholesky_with_jitter(Ktilde, cfg.jitter);
    const Eigen::MatrixXd K =
        Ktilde + chol.jitter_used * Eigen::MatrixXd::Identity(m_count, m_count);
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) throw NumericError("Kmm Cholesky failed");

    const Eigen::MatrixXd S = L * L.transpose();
    const Eigen::MatrixXd Knm = kernel_matrix(cfg, Xstd, Xm); // n x M
    const Eigen::MatrixXd B = llt.solve(Knm.transpose());     // M x n, columns b_j
    const Eigen::VectorXd g = B.transpose() * m;
    const Eigen::MatrixXd LtB = L.transpose() * B;            // M x n
    const double kappa = cfg.amplitude2;

    Eigen::VectorXd cond_var(n), induce_var(n), E(n), V(n);
    std::vector<bool> clamped(n, false);
    for (int j = 0; j < n; ++j) {
        double cv = kappa - Knm.row(j).dot(B.col(j));
        if (cv < 0) {
            cv = 0.0;
            clamped[j] = true;
        }
        cond_var[j] = cv;
        induce_var[j] = LtB.col(j).squaredNorm();
        std::tie(E[j], V[j]) = exp_moments(g[j], cv, induce_var[j]);
    }

    const double K_n = static_cast<double>(data.samples.size());
    double ssr = 0.0;
    Eigen::VectorXd aE, aV, aG;
    if (grad) {
        aE.setZero(n);
        aV.setZero(n);
        aG.setZero(n);
    }
    double grad_mu_l_data = 0.0;
    for (const auto& sample : data.samples) {
        double A = 0.0, Bsum = 0.0;
        for (const auto& [j, w] : sample.neighbors) {
            A += w * E[j];
            Bsum += w * w * V[j];
        }
        if (!(A > 0)) throw NumericError("xi_approx: weighted mean sum is zero");
        double xi = std::log(A) - Bsum / (2 * A * A);
        double r = xi - mu_l - g[sample.node];
        ssr += r * r;
        if (grad) {
            double q = -r / noise;
            double dxi_dA = 1.0 / A + Bsum / (A * A * A);
            double dxi_dB = -1.0 / (2 * A * A);
            for (const auto& [j, w] : sample.neighbors) {
                aE[j] += q * dxi_dA * w;
                aV[j] += q * dxi_dB * w * w;
            }
            aG[sample.node] += r / noise;
            grad_mu_l_data += r / noise;
        }
    }
    if (ssr_out) *ssr_out = ssr;

    // KL(q(u) || N(0, K)).
    const Eigen::VectorXd w_vec = llt.solve(m);
    double logdet_S = 0.0, logdet_K = 0.0;
    for (int a = 0; a < m_count; ++a) {
        logdet_S += 2 * std::log(L(a, a));
        logdet_K += 2 * std::log(llt.matrixL()(a, a));
    }
    const double kl_u = 0.5 * (llt.solve(S).trace() + m.dot(w_vec) -
                               static_cast<double>(m_count) - logdet_S + logdet_K);
    const double kl_l = gaussian_kl(mu_l, s2_l, priors.mu_lambda, priors.sigma2_lambda);

    double bound = -0.5 * K_n * std::log(2 * std::numbers::pi * noise) - ssr / (2 * noise) - kl_u - kl_l;
    if (!grad) return bound;

    grad->setZero(params());

    // Per-node adjoints of (g, cond_var, induce_var).
    Eigen::VectorXd dg(n), dcv(n), div(n);
    for (int j = 0; j < n; ++j) {
        double core = std::exp(2 * g[j] + cond_var[j] + induce_var[j]);
        dg[j] = aG[j] + aE[j] * E[j] + aV[j] * 2 * V[j];
        dcv[j] = clamped[j] ? 0.0 : aE[j] * E[j] / 2 + aV[j] * V[j];
        div[j] = aE[j] * E[j] / 2 + aV[j] * core * (2 * std::exp(induce_var[j]) - 1);
    }

    // m block.
    grad->head(m_count) = B * dg - w_vec;

    // L block: dL = 2 G L with G = sum_j div_j b_j b_j' - (Kinv - Sinv)/2.
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m_count, m_count);
    const Eigen::MatrixXd Kinv = llt.solve(I);
    const Eigen::MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(I);
    const Eigen::MatrixXd Sinv = Linv.transpose() * Linv;
    Eigen::MatrixXd G = B * div.asDiagonal() * B.transpose() - 0.5 * (Kinv - Sinv);
    Eigen::MatrixXd dL = 2 * G * L;
    {
        int pos = m_count;
        for (int a = 0; a < m_count; ++a)
            for (int b = 0; b <= a; ++b, ++pos)
                (*grad)[pos] = a == b ? dL(a, a) * sigmoid(diag_rho[a]) : dL(a, b);
    }

    // Eigenvalue and noise parameters.
    (*grad)[m_count + t_count] =
        grad_mu_l_data - (mu_l - priors.mu_lambda) / priors.sigma2_lambda;
    (*grad)[m_count + t_count + 1] = -0.5 * (s2_l / priors.sigma2_lambda - 1.0);
    (*grad)[m_count + t_count + 2] = noise * (-K_n / (2 * noise) + ssr / (2 * noise * noise));

    // Kernel hyperparameters. Every dependency on theta flows through the pure
    // kernel blocks Ktilde (via K), Knm, and kappa:
    //   d g_j      = k_j'^T w - b_j' K' w
    //   d cond_var = kappa' - 2 b_j' k_j' + b_j' K' b_j
    //   d ind_var  = 2 k_j'^T y_j - 2 b_j' K' y_j,  y_j = Kinv S b_j
    //   d KL       = <Kinv - Kinv S Kinv - w w', K'> / 2
    // collected as <Gamma, K'> + sum_j c_j . k_j' + (sum_j dcv_j) kappa'.
    const Eigen::MatrixXd Y = llt.solve(L * LtB); // M x n, columns y_j
    Eigen::MatrixXd Gamma = -0.5 * (Kinv - llt.solve(S) * Kinv - w_vec * w_vec.transpose());
    Eigen::MatrixXd Cmat(m_count, n); // column j = c_j
    for (int j = 0; j < n; ++j) {
        Gamma.noalias() += -dg[j] * B.col(j) * w_vec.transpose() +
                           dcv[j] * B.col(j) * B.col(j).transpose() -
                           2 * div[j] * B.col(j) * Y.col(j).transpose();
        Cmat.col(j) = dg[j] * w_vec - 2 * dcv[j] * B.col(j) + 2 * div[j] * Y.col(j);
    }
    const double dcv_total = dcv.sum();

    const int base = m_count + t_count + 3;
    for (int h = 0; h < H; ++h) {
        double lh = cfg.lengthscales[h];
        double acc = 0.0;
        for (int a = 0; a < m_count; ++a)
            for (int b = 0; b < m_count; ++b) {
                double d2 = 0.0;
                if (kind == KernelKind::SE) {
                    d2 = (Xm.row(a) - Xm.row(b)).squaredNorm();
                } else {
                    double diff = Xm(a, h) - Xm(b, h);
                    d2 = diff * diff;
                }
                acc += Gamma(a, b) * Ktilde(a, b) * d2 / (lh * lh);
            }
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < m_count; ++a) {
                double d2 = 0.0;
                if (kind == KernelKind::SE) {
                    d2 = (Xstd.row(j) - Xm.row(a)).squaredNorm();
                } else {
                    double diff = Xstd(j, h) - Xm(a, h);
                    d2 = diff * diff;
                }
                acc += Cmat(a, j) * Knm(j, a) * d2 / (lh * lh);
            }
        (*grad)[base + h] = acc;
    }
    // log amplitude2: K' = Ktilde, k' = k, kappa' = kappa.
    {
        double acc = (Gamma.array() * Ktilde.array()).sum();
        acc += (Cmat.array() * Knm.transpose().array()).sum();
        acc += dcv_total * kappa;
        (*grad)[base + H] = acc;
    }
    return bound;
}

L4Problem make_problem(const ObservationDataset& data, const VbcGpPosterior& post,
                       const GpPriors& priors) {
    if (!data.has_attributes())
        throw ValidationError("VBC-GP requires node attributes");
    const int n = static_cast<int>(data.attributes.rows());
    data.validate(n);
    Eigen::MatrixXd Xstd(n, data.attributes.cols());
    for (int j = 0; j < n; ++j)
        Xstd.row(j) = post.standardize(data.attributes.row(j).transpose()).transpose();
    return L4Problem{data,
                     std::move(Xstd),
                     priors,
                     post.gp.Xm,
                     post.gp.kernel.kind,
                     post.gp.kernel.jitter,
                     static_cast<int>(post.gp.kernel.lengthscales.size())};
}

} // namespace

Eigen::VectorXd vbcgp_pack(const VbcGpPosterior& post) {
    post.gp.validate();
    const int M = post.gp.inducing_count();
    const int T = M * (M + 1) / 2;
    const int H = static_cast<int>(post.gp.kernel.lengthscales.size());
    Eigen::VectorXd x(M + T + 3 + H + 1);
    x.head(M) = post.gp.m;

    Eigen::LLT<Eigen::MatrixXd> llt(post.gp.S);
    if (llt.info() != Eigen::Success)
        throw NumericError("posterior covariance S is not positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    int pos = M;
    for (int a = 0; a < M; ++a)
        for (int b = 0; b <= a; ++b, ++pos) x[pos] = a == b ? softplus_inv(L(a, a)) : L(a, b);

    x[M + T] = post.mu_lambda;
    if (!(post.sigma2_lambda > 0) || !(post.noise_sigma2 > 0))
        throw ValidationError("posterior variances must be positive");
    x[M + T + 1] = std::log(post.sigma2_lambda);
    x[M + T + 2] = std::log(post.noise_sigma2);
    for (int h = 0; h < H; ++h) x[M + T + 3 + h] = std::log(post.gp.kernel.lengthscales[h]);
    x[M + T + 3 + H] = std::log(post.gp.kernel.amplitude2);
    return x;
}

VbcGpPosterior vbcgp_unpack(const Eigen::VectorXd& x, const VbcGpPosterior& like) {
    VbcGpPosterior post = like;
    post.node_moments.clear();
    const int M = post.gp.inducing_count();
    const int T = M * (M + 1) / 2;
    const int H = static_cast<int>(post.gp.kernel.lengthscales.size());
    if (x.size() != M + T + 3 + H + 1) throw ValidationError("parameter vector has wrong size");

    post.gp.m = x.head(M);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(M, M);
    int pos = M;
    for (int a = 0; a < M; ++a)
        for (int b = 0; b <= a; ++b, ++pos) L(a, b) = a == b ? softplus(x[pos]) : x[pos];
    post.gp.S = L * L.transpose();
    post.mu_lambda = x[M + T];
    post.sigma2_lambda = std::exp(x[M + T + 1]);
    post.noise_sigma2 = std::exp(x[M + T + 2]);
    for (int h = 0; h < H; ++h) post.gp.kernel.lengthscales[h] = std::exp(x[M + T + 3 + h]);
    post.gp.kernel.amplitude2 = std::exp(x[M + T + 3 + H]);
    return post;
}

double l4_bound(const ObservationDataset& data, const VbcGpPosterior& post,
                const GpPriors& priors) {
    auto problem = make_problem(data, post, priors);
    return problem.eval(vbcgp_pack(post), nullptr, nullptr);
}

Eigen::VectorXd l4_gradient(const ObservationDataset& data, const VbcGpPosterior& post,
                            const GpPriors& priors) {
    auto problem = make_problem(data, post, priors);
    Eigen::VectorXd grad;
    problem.eval(vbcgp_pack(post), &grad, nullptr);
    return grad;
}

std::pair<VbcGpPosterior, VbcFitReport> fit_vbcgp(const ObservationDataset& data,
                                                  const GpPriors& priors,
                                                  const KernelConfig& kernel_init, int m,
                                                  const VbcGpFitOptions& opts) {
    if (!data.has_attributes()) throw ValidationError("VBC-GP requires node attributes");
    const int n = static_cast<int>(data.attributes.rows());
    const int d = static_cast<int>(data.attributes.cols());
    data.validate(n);
    if (data.samples.empty()) throw ValidationError("fit_vbcgp needs at least one observation");
    if (m < 1 || m > n) throw ValidationError("inducing count must be in [1, n]");

    VbcGpPosterior proto;
    proto.gp.kernel = kernel_init;
    if (proto.gp.kernel.kind == KernelKind::ARD &&
        static_cast<int>(proto.gp.kernel.lengthscales.size()) == 1 && d > 1)
        proto.gp.kernel.lengthscales.assign(d, kernel_init.lengthscales[0]);

    // Standardize attributes; constants kept for prediction.
    proto.attr_mean = data.attributes.colwise().mean();
    proto.attr_std.resize(d);
    for (int k = 0; k < d; ++k) {
        double var =
            (data.attributes.col(k).array() - proto.attr_mean[k]).square().sum() / std::max(n - 1, 1);
        proto.attr_std[k] = var > 0 ? std::sqrt(var) : 1.0;
    }
    Eigen::MatrixXd Xstd(n, d);
    for (int j = 0; j < n; ++j)
        Xstd.row(j) = proto.standardize(data.attributes.row(j).transpose()).transpose();

    // Nonpositive lengthscales request the median-distance heuristic.
    bool auto_lengthscale = false;
    for (double l : proto.gp.kernel.lengthscales)
        if (!(l > 0)) auto_lengthscale = true;
    if (auto_lengthscale)
        proto.gp.kernel.lengthscales = median_lengthscales(Xstd, proto.gp.kernel.kind);
    proto.gp.kernel.validate(d);

    // Baseline centralities drive the initialization of m and mu_lambda.
    auto avg = average_observations(data, n);
    WeightedDigraph g_bl = avg.graph();
    ObservationDataset working = data;
    std::vector<double> log_cbl(n);
    std::vector<bool> in_scc(n, true);
    double mu_l0;
    if (!check_strongly_connected(g_bl)) {
        if (!opts.restrict_to_largest_scc)
            throw ValidationError(
                "averaged observation graph is not strongly connected "
                "(set restrict_to_largest_scc to fit on the largest component)");
        auto scc = largest_scc(g_bl);
        log_info("restricting fit to largest SCC: " + std::to_string(scc.graph.node_count()) +
                 " of " + std::to_string(n) + " nodes");
        ObservationDataset kept;
        kept.attributes = data.attributes;
        for (const auto& s : data.samples) {
            if (scc.new_of_old[s.node] == -1) continue;
            Observation o;
            o.node = s.node;
            for (const auto& [j, w] : s.neighbors)
                if (scc.new_of_old[j] != -1) o.neighbors.push_back({j, w});
            if (!o.neighbors.empty()) kept.samples.push_back(std::move(o));
        }
        if (kept.samples.empty())
            throw ValidationError("no observations left after SCC restriction");
        working = std::move(kept);
        auto eig = eigenvector_centrality(scc.graph);
        for (int i = 0; i < n; ++i) {
            if (scc.new_of_old[i] == -1) {
                in_scc[i] = false;
                log_cbl[i] = 0.0;
            } else {
                log_cbl[i] = std::log(std::max(eig.c[scc.new_of_old[i]], opts.init_floor));
            }
        }
        mu_l0 = std::log(eig.lambda);
    } else {
        auto eig = eigenvector_centrality(g_bl);
        for (int i = 0; i < n; ++i) log_cbl[i] = std::log(std::max(eig.c[i], opts.init_floor));
        mu_l0 = std::log(eig.lambda);
    }

    proto.gp.Xm = select_inducing_kmeans(Xstd, m, opts.kmeans_seed);

    // S starts at Kmm; m by least squares of the GP mean against log c_BL.
    SparseGpCache cache0((SparseGpState{proto.gp.Xm, Eigen::VectorXd::Zero(m),
                                        Eigen::MatrixXd::Identity(m, m), proto.gp.kernel}));
    proto.gp.S = cache0.Kmm;
    {
        Eigen::MatrixXd Knm = kernel_matrix(proto.gp.kernel, Xstd, proto.gp.Xm);
        Eigen::MatrixXd Kmn = Knm.transpose();
        Eigen::MatrixXd Phi = cache0.solve(Kmn).transpose(); // n x M
        int rows = 0;
        for (int i = 0; i < n; ++i) rows += in_scc[i] ? 1 : 0;
        // Center the targets so the zero-mean prior on u is not fought by a
        // constant offset; residuals are invariant under the shift.
        double ybar = 0.0;
        for (int i = 0; i < n; ++i)
            if (in_scc[i]) ybar += log_cbl[i];
        ybar /= std::max(rows, 1);
        Eigen::MatrixXd Phi_fit(rows, m);
        Eigen::VectorXd y_fit(rows);
        int r = 0;
        for (int i = 0; i < n; ++i) {
            if (!in_scc[i]) continue;
            Phi_fit.row(r) = Phi.row(i);
            y_fit[r] = log_cbl[i] - ybar;
            ++r;
        }
        Eigen::MatrixXd normal = Phi_fit.transpose() * Phi_fit +
                                 1e-8 * rows * Eigen::MatrixXd::Identity(m, m);
        proto.gp.m = normal.ldlt().solve(Phi_fit.transpose() * y_fit);
        if (!proto.gp.m.allFinite()) proto.gp.m.setZero();
    }
    proto.mu_lambda = mu_l0;
    proto.sigma2_lambda = 0.1;
    proto.noise_sigma2 = 1.0; // placeholder until the residual probe below

    GpPriors pri = priors;
    auto problem = make_problem(working, proto, pri);
    Eigen::VectorXd x0 = vbcgp_pack(proto);
    {
        double ssr = 0.0;
        problem.eval(x0, nullptr, &ssr);
        double s2n = std::max(ssr / static_cast<double>(working.samples.size()), 1e-4);
        x0[problem.M() + problem.tri() + 2] = std::log(s2n);
    }

    const int hyper_base = problem.M() + problem.tri() + 3;
    Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        double bound;
        try {
            bound = problem.eval(x, &grad, nullptr);
        } catch (const NumericError&) {
            grad.setZero(x.size());
            return std::numeric_limits<double>::infinity();
        } catch (const ValidationError&) {
            // A trial step can underflow exp(log lengthscale) to zero; treat
            // it like any other numerically infeasible point.
            grad.setZero(x.size());
            return std::numeric_limits<double>::infinity();
        }
        grad = -grad;
        if (!opts.optimize_hyperparameters)
            grad.segment(hyper_base, problem.H + 1).setZero();
        return -bound;
    };

    CgResult res = minimize_cg(objective, x0, opts.optimizer);
    if (!std::isfinite(res.f)) throw NumericError("VBC-GP fit diverged to a non-finite bound");

    VbcGpPosterior post = vbcgp_unpack(res.x, proto);
    SparseGpCache cache(post.gp);
    post.node_moments.reserve(n);
    for (int j = 0; j < n; ++j)
        post.node_moments.push_back(
            predictive_moments(post.gp, cache, Xstd.row(j).transpose()));

    VbcFitReport report;
    report.final_bound = -res.f;
    report.iterations = res.iterations;
    report.grad_norm = res.grad.cwiseAbs().maxCoeff();
    report.converged = res.converged;
    report.bound_trace.reserve(res.trace.size());
    for (double f : res.trace) report.bound_trace.push_back(-f);
    return {std::move(post), report};
}

CentralityPrediction predict_centrality(const VbcGpPosterior& post, const Eigen::VectorXd& x) {
    SparseGpCache cache(post.gp);
    auto pm = predictive_moments(post.gp, cache, post.standardize(x));
    CentralityPrediction pred;
    pred.location = pm.mean;
    pred.scale2 = pm.variance();
    std::tie(pred.mean, pred.variance) = lognormal_moments(pred.location, pred.scale2);
    return pred;
}

std::vector<CentralityPrediction> predict_centrality(const VbcGpPosterior& post,
                                                     const Eigen::MatrixXd& X) {
    SparseGpCache cache(post.gp);
    std::vector<CentralityPrediction> out;
    out.reserve(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        auto pm = predictive_moments(post.gp, cache, post.standardize(X.row(i).transpose()));
        CentralityPrediction pred;
        pred.location = pm.mean;
        pred.scale2 = pm.variance();
        std::tie(pred.mean, pred.variance) = lognormal_moments(pred.location, pred.scale2);
        out.push_back(pred);
    }
    return out;
}

std::vector<std::pair<int, double>> ard_relevance(const VbcGpPosterior& post) {
    if (post.gp.kernel.kind != KernelKind::ARD)
        throw ValidationError("ARD relevance needs an ARD kernel");
    std::vector<std::pair<int, double>> out;
    for (std::size_t k = 0; k < post.gp.kernel.lengthscales.size(); ++k)
        out.push_back({static_cast<int>(k), post.gp.kernel.lengthscales[k]});
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

std::string model_to_json(const VbcGpPosterior& post, const VbcFitReport& report) {
    nlohmann::ordered_json j;
    j["kernel"]["kind"] = post.gp.kernel.kind == KernelKind::SE ? "SE" : "ARD";
    j["kernel"]["lengthscales"] = post.gp.kernel.lengthscales;
    j["kernel"]["amplitude2"] = post.gp.kernel.amplitude2;
    j["kernel"]["jitter"] = post.gp.kernel.jitter;
    const int M = post.gp.inducing_count();
    std::vector<std::vector<double>> inducing(M);
    for (int a = 0; a < M; ++a) {
        inducing[a].resize(post.gp.Xm.cols());
        for (int k = 0; k < post.gp.Xm.cols(); ++k) inducing[a][k] = post.gp.Xm(a, k);
    }
    j["inducing"] = inducing;
    j["m"] = std::vector<double>(post.gp.m.data(), post.gp.m.data() + M);
    std::vector<double> S;
    S.reserve(M * M);
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b) S.push_back(post.gp.S(a, b));
    j["S"] = S;
    j["mu_lambda"] = post.mu_lambda;
    j["sigma2_lambda"] = post.sigma2_lambda;
    j["noise_sigma2"] = post.noise_sigma2;
    j["attr_mean"] = std::vector<double>(post.attr_mean.data(),
                                         post.attr_mean.data() + post.attr_mean.size());
    j["attr_std"] =
        std::vector<double>(post.attr_std.data(), post.attr_std.data() + post.attr_std.size());
    j["final_bound"] = report.final_bound;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    return j.dump(2) + "\n";
}

VbcGpPosterior model_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad model JSON: ") + e.what());
    }
    try {
        VbcGpPosterior post;
        std::string kind = j.at("kernel").at("kind").get<std::string>();
        if (kind == "SE") {
            post.gp.kernel.kind = KernelKind::SE;
        } else if (kind == "ARD") {
            post.gp.kernel.kind = KernelKind::ARD;
        } else {
            throw ValidationError("unknown kernel kind: " + kind);
        }
        post.gp.kernel.lengthscales =
            j.at("kernel").at("lengthscales").get<std::vector<double>>();
        post.gp.kernel.amplitude2 = j.at("kernel").at("amplitude2").get<double>();
        post.gp.kernel.jitter = j.at("kernel").at("jitter").get<double>();
        auto inducing = j.at("inducing").get<std::vector<std::vector<double>>>();
        const int M = static_cast<int>(inducing.size());
        if (M == 0) throw ValidationError("model has no inducing points");
        const int d = static_cast<int>(inducing[0].size());
        post.gp.Xm.resize(M, d);
        for (int a = 0; a < M; ++a) {
            if (static_cast<int>(inducing[a].size()) != d)
                throw ValidationError("ragged inducing point rows");
            for (int k = 0; k < d; ++k) post.gp.Xm(a, k) = inducing[a][k];
        }
        auto mv = j.at("m").get<std::vector<double>>();
        if (static_cast<int>(mv.size()) != M) throw ValidationError("m has wrong length");
        post.gp.m = Eigen::Map<Eigen::VectorXd>(mv.data(), M);
        auto Sv = j.at("S").get<std::vector<double>>();
        if (static_cast<int>(Sv.size()) != M * M) throw ValidationError("S has wrong size");
        post.gp.S.resize(M, M);
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b) post.gp.S(a, b) = Sv[a * M + b];
        post.mu_lambda = j.at("mu_lambda").get<double>();
        post.sigma2_lambda = j.at("sigma2_lambda").get<double>();
        post.noise_sigma2 = j.at("noise_sigma2").get<double>();
        auto am = j.at("attr_mean").get<std::vector<double>>();
        auto as = j.at("attr_std").get<std::vector<double>>();
        post.attr_mean = Eigen::Map<Eigen::VectorXd>(am.data(), am.size());
        post.attr_std = Eigen::Map<Eigen::VectorXd>(as.data(), as.size());
        post.gp.validate();
        return post;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad model JSON: ") + e.what());
    }
}

} // namespace vbcent
