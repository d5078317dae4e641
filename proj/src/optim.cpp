#include "vbcent/optim.hpp"

#include <cmath>
#include <limits>

#include "vbcent/errors.hpp"

namespace vbcent {

namespace {

struct Eval {
    double alpha = 0.0;
    double f = std::numeric_limits<double>::infinity();
    double slope = 0.0; // grad . d
    Eigen::VectorXd grad;
    bool finite = false;
};

class LineSearch {
public:
    LineSearch(const Objective& obj, const Eigen::VectorXd& x, const Eigen::VectorXd& d, double f0,
               double slope0, const CgOptions& opts, int& evals)
        : obj_(obj), x_(x), d_(d), f0_(f0), slope0_(slope0), opts_(opts), evals_(evals) {}

    Eval at(double alpha) {
        Eval e;
        e.alpha = alpha;
        e.grad.resize(x_.size());
        double f = obj_(x_ + alpha * d_, e.grad);
        ++evals_;
        if (std::isfinite(f) && e.grad.allFinite()) {
            e.f = f;
            e.slope = e.grad.dot(d_);
            e.finite = true;
        }
        return e;
    }

    bool armijo(const Eval& e) const {
        return e.finite && e.f <= f0_ + opts_.wolfe_c1 * e.alpha * slope0_;
    }
    bool curvature(const Eval& e) const {
        return e.finite && std::abs(e.slope) <= -opts_.wolfe_c2 * slope0_;
    }

    // Strong Wolfe bracket-and-zoom. Returns an evaluation satisfying at least
    // the Armijo condition, or a non-finite Eval when no decrease was found.
    Eval run(double alpha_init) {
        Eval lo;
        lo.alpha = 0.0;
        lo.f = f0_;
        lo.slope = slope0_;
        lo.finite = true;

        double alpha = alpha_init;
        Eval prev = lo;
        int budget = opts_.max_line_search;
        for (int i = 0; i < budget; ++i) {
            Eval cur = at(alpha);
            if (!cur.finite || !armijo(cur) || (i > 0 && cur.f >= prev.f))
                return zoom(prev, cur, budget - i - 1);
            if (curvature(cur)) return cur;
            if (cur.slope >= 0) return zoom(cur, prev, budget - i - 1);
            prev = cur;
            alpha = std::min(alpha * 2.0, 1e12);
        }
        return armijo(prev) && prev.alpha > 0 ? prev : Eval{};
    }

private:
    // lo satisfies Armijo (or is the origin); the minimizer lies between.
    Eval zoom(Eval lo, Eval hi, int budget) {
        for (int i = 0; i < budget; ++i) {
            double alpha = 0.5 * (lo.alpha + hi.alpha);
            Eval cur = at(alpha);
            if (!cur.finite || !armijo(cur) || cur.f >= lo.f) {
                hi = cur;
            } else {
                if (curvature(cur)) return cur;
                if (cur.slope * (hi.alpha - lo.alpha) >= 0) hi = lo;
                lo = cur;
            }
            if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
        }
        return armijo(lo) && lo.alpha > 0 ? lo : Eval{};
    }

    const Objective& obj_;
    const Eigen::VectorXd& x_;
    const Eigen::VectorXd& d_;
    double f0_, slope0_;
    const CgOptions& opts_;
    int& evals_;
};

} // namespace

CgResult minimize_cg(const Objective& obj, const Eigen::VectorXd& x0, const CgOptions& opts) {
    CgResult res;
    res.x = x0;
    res.grad.resize(x0.size());
    res.f = obj(res.x, res.grad);
    res.function_evaluations = 1;
    if (!std::isfinite(res.f) || !res.grad.allFinite())
        throw NumericError("objective is non-finite at the starting point");
    if (opts.record_trace) res.trace.push_back(res.f);

    const int n = static_cast<int>(x0.size());
    Eigen::VectorXd d = -res.grad;
    double alpha_prev = 0.0, slope_prev = 0.0;
    int since_restart = 0;

    for (int it = 1; it <= opts.max_iter; ++it) {
        if (opts.grad_tol > 0 && res.grad.cwiseAbs().maxCoeff() <= opts.grad_tol) {
            res.converged = true;
            break;
        }
        double slope = d.dot(res.grad);
        if (slope >= 0) { // not a descent direction: restart along steepest descent
            d = -res.grad;
            slope = d.dot(res.grad);
            since_restart = 0;
            if (slope >= 0) { // gradient is exactly zero
                res.converged = true;
                break;
            }
        }

        double alpha_init = 1.0;
        if (alpha_prev > 0 && slope != 0) {
            alpha_init = alpha_prev * slope_prev / slope;
            if (!std::isfinite(alpha_init) || alpha_init <= 0) alpha_init = 1.0;
            alpha_init = std::min(alpha_init, 1e8);
        }

        LineSearch ls(obj, res.x, d, res.f, slope, opts, res.function_evaluations);
        Eval step = ls.run(alpha_init);
        if (!step.finite) {
            if (since_restart == 0) break; // stuck even along steepest descent
            d = -res.grad;
            since_restart = 0;
            double s2 = d.dot(res.grad);
            if (s2 >= 0) break;
            LineSearch retry(obj, res.x, d, res.f, s2, opts, res.function_evaluations);
            step = retry.run(1.0);
            if (!step.finite) break;
            slope = s2;
        }

        double f_prev = res.f;
        res.x += step.alpha * d;
        res.f = step.f;
        Eigen::VectorXd g_new = step.grad;
        res.iterations = it;
        if (opts.record_trace) res.trace.push_back(res.f);

        ++since_restart;
        double beta = 0.0;
        if (since_restart < n) {
            double denom = res.grad.squaredNorm();
            if (denom > 0) beta = std::max(0.0, g_new.dot(g_new - res.grad) / denom);
        } else {
            since_restart = 0;
        }
        d = -g_new + beta * d;
        res.grad = std::move(g_new);
        alpha_prev = step.alpha;
        slope_prev = slope;

        if (std::abs(f_prev - res.f) <= opts.rel_tol * std::max(1.0, std::abs(res.f))) {
            res.converged = true;
            break;
        }
    }
    return res;
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (int i = 0; i < x.size(); ++i) {
        double step = h * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + step;
        double fp = f(xp);
        xp[i] = x[i] - step;
        double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2 * step);
    }
    return g;
}

} // namespace vbcent
