#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace vbcent {

// Objective for minimization: writes the gradient and returns f(x).
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct CgOptions {
    int max_iter = 2000;
    double rel_tol = 1e-8;   // stop when |f_prev - f| <= rel_tol * max(1, |f|)
    double grad_tol = 0.0;   // additional stop on ||grad||_inf if > 0
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.1;
    int max_line_search = 60;
    bool record_trace = true;
};

struct CgResult {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd grad;
    int iterations = 0;
    bool converged = false;          // tolerance met (as opposed to max_iter)
    std::vector<double> trace;       // f after each accepted step, trace[0] = f(x0)
    int function_evaluations = 0;
};

// Polak-Ribiere nonlinear conjugate gradient (beta clipped at zero) with a
// strong Wolfe bracket-and-zoom line search. Restarts along steepest descent
// every n iterations or whenever the computed direction fails to descend.
// Accepted iterates never increase f. Throws NumericError if the objective
// returns a non-finite value at the starting point.
CgResult minimize_cg(const Objective& f, const Eigen::VectorXd& x0, const CgOptions& opts = {});

// Central finite-difference gradient, used by the tests to audit analytic
// gradients. Step h is scaled per coordinate by max(1, |x_i|).
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                                        const Eigen::VectorXd& x, double h = 1e-6);

} // namespace vbcent
