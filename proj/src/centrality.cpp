#include "vbcent/centrality.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "vbcent/errors.hpp"

namespace vbcent {

std::vector<double> degree_centrality(const WeightedDigraph& g, Direction dir) {
    std::vector<double> c(g.node_count(), 0.0);
    for (int i = 0; i < g.node_count(); ++i) {
        const auto& adj = dir == Direction::In ? g.in_edges(i) : g.out_edges(i);
        for (const auto& [j, w] : adj) c[i] += w;
    }
    return c;
}

EigenCentrality eigenvector_centrality(const WeightedDigraph& g, double tol, int max_iter) {
    int n = g.node_count();
    if (n == 0) throw ValidationError("eigenvector centrality on empty graph");
    if (!check_strongly_connected(g))
        throw ValidationError("eigenvector centrality requires a strongly connected graph");
    if (n == 1) return {{1.0}, g.weight(0, 0), 0, 0.0};

    // Power iteration on W + shift*I. The positive diagonal makes the iteration
    // matrix primitive, so it converges even on periodic graphs (2-cycles and
    // the like); the shift cancels out of the reported eigenpair.
    double shift = 0.1 * g.max_row_sum();
    Eigen::VectorXd c = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    Eigen::VectorXd Wc(n);
    auto apply = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (const auto& [j, w] : g.in_edges(i)) s += w * v[j];
            out[i] = s;
        }
    };

    double lambda = 0.0, residual = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        apply(c, Wc);
        lambda = c.dot(Wc); // Rayleigh quotient, c has unit norm
        residual = (Wc - lambda * c).cwiseAbs().maxCoeff() / std::max(lambda, 1e-300);
        if (lambda > 0 && residual <= tol) {
            return {std::vector<double>(c.data(), c.data() + n), lambda, it, residual};
        }
        Eigen::VectorXd next = Wc + shift * c;
        double norm = next.norm();
        if (!(norm > 0) || !std::isfinite(norm))
            throw NumericError("power iteration collapsed to zero vector");
        c = next / norm;
    }
    throw NumericError("power iteration did not converge: residual " + std::to_string(residual) +
                       " after " + std::to_string(max_iter) + " iterations");
}

double spectral_radius(const WeightedDigraph& g) {
    if (g.node_count() == 0) throw ValidationError("spectral radius of empty graph");
    Eigen::EigenSolver<Eigen::MatrixXd> es(g.dense(), false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> katz_centrality(const WeightedDigraph& g, double a, double b) {
    int n = g.node_count();
    if (n == 0) throw ValidationError("Katz centrality on empty graph");
    if (a < 0) throw ValidationError("Katz attenuation must be non-negative");
    if (a > 0) {
        double rho = spectral_radius(g);
        if (rho > 0 && a >= 1.0 / rho)
            throw NumericError("Katz attenuation " + std::to_string(a) +
                               " is not below 1/lambda_1 = " + std::to_string(1.0 / rho));
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - a * g.dense();
    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, b);
    Eigen::VectorXd c = A.partialPivLu().solve(rhs);
    if (!c.allFinite()) throw NumericError("Katz solve produced non-finite values");
    return std::vector<double>(c.data(), c.data() + n);
}

} // namespace vbcent
