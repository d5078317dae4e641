#pragma once

#include <vector>

#include "vbcent/graph.hpp"

namespace vbcent {

enum class Direction { In, Out };

struct EigenCentrality {
    std::vector<double> c;  // unit L2 norm, all entries > 0
    double lambda = 0.0;    // Rayleigh quotient at the returned vector
    int iterations = 0;
    double residual = 0.0;  // max_i |W c - lambda c|_i / lambda
};

// Weighted degree: In sums weights of incoming edges, Out of outgoing ones.
std::vector<double> degree_centrality(const WeightedDigraph& g, Direction dir);

// Leading-eigenvector centrality of W by power iteration. Requires a strongly
// connected graph; throws ValidationError otherwise and NumericError if the
// residual has not dropped below tol within max_iter sweeps.
EigenCentrality eigenvector_centrality(const WeightedDigraph& g, double tol = 1e-10,
                                       int max_iter = 100000);

// Katz centrality c = (I - a W)^{-1} b 1. Requires 0 <= a < 1/lambda_1(W).
std::vector<double> katz_centrality(const WeightedDigraph& g, double a, double b = 1.0);

// Spectral radius of the dense weight matrix (largest eigenvalue modulus).
double spectral_radius(const WeightedDigraph& g);

} // namespace vbcent
