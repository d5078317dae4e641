#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "vbcent/graph.hpp"

namespace vbcent {

// Undirected unit-weight generators (stored symmetrically). Both resample
// until the result is strongly connected, up to max_retries, then throw.
WeightedDigraph gen_er(int n, double p, std::uint64_t seed, int max_retries = 100);
WeightedDigraph gen_ba(int n, int m_attach, std::uint64_t seed, int max_retries = 100);

// Attribute-driven weighted graph: x_i ~ U[0,1]^d, w_ij = exp(-||x_i-x_j||^2 / l^2)
// kept when above threshold. relevant_dim >= 0 restricts the distance to that
// single dimension (planted relevance). A weak symmetric ring (weight
// ring_weight) guarantees strong connectivity.
struct AttributeGraphSpec {
    int n = 60;
    int d = 3;
    double lengthscale = 0.5;
    double threshold = 0.2;
    int relevant_dim = -1;
    double ring_weight = 1e-3;
};
struct AttributeGraph {
    WeightedDigraph graph;
    Eigen::MatrixXd attributes;  // n x d
};
AttributeGraph gen_attribute_graph(const AttributeGraphSpec& spec, std::uint64_t seed);

// Mean-preserving multiplicative log-normal noise: log w_hat ~ N(log w - s2/2, s2).
struct NoiseSpec {
    double sigma2 = 0.0;
    int samples_per_node = 1;
    std::uint64_t seed = 0;
};
ObservationDataset sample_observations(const WeightedDigraph& g, const NoiseSpec& noise);

// Location-based contact population. Every person gets a household and, by age
// band, a day location (classroom in a school, department in a firm, preschool,
// university group, or community group); everyone also joins a community group.
// Within each location, symmetric contacts form independently with the
// location's probability and a weight uniform in [w_min, w_max].
struct ContactRule {
    double p = 0.0;
    double w_min = 0.0;
    double w_max = 0.0;
};
struct ContactPopulationSpec {
    int population = 360;
    // Age-band fractions: preschool 0-5, school 6-17, university 18-22,
    // adult 23-64, senior 65+.
    double frac_preschool = 0.06;
    double frac_school = 0.16;
    double frac_university = 0.08;
    double frac_adult = 0.55;
    double frac_senior = 0.15;
    std::vector<double> household_size_weights = {0.28, 0.34, 0.16, 0.14, 0.06, 0.02};  // sizes 1..6
    int classroom_size = 22;
    int classrooms_per_school = 4;
    int department_size = 13;
    int departments_per_firm = 5;
    int preschool_size = 18;
    int university_size = 28;
    int community_size = 33;
    ContactRule household{0.95, 0.5, 1.0};
    ContactRule classroom{0.80, 0.2, 0.7};
    ContactRule school{0.10, 0.05, 0.3};   // cross-classroom, same school
    ContactRule department{0.85, 0.2, 0.7};
    ContactRule firm{0.10, 0.05, 0.3};     // cross-department, same firm
    ContactRule preschool{0.75, 0.2, 0.7};
    ContactRule university{0.55, 0.1, 0.5};
    ContactRule community{0.68, 0.05, 0.4};
    // Rule weights are relative contact intensities; the scale converts them
    // to per-step transmission modifiers, sizing the epidemic away from
    // saturation.
    double intensity_scale = 0.05;
    // Relative spread of location sizes around their means; nonzero spread
    // makes the size attributes informative about connectedness.
    double size_jitter = 0.4;

    void validate() const;
};
struct ContactPopulation {
    WeightedDigraph graph;           // largest SCC, weights in [0,1]
    Eigen::MatrixXd attributes;      // per node: age, household size, day-location size, institution size
    std::vector<int> original_ids;   // pre-restriction person ids
};
ContactPopulation gen_contact_population(const ContactPopulationSpec& spec, std::uint64_t seed);

// Per round, one observation of every edge from a truncated normal
// N(w, variance) restricted to [0,1].
ObservationDataset sample_contact_observations(const WeightedDigraph& g, std::uint64_t seed,
                                               int rounds = 1, double variance = 0.5);

double truncated_normal(double mean, double variance, double lo, double hi,
                                                std::mt19937_64& rng);

} // namespace vbcent
