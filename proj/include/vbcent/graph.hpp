#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vbcent {

// Weighted directed graph over dense node ids [0, n). The entry w(i, j) is
// the weight of the edge j -> i (target-major storage); this subscript
// convention is fixed here and every other module follows it.
//
// Weights are strictly positive once stored: zero-weight entries are treated
// as "no edge" and dropped at construction. Immutable after build.
class WeightedDigraph {
public:
    using Edge = std::pair<int, double>; // (other endpoint, weight)

    WeightedDigraph() = default;

    // edges are (from j, to i, weight) triples. Duplicate (from, to) pairs are
    // rejected; zero weights are dropped; negative or non-finite weights throw.
    static WeightedDigraph from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges);

    int node_count() const { return n_; }
    std::size_t edge_count() const { return edge_count_; } // stored directed entries

    // In-edges of i: list of (j, w_ij), sorted by j.
    const std::vector<Edge>& in_edges(int i) const { return in_adj_[i]; }
    // Out-edges of j: list of (i, w_ij), sorted by i.
    const std::vector<Edge>& out_edges(int j) const { return out_adj_[j]; }

    double weight(int to, int from) const; // 0 if absent
    bool is_symmetric() const;

    double max_row_sum() const; // max_i sum_j w_ij

    Eigen::MatrixXd dense() const; // W with W(i,j) = w_ij

    // All stored entries as (from, to, weight), ordered by (from, to).
    std::vector<std::tuple<int, int, double>> edge_list() const;

private:
    int n_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<Edge>> in_adj_;
    std::vector<std::vector<Edge>> out_adj_;
};

// One observation sample: a node and its observed incoming edges.
struct Observation {
    int node = -1;
    std::vector<std::pair<int, double>> neighbors; // (source j, observed w_ij >= 0)
};

// Repeated noisy per-node incoming-edge observations, plus optional node
// attributes (one row per node). Invariants are enforced by validate().
struct ObservationDataset {
    std::vector<Observation> samples;
    Eigen::MatrixXd attributes; // n x d, or 0 x 0 when absent

    bool has_attributes() const { return attributes.size() > 0; }
    // Checks ids against n, non-empty neighbor lists, non-negative weights.
    void validate(int n) const;
};

// Entrywise average of repeated weight observations. Unobserved edges stay 0.
struct AveragedWeights {
    int n = 0;
    std::vector<std::tuple<int, int, double>> entries; // (from, to, mean), ordered
    std::vector<std::tuple<int, int, long long>> counts;

    WeightedDigraph graph() const; // graph induced by positive averaged entries
};

AveragedWeights average_observations(const ObservationDataset& data, int n);

// True iff every node reaches every other along directed edges.
bool check_strongly_connected(const WeightedDigraph& g);

// Strongly connected components; returns component id per node.
// Component ids are in no particular order.
int strongly_connected_components(const WeightedDigraph& g, std::vector<int>& comp);

struct SccRestriction {
    WeightedDigraph graph;         // induced subgraph on the chosen component
    std::vector<int> old_of_new;   // new id -> original id (ascending)
    std::vector<int> new_of_old;   // original id -> new id, -1 if dropped
};

// Induced subgraph on the largest SCC; ties broken by the component holding
// the smallest original node id. Throws on an empty graph.
SccRestriction largest_scc(const WeightedDigraph& g);

} // namespace vbcent
