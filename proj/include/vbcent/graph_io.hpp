#pragma once

#include "vbcent/graph.hpp"

#include <map>
#include <string>
#include <vector>

namespace vbcent {

// Node labels in files may be arbitrary strings; loaders remap them to dense
// ids in order of first appearance and keep the mapping for output.
struct LabelMap {
    std::vector<std::string> label_of_id;
    std::map<std::string, int> id_of_label;

    int intern(const std::string& label);
    int require(const std::string& label) const; // throws ValidationError if unknown
    int size() const { return static_cast<int>(label_of_id.size()); }
};

struct LoadedObservations {
    ObservationDataset data;
    LabelMap labels;
    int n = 0;
};

// Edge-observation CSV, header `from,to,weight`. Repeated (from,to) rows are
// repeated observations. Grouping: all rows sharing (to, round) form one
// sample, where round r is the number of earlier rows with the same (from,to)
// pair; a noise-free graph (one row per edge) yields one sample per node.
LoadedObservations load_observations_csv(const std::string& path);

// Node-attribute CSV, header `node,f1,...,fd`. Rows may arrive in any order;
// every node in `labels` must be covered. Unknown nodes extend the map only
// if extend_labels is set (used when attributes arrive before any edges).
Eigen::MatrixXd load_attributes_csv(const std::string& path, LabelMap& labels, bool extend_labels = false);

// One row per stored edge, weights with 17 significant digits (round-trip exact).
void dump_graph_csv(const std::string& path, const WeightedDigraph& g, const LabelMap* labels = nullptr);
void dump_observations_csv(const std::string& path, const ObservationDataset& data, const LabelMap* labels = nullptr);
void dump_attributes_csv(const std::string& path, const Eigen::MatrixXd& attrs, const LabelMap* labels = nullptr);

// Builds a graph from averaged observations (the usual "load a graph file"
// path: one row per edge is the noise-free special case).
WeightedDigraph graph_from_averaged(const AveragedWeights& avg);

std::string format_double(double v); // %.17g, used by all CSV writers

} // namespace vbcent
