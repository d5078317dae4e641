#include "vbcent/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stack>

#include "vbcent/errors.hpp"

namespace vbcent {

WeightedDigraph WeightedDigraph::from_edges(int n,
                                            const std::vector<std::tuple<int, int, double>>& edges) {
    if (n < 0) throw ValidationError("node count must be non-negative");
    WeightedDigraph g;
    g.n_ = n;
    g.in_adj_.resize(n);
    g.out_adj_.resize(n);
    std::set<std::pair<int, int>> seen;
    for (const auto& [from, to, w] : edges) {
        if (from < 0 || from >= n || to < 0 || to >= n)
            throw ValidationError("edge endpoint out of range: " + std::to_string(from) + " -> " +
                                  std::to_string(to));
        if (!std::isfinite(w) || w < 0)
            throw ValidationError("edge weight must be finite and non-negative");
        if (!seen.insert({from, to}).second)
            throw ValidationError("duplicate edge " + std::to_string(from) + " -> " +
                                  std::to_string(to));
        if (w == 0) continue;
        g.in_adj_[to].push_back({from, w});
        g.out_adj_[from].push_back({to, w});
        ++g.edge_count_;
    }
    for (auto& adj : g.in_adj_) std::sort(adj.begin(), adj.end());
    for (auto& adj : g.out_adj_) std::sort(adj.begin(), adj.end());
    return g;
}

double WeightedDigraph::weight(int to, int from) const {
    if (to < 0 || to >= n_ || from < 0 || from >= n_)
        throw ValidationError("node id out of range");
    const auto& adj = in_adj_[to];
    auto it = std::lower_bound(adj.begin(), adj.end(), std::make_pair(from, 0.0));
    if (it != adj.end() && it->first == from) return it->second;
    return 0.0;
}

bool WeightedDigraph::is_symmetric() const {
    for (int i = 0; i < n_; ++i)
        for (const auto& [j, w] : in_adj_[i])
            if (weight(j, i) != w) return false;
    return true;
}

double WeightedDigraph::max_row_sum() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (const auto& [j, w] : in_adj_[i]) s += w;
        best = std::max(best, s);
    }
    return best;
}

Eigen::MatrixXd WeightedDigraph::dense() const {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (const auto& [j, w] : in_adj_[i]) W(i, j) = w;
    return W;
}

std::vector<std::tuple<int, int, double>> WeightedDigraph::edge_list() const {
    std::vector<std::tuple<int, int, double>> out;
    out.reserve(edge_count_);
    for (int j = 0; j < n_; ++j)
        for (const auto& [i, w] : out_adj_[j]) out.push_back({j, i, w});
    return out;
}

void ObservationDataset::validate(int n) const {
    for (const auto& s : samples) {
        if (s.node < 0 || s.node >= n) throw ValidationError("sample node id out of range");
        if (s.neighbors.empty()) throw ValidationError("sample with empty neighbor list");
        for (const auto& [j, w] : s.neighbors) {
            if (j < 0 || j >= n) throw ValidationError("observed neighbor id out of range");
            if (!std::isfinite(w) || w < 0)
                throw ValidationError("observed weight must be finite and non-negative");
        }
    }
    if (has_attributes() && attributes.rows() != n)
        throw ValidationError("attribute row count does not match node count");
}

AveragedWeights average_observations(const ObservationDataset& data, int n) {
    data.validate(n);
    std::map<std::pair<int, int>, std::pair<double, long long>> acc; // (from,to) -> (sum, count)
    for (const auto& s : data.samples)
        for (const auto& [j, w] : s.neighbors) {
            auto& slot = acc[{j, s.node}];
            slot.first += w;
            slot.second += 1;
        }
    AveragedWeights avg;
    avg.n = n;
    for (const auto& [key, slot] : acc) {
        avg.entries.push_back({key.first, key.second, slot.first / slot.second});
        avg.counts.push_back({key.first, key.second, slot.second});
    }
    return avg;
}

WeightedDigraph AveragedWeights::graph() const {
    std::vector<std::tuple<int, int, double>> edges;
    for (const auto& [from, to, w] : entries)
        if (w > 0) edges.push_back({from, to, w});
    return WeightedDigraph::from_edges(n, edges);
}

namespace {

// Tarjan, iterative to survive deep graphs.
struct TarjanState {
    const WeightedDigraph& g;
    std::vector<int> index, low, comp;
    std::vector<bool> on_stack;
    std::stack<int> stack;
    int next_index = 0, components = 0;

    explicit TarjanState(const WeightedDigraph& g)
        : g(g),
          index(g.node_count(), -1),
          low(g.node_count(), 0),
          comp(g.node_count(), -1),
          on_stack(g.node_count(), false) {}

    void run(int root) {
        // frame: (node, next out-edge position)
        std::stack<std::pair<int, std::size_t>> frames;
        frames.push({root, 0});
        while (!frames.empty()) {
            auto& [v, pos] = frames.top();
            if (pos == 0) {
                index[v] = low[v] = next_index++;
                stack.push(v);
                on_stack[v] = true;
            }
            bool descended = false;
            const auto& out = g.out_edges(v);
            while (pos < out.size()) {
                int w = out[pos].first;
                ++pos;
                if (index[w] == -1) {
                    frames.push({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.top();
                    stack.pop();
                    on_stack[w] = false;
                    comp[w] = components;
                } while (w != v);
                ++components;
            }
            frames.pop();
            if (!frames.empty()) {
                int parent = frames.top().first;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
};

} // namespace

int strongly_connected_components(const WeightedDigraph& g, std::vector<int>& comp) {
    TarjanState t(g);
    for (int v = 0; v < g.node_count(); ++v)
        if (t.index[v] == -1) t.run(v);
    comp = std::move(t.comp);
    return t.components;
}

bool check_strongly_connected(const WeightedDigraph& g) {
    if (g.node_count() == 0) return false;
    std::vector<int> comp;
    return strongly_connected_components(g, comp) == 1;
}

SccRestriction largest_scc(const WeightedDigraph& g) {
    if (g.node_count() == 0) throw ValidationError("largest_scc on empty graph");
    std::vector<int> comp;
    int k = strongly_connected_components(g, comp);
    std::vector<int> size(k, 0), min_id(k, g.node_count());
    for (int v = 0; v < g.node_count(); ++v) {
        ++size[comp[v]];
        min_id[comp[v]] = std::min(min_id[comp[v]], v);
    }
    int best = 0;
    for (int c = 1; c < k; ++c)
        if (size[c] > size[best] || (size[c] == size[best] && min_id[c] < min_id[best])) best = c;

    SccRestriction r;
    r.new_of_old.assign(g.node_count(), -1);
    for (int v = 0; v < g.node_count(); ++v)
        if (comp[v] == best) {
            r.new_of_old[v] = static_cast<int>(r.old_of_new.size());
            r.old_of_new.push_back(v);
        }
    std::vector<std::tuple<int, int, double>> edges;
    for (const auto& [from, to, w] : g.edge_list())
        if (r.new_of_old[from] != -1 && r.new_of_old[to] != -1)
            edges.push_back({r.new_of_old[from], r.new_of_old[to], w});
    r.graph = WeightedDigraph::from_edges(static_cast<int>(r.old_of_new.size()), edges);
    return r;
}

} // namespace vbcent
