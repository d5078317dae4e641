#include "vbcent/graph_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vbcent/errors.hpp"

namespace vbcent {

int LabelMap::intern(const std::string& label) {
    auto it = id_of_label.find(label);
    if (it != id_of_label.end()) return it->second;
    int id = size();
    id_of_label.emplace(label, id);
    label_of_id.push_back(label);
    return id;
}

int LabelMap::require(const std::string& label) const {
    auto it = id_of_label.find(label);
    if (it == id_of_label.end()) throw ValidationError("unknown node label: " + label);
    return it->second;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse " + what + ": '" + s + "'");
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    return in;
}

} // namespace

LoadedObservations load_observations_csv(const std::string& path) {
    auto in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty observation file: " + path);
    auto header = split_csv_line(strip(line));
    if (header.size() != 3 || strip(header[0]) != "from" || strip(header[1]) != "to" ||
        strip(header[2]) != "weight")
        throw ValidationError("observation file must start with header 'from,to,weight': " + path);

    LoadedObservations out;
    std::map<std::pair<int, int>, int> occurrence;       // (from,to) -> rows seen so far
    std::map<std::pair<int, int>, int> sample_of_round;  // (to, round) -> sample index
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = strip(line);
        if (text.empty()) continue;
        auto fields = split_csv_line(text);
        if (fields.size() != 3)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": expected 3 fields");
        int from = out.labels.intern(strip(fields[0]));
        int to = out.labels.intern(strip(fields[1]));
        double w = parse_double(strip(fields[2]), "weight");
        if (!(w >= 0))
            throw ValidationError(path + ":" + std::to_string(line_no) + ": negative weight");
        int round = occurrence[{from, to}]++;
        auto key = std::make_pair(to, round);
        auto it = sample_of_round.find(key);
        if (it == sample_of_round.end()) {
            it = sample_of_round.emplace(key, static_cast<int>(out.data.samples.size())).first;
            out.data.samples.push_back({to, {}});
        }
        out.data.samples[it->second].neighbors.push_back({from, w});
    }
    out.n = out.labels.size();
    if (out.data.samples.empty()) throw ValidationError("no observation rows in " + path);
    return out;
}

Eigen::MatrixXd load_attributes_csv(const std::string& path, LabelMap& labels, bool extend_labels) {
    auto in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty attribute file: " + path);
    auto header = split_csv_line(strip(line));
    if (header.size() < 2 || strip(header[0]) != "node")
        throw ValidationError("attribute file must start with header 'node,f1,...': " + path);
    int d = static_cast<int>(header.size()) - 1;

    std::map<int, std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = strip(line);
        if (text.empty()) continue;
        auto fields = split_csv_line(text);
        if (static_cast<int>(fields.size()) != d + 1)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(d + 1) + " fields");
        std::string label = strip(fields[0]);
        int id = extend_labels ? labels.intern(label) : labels.require(label);
        std::vector<double> vals(d);
        for (int k = 0; k < d; ++k) vals[k] = parse_double(strip(fields[k + 1]), "attribute");
        if (!rows.emplace(id, std::move(vals)).second)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": duplicate node row");
    }
    int n = labels.size();
    Eigen::MatrixXd X(n, d);
    for (int i = 0; i < n; ++i) {
        auto it = rows.find(i);
        if (it == rows.end())
            throw ValidationError("attribute file missing node '" + labels.label_of_id[i] + "'");
        for (int k = 0; k < d; ++k) X(i, k) = it->second[k];
    }
    return X;
}

namespace {
std::string label_for(int id, const LabelMap* labels) {
    if (labels) return labels->label_of_id[id];
    return std::to_string(id);
}
} // namespace

void dump_graph_csv(const std::string& path, const WeightedDigraph& g, const LabelMap* labels) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "from,to,weight\n";
    for (const auto& [from, to, w] : g.edge_list())
        out << label_for(from, labels) << "," << label_for(to, labels) << "," << format_double(w)
            << "\n";
}

void dump_observations_csv(const std::string& path, const ObservationDataset& data,
                           const LabelMap* labels) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "from,to,weight\n";
    for (const auto& s : data.samples)
        for (const auto& [j, w] : s.neighbors)
            out << label_for(j, labels) << "," << label_for(s.node, labels) << ","
                << format_double(w) << "\n";
}

void dump_attributes_csv(const std::string& path, const Eigen::MatrixXd& attrs,
                         const LabelMap* labels) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << "node";
    for (int k = 0; k < attrs.cols(); ++k) out << ",f" << (k + 1);
    out << "\n";
    for (int i = 0; i < attrs.rows(); ++i) {
        out << label_for(i, labels);
        for (int k = 0; k < attrs.cols(); ++k) out << "," << format_double(attrs(i, k));
        out << "\n";
    }
}

WeightedDigraph graph_from_averaged(const AveragedWeights& avg) { return avg.graph(); }

} // namespace vbcent
