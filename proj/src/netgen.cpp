#include "vbcent/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "vbcent/errors.hpp"
#include "vbcent/log.hpp"
#include "vbcent/rng.hpp"

namespace vbcent {

namespace {

WeightedDigraph symmetric_from_pairs(int n, const std::map<std::pair<int, int>, double>& pairs) {
    std::vector<std::tuple<int, int, double>> edges;
    edges.reserve(2 * pairs.size());
    for (const auto& [key, w] : pairs) {
        edges.push_back({key.first, key.second, w});
        edges.push_back({key.second, key.first, w});
    }
    return WeightedDigraph::from_edges(n, edges);
}

} // namespace

WeightedDigraph gen_er(int n, double p, std::uint64_t seed, int max_retries) {
    if (n < 1) throw ValidationError("ER graph needs at least one node");
    if (p < 0 || p > 1) throw ValidationError("ER edge probability must be in [0,1]");
    auto rng = rng::engine(rng::combine(seed, rng::hash_name("gen_er")));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::map<std::pair<int, int>, double> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (unif(rng) < p) pairs[{i, j}] = 1.0;
        auto g = symmetric_from_pairs(n, pairs);
        if (check_strongly_connected(g)) return g;
    }
    throw NumericError("ER generator produced no connected graph in " +
                       std::to_string(max_retries) + " attempts");
}

WeightedDigraph gen_ba(int n, int m_attach, std::uint64_t seed, int max_retries) {
    if (m_attach < 1 || m_attach >= n)
        throw ValidationError("BA attachment count must be in [1, n)");
    auto rng = rng::engine(rng::combine(seed, rng::hash_name("gen_ba")));
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::map<std::pair<int, int>, double> pairs;
        std::vector<int> endpoints; // node repeated once per incident edge
        int seed_nodes = m_attach + 1;
        for (int i = 0; i < seed_nodes; ++i)
            for (int j = i + 1; j < seed_nodes; ++j) {
                pairs[{i, j}] = 1.0;
                endpoints.push_back(i);
                endpoints.push_back(j);
            }
        for (int t = seed_nodes; t < n; ++t) {
            std::vector<int> targets;
            std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
            while (static_cast<int>(targets.size()) < m_attach) {
                int cand = endpoints[pick(rng)];
                if (std::find(targets.begin(), targets.end(), cand) == targets.end())
                    targets.push_back(cand);
            }
            for (int tg : targets) {
                pairs[{std::min(t, tg), std::max(t, tg)}] = 1.0;
                endpoints.push_back(t);
                endpoints.push_back(tg);
            }
        }
        auto g = symmetric_from_pairs(n, pairs);
        if (check_strongly_connected(g)) return g;
    }
    throw NumericError("BA generator produced no connected graph in " +
                       std::to_string(max_retries) + " attempts");
}

AttributeGraph gen_attribute_graph(const AttributeGraphSpec& spec, std::uint64_t seed) {
    if (spec.n < 2 || spec.d < 1) throw ValidationError("attribute graph needs n >= 2, d >= 1");
    if (spec.relevant_dim >= spec.d) throw ValidationError("relevant dimension out of range");
    auto rng = rng::engine(rng::combine(seed, rng::hash_name("gen_attribute_graph")));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    AttributeGraph out;
    out.attributes.resize(spec.n, spec.d);
    for (int i = 0; i < spec.n; ++i)
        for (int k = 0; k < spec.d; ++k) out.attributes(i, k) = unif(rng);

    std::map<std::pair<int, int>, double> pairs;
    for (int i = 0; i < spec.n; ++i)
        for (int j = i + 1; j < spec.n; ++j) {
            double d2;
            if (spec.relevant_dim >= 0) {
                double diff = out.attributes(i, spec.relevant_dim) -
                              out.attributes(j, spec.relevant_dim);
                d2 = diff * diff;
            } else {
                d2 = (out.attributes.row(i) - out.attributes.row(j)).squaredNorm();
            }
            double w = std::exp(-d2 / (spec.lengthscale * spec.lengthscale));
            if (w >= spec.threshold) pairs[{i, j}] = w;
        }
    for (int i = 0; i < spec.n; ++i) {
        int j = (i + 1) % spec.n;
        auto key = std::minmax(i, j);
        pairs.emplace(std::pair<int, int>(key.first, key.second), spec.ring_weight);
    }
    out.graph = symmetric_from_pairs(spec.n, pairs);
    return out;
}

ObservationDataset sample_observations(const WeightedDigraph& g, const NoiseSpec& noise) {
    if (noise.sigma2 < 0) throw ValidationError("noise variance must be non-negative");
    if (noise.samples_per_node < 1) throw ValidationError("need at least one sample per node");
    auto rng = rng::engine(rng::combine(noise.seed, rng::hash_name("sample_observations")));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double sd = std::sqrt(noise.sigma2);

    ObservationDataset data;
    data.samples.reserve(static_cast<std::size_t>(g.node_count()) * noise.samples_per_node);
    for (int i = 0; i < g.node_count(); ++i) {
        if (g.in_edges(i).empty()) continue;
        for (int r = 0; r < noise.samples_per_node; ++r) {
            Observation obs;
            obs.node = i;
            obs.neighbors.reserve(g.in_edges(i).size());
            for (const auto& [j, w] : g.in_edges(i)) {
                double what = noise.sigma2 == 0
                                  ? w
                                  : std::exp(std::log(w) - noise.sigma2 / 2 + sd * gauss(rng));
                obs.neighbors.push_back({j, what});
            }
            data.samples.push_back(std::move(obs));
        }
    }
    return data;
}

void ContactPopulationSpec::validate() const {
    if (population < 1) throw ValidationError("population must be positive");
    double f = frac_preschool + frac_school + frac_university + frac_adult + frac_senior;
    if (std::abs(f - 1.0) > 1e-9) throw ValidationError("age-band fractions must sum to 1");
    if (household_size_weights.empty())
        throw ValidationError("household size distribution is empty");
    for (double w : household_size_weights)
        if (w < 0) throw ValidationError("household size weights must be non-negative");
    if (classroom_size < 1 || classrooms_per_school < 1 || department_size < 1 ||
        departments_per_firm < 1 || preschool_size < 1 || university_size < 1 ||
        community_size < 1)
        throw ValidationError("location sizes must be positive");
    for (const ContactRule* rule :
         {&household, &classroom, &school, &department, &firm, &preschool, &university,
          &community}) {
        if (rule->p < 0 || rule->p > 1)
            throw ValidationError("contact probabilities must be in [0,1]");
        if (rule->w_min < 0 || rule->w_max > 1 || rule->w_min > rule->w_max)
            throw ValidationError("contact weight range must satisfy 0 <= min <= max <= 1");
    }
    if (!(intensity_scale > 0) || intensity_scale > 1)
        throw ValidationError("intensity scale must be in (0,1]");
    if (size_jitter < 0 || size_jitter >= 1)
        throw ValidationError("size jitter must be in [0,1)");
}

namespace {

// Location sizes vary around the spec mean so the size attributes carry real
// information about how connected their members are.
std::vector<std::vector<int>> chunk(const std::vector<int>& members, int mean_size,
                                    double jitter, std::mt19937_64& rng) {
    std::vector<std::vector<int>> groups;
    for (std::size_t i = 0; i < members.size();) {
        int lo = std::max(2, static_cast<int>(std::lround((1.0 - jitter) * mean_size)));
        int hi = std::max(lo, static_cast<int>(std::lround((1.0 + jitter) * mean_size)));
        std::uniform_int_distribution<int> size_dist(lo, hi);
        std::size_t size = static_cast<std::size_t>(size_dist(rng));
        groups.emplace_back(members.begin() + i,
                            members.begin() + std::min(members.size(), i + size));
        i += groups.back().size();
    }
    return groups;
}

} // namespace

ContactPopulation gen_contact_population(const ContactPopulationSpec& spec, std::uint64_t seed) {
    spec.validate();
    const int n = spec.population;
    auto rng = rng::engine(rng::combine(seed, rng::hash_name("gen_contact_population")));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Ages by band.
    std::discrete_distribution<int> band_dist(
        {spec.frac_preschool, spec.frac_school, spec.frac_university, spec.frac_adult,
         spec.frac_senior});
    std::vector<int> band(n), age(n);
    const int band_lo[5] = {0, 6, 18, 23, 65};
    const int band_hi[5] = {5, 17, 22, 64, 90};
    for (int i = 0; i < n; ++i) {
        band[i] = band_dist(rng);
        std::uniform_int_distribution<int> age_dist(band_lo[band[i]], band_hi[band[i]]);
        age[i] = age_dist(rng);
    }

    // Households over a shuffled person order.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::discrete_distribution<int> hh_dist(spec.household_size_weights.begin(),
                                            spec.household_size_weights.end());
    std::vector<std::vector<int>> households;
    for (std::size_t i = 0; i < order.size();) {
        int size = hh_dist(rng) + 1;
        std::vector<int> hh(order.begin() + i,
                            order.begin() + std::min(order.size(), i + size));
        i += hh.size();
        households.push_back(std::move(hh));
    }

    // Day locations by age band.
    std::vector<int> preschoolers, pupils, students, workers;
    for (int i : order) {
        switch (band[i]) {
            case 0: preschoolers.push_back(i); break;
            case 1: pupils.push_back(i); break;
            case 2: students.push_back(i); break;
            case 3: workers.push_back(i); break;
            default: break;
        }
    }
    auto preschools = chunk(preschoolers, spec.preschool_size, spec.size_jitter, rng);
    auto classrooms = chunk(pupils, spec.classroom_size, spec.size_jitter, rng);
    auto universities = chunk(students, spec.university_size, spec.size_jitter, rng);
    auto departments = chunk(workers, spec.department_size, spec.size_jitter, rng);
    auto communities = chunk(order, spec.community_size, spec.size_jitter, rng);

    // Group classrooms into schools and departments into firms.
    std::vector<std::vector<int>> schools, firms;
    for (std::size_t c = 0; c < classrooms.size(); c += spec.classrooms_per_school) {
        std::vector<int> school;
        for (std::size_t k = c;
             k < std::min(classrooms.size(), c + spec.classrooms_per_school); ++k)
            school.insert(school.end(), classrooms[k].begin(), classrooms[k].end());
        schools.push_back(std::move(school));
    }
    for (std::size_t d = 0; d < departments.size(); d += spec.departments_per_firm) {
        std::vector<int> firm;
        for (std::size_t k = d;
             k < std::min(departments.size(), d + spec.departments_per_firm); ++k)
            firm.insert(firm.end(), departments[k].begin(), departments[k].end());
        firms.push_back(std::move(firm));
    }

    std::map<std::pair<int, int>, double> pairs;
    auto add_pairs = [&](const std::vector<int>& group, const ContactRule& rule) {
        for (std::size_t a = 0; a < group.size(); ++a)
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                if (unif(rng) >= rule.p) continue;
                double w = spec.intensity_scale *
                           (rule.w_min + (rule.w_max - rule.w_min) * unif(rng));
                auto key = std::minmax(group[a], group[b]);
                auto [it, inserted] =
                    pairs.emplace(std::pair<int, int>(key.first, key.second), w);
                if (!inserted) it->second = std::max(it->second, w);
            }
    };
    // Cross-group pairs inside an institution: same school, different classroom.
    auto add_cross_pairs = [&](const std::vector<std::vector<int>>& parts,
                               std::size_t begin_part, std::size_t end_part,
                               const ContactRule& rule) {
        for (std::size_t p = begin_part; p < end_part; ++p)
            for (std::size_t q = p + 1; q < end_part; ++q)
                for (int a : parts[p])
                    for (int b : parts[q]) {
                        if (unif(rng) >= rule.p) continue;
                        double w = spec.intensity_scale *
                                   (rule.w_min + (rule.w_max - rule.w_min) * unif(rng));
                        auto key = std::minmax(a, b);
                        auto [it, inserted] =
                            pairs.emplace(std::pair<int, int>(key.first, key.second), w);
                        if (!inserted) it->second = std::max(it->second, w);
                    }
    };

    for (const auto& hh : households) add_pairs(hh, spec.household);
    for (const auto& room : classrooms) add_pairs(room, spec.classroom);
    for (std::size_t s = 0; s < schools.size(); ++s) {
        std::size_t begin = s * spec.classrooms_per_school;
        std::size_t end = std::min(classrooms.size(), begin + spec.classrooms_per_school);
        add_cross_pairs(classrooms, begin, end, spec.school);
    }
    for (const auto& dept : departments) add_pairs(dept, spec.department);
    for (std::size_t f = 0; f < firms.size(); ++f) {
        std::size_t begin = f * spec.departments_per_firm;
        std::size_t end = std::min(departments.size(), begin + spec.departments_per_firm);
        add_cross_pairs(departments, begin, end, spec.firm);
    }
    for (const auto& group : preschools) add_pairs(group, spec.preschool);
    for (const auto& group : universities) add_pairs(group, spec.university);
    for (const auto& group : communities) add_pairs(group, spec.community);

    // Attributes: age, household size, day-location size, institution size.
    Eigen::MatrixXd attrs(n, 4);
    std::vector<double> day_size(n, 0.0), inst_size(n, 0.0), hh_size(n, 1.0);
    for (const auto& hh : households)
        for (int i : hh) hh_size[i] = static_cast<double>(hh.size());
    for (std::size_t c = 0; c < classrooms.size(); ++c)
        for (int i : classrooms[c]) {
            day_size[i] = static_cast<double>(classrooms[c].size());
            inst_size[i] = static_cast<double>(schools[c / spec.classrooms_per_school].size());
        }
    for (std::size_t d = 0; d < departments.size(); ++d)
        for (int i : departments[d]) {
            day_size[i] = static_cast<double>(departments[d].size());
            inst_size[i] = static_cast<double>(firms[d / spec.departments_per_firm].size());
        }
    for (const auto& group : preschools)
        for (int i : group) day_size[i] = inst_size[i] = static_cast<double>(group.size());
    for (const auto& group : universities)
        for (int i : group) day_size[i] = inst_size[i] = static_cast<double>(group.size());
    for (const auto& group : communities)
        for (int i : group)
            if (day_size[i] == 0) day_size[i] = inst_size[i] = static_cast<double>(group.size());
    for (int i = 0; i < n; ++i) {
        attrs(i, 0) = static_cast<double>(age[i]);
        attrs(i, 1) = hh_size[i];
        attrs(i, 2) = day_size[i];
        attrs(i, 3) = inst_size[i];
    }

    auto full = symmetric_from_pairs(n, pairs);
    auto scc = largest_scc(full);
    ContactPopulation pop;
    pop.graph = std::move(scc.graph);
    pop.original_ids = scc.old_of_new;
    pop.attributes.resize(pop.original_ids.size(), 4);
    for (std::size_t i = 0; i < pop.original_ids.size(); ++i)
        pop.attributes.row(i) = attrs.row(pop.original_ids[i]);
    return pop;
}

double truncated_normal(double mean, double variance, double lo, double hi,
                        std::mt19937_64& rng) {
    if (!(variance >= 0)) throw ValidationError("truncated normal needs variance >= 0");
    if (!(lo <= hi)) throw ValidationError("truncated normal needs lo <= hi");
    if (variance == 0) return std::clamp(mean, lo, hi);
    std::normal_distribution<double> gauss(mean, std::sqrt(variance));
    for (int attempt = 0; attempt < 100000; ++attempt) {
        double v = gauss(rng);
        if (v >= lo && v <= hi) return v;
    }
    throw NumericError("truncated normal rejection sampling exhausted");
}

ObservationDataset sample_contact_observations(const WeightedDigraph& g, std::uint64_t seed,
                                               int rounds, double variance) {
    if (rounds < 1) throw ValidationError("need at least one observation round");
    for (const auto& [from, to, w] : g.edge_list())
        if (w < 0 || w > 1) throw ValidationError("contact weights must lie in [0,1]");
    auto rng = rng::engine(rng::combine(seed, rng::hash_name("sample_contact_observations")));

    ObservationDataset data;
    for (int i = 0; i < g.node_count(); ++i) {
        if (g.in_edges(i).empty()) continue;
        for (int r = 0; r < rounds; ++r) {
            Observation obs;
            obs.node = i;
            obs.neighbors.reserve(g.in_edges(i).size());
            for (const auto& [j, w] : g.in_edges(i))
                obs.neighbors.push_back({j, truncated_normal(w, variance, 0.0, 1.0, rng)});
            data.samples.push_back(std::move(obs));
        }
    }
    return data;
}

} // namespace vbcent
