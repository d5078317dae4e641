#include "vbcent/sir.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vbcent/errors.hpp"
#include "vbcent/metrics.hpp"
#include "vbcent/rng.hpp"

namespace vbcent {

namespace {

enum Status : int { kSusceptible = 0, kInfectious = 1, kRecovered = 2 };

} // namespace

SirTrajectory run_sir(const WeightedDigraph& g, const SirConfig& cfg,
                      const std::vector<int>& vaccinated) {
    const int n = g.node_count();
    if (cfg.p_transmit < 0 || cfg.p_transmit > 1)
        throw ValidationError("transmission probability must be in [0,1]");
    if (cfg.p_recover < 0 || cfg.p_recover > 1)
        throw ValidationError("recovery probability must be in [0,1]");
    if (cfg.initial_infected < 0 || cfg.initial_infected > 1)
        throw ValidationError("initial infected fraction must be in [0,1]");
    if (cfg.horizon < 1) throw ValidationError("horizon must be positive");

    std::vector<int> status(n, kSusceptible);
    for (int v : vaccinated) {
        if (v < 0 || v >= n) throw ValidationError("vaccinated node id out of range");
        status[v] = kRecovered;
    }
    std::vector<int> pool;
    for (int i = 0; i < n; ++i)
        if (status[i] == kSusceptible) pool.push_back(i);

    auto k0 = static_cast<int>(std::llround(cfg.initial_infected * n));
    if (k0 < 1) throw ValidationError("initial infected count rounds to zero");
    if (k0 > static_cast<int>(pool.size()))
        throw ValidationError("fewer unvaccinated nodes than initial infections");

    auto rng = rng::engine(rng::combine(cfg.seed, rng::hash_name("run_sir")));
    for (int t = 0; t < k0; ++t) {
        std::uniform_int_distribution<int> pick(t, static_cast<int>(pool.size()) - 1);
        std::swap(pool[t], pool[pick(rng)]);
        status[pool[t]] = kInfectious;
    }

    SirTrajectory traj;
    traj.cumulative_infected = k0;
    auto record = [&]() {
        int s = 0, i = 0, r = 0;
        for (int st : status) {
            if (st == kSusceptible) ++s;
            else if (st == kInfectious) ++i;
            else ++r;
        }
        traj.S.push_back(s);
        traj.I.push_back(i);
        traj.R.push_back(r);
        if (i > traj.peak_infected) {
            traj.peak_infected = i;
            traj.peak_step = static_cast<int>(traj.I.size()) - 1;
        }
    };
    record();

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<int> next = status;
    for (int step = 0; step < cfg.horizon && traj.I.back() > 0; ++step) {
        next = status;
        for (int i = 0; i < n; ++i) {
            if (status[i] != kSusceptible) continue;
            for (const auto& [j, w] : g.in_edges(i)) {
                if (status[j] != kInfectious) continue;
                if (unif(rng) < w * cfg.p_transmit) {
                    next[i] = kInfectious;
                    ++traj.cumulative_infected;
                    break;
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            if (status[i] != kInfectious) continue;
            if (unif(rng) < cfg.p_recover) next[i] = kRecovered;
        }
        status = next;
        record();
    }
    return traj;
}

std::vector<int> vaccinate_topk(const std::vector<double>& scores, int k) {
    return topk_indices(scores, k);
}

std::vector<StrategyOutcome> compare_strategies(const WeightedDigraph& g, const SirConfig& cfg,
                                                const std::vector<VaccinationStrategy>& strategies,
                                                int runs, std::uint64_t seed) {
    if (runs < 1) throw ValidationError("need at least one simulation run");
    if (strategies.empty()) throw ValidationError("need at least one strategy");

    std::vector<StrategyOutcome> outcomes;
    outcomes.reserve(strategies.size());
    for (const auto& strat : strategies) {
        std::vector<SirTrajectory> trajs;
        trajs.reserve(runs);
        std::size_t longest = 0;
        for (int r = 0; r < runs; ++r) {
            SirConfig run_cfg = cfg;
            run_cfg.seed = rng::substream(seed, static_cast<std::uint64_t>(r));
            trajs.push_back(run_sir(g, run_cfg, strat.draw ? strat.draw(r) : strat.vaccinated));
            longest = std::max(longest, trajs.back().S.size());
        }

        StrategyOutcome out;
        out.name = strat.name;
        out.mean_S.assign(longest, 0.0);
        out.mean_I.assign(longest, 0.0);
        out.mean_R.assign(longest, 0.0);
        for (const auto& traj : trajs) {
            // Absorbing state: pad finished runs with their final counts.
            for (std::size_t t = 0; t < longest; ++t) {
                std::size_t u = std::min(t, traj.S.size() - 1);
                out.mean_S[t] += traj.S[u];
                out.mean_I[t] += traj.I[u];
                out.mean_R[t] += traj.R[u];
            }
            out.mean_total_infected += traj.cumulative_infected;
            out.mean_peak_infected += traj.peak_infected;
            out.mean_peak_step += traj.peak_step;
        }
        for (std::size_t t = 0; t < longest; ++t) {
            out.mean_S[t] /= runs;
            out.mean_I[t] /= runs;
            out.mean_R[t] /= runs;
        }
        out.mean_total_infected /= runs;
        out.mean_peak_infected /= runs;
        out.mean_peak_step /= runs;
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

} // namespace vbcent
