#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vbcent/graph.hpp"

namespace vbcent {

struct SirConfig {
    double p_transmit = 0.5;       // per infectious contact per step, scaled by w_ij
    double p_recover = 0.1;        // per step
    double initial_infected = 0.01;  // fraction of n, rounded to nearest count
    int horizon = 1000;
    std::uint64_t seed = 0;
};

struct SirTrajectory {
    std::vector<int> S, I, R;  // per step, index 0 = initial state
    int cumulative_infected = 0;  // everyone ever infected, including initial
    int peak_infected = 0;
    int peak_step = 0;

    int steps() const { return static_cast<int>(S.size()); }
};

// Discrete-time SIR with synchronous updates. Vaccinated nodes start Recovered;
// initial infections are drawn uniformly from the unvaccinated. Each step every
// infectious j infects each susceptible out-neighbor i independently with
// probability w_ij * p_transmit, then recovers with probability p_recover; both
// use the start-of-step state. Stops when no node is infectious or at horizon.
SirTrajectory run_sir(const WeightedDigraph& g, const SirConfig& cfg,
                                            const std::vector<int>& vaccinated = {});

// Indices of the k largest scores; ties broken towards the lower node id.
std::vector<int> vaccinate_topk(const std::vector<double>& scores, int k);

struct StrategyOutcome {
    std::string name;
    std::vector<double> mean_S, mean_I, mean_R;  // aligned to the longest run
    double mean_total_infected = 0.0;
    double mean_peak_infected = 0.0;
    double mean_peak_step = 0.0;
};

struct VaccinationStrategy {
    std::string name;
    std::vector<int> vaccinated;
    // Optional per-run set (e.g. a fresh random draw per run); when set it
    // takes precedence over the fixed `vaccinated` list.
    std::function<std::vector<int>(int run)> draw;
};

// Runs `runs` simulations per strategy with common random numbers: run r uses
// the same derived seed for every strategy, so strategies differ only through
// their vaccination sets.
std::vector<StrategyOutcome> compare_strategies(const WeightedDigraph& g, const SirConfig& cfg,
                                                                                                const std::vector<VaccinationStrategy>& strategies,
                                                                                                int runs, std::uint64_t seed);

} // namespace vbcent
