#pragma once

// Independent reference implementations used by the unit and acceptance
// suites.

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <vector>

#include <f1champ/race_simulator.hpp>

namespace f1champ::oracle {

/// Fractional knapsack: fill by descending rate, each item capped.
inline double greedy_knapsack(std::vector<double> const& rate,
                              std::vector<double> const& cap, double budget,
                              std::vector<double>* alloc = nullptr)
{
    std::vector<std::size_t> order(rate.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return rate[a] > rate[b]; });
    std::vector<double> x(rate.size(), 0.0);
    double value = 0.0;
    for (auto k : order)
    {
        if (rate[k] <= 0.0 || budget <= 0.0)
            break;
        x[k] = std::min(cap[k], budget);
        budget -= x[k];
        value += rate[k] * x[k];
    }
    if (alloc)
        *alloc = x;
    return value;
}

/*!
 * Best pit plan by recursion over stint lengths, longest stint first,
 * each candidate timed with run_race.
 */
inline RacePlan brute_force_pit_plan(Circuit const& c, CarState const& car,
                                     double tank, int max_stops,
                                     SimConfig const& cfg, double* best_time)
{
    RacePlan best;
    double best_t = std::numeric_limits<double>::infinity();
    RaceRules const rules{tank, max_stops};
    std::vector<int> stints;
    auto recurse = [&](auto&& self, int remaining) -> void {
        if (remaining == 0)
        {
            RacePlan p;
            for (int n : stints)
                p.stints.push_back({n, n * c.fuel_per_lap});
            double const t = run_race(c, car, p, cfg, rules).total_time;
            if (t < best_t)
            {
                best_t = t;
                best = p;
            }
            return;
        }
        if (static_cast<int>(stints.size()) > max_stops)
            return;
        for (int n = remaining; n >= 1; --n)
        {
            if (n * c.fuel_per_lap > tank + fuel_tolerance)
                continue;
            stints.push_back(n);
            self(self, remaining - n);
            stints.pop_back();
        }
    };
    recurse(recurse, c.laps);
    if (best_time)
        *best_time = best_t;
    return best;
}

}  // namespace f1champ::oracle
