#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "../rules.hpp"
#include "formulations.hpp"

namespace f1champ::strategy {

/// Equal budget per race, split in proportion to 1/cost within the race.
inline ExpenditurePlan hrlf_expenditure(Rules const& rules)
{
    int const m = rules.races();
    auto const& cs = rules.schedule;
    ExpenditurePlan plan;
    CarState car = rules.base;
    double const per_race = rules.limits.total_budget / m;
    for (int i = 0; i < m; ++i)
    {
        auto const k = static_cast<std::size_t>(i);
        std::array<double, 3> const w{1.0 / cs.aero[k], 1.0 / cs.horsepower[k],
                                      1.0 / cs.weight[k]};
        auto x = distribute(per_race, w, spend_headrooms(car, i, rules));
        plan.races.push_back(x);
        car = apply_expenditure(car, x, i, cs, rules.base);
    }
    return fit_to_rules(plan, rules);
}

/*!
 * Random spending drawn race by race: a race budget up to twice the fair
 * share of what is left, split at random, redrawn until it fits the
 * remaining headroom.
 */
inline ExpenditurePlan random_expenditure(std::uint64_t seed,
                                          Rules const& rules)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int const m = rules.races();
    ExpenditurePlan plan;
    CarState car = rules.base;
    double left = rules.limits.total_budget;
    for (int i = 0; i < m; ++i)
    {
        auto const room = spend_headrooms(car, i, rules);
        Spend x;
        for (int attempt = 0; attempt < 1000; ++attempt)
        {
            double const amount
                = std::min(left, unit(rng) * 2.0 * left / (m - i));
            std::array<double, 3> w{unit(rng), unit(rng), unit(rng)};
            double const wsum = w[0] + w[1] + w[2];
            Spend trial;
            bool fits = wsum > 0.0;
            for (std::size_t p = 0; p < 3 && fits; ++p)
            {
                trial[p] = amount * w[p] / wsum;
                fits = trial[p] <= room[p];
            }
            if (fits && trial.total() <= left)
            {
                x = trial;
                break;
            }
        }
        plan.races.push_back(x);
        left -= x.total();
        car = apply_expenditure(car, x, i, rules.schedule, rules.base);
    }
    return fit_to_rules(plan, rules);
}

/*!
 * Random legal race plan: random feasible stop count, random stint
 * boundaries, and up to 5 kg of spare fuel per stint.
 */
inline RacePlan random_race_plan(Circuit const& c, CarLimits const& limits,
                                 std::mt19937_64& rng)
{
    auto fits = [&](int laps) {
        return minimal_fuel(c, laps) <= limits.tank_capacity + fuel_tolerance;
    };
    std::vector<int> counts;
    for (int k = 0; k <= std::min(limits.max_stops, 2); ++k)
    {
        int const longest = (c.laps + k) / (k + 1);
        if (c.laps >= k + 1 && fits(longest))
            counts.push_back(k);
    }
    if (counts.empty())
        return even_plan(c, std::min(limits.max_stops, 2));

    std::uniform_int_distribution<std::size_t> pick(0, counts.size() - 1);
    int const stops = counts[pick(rng)];
    std::uniform_int_distribution<int> cut(1, c.laps - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 10000; ++attempt)
    {
        std::vector<int> cuts;
        for (int s = 0; s < stops; ++s)
            cuts.push_back(cut(rng));
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(c.laps);
        RacePlan plan;
        int prev = 0;
        bool ok = true;
        for (int b : cuts)
        {
            int const n = b - prev;
            prev = b;
            if (n < 1 || !fits(n))
            {
                ok = false;
                break;
            }
            double const need = minimal_fuel(c, n);
            double const spare
                = std::min(5.0, limits.tank_capacity - need) * unit(rng);
            plan.stints.push_back({n, need + std::max(0.0, spare)});
        }
        if (ok)
            return plan;
    }
    return even_plan(c, stops);
}

}  // namespace f1champ::strategy
