#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "../race_simulator.hpp"
#include "../rules.hpp"

namespace f1champ::strategy {

class Uncompletable : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/*!
 * Best refuelling plan by exhaustive search over stop counts and stint
 * boundaries, every stint carrying exactly the fuel it burns.
 *
 * Stint times only depend on the stint length, so each length is simulated
 * once and the search itself is table lookups.
 */
inline RacePlan optimize_pit_plan(Circuit const& circuit, CarState const& car,
                                  CarLimits const& limits,
                                  SimConfig const& cfg)
{
    int const laps = circuit.laps;
    int const max_stops = std::min(limits.max_stops, 2);
    LapModel const model(circuit);

    double const inf = std::numeric_limits<double>::infinity();
    std::vector<double> stint(static_cast<std::size_t>(laps) + 1, inf);
    for (int n = 1; n <= laps; ++n)
    {
        double const load = minimal_fuel(circuit, n);
        if (load > limits.tank_capacity + fuel_tolerance)
            break;
        double t = 0.0;
        for (int j = 0; j < n; ++j)
            t += model.lap_time(car, load - j * circuit.fuel_per_lap, cfg);
        stint[static_cast<std::size_t>(n)] = t;
    }
    auto st = [&](int n) { return stint[static_cast<std::size_t>(n)]; };

    double best = inf;
    std::vector<int> split;
    if (st(laps) < best)
    {
        best = st(laps);
        split = {laps};
    }
    if (max_stops >= 1)
    {
        for (int a = 1; a < laps; ++a)
        {
            double const t = st(a) + st(laps - a) + circuit.pit_penalty;
            if (t < best)
            {
                best = t;
                split = {a, laps - a};
            }
        }
    }
    if (max_stops >= 2)
    {
        for (int a = 1; a < laps; ++a)
        {
            for (int b = 1; a + b < laps; ++b)
            {
                double const t = st(a) + st(b) + st(laps - a - b)
                                 + 2 * circuit.pit_penalty;
                if (t < best)
                {
                    best = t;
                    split = {a, b, laps - a - b};
                }
            }
        }
    }
    if (split.empty())
        throw Uncompletable(circuit.name + ": " + std::to_string(laps)
                            + " laps cannot be covered with "
                            + std::to_string(max_stops) + " stops");

    RacePlan plan;
    for (int n : split)
        plan.stints.push_back({n, minimal_fuel(circuit, n)});
    return plan;
}

}  // namespace f1champ::strategy
