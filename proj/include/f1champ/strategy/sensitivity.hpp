#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "../rules.hpp"

namespace f1champ::strategy {

/// Seconds of race time saved per dollar, per parameter.
struct Sensitivity
{
    double aero = 0.0;
    double horsepower = 0.0;
    double weight = 0.0;

    double operator[](std::size_t p) const
    {
        return p == 0 ? aero : p == 1 ? horsepower : weight;
    }
};

class LimitCrossed : public std::runtime_error
{
  public:
    LimitCrossed(std::string const& parameter, double headroom)
        : std::runtime_error("probe crosses the " + parameter
                             + " limit (headroom " + std::to_string(headroom)
                             + " $)")
        , parameter_(parameter)
        , headroom_(headroom)
    {
    }
    std::string const& parameter() const { return parameter_; }
    double headroom() const { return headroom_; }

  private:
    std::string parameter_;
    double headroom_;
};

inline constexpr double default_probe = 10000.0;
inline constexpr std::array<char const*, 3> parameter_names{
    "aero", "horsepower", "weight"};

/// Race time of \c car after spending \c x at race \c race (0-based).
inline double probed_time(LapModel const& model, Circuit const& circuit,
                          CarState const& car, Spend const& x, int race,
                          Rules const& rules, RacePlan const& plan)
{
    auto const after = apply_expenditure(car, x, race, rules.schedule,
                                         rules.base);
    return run_race(model, circuit, after, plan, rules.sim,
                    rules.limits.race_rules())
        .total_time;
}

/*!
 * Forward-difference sensitivities at race \c race (0-based): spend
 * \c probe dollars on one parameter, rerun the race, divide the saving by
 * the spend.
 */
inline Sensitivity estimate_sensitivities(Circuit const& circuit,
                                          CarState const& car, int race,
                                          Rules const& rules,
                                          RacePlan const& plan,
                                          double probe = default_probe)
{
    if (!(probe > 0.0))
        throw std::invalid_argument("probe must be positive");
    LapModel const model(circuit);
    double const t0 = probed_time(model, circuit, car, {}, race, rules, plan);
    std::array<double, 3> s{};
    for (std::size_t p = 0; p < 3; ++p)
    {
        double const room = spend_headroom(car, p, race, rules.schedule,
                                           rules.limits, rules.base);
        if (probe > room)
            throw LimitCrossed(parameter_names[p], room);
        Spend x;
        x[p] = probe;
        s[p] = (t0 - probed_time(model, circuit, car, x, race, rules, plan))
               / probe;
    }
    return {s[0], s[1], s[2]};
}

/// Sensitivities of every race at the pre-championship car.
inline std::vector<Sensitivity> base_sensitivities(Rules const& rules,
                                                   double probe
                                                   = default_probe)
{
    std::vector<Sensitivity> out;
    for (int i = 0; i < rules.races(); ++i)
    {
        auto const& e = rules.circuits[static_cast<std::size_t>(i)];
        out.push_back(estimate_sensitivities(e.circuit, rules.base, i, rules,
                                             e.reference_plan(), probe));
    }
    return out;
}

/*!
 * Seconds saved per dollar when \c probe dollars are split across the three
 * parameters in \c fractions at once.
 */
inline double estimate_impact(Circuit const& circuit, CarState const& car,
                              int race, Rules const& rules,
                              RacePlan const& plan,
                              std::array<double, 3> fractions
                              = {1.0 / 3, 1.0 / 3, 1.0 / 3},
                              double probe = default_probe)
{
    if (!(probe > 0.0))
        throw std::invalid_argument("probe must be positive");
    Spend x;
    for (std::size_t p = 0; p < 3; ++p)
    {
        x[p] = probe * fractions[p];
        double const room = spend_headroom(car, p, race, rules.schedule,
                                           rules.limits, rules.base);
        if (x[p] > room)
            throw LimitCrossed(parameter_names[p], room);
    }
    LapModel const model(circuit);
    double const t0 = probed_time(model, circuit, car, {}, race, rules, plan);
    return (t0 - probed_time(model, circuit, car, x, race, rules, plan))
           / probe;
}

}  // namespace f1champ::strategy
