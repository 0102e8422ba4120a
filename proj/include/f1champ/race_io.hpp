#pragma once

#include <cmath>
#include <string>

#include "json_util.hpp"
#include "race_simulator.hpp"

namespace f1champ {

inline CarState car_from_json(json const& j, std::string const& where)
{
    if (!j.is_object())
        throw InputError(where + ": expected an object");
    CarState c;
    c.aero = number_field(j, "aero", where);
    c.horsepower = number_field(j, "horsepower_hp", where);
    c.dry_weight = number_field(j, "dry_weight_kg", where);
    return c;
}

inline json car_to_json(CarState const& c)
{
    return {{"aero", c.aero},
            {"horsepower_hp", c.horsepower},
            {"dry_weight_kg", c.dry_weight}};
}

inline RacePlan plan_from_json(json const& j, std::string const& where)
{
    if (!j.is_object())
        throw InputError(where + ": expected an object");
    RacePlan plan;
    auto const& stints = array_field(j, "stints", where);
    for (std::size_t i = 0; i < stints.size(); ++i)
    {
        std::string const w = where + ".stints[" + std::to_string(i) + "]";
        plan.stints.push_back(
            {int_field(stints[i], "laps", w), number_field(stints[i], "fuel_kg", w)});
    }
    return plan;
}

inline json plan_to_json(RacePlan const& plan)
{
    json stints = json::array();
    for (auto const& s : plan.stints)
        stints.push_back({{"laps", s.laps}, {"fuel_kg", s.fuel_kg}});
    return {{"stints", stints}};
}

/// Display rounding for race times (0.01 s).
inline double round_centi(double t)
{
    return std::round(t * 100.0) / 100.0;
}

inline json result_to_json(RaceResult const& r, bool with_trace = false)
{
    json out = {{"total_s", round_centi(r.total_time)},
                {"total_s_exact", r.total_time},
                {"stint_times_s", r.stint_times},
                {"pit_laps", r.pit_laps}};
    if (with_trace)
    {
        json laps = json::array();
        for (auto const& l : r.lap_trace)
            laps.push_back({{"time_s", l.time}, {"fuel_kg", l.fuel_at_start}});
        out["laps"] = laps;
    }
    return out;
}

}  // namespace f1champ
