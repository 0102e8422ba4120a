#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "circuit_geometry.hpp"

namespace f1champ {

//---------------------------------------------------------------------------//
// TYPES
//---------------------------------------------------------------------------//

struct CarState
{
    double aero = 1.0;          // aerodynamic-suspension factor
    double horsepower = 830.0;  // HP
    double dry_weight = 702.0;  // kg, without fuel

    friend bool operator==(CarState const&, CarState const&) = default;
};

/// Reference car every team starts from.
inline constexpr CarState base_car{1.0, 830.0, 702.0};

struct SimConfig
{
    double cp = 0.09;  // (m/s) gained per metre per (HP/kg)
    double braking_slope = 1.2;  // (m/s) lost per metre under braking
    double aero_speed_exponent = 0.5;
};

struct Stint
{
    int laps = 0;
    double fuel_kg = 0.0;  // on board when the stint starts

    friend bool operator==(Stint const&, Stint const&) = default;
};

struct RacePlan
{
    std::vector<Stint> stints;

    int stops() const { return static_cast<int>(stints.size()) - 1; }

    /// Cumulative lap index at which each stop is made.
    std::vector<int> pit_laps() const
    {
        std::vector<int> out;
        int lap = 0;
        for (std::size_t i = 0; i + 1 < stints.size(); ++i)
        {
            lap += stints[i].laps;
            out.push_back(lap);
        }
        return out;
    }

    int total_laps() const
    {
        int n = 0;
        for (auto const& s : stints)
            n += s.laps;
        return n;
    }

    friend bool operator==(RacePlan const&, RacePlan const&) = default;
};

struct LapRecord
{
    double time = 0.0;
    double fuel_at_start = 0.0;

    friend bool operator==(LapRecord const&, LapRecord const&) = default;
};

struct RaceResult
{
    double total_time = 0.0;
    std::vector<double> stint_times;  // pit penalties included
    std::vector<int> pit_laps;
    std::vector<LapRecord> lap_trace;

    friend bool operator==(RaceResult const&, RaceResult const&) = default;
};

struct RaceRules
{
    double tank_capacity = 70.0;  // kg
    int max_stops = 2;
};

class RaceError : public std::runtime_error
{
  public:
    enum class Kind
    {
        fuel_exhausted,
        tank_overflow,
        too_many_stops,
        invalid_plan,
    };

    RaceError(Kind kind, int where, std::string const& what)
        : std::runtime_error(what), kind_(kind), where_(where)
    {
    }

    Kind kind() const { return kind_; }
    //! Lap (fuel_exhausted) or 1-based stint index (tank_overflow)
    int where() const { return where_; }

  private:
    Kind kind_;
    int where_;
};

class CalibrationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr double fuel_tolerance = 1e-9;

//---------------------------------------------------------------------------//
// SEGMENTS
//---------------------------------------------------------------------------//

inline double curve_speed(CurveElement const& curve, double aero,
                          double speed_scale, SimConfig const& cfg)
{
    return curve.ref_speed * std::pow(aero, cfg.aero_speed_exponent)
           * speed_scale;
}

struct StraightTraverse
{
    double time = 0.0;
    double v_exit = 0.0;
};

//---------------------------------------------------------------------------//
/*!
 * Time to run a straight of effective length \c length.
 *
 * Speed rises linearly with distance at Cp*H/W per metre from the previous
 * curve's speed, is capped by the circuit top speed, and falls linearly at
 * the braking slope to reach the next curve's limit. Each phase is timed with
 * the mean of its end speeds.
 */
inline StraightTraverse straight_traverse(double v_in, double v_next_limit,
                                          double length, CarState const& car,
                                          double weight_total,
                                          double max_speed,
                                          SimConfig const& cfg)
{
    if (length <= 0.0)
        return {0.0, std::min(v_in, v_next_limit)};

    auto phase = [](double len, double va, double vb) {
        return len > 0.0 ? len / (0.5 * (va + vb)) : 0.0;
    };

    double const k = cfg.cp * car.horsepower / weight_total;
    double const b = cfg.braking_slope;
    double const cap = std::max(max_speed, v_in);
    double const target = std::min(v_next_limit, cap);

    if (target <= v_in)
    {
        if ((v_in - target) / b >= length)
        {
            // Too short to shed the excess; next curve sorts itself out
            double const v_out = v_in - b * length;
            return {phase(length, v_in, v_out), v_out};
        }
    }
    else if (v_in + k * length <= target)
    {
        double const v_out = v_in + k * length;
        return {phase(length, v_in, v_out), v_out};
    }

    double peak = (length + v_in / k + target / b) / (1.0 / k + 1.0 / b);
    double accel_len = 0.0;
    double cruise_len = 0.0;
    double brake_len = 0.0;
    if (peak > cap)
    {
        peak = cap;
        accel_len = (cap - v_in) / k;
        brake_len = (cap - target) / b;
        cruise_len = std::max(0.0, length - accel_len - brake_len);
    }
    else
    {
        accel_len = std::max(0.0, (peak - v_in) / k);
        brake_len = std::max(0.0, length - accel_len);
    }
    double const time = phase(accel_len, v_in, peak)
                        + (cruise_len > 0.0 ? cruise_len / peak : 0.0)
                        + phase(brake_len, peak, target);
    return {time, target};
}

//---------------------------------------------------------------------------//
// LAP / RACE
//---------------------------------------------------------------------------//

/// Circuit preprocessed for repeated lap evaluation.
class LapModel
{
  public:
    explicit LapModel(Circuit const& circuit)
        : layout_(build_layout(circuit))
        , max_speed_(circuit.max_speed)
        , speed_scale_(circuit.speed_scale)
    {
    }

    double lap_time(CarState const& car, double fuel_on_board,
                    SimConfig const& cfg) const
    {
        auto const& secs = layout_.sections;
        std::size_t const n = secs.size();
        double const weight = car.dry_weight + fuel_on_board;

        double total = 0.0;
        double v_here = curve_speed(secs[0].curve, car.aero, speed_scale_,
                                    cfg);
        for (std::size_t k = 0; k < n; ++k)
        {
            double const v_next = curve_speed(secs[(k + 1) % n].curve,
                                              car.aero, speed_scale_, cfg);
            total += secs[k].line.arc_length / v_here;
            total += straight_traverse(v_here, v_next,
                                       secs[k].straight_effective, car,
                                       weight, max_speed_, cfg)
                         .time;
            v_here = v_next;
        }
        return total;
    }

    LapLayout const& layout() const { return layout_; }

  private:
    LapLayout layout_;
    double max_speed_;
    double speed_scale_;
};

inline double lap_time(Circuit const& circuit, CarState const& car,
                       double fuel_on_board, SimConfig const& cfg)
{
    return LapModel(circuit).lap_time(car, fuel_on_board, cfg);
}

/// Throws RaceError for any plan the race cannot be run with.
inline void check_plan(Circuit const& circuit, RacePlan const& plan,
                       RaceRules const& rules)
{
    using Kind = RaceError::Kind;
    if (plan.stints.empty())
        throw RaceError(Kind::invalid_plan, 0, "race plan has no stints");
    if (plan.stops() > rules.max_stops)
    {
        throw RaceError(Kind::too_many_stops, plan.stops(),
                        "too many stops: " + std::to_string(plan.stops()));
    }
    for (std::size_t i = 0; i < plan.stints.size(); ++i)
    {
        auto const& s = plan.stints[i];
        int const idx = static_cast<int>(i) + 1;
        if (s.laps < 1)
        {
            throw RaceError(Kind::invalid_plan, idx,
                            "stint " + std::to_string(idx) + " has no laps");
        }
        if (!std::isfinite(s.fuel_kg) || s.fuel_kg < 0.0)
        {
            throw RaceError(Kind::invalid_plan, idx,
                            "stint " + std::to_string(idx)
                                + " has a negative fuel load");
        }
        if (s.fuel_kg > rules.tank_capacity + fuel_tolerance)
        {
            throw RaceError(Kind::tank_overflow, idx,
                            "stint " + std::to_string(idx)
                                + " overfills the tank");
        }
    }
    if (plan.total_laps() != circuit.laps)
    {
        throw RaceError(Kind::invalid_plan, 0,
                        "plan covers " + std::to_string(plan.total_laps())
                            + " laps, race has "
                            + std::to_string(circuit.laps));
    }
    int lap = 0;
    for (auto const& s : plan.stints)
    {
        for (int j = 0; j < s.laps; ++j)
        {
            ++lap;
            double const end = s.fuel_kg - (j + 1) * circuit.fuel_per_lap;
            if (end < -fuel_tolerance)
            {
                throw RaceError(Kind::fuel_exhausted, lap,
                                "fuel exhausted on lap "
                                    + std::to_string(lap));
            }
        }
    }
}

inline RaceResult run_race(LapModel const& model, Circuit const& circuit,
                           CarState const& car, RacePlan const& plan,
                           SimConfig const& cfg, RaceRules const& rules = {})
{
    check_plan(circuit, plan, rules);

    RaceResult result;
    result.pit_laps = plan.pit_laps();
    result.lap_trace.reserve(static_cast<std::size_t>(circuit.laps));
    for (std::size_t i = 0; i < plan.stints.size(); ++i)
    {
        auto const& s = plan.stints[i];
        double stint_time = 0.0;
        for (int j = 0; j < s.laps; ++j)
        {
            double const fuel = s.fuel_kg - j * circuit.fuel_per_lap;
            double const t = model.lap_time(car, fuel, cfg);
            result.lap_trace.push_back({t, fuel});
            stint_time += t;
        }
        if (i + 1 < plan.stints.size())
            stint_time += circuit.pit_penalty;
        result.stint_times.push_back(stint_time);
    }
    for (double t : result.stint_times)
        result.total_time += t;
    return result;
}

inline RaceResult run_race(Circuit const& circuit, CarState const& car,
                           RacePlan const& plan, SimConfig const& cfg,
                           RaceRules const& rules = {})
{
    return run_race(LapModel(circuit), circuit, car, plan, cfg, rules);
}

/// Fuel a stint of \c laps needs, with nothing left over.
inline double minimal_fuel(Circuit const& circuit, int laps)
{
    return laps * circuit.fuel_per_lap;
}

/// Even stint split (earlier stints take the remainder) with minimal fuel.
inline RacePlan even_plan(Circuit const& circuit, int stops)
{
    RacePlan plan;
    int const n = stops + 1;
    for (int i = 0; i < n; ++i)
    {
        int const laps = circuit.laps / n + (i < circuit.laps % n ? 1 : 0);
        plan.stints.push_back({laps, minimal_fuel(circuit, laps)});
    }
    return plan;
}

//---------------------------------------------------------------------------//
/*!
 * Find the curve speed scale that makes the reference run take
 * \c reference_time seconds.
 *
 * Race time falls strictly as the scale grows, so plain bisection over
 * [0.5, 2] converges.
 */
inline double calibrate_speed_scale(Circuit circuit, CarState const& car,
                                    double reference_time,
                                    RacePlan const& plan, SimConfig const& cfg,
                                    RaceRules const& rules = {})
{
    if (!(reference_time > 0.0))
        throw CalibrationError("reference time must be positive");

    auto time_at = [&](double scale) {
        circuit.speed_scale = scale;
        return run_race(circuit, car, plan, cfg, rules).total_time;
    };

    double lo = 0.5;
    double hi = 2.0;
    if (time_at(lo) < reference_time || time_at(hi) > reference_time)
    {
        throw CalibrationError("reference time "
                               + std::to_string(reference_time)
                               + " s is out of reach for speed scales in "
                                 "[0.5, 2]");
    }
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter)
    {
        mid = 0.5 * (lo + hi);
        double const t = time_at(mid);
        if (std::fabs(t - reference_time) <= 1e-10 * reference_time)
            break;
        if (t > reference_time)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon())
            break;
    }
    return mid;
}

}  // namespace f1champ
