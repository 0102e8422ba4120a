#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "circuit_io.hpp"
#include "json_util.hpp"
#include "race_io.hpp"
#include "race_simulator.hpp"

namespace f1champ {

//---------------------------------------------------------------------------//
// COSTS, LIMITS, SPENDING
//---------------------------------------------------------------------------//

/// Dollars per 1% improvement of each parameter, indexed by race.
struct CostSchedule
{
    std::vector<double> aero;
    std::vector<double> horsepower;
    std::vector<double> weight;

    int races() const { return static_cast<int>(aero.size()); }

    friend bool operator==(CostSchedule const&, CostSchedule const&) = default;
};

inline CostSchedule default_cost_schedule()
{
    return {{700000, 600000, 500000, 450000, 400000},
            {120000, 100000, 90000, 85000, 80000},
            {150000, 120000, 100000, 90000, 80000}};
}

struct CarLimits
{
    double aero_max = 1.09;
    double horsepower_max = 1025.0;
    double weight_min = 650.0;
    double tank_capacity = 70.0;
    int max_stops = 2;
    double total_budget = 6.0e6;

    RaceRules race_rules() const { return {tank_capacity, max_stops}; }

    friend bool operator==(CarLimits const&, CarLimits const&) = default;
};

// Acceptance slack on the parameter limits.
inline constexpr double aero_tolerance = 1e-12;
inline constexpr double horsepower_tolerance = 1e-9;
inline constexpr double weight_tolerance = 1e-9;
inline constexpr double budget_tolerance = 1e-6;

/// Dollars spent at one race.
struct Spend
{
    double aero = 0.0;
    double horsepower = 0.0;
    double weight = 0.0;

    double total() const { return aero + horsepower + weight; }

    double& operator[](std::size_t p)
    {
        return p == 0 ? aero : p == 1 ? horsepower : weight;
    }
    double operator[](std::size_t p) const
    {
        return p == 0 ? aero : p == 1 ? horsepower : weight;
    }

    friend bool operator==(Spend const&, Spend const&) = default;
};

struct ExpenditurePlan
{
    std::vector<Spend> races;

    double total() const
    {
        double s = 0.0;
        for (auto const& r : races)
            s += r.total();
        return s;
    }

    friend bool operator==(ExpenditurePlan const&,
                           ExpenditurePlan const&) = default;
};

/// Physical change per dollar at one race's prices (weight: kg removed).
struct Conversion
{
    double aero = 0.0;
    double horsepower = 0.0;
    double weight = 0.0;

    double operator[](std::size_t p) const
    {
        return p == 0 ? aero : p == 1 ? horsepower : weight;
    }
};

inline std::vector<Conversion>
conversion_coefficients(CostSchedule const& s, CarState const& base = base_car)
{
    std::vector<Conversion> out;
    for (int i = 0; i < s.races(); ++i)
    {
        out.push_back({0.01 * base.aero / s.aero[i],
                       0.01 * base.horsepower / s.horsepower[i],
                       0.01 * base.dry_weight / s.weight[i]});
    }
    return out;
}

/// Car after spending at race \c race (0-based). Improvements persist.
inline CarState apply_expenditure(CarState car, Spend const& x, int race,
                                  CostSchedule const& s,
                                  CarState const& base = base_car)
{
    auto const i = static_cast<std::size_t>(race);
    car.aero += 0.01 * base.aero * (x.aero / s.aero[i]);
    car.horsepower += 0.01 * base.horsepower * (x.horsepower / s.horsepower[i]);
    car.dry_weight -= 0.01 * base.dry_weight * (x.weight / s.weight[i]);
    return car;
}

inline bool within_limits(CarState const& c, CarLimits const& l)
{
    return c.aero <= l.aero_max + aero_tolerance
           && c.horsepower <= l.horsepower_max + horsepower_tolerance
           && c.dry_weight >= l.weight_min - weight_tolerance;
}

/*!
 * Largest spend on parameter \c p at race \c race that keeps the car at or
 * inside its limit once applied through apply_expenditure.
 */
inline double spend_headroom(CarState const& car, std::size_t p, int race,
                             CostSchedule const& s, CarLimits const& l,
                             CarState const& base = base_car)
{
    auto const i = static_cast<std::size_t>(race);
    double x = 0.0;
    if (p == 0)
        x = (l.aero_max - car.aero) / (0.01 * base.aero) * s.aero[i];
    else if (p == 1)
        x = (l.horsepower_max - car.horsepower) / (0.01 * base.horsepower)
            * s.horsepower[i];
    else
        x = (car.dry_weight - l.weight_min) / (0.01 * base.dry_weight)
            * s.weight[i];
    if (!(x > 0.0))
        return 0.0;

    auto exceeds = [&](double v) {
        Spend probe;
        probe[p] = v;
        auto after = apply_expenditure(car, probe, race, s, base);
        if (p == 0)
            return after.aero > l.aero_max;
        if (p == 1)
            return after.horsepower > l.horsepower_max;
        return after.dry_weight < l.weight_min;
    };
    while (x > 0.0 && exceeds(x))
        x = std::nextafter(x, 0.0);
    return x;
}

//---------------------------------------------------------------------------//
// RULES
//---------------------------------------------------------------------------//

struct CircuitEntry
{
    std::string id;  // short key, e.g. "sepang"
    Circuit circuit;
    double reference_time = 0.0;  // s, reference car on the reference plan
    int reference_stops = 0;
    std::string file;  // source file when loaded by reference

    RacePlan reference_plan() const
    {
        return even_plan(circuit, reference_stops);
    }
};

struct Rules
{
    CostSchedule schedule = default_cost_schedule();
    CarLimits limits;
    std::vector<double> points_table{25, 18, 15, 12, 10, 8, 6, 4, 2, 1};
    std::vector<CircuitEntry> circuits;
    CarState base = base_car;
    SimConfig sim;

    int races() const { return static_cast<int>(circuits.size()); }
};

inline std::vector<std::string> rules_problems(Rules const& r)
{
    std::vector<std::string> out;
    auto const& s = r.schedule;
    if (s.horsepower.size() != s.aero.size()
        || s.weight.size() != s.aero.size())
        out.push_back("cost_schedule: aero, horsepower and weight lists "
                      "differ in length");
    for (auto const* list : {&s.aero, &s.horsepower, &s.weight})
    {
        for (double v : *list)
        {
            if (!(v > 0.0))
            {
                out.push_back("cost_schedule: costs must be > 0");
                break;
            }
        }
    }
    if (r.circuits.size() != 5)
        out.push_back("circuits: expected 5 circuits, got "
                      + std::to_string(r.circuits.size()));
    if (static_cast<int>(r.circuits.size()) != s.races())
        out.push_back("cost_schedule: one cost entry per circuit required");
    if (r.points_table.empty())
        out.push_back("points: empty points table");
    for (std::size_t i = 1; i < r.points_table.size(); ++i)
    {
        if (!(r.points_table[i] < r.points_table[i - 1]))
        {
            out.push_back("points: must be strictly decreasing");
            break;
        }
    }
    auto const& l = r.limits;
    if (!(l.aero_max > r.base.aero))
        out.push_back("limits.aero_max: must exceed the base aero value");
    if (!(l.horsepower_max > r.base.horsepower))
        out.push_back("limits.horsepower_max: must exceed the base power");
    if (!(l.weight_min < r.base.dry_weight))
        out.push_back("limits.weight_min: must be below the base weight");
    if (!(l.tank_capacity > 0.0))
        out.push_back("limits.tank_capacity_kg: must be > 0");
    if (l.max_stops < 0)
        out.push_back("limits.max_stops: must be >= 0");
    if (!(l.total_budget >= 0.0))
        out.push_back("limits.total_budget: must be >= 0");
    for (std::size_t i = 0; i < r.circuits.size(); ++i)
    {
        auto const& e = r.circuits[i];
        if (!(e.reference_time > 0.0))
            out.push_back("circuits[" + std::to_string(i)
                          + "].reference_time_s: must be > 0");
        if (e.reference_stops < 0 || e.reference_stops > l.max_stops)
            out.push_back("circuits[" + std::to_string(i)
                          + "].reference_stops: out of range");
    }
    return out;
}

namespace detail {

inline std::vector<double> number_list(json const& j, char const* key,
                                       std::string const& where)
{
    std::vector<double> out;
    auto const& arr = array_field(j, key, where);
    for (std::size_t i = 0; i < arr.size(); ++i)
    {
        if (!arr[i].is_number())
            throw InputError(where + "." + key + "[" + std::to_string(i)
                             + "]: expected a number");
        out.push_back(arr[i].get<double>());
    }
    return out;
}

}  // namespace detail

/*!
 * Parse a rules document. Circuits are given inline ("circuit") or by a
 * "file" path resolved against \c base_dir.
 */
inline Rules rules_from_json(json const& j, std::string const& source,
                             std::filesystem::path const& base_dir = {})
{
    if (!j.is_object())
        throw InputError(source + ": expected a top-level object");
    Rules r;
    if (j.contains("cost_schedule"))
    {
        auto const& c = j.at("cost_schedule");
        std::string const w = source + ".cost_schedule";
        r.schedule.aero = detail::number_list(c, "aero", w);
        r.schedule.horsepower = detail::number_list(c, "horsepower", w);
        r.schedule.weight = detail::number_list(c, "weight", w);
    }
    if (j.contains("limits"))
    {
        auto const& l = j.at("limits");
        std::string const w = source + ".limits";
        auto& d = r.limits;
        d.aero_max = number_field_or(l, "aero_max", w, d.aero_max);
        d.horsepower_max
            = number_field_or(l, "horsepower_max", w, d.horsepower_max);
        d.weight_min = number_field_or(l, "weight_min_kg", w, d.weight_min);
        d.tank_capacity
            = number_field_or(l, "tank_capacity_kg", w, d.tank_capacity);
        if (l.contains("max_stops"))
            d.max_stops = int_field(l, "max_stops", w);
        d.total_budget = number_field_or(l, "total_budget", w, d.total_budget);
    }
    if (j.contains("points"))
        r.points_table = detail::number_list(j, "points", source);
    if (j.contains("base_car"))
        r.base = car_from_json(j.at("base_car"), source + ".base_car");
    if (j.contains("sim"))
    {
        auto const& s = j.at("sim");
        std::string const w = source + ".sim";
        r.sim.cp = number_field_or(s, "cp", w, r.sim.cp);
        r.sim.braking_slope
            = number_field_or(s, "braking_slope", w, r.sim.braking_slope);
        r.sim.aero_speed_exponent = number_field_or(
            s, "aero_speed_exponent", w, r.sim.aero_speed_exponent);
    }

    auto const& circuits = array_field(j, "circuits", source);
    for (std::size_t i = 0; i < circuits.size(); ++i)
    {
        auto const& c = circuits[i];
        std::string const w = source + ".circuits[" + std::to_string(i) + "]";
        CircuitEntry e;
        e.id = string_field(c, "id", w);
        if (c.contains("circuit"))
        {
            e.circuit = circuit_from_json(c.at("circuit"), w + ".circuit");
        }
        else
        {
            auto file = std::filesystem::path(string_field(c, "file", w));
            if (file.is_relative())
                file = base_dir / file;
            e.circuit = load_circuit(file.string());
            e.file = file.string();
        }
        e.reference_time = number_field(c, "reference_time_s", w);
        e.reference_stops = int_field(c, "reference_stops", w);
        r.circuits.push_back(std::move(e));
    }

    auto problems = rules_problems(r);
    if (!problems.empty())
    {
        for (auto& p : problems)
            p = source + ": " + p;
        throw InputError(std::move(problems));
    }
    return r;
}

/// Self-contained form with circuits inline.
inline json rules_to_json(Rules const& r)
{
    json circuits = json::array();
    for (auto const& e : r.circuits)
    {
        circuits.push_back({{"id", e.id},
                            {"circuit", circuit_to_json(e.circuit)},
                            {"reference_time_s", e.reference_time},
                            {"reference_stops", e.reference_stops}});
    }
    auto const& l = r.limits;
    return {{"cost_schedule",
             {{"aero", r.schedule.aero},
              {"horsepower", r.schedule.horsepower},
              {"weight", r.schedule.weight}}},
            {"limits",
             {{"aero_max", l.aero_max},
              {"horsepower_max", l.horsepower_max},
              {"weight_min_kg", l.weight_min},
              {"tank_capacity_kg", l.tank_capacity},
              {"max_stops", l.max_stops},
              {"total_budget", l.total_budget}}},
            {"points", r.points_table},
            {"base_car", car_to_json(r.base)},
            {"sim",
             {{"cp", r.sim.cp},
              {"braking_slope", r.sim.braking_slope},
              {"aero_speed_exponent", r.sim.aero_speed_exponent}}},
            {"circuits", circuits}};
}

inline Rules load_rules(std::string const& path)
{
    return rules_from_json(read_json_file(path), path,
                           std::filesystem::path(path).parent_path());
}

inline json spend_to_json(Spend const& s)
{
    return {{"aero", s.aero}, {"horsepower", s.horsepower}, {"weight", s.weight}};
}

inline Spend spend_from_json(json const& j, std::string const& where)
{
    if (!j.is_object())
        throw InputError(where + ": expected an object");
    return {number_field_or(j, "aero", where, 0.0),
            number_field_or(j, "horsepower", where, 0.0),
            number_field_or(j, "weight", where, 0.0)};
}

inline json expenditure_to_json(ExpenditurePlan const& p)
{
    json races = json::array();
    for (auto const& s : p.races)
        races.push_back(spend_to_json(s));
    return {{"races", races}};
}

inline ExpenditurePlan expenditure_from_json(json const& j,
                                             std::string const& where)
{
    ExpenditurePlan p;
    auto const& races = array_field(j, "races", where);
    for (std::size_t i = 0; i < races.size(); ++i)
        p.races.push_back(spend_from_json(
            races[i], where + ".races[" + std::to_string(i) + "]"));
    return p;
}

}  // namespace f1champ
