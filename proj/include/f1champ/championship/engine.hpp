#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "../json_util.hpp"
#include "../race_io.hpp"
#include "../race_simulator.hpp"
#include "../rules.hpp"

namespace f1champ {

// Race numbers in this layer are 1-based, as in the public API.

struct Submission
{
    int race = 1;
    Spend expenditure;
    RacePlan plan;

    friend bool operator==(Submission const&, Submission const&) = default;
};

struct Violation
{
    std::string code;
    std::string message;
};

struct RaceEntry
{
    int race = 0;
    std::optional<Submission> submission;  // as accepted, if any
    bool dnf = false;
    std::string dnf_reason;
    std::optional<RaceResult> result;
    CarState car_after;
};

struct TeamState
{
    int id = 0;
    std::string name;
    CarState car = base_car;
    double spent_total = 0.0;
    double points_total = 0.0;
    double best_time = std::numeric_limits<double>::infinity();
    std::vector<RaceEntry> history;
};

struct Finisher
{
    int team = 0;
    std::string name;
    int position = 0;
    double total_time = 0.0;
    double points = 0.0;
};

struct PublishedDetail
{
    int team = 0;
    std::vector<double> stint_times;
    std::vector<int> pit_laps;
};

struct Classification
{
    int race = 0;
    std::vector<Finisher> finishers;  // fastest first
    std::vector<int> dnfs;            // team ids
    std::vector<PublishedDetail> details;
};

//---------------------------------------------------------------------------//
// VALIDATION
//---------------------------------------------------------------------------//

inline std::vector<Violation> validate_submission(TeamState const& team,
                                                  Submission const& sub,
                                                  Rules const& rules)
{
    std::vector<Violation> v;
    auto add = [&v](char const* code, std::string msg) {
        v.push_back({code, std::move(msg)});
    };
    auto const& l = rules.limits;

    if (sub.race < 1 || sub.race > rules.races())
    {
        add("race_index", "race " + std::to_string(sub.race)
                              + " is not part of the championship");
        return v;
    }

    auto const& x = sub.expenditure;
    bool spend_ok = true;
    for (std::size_t p = 0; p < 3; ++p)
    {
        if (!std::isfinite(x[p]) || x[p] < 0.0)
        {
            add("negative_spend", std::string(p == 0   ? "aero"
                                              : p == 1 ? "horsepower"
                                                       : "weight")
                                      + " spend must be a finite amount >= 0");
            spend_ok = false;
        }
    }
    if (spend_ok)
    {
        double const total = team.spent_total + x.total();
        if (total > l.total_budget + budget_tolerance)
            add("budget", "cumulative spend " + std::to_string(total)
                              + " exceeds the budget "
                              + std::to_string(l.total_budget));
        auto const after = apply_expenditure(team.car, x, sub.race - 1,
                                             rules.schedule, rules.base);
        if (after.aero > l.aero_max + aero_tolerance)
            add("aero_max", "aero would reach " + std::to_string(after.aero));
        if (after.horsepower > l.horsepower_max + horsepower_tolerance)
            add("horsepower_max",
                "power would reach " + std::to_string(after.horsepower));
        if (after.dry_weight < l.weight_min - weight_tolerance)
            add("weight_min",
                "weight would drop to " + std::to_string(after.dry_weight));
    }

    auto const& circuit
        = rules.circuits[static_cast<std::size_t>(sub.race - 1)].circuit;
    auto const& plan = sub.plan;
    if (plan.stints.empty())
    {
        add("no_stints", "race plan has no stints");
        return v;
    }
    if (plan.stops() > l.max_stops)
        add("max_stops", std::to_string(plan.stops()) + " stops, at most "
                             + std::to_string(l.max_stops) + " allowed");
    for (std::size_t i = 0; i < plan.stints.size(); ++i)
    {
        auto const& s = plan.stints[i];
        std::string const which = "stint " + std::to_string(i + 1);
        if (s.laps < 1)
        {
            add("stint_laps", which + " has no laps");
        }
        if (!std::isfinite(s.fuel_kg) || s.fuel_kg < 0.0)
        {
            add("negative_fuel", which + " has an invalid fuel load");
            continue;
        }
        if (s.fuel_kg > l.tank_capacity + fuel_tolerance)
            add("tank_capacity", which + " loads "
                                     + std::to_string(s.fuel_kg)
                                     + " kg, tank holds "
                                     + std::to_string(l.tank_capacity));
        if (s.laps >= 1
            && s.fuel_kg - s.laps * circuit.fuel_per_lap < -fuel_tolerance)
            add("fuel_insufficient", which + " runs dry before lap "
                                         + std::to_string(s.laps));
    }
    if (plan.total_laps() != circuit.laps)
        add("lap_count", "plan covers " + std::to_string(plan.total_laps())
                             + " laps, race has "
                             + std::to_string(circuit.laps));
    return v;
}

//---------------------------------------------------------------------------//
// POINTS AND STANDINGS
//---------------------------------------------------------------------------//

/*!
 * Assign positions and points to finishers sorted by time. Equal times
 * share the better position; the next finisher skips the shared places.
 */
inline void award_points(std::vector<Finisher>& finishers,
                         std::vector<double> const& points_table)
{
    for (std::size_t k = 0; k < finishers.size(); ++k)
    {
        std::size_t pos = k;
        if (k > 0 && finishers[k].total_time == finishers[k - 1].total_time)
            pos = static_cast<std::size_t>(finishers[k - 1].position - 1);
        finishers[k].position = static_cast<int>(pos) + 1;
        finishers[k].points = pos < points_table.size() ? points_table[pos]
                                                        : 0.0;
    }
}

struct StandingRow
{
    int position = 0;
    int team = 0;
    std::string name;
    double points = 0.0;
    double best_time = std::numeric_limits<double>::infinity();
};

/// Points descending; ties go to the better best race time, then entry order.
inline std::vector<StandingRow> standings(std::vector<TeamState> const& teams)
{
    std::vector<StandingRow> rows;
    for (auto const& t : teams)
        rows.push_back({0, t.id, t.name, t.points_total, t.best_time});
    std::stable_sort(rows.begin(), rows.end(),
                     [](StandingRow const& a, StandingRow const& b) {
                         if (a.points != b.points)
                             return a.points > b.points;
                         return a.best_time < b.best_time;
                     });
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].position = static_cast<int>(i) + 1;
    return rows;
}

//---------------------------------------------------------------------------//
// GRAND PRIX
//---------------------------------------------------------------------------//

/*!
 * Run race \c race for every team. Teams without a valid submission are
 * DNF and their spending is not applied. Team states are updated in place.
 */
inline Classification
run_grand_prix(int race, std::vector<TeamState>& teams,
               std::map<int, Submission> const& submissions,
               Rules const& rules, LapModel const* model = nullptr)
{
    auto const& entry = rules.circuits.at(static_cast<std::size_t>(race - 1));
    std::optional<LapModel> own;
    if (!model)
        model = &own.emplace(entry.circuit);

    Classification cls;
    cls.race = race;
    for (auto& team : teams)
    {
        RaceEntry rec;
        rec.race = race;
        auto it = submissions.find(team.id);
        if (it == submissions.end())
        {
            rec.dnf = true;
            rec.dnf_reason = "no submission";
        }
        else if (auto v = validate_submission(team, it->second, rules);
                 !v.empty() || it->second.race != race)
        {
            rec.dnf = true;
            rec.dnf_reason = v.empty() ? "race_index" : v.front().code;
        }
        else
        {
            auto const& sub = it->second;
            CarState const car = apply_expenditure(
                team.car, sub.expenditure, race - 1, rules.schedule,
                rules.base);
            rec.submission = sub;
            team.car = car;
            team.spent_total += sub.expenditure.total();
            try
            {
                rec.result = run_race(*model, entry.circuit, car, sub.plan,
                                      rules.sim, rules.limits.race_rules());
            }
            catch (RaceError const& e)
            {
                rec.dnf = true;
                rec.dnf_reason = e.what();
            }
        }
        rec.car_after = team.car;
        if (rec.result)
        {
            cls.finishers.push_back(
                {team.id, team.name, 0, rec.result->total_time, 0.0});
            cls.details.push_back(
                {team.id, rec.result->stint_times, rec.result->pit_laps});
            team.best_time = std::min(team.best_time, rec.result->total_time);
        }
        else
        {
            cls.dnfs.push_back(team.id);
        }
        team.history.push_back(std::move(rec));
    }

    std::stable_sort(cls.finishers.begin(), cls.finishers.end(),
                     [](Finisher const& a, Finisher const& b) {
                         return a.total_time < b.total_time;
                     });
    award_points(cls.finishers, rules.points_table);
    for (auto const& f : cls.finishers)
    {
        for (auto& team : teams)
            if (team.id == f.team)
                team.points_total += f.points;
    }
    return cls;
}

//---------------------------------------------------------------------------//
// CHAMPIONSHIP STATE MACHINE
//---------------------------------------------------------------------------//

class OrderError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

class Championship
{
  public:
    explicit Championship(Rules rules) : rules_(std::move(rules))
    {
        auto problems = rules_problems(rules_);
        if (!problems.empty())
            throw InputError(std::move(problems));
        for (auto const& e : rules_.circuits)
            models_.emplace_back(e.circuit);
    }

    Rules const& rules() const { return rules_; }
    std::vector<TeamState> const& teams() const { return teams_; }
    std::vector<Classification> const& results() const { return results_; }

    /// Next race to be run, 1-based; races() + 1 once the season is over.
    int next_race() const { return static_cast<int>(results_.size()) + 1; }
    bool finished() const { return next_race() > rules_.races(); }

    int register_team(std::string name)
    {
        if (!results_.empty())
            throw OrderError("registration closes when the first race runs");
        TeamState t;
        t.id = static_cast<int>(teams_.size()) + 1;
        t.name = std::move(name);
        t.car = rules_.base;
        teams_.push_back(std::move(t));
        return teams_.back().id;
    }

    TeamState const& team(int id) const { return teams_.at(index_of(id)); }

    /// Stores the submission if valid; otherwise returns why not.
    std::vector<Violation> submit(int team_id, Submission const& sub)
    {
        auto const& t = teams_.at(index_of(team_id));
        if (sub.race < next_race())
            throw OrderError("race " + std::to_string(sub.race)
                             + " is closed");
        if (sub.race > next_race())
            throw OrderError("race " + std::to_string(sub.race)
                             + " is not open yet");
        auto v = validate_submission(t, sub, rules_);
        if (v.empty())
            pending_[team_id] = sub;
        return v;
    }

    std::optional<Submission> pending(int team_id) const
    {
        auto it = pending_.find(team_id);
        if (it == pending_.end())
            return std::nullopt;
        return it->second;
    }

    /// Runs the next race; asking for an earlier race returns its result.
    Classification const& run_race(int race)
    {
        if (race >= 1 && race < next_race())
            return results_[static_cast<std::size_t>(race - 1)];
        if (race != next_race() || finished())
            throw OrderError("race " + std::to_string(race)
                             + " cannot run before race "
                             + std::to_string(next_race()));
        results_.push_back(run_grand_prix(
            race, teams_, pending_, rules_,
            &models_[static_cast<std::size_t>(race - 1)]));
        pending_.clear();
        return results_.back();
    }

    std::vector<StandingRow> standings() const
    {
        return f1champ::standings(teams_);
    }

    LapModel const& model(int race) const
    {
        return models_.at(static_cast<std::size_t>(race - 1));
    }

  private:
    std::size_t index_of(int id) const
    {
        if (id < 1 || id > static_cast<int>(teams_.size()))
            throw std::out_of_range("unknown team " + std::to_string(id));
        return static_cast<std::size_t>(id - 1);
    }

    Rules rules_;
    std::vector<LapModel> models_;
    std::vector<TeamState> teams_;
    std::map<int, Submission> pending_;
    std::vector<Classification> results_;
};

//---------------------------------------------------------------------------//
// SERIALIZATION
//---------------------------------------------------------------------------//

inline json submission_to_json(Submission const& s)
{
    return {{"race", s.race},
            {"expenditure", spend_to_json(s.expenditure)},
            {"plan", plan_to_json(s.plan)}};
}

inline Submission submission_from_json(json const& j, std::string const& where,
                                       std::optional<int> race = std::nullopt)
{
    if (!j.is_object())
        throw InputError(where + ": expected an object");
    Submission s;
    s.race = race ? *race : int_field(j, "race", where);
    if (j.contains("expenditure"))
        s.expenditure = spend_from_json(j.at("expenditure"),
                                        where + ".expenditure");
    if (!j.contains("plan"))
        throw InputError(where + ".plan: missing");
    s.plan = plan_from_json(j.at("plan"), where + ".plan");
    return s;
}

/// Published form: times and pit laps only, no car data or spending.
inline json classification_to_json(Classification const& c)
{
    json fin = json::array();
    for (auto const& f : c.finishers)
        fin.push_back({{"position", f.position},
                       {"team", f.team},
                       {"name", f.name},
                       {"total_s", round_centi(f.total_time)},
                       {"total_s_exact", f.total_time},
                       {"points", f.points}});
    json det = json::array();
    for (auto const& d : c.details)
        det.push_back({{"team", d.team},
                       {"stint_times_s", d.stint_times},
                       {"pit_laps", d.pit_laps}});
    return {{"race", c.race},
            {"finishers", fin},
            {"dnf", c.dnfs},
            {"details", det}};
}

inline json violations_to_json(std::vector<Violation> const& v)
{
    json out = json::array();
    for (auto const& x : v)
        out.push_back({{"code", x.code}, {"message", x.message}});
    return out;
}

inline json standings_to_json(std::vector<StandingRow> const& rows)
{
    json out = json::array();
    for (auto const& r : rows)
    {
        json row = {{"position", r.position},
                    {"team", r.team},
                    {"name", r.name},
                    {"points", r.points}};
        row["best_time_s"] = std::isfinite(r.best_time)
                                 ? json(r.best_time)
                                 : json(nullptr);
        out.push_back(row);
    }
    return out;
}

}  // namespace f1champ
