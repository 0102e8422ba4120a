#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "../championship/engine.hpp"
#include "../rules.hpp"
#include "baselines.hpp"
#include "formulations.hpp"
#include "pit_optimizer.hpp"
#include "sensitivity.hpp"

namespace f1champ::strategy {

enum class StrategyKind
{
    cmlf,
    clf,
    rlf,
    hrlf,
    u,
};

inline char const* to_string(StrategyKind k)
{
    switch (k)
    {
        case StrategyKind::cmlf: return "CMLF";
        case StrategyKind::clf: return "CLF";
        case StrategyKind::rlf: return "RLF";
        case StrategyKind::hrlf: return "HRLF";
        case StrategyKind::u: return "U";
    }
    return "?";
}

inline StrategyKind parse_strategy(std::string const& s)
{
    std::string lower;
    for (char c : s)
        lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "cmlf") return StrategyKind::cmlf;
    if (lower == "clf") return StrategyKind::clf;
    if (lower == "rlf") return StrategyKind::rlf;
    if (lower == "hrlf") return StrategyKind::hrlf;
    if (lower == "u") return StrategyKind::u;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

struct StrategyOptions
{
    double probe = default_probe;
    GainPattern pattern;
    ClfBudgetRow clf_form = ClfBudgetRow::dollars;
    std::uint64_t seed = 1;
    std::optional<std::vector<Sensitivity>> sensitivities;  // reused if set
};

struct TeamStrategy
{
    std::string name;
    ExpenditurePlan spend;
    std::vector<RacePlan> race_plans;
};

/// Cars after each race's spend, starting from the base car.
inline std::vector<CarState> car_trajectory(ExpenditurePlan const& plan,
                                            Rules const& rules)
{
    std::vector<CarState> cars;
    CarState car = rules.base;
    for (std::size_t i = 0; i < plan.races.size(); ++i)
    {
        car = apply_expenditure(car, plan.races[i], static_cast<int>(i),
                                rules.schedule, rules.base);
        cars.push_back(car);
    }
    return cars;
}

inline std::vector<RacePlan> optimized_race_plans(ExpenditurePlan const& plan,
                                                  Rules const& rules)
{
    std::vector<RacePlan> out;
    auto const cars = car_trajectory(plan, rules);
    for (std::size_t i = 0; i < cars.size(); ++i)
        out.push_back(optimize_pit_plan(rules.circuits[i].circuit, cars[i],
                                        rules.limits, rules.sim));
    return out;
}

/// CLF: per-race budgets from the LP, spent in equal thirds.
inline ExpenditurePlan clf_expenditure(ChampionshipAllocation const& alloc,
                                       Rules const& rules)
{
    ExpenditurePlan plan;
    CarState car = rules.base;
    for (int i = 0; i < rules.races(); ++i)
    {
        auto const x = distribute(alloc.budgets[static_cast<std::size_t>(i)],
                                  {1.0, 1.0, 1.0},
                                  spend_headrooms(car, i, rules));
        plan.races.push_back(x);
        car = apply_expenditure(car, x, i, rules.schedule, rules.base);
    }
    return fit_to_rules(plan, rules);
}

/// RLF: the unspent budget is shared evenly over the remaining races.
inline ExpenditurePlan rlf_expenditure(std::vector<Sensitivity> const& sens,
                                       Rules const& rules)
{
    ExpenditurePlan plan;
    CarState car = rules.base;
    double left = rules.limits.total_budget;
    int const m = rules.races();
    for (int i = 0; i < m; ++i)
    {
        auto const r = solve_rlf(sens[static_cast<std::size_t>(i)], car, i,
                                 rules, left / (m - i));
        plan.races.push_back(r.spend);
        left -= r.spend.total();
        car = apply_expenditure(car, r.spend, i, rules.schedule, rules.base);
    }
    return fit_to_rules(plan, rules);
}

inline std::vector<double> base_impacts(Rules const& rules, double probe)
{
    std::vector<double> out;
    for (int i = 0; i < rules.races(); ++i)
    {
        auto const& e = rules.circuits[static_cast<std::size_t>(i)];
        out.push_back(estimate_impact(e.circuit, rules.base, i, rules,
                                      e.reference_plan(),
                                      {1.0 / 3, 1.0 / 3, 1.0 / 3}, probe));
    }
    return out;
}

inline TeamStrategy build_strategy(StrategyKind kind, Rules const& rules,
                                   StrategyOptions const& opt = {})
{
    TeamStrategy t;
    t.name = to_string(kind);
    auto sens = [&] {
        return opt.sensitivities ? *opt.sensitivities
                                 : base_sensitivities(rules, opt.probe);
    };
    switch (kind)
    {
        case StrategyKind::cmlf:
            t.spend = solve_cmlf(sens(), rules, opt.pattern).plan;
            t.race_plans = optimized_race_plans(t.spend, rules);
            break;
        case StrategyKind::clf: {
            auto const alloc = solve_clf(
                base_impacts(rules, opt.probe), default_alphas(rules.races()),
                rules.limits.total_budget, default_clf_caps(rules),
                opt.clf_form);
            t.spend = clf_expenditure(alloc, rules);
            t.race_plans = optimized_race_plans(t.spend, rules);
            break;
        }
        case StrategyKind::rlf:
            t.spend = rlf_expenditure(sens(), rules);
            t.race_plans = optimized_race_plans(t.spend, rules);
            break;
        case StrategyKind::hrlf: {
            t.spend = hrlf_expenditure(rules);
            // Stop count from the optimizer, stints split evenly.
            auto const best = optimized_race_plans(t.spend, rules);
            for (std::size_t i = 0; i < best.size(); ++i)
                t.race_plans.push_back(
                    even_plan(rules.circuits[i].circuit, best[i].stops()));
            break;
        }
        case StrategyKind::u: {
            t.name += "(" + std::to_string(opt.seed) + ")";
            t.spend = random_expenditure(opt.seed, rules);
            std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
            for (auto const& e : rules.circuits)
                t.race_plans.push_back(
                    random_race_plan(e.circuit, rules.limits, rng));
            break;
        }
    }
    return t;
}

//---------------------------------------------------------------------------//
// REPORT
//---------------------------------------------------------------------------//

struct TournamentRow
{
    std::string name;
    double cumulative_time = 0.0;
    double gain = 0.0;  // reference time minus cumulative time
    double fraction = 0.0;
    double points = 0.0;
    double points_fraction = 0.0;
    int dnfs = 0;
};

struct TournamentReport
{
    double reference_time = 0.0;
    std::vector<TournamentRow> rows;

    TournamentRow const& row(std::string const& name) const
    {
        for (auto const& r : rows)
            if (r.name == name)
                return r;
        throw std::out_of_range("no tournament row '" + name + "'");
    }
};

struct TournamentInput
{
    std::string name;
    double cumulative_time = 0.0;
    double points = 0.0;
    int dnfs = 0;
};

/// Fractions relative to the largest gain and the largest points total.
inline TournamentReport make_report(std::vector<TournamentInput> const& in,
                                    double reference_time)
{
    TournamentReport rep;
    rep.reference_time = reference_time;
    double best_gain = 0.0;
    double best_points = 0.0;
    for (auto const& e : in)
    {
        best_gain = std::max(best_gain, reference_time - e.cumulative_time);
        best_points = std::max(best_points, e.points);
    }
    for (auto const& e : in)
    {
        TournamentRow r;
        r.name = e.name;
        r.cumulative_time = e.cumulative_time;
        r.gain = reference_time - e.cumulative_time;
        r.fraction = best_gain > 0.0 ? r.gain / best_gain : 0.0;
        r.points = e.points;
        r.points_fraction = best_points > 0.0 ? e.points / best_points : 0.0;
        r.dnfs = e.dnfs;
        rep.rows.push_back(r);
    }
    return rep;
}

inline std::string report_text(TournamentReport const& rep)
{
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %16s %9s %9s %9s\n", "formulation",
                  "cumulative time", "fraction", "points", "fraction");
    out += buf;
    for (auto const& r : rep.rows)
    {
        std::snprintf(buf, sizeof buf, "%-12s %16.3f %9.2f %9.2f %9.2f\n",
                      r.name.c_str(), r.cumulative_time, r.fraction, r.points,
                      r.points_fraction);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-12s %16.3f\n", "reference",
                  rep.reference_time);
    out += buf;
    return out;
}

inline json report_to_json(TournamentReport const& rep)
{
    json rows = json::array();
    for (auto const& r : rep.rows)
        rows.push_back({{"formulation", r.name},
                        {"cumulative_time_s", r.cumulative_time},
                        {"gain_s", r.gain},
                        {"fraction", r.fraction},
                        {"points", r.points},
                        {"points_fraction", r.points_fraction},
                        {"dnfs", r.dnfs}});
    return {{"reference_time_s", rep.reference_time}, {"rows", rows}};
}

/// Simulated season time of the unimproved car on the reference plans.
inline double reference_season_time(Rules const& rules)
{
    double t = 0.0;
    for (auto const& e : rules.circuits)
        t += run_race(e.circuit, rules.base, e.reference_plan(), rules.sim,
                      rules.limits.race_rules())
                 .total_time;
    return t;
}

/*!
 * Race all strategies against each other in one championship. A DNF counts
 * the reference time of that race towards the cumulative time.
 */
inline TournamentReport run_tournament(std::vector<TeamStrategy> const& teams,
                                       Rules const& rules)
{
    if (teams.size() < 2)
        throw std::invalid_argument("a tournament needs at least 2 strategies");
    Championship champ(rules);
    for (auto const& t : teams)
        champ.register_team(t.name);

    std::vector<TournamentInput> in(teams.size());
    for (int race = 1; race <= rules.races(); ++race)
    {
        auto const r = static_cast<std::size_t>(race - 1);
        for (std::size_t k = 0; k < teams.size(); ++k)
        {
            Submission sub{race, teams[k].spend.races.at(r),
                           teams[k].race_plans.at(r)};
            champ.submit(static_cast<int>(k) + 1, sub);
        }
        auto const& cls = champ.run_race(race);
        for (auto const& f : cls.finishers)
            in[static_cast<std::size_t>(f.team - 1)].cumulative_time
                += f.total_time;
        for (int id : cls.dnfs)
        {
            in[static_cast<std::size_t>(id - 1)].cumulative_time
                += rules.circuits[r].reference_time;
            ++in[static_cast<std::size_t>(id - 1)].dnfs;
        }
    }
    for (std::size_t k = 0; k < teams.size(); ++k)
    {
        in[k].name = teams[k].name;
        in[k].points = champ.team(static_cast<int>(k) + 1).points_total;
    }
    return make_report(in, reference_season_time(rules));
}

}  // namespace f1champ::strategy
