#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "../lp/simplex.hpp"
#include "../rules.hpp"
#include "sensitivity.hpp"

namespace f1champ::strategy {

// LPs are posed in megadollars so budget rows and limit rows have
// comparable magnitudes.
inline constexpr double megadollar = 1.0e6;

//---------------------------------------------------------------------------//
// SHARED HELPERS
//---------------------------------------------------------------------------//

/// Spend headroom on all three parameters at race \c race (0-based).
inline std::array<double, 3> spend_headrooms(CarState const& car, int race,
                                             Rules const& rules)
{
    std::array<double, 3> h{};
    for (std::size_t p = 0; p < 3; ++p)
        h[p] = spend_headroom(car, p, race, rules.schedule, rules.limits,
                              rules.base);
    return h;
}

/*!
 * Split \c amount in proportion to \c weights, capping each share at its
 * headroom and handing the overflow to the uncapped parameters.
 */
inline Spend distribute(double amount, std::array<double, 3> weights,
                        std::array<double, 3> const& headroom)
{
    Spend x;
    std::array<bool, 3> open{true, true, true};
    for (int round = 0; round < 3 && amount > 0.0; ++round)
    {
        double wsum = 0.0;
        for (std::size_t p = 0; p < 3; ++p)
            if (open[p])
                wsum += weights[p];
        if (!(wsum > 0.0))
            break;
        bool capped = false;
        for (std::size_t p = 0; p < 3; ++p)
        {
            if (open[p] && amount * weights[p] / wsum >= headroom[p] - x[p])
            {
                amount -= headroom[p] - x[p];
                x[p] = headroom[p];
                open[p] = false;
                capped = true;
            }
        }
        if (capped)
            continue;
        for (std::size_t p = 0; p < 3; ++p)
            if (open[p])
                x[p] += amount * weights[p] / wsum;
        amount = 0.0;
    }
    return x;
}

/*!
 * Walk the plan race by race and trim any spend that would cross a limit
 * or the budget. Only round-off sized trims are expected from the LPs.
 */
inline ExpenditurePlan fit_to_rules(ExpenditurePlan plan, Rules const& rules)
{
    CarState car = rules.base;
    double spent = 0.0;
    for (std::size_t i = 0; i < plan.races.size(); ++i)
    {
        int const race = static_cast<int>(i);
        auto& x = plan.races[i];
        for (std::size_t p = 0; p < 3; ++p)
        {
            x[p] = std::max(0.0, x[p]);
            x[p] = std::min(x[p], spend_headroom(car, p, race, rules.schedule,
                                                 rules.limits, rules.base));
            double const left = rules.limits.total_budget - spent;
            x[p] = std::min(x[p], std::max(0.0, left));
            spent += x[p];
        }
        car = apply_expenditure(car, x, race, rules.schedule, rules.base);
    }
    return plan;
}

//---------------------------------------------------------------------------//
// RACE-LEVEL FORMULATION
//---------------------------------------------------------------------------//

struct RlfResult
{
    Spend spend;
    double objective = 0.0;  // predicted seconds saved
};

/*!
 * Single-race allocation: maximize predicted time saved subject to the
 * race budget and the remaining headroom of each parameter.
 */
inline RlfResult solve_rlf(Sensitivity const& s, CarState const& car,
                           int race, Rules const& rules, double budget)
{
    if (!(budget >= 0.0))
        throw std::invalid_argument("race budget must be >= 0");
    auto const conv = conversion_coefficients(rules.schedule, rules.base)
        [static_cast<std::size_t>(race)];
    auto const& l = rules.limits;
    std::array<double, 3> const room{
        std::max(0.0, l.aero_max - car.aero),
        std::max(0.0, l.horsepower_max - car.horsepower),
        std::max(0.0, car.dry_weight - l.weight_min)};

    lp::LpProblem p;
    p.objective = {s.aero * megadollar, s.horsepower * megadollar,
                   s.weight * megadollar};
    p.add({conv.aero * megadollar, 0, 0}, lp::Relation::less_equal, room[0],
          "aero headroom");
    p.add({0, conv.horsepower * megadollar, 0}, lp::Relation::less_equal,
          room[1], "power headroom");
    p.add({0, 0, conv.weight * megadollar}, lp::Relation::less_equal, room[2],
          "weight headroom");
    p.add({1, 1, 1}, lp::Relation::less_equal, budget / megadollar, "budget");

    auto const sol = lp::solve(p);
    if (sol.status != lp::LpStatus::optimal)
        throw std::runtime_error("race-level LP is "
                                 + std::string(lp::to_string(sol.status)));

    auto const exact = spend_headrooms(car, race, rules);
    RlfResult out;
    double total = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
    {
        double v = std::min(sol.x[k] * megadollar, exact[k]);
        v = std::min(v, std::max(0.0, budget - total));
        out.spend[k] = v;
        total += v;
        out.objective += s[k] * v;
    }
    return out;
}

//---------------------------------------------------------------------------//
// CHAMPIONSHIP-LEVEL FORMULATION
//---------------------------------------------------------------------------//

enum class ClfBudgetRow
{
    dollars,           // sum of B_i <= B
    impact_weighted,   // sum of I_i * B_i <= B, as printed
};

struct ChampionshipAllocation
{
    std::vector<double> budgets;  // dollars per race
    std::vector<double> alphas;
    std::vector<double> impacts;  // s per dollar
    double objective = 0.0;
};

/// Weights M - i + 1: the number of races that still benefit.
inline std::vector<double> default_alphas(int races)
{
    std::vector<double> a;
    for (int i = 0; i < races; ++i)
        a.push_back(static_cast<double>(races - i));
    return a;
}

/// Cost of pushing all three parameters from the base car to their limits.
inline std::vector<double> default_clf_caps(Rules const& rules)
{
    std::vector<double> caps;
    for (int i = 0; i < rules.schedule.races(); ++i)
    {
        auto const h = spend_headrooms(rules.base, i, rules);
        caps.push_back(h[0] + h[1] + h[2]);
    }
    return caps;
}

inline ChampionshipAllocation solve_clf(std::vector<double> const& impacts,
                                        std::vector<double> const& alphas,
                                        double total_budget,
                                        std::vector<double> const& caps,
                                        ClfBudgetRow form
                                        = ClfBudgetRow::dollars)
{
    std::size_t const m = impacts.size();
    if (alphas.size() != m || caps.size() != m)
        throw std::invalid_argument("impacts, alphas and caps differ in size");
    for (std::size_t i = 0; i < m; ++i)
    {
        if (!(alphas[i] > 0.0) || !(impacts[i] >= 0.0) || !(caps[i] >= 0.0))
            throw std::invalid_argument("alphas must be > 0, impacts and "
                                        "caps >= 0");
    }

    lp::LpProblem p;
    p.objective.resize(m);
    std::vector<double> budget_row(m);
    for (std::size_t i = 0; i < m; ++i)
    {
        p.objective[i] = alphas[i] * impacts[i] * megadollar;
        budget_row[i] = form == ClfBudgetRow::dollars
                            ? 1.0
                            : impacts[i] * megadollar;
    }
    double const budget_rhs = form == ClfBudgetRow::dollars
                                  ? total_budget / megadollar
                                  : total_budget;
    p.add(budget_row, lp::Relation::less_equal, budget_rhs, "budget");
    for (std::size_t i = 0; i < m; ++i)
    {
        std::vector<double> row(m, 0.0);
        row[i] = 1.0;
        p.add(row, lp::Relation::less_equal, caps[i] / megadollar,
              "cap " + std::to_string(i + 1));
    }
    auto const sol = lp::solve(p);
    if (sol.status != lp::LpStatus::optimal)
        throw std::runtime_error("championship-level LP is "
                                 + std::string(lp::to_string(sol.status)));

    ChampionshipAllocation out;
    out.alphas = alphas;
    out.impacts = impacts;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i)
    {
        double b = std::min(sol.x[i] * megadollar, caps[i]);
        if (form == ClfBudgetRow::dollars)
            b = std::min(b, std::max(0.0, total_budget - total));
        out.budgets.push_back(b);
        total += b;
        out.objective += alphas[i] * impacts[i] * b;
    }
    return out;
}

//---------------------------------------------------------------------------//
// COMPREHENSIVE FORMULATION
//---------------------------------------------------------------------------//

/*!
 * Seconds gained at each race by the whole plan so far. A dollar spent at
 * race k is valued at race i through the ratio of the two races' prices.
 */
inline std::vector<double> cumulative_gain(ExpenditurePlan const& plan,
                                           std::vector<Sensitivity> const& s,
                                           CostSchedule const& cs)
{
    std::size_t const m = plan.races.size();
    std::array<std::vector<double> const*, 3> const cost{
        &cs.aero, &cs.horsepower, &cs.weight};
    std::vector<double> g(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
    {
        for (std::size_t k = 0; k <= i; ++k)
        {
            for (std::size_t p = 0; p < 3; ++p)
                g[i] += (*cost[p])[i] / (*cost[p])[k] * s[i][p]
                        * plan.races[k][p];
        }
    }
    return g;
}

struct GainPattern
{
    double delta_g_ref = 0.5;  // s, required gain at the first race
    double lambda = 1.15;      // growth per race
};

inline std::vector<double> gain_floors(GainPattern const& g, int races)
{
    if (!(g.delta_g_ref > 0.0) || !(g.lambda >= 1.0))
        throw std::invalid_argument("gain pattern needs delta_g_ref > 0 and "
                                    "lambda >= 1");
    std::vector<double> f;
    double v = g.delta_g_ref;
    for (int i = 0; i < races; ++i)
    {
        f.push_back(v);
        v *= g.lambda;
    }
    return f;
}

class CmlfInfeasible : public std::runtime_error
{
  public:
    explicit CmlfInfeasible(int race)
        : std::runtime_error("gain floor of race " + std::to_string(race)
                             + " cannot be met within budget and limits")
        , race_(race)
    {
    }
    //! 1-based index of the first race whose floor breaks feasibility
    int race() const { return race_; }

  private:
    int race_;
};

struct CmlfResult
{
    ExpenditurePlan plan;
    double objective = 0.0;  // sum of cumulative gains, seconds
    std::vector<double> floors;
};

/// The comprehensive LP. Variables are (aero, power, weight) per race in M$.
inline lp::LpProblem cmlf_problem(std::vector<Sensitivity> const& s,
                                  Rules const& rules,
                                  std::vector<double> const& floors,
                                  std::size_t floor_rows)
{
    auto const& cs = rules.schedule;
    auto const& l = rules.limits;
    std::size_t const m = s.size();
    std::size_t const n = 3 * m;
    auto const conv = conversion_coefficients(cs, rules.base);
    std::array<std::vector<double> const*, 3> const cost{
        &cs.aero, &cs.horsepower, &cs.weight};

    lp::LpProblem p;
    p.objective.assign(n, 0.0);
    for (std::size_t k = 0; k < m; ++k)
    {
        for (std::size_t q = 0; q < 3; ++q)
        {
            double c = 0.0;
            for (std::size_t i = k; i < m; ++i)
                c += (*cost[q])[i] / (*cost[q])[k] * s[i][q];
            p.objective[3 * k + q] = c * megadollar;
        }
    }

    p.add(std::vector<double>(n, 1.0), lp::Relation::less_equal,
          l.total_budget / megadollar, "budget");
    std::array<double, 3> const room{l.aero_max - rules.base.aero,
                                     l.horsepower_max - rules.base.horsepower,
                                     rules.base.dry_weight - l.weight_min};
    std::array<char const*, 3> const label{"aero", "power", "weight"};
    for (std::size_t i = 0; i < m; ++i)
    {
        for (std::size_t q = 0; q < 3; ++q)
        {
            std::vector<double> row(n, 0.0);
            for (std::size_t k = 0; k <= i; ++k)
                row[3 * k + q] = conv[k][q] * megadollar;
            p.add(row, lp::Relation::less_equal, room[q],
                  std::string(label[q]) + " limit " + std::to_string(i + 1));
        }
    }
    for (std::size_t i = 0; i < floor_rows; ++i)
    {
        std::vector<double> row(n, 0.0);
        for (std::size_t q = 0; q < 3; ++q)
            row[3 * i + q] = s[i][q] * megadollar;
        p.add(row, lp::Relation::greater_equal, floors[i],
              "gain floor " + std::to_string(i + 1));
    }
    return p;
}

inline CmlfResult solve_cmlf(std::vector<Sensitivity> const& s,
                             Rules const& rules, GainPattern const& pattern = {})
{
    std::size_t const m = s.size();
    if (static_cast<int>(m) != rules.schedule.races())
        throw std::invalid_argument("one sensitivity triple per race needed");
    CmlfResult out;
    out.floors = gain_floors(pattern, static_cast<int>(m));

    auto sol = lp::solve(cmlf_problem(s, rules, out.floors, m));
    if (sol.status == lp::LpStatus::infeasible)
    {
        for (std::size_t k = 1; k <= m; ++k)
        {
            if (lp::solve(cmlf_problem(s, rules, out.floors, k)).status
                == lp::LpStatus::infeasible)
                throw CmlfInfeasible(static_cast<int>(k));
        }
        throw CmlfInfeasible(static_cast<int>(m));
    }
    if (sol.status != lp::LpStatus::optimal)
        throw std::runtime_error("comprehensive LP is "
                                 + std::string(lp::to_string(sol.status)));

    out.plan.races.resize(m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t q = 0; q < 3; ++q)
            out.plan.races[k][q] = sol.x[3 * k + q] * megadollar;
    out.plan = fit_to_rules(out.plan, rules);
    for (double g : cumulative_gain(out.plan, s, rules.schedule))
        out.objective += g;
    return out;
}

}  // namespace f1champ::strategy
