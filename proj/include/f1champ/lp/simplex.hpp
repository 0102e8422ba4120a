#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "problem.hpp"

namespace f1champ::lp {

namespace detail {

inline constexpr double pivot_tol = 1e-9;

//---------------------------------------------------------------------------//
/*!
 * Dense simplex tableau in maximization form.
 *
 * Columns are the structural variables, then one slack/surplus column per
 * inequality, then one artificial column per >= or = row. Each row keeps the
 * column that held its initial unit vector so shadow prices can be read off
 * the final reduced costs.
 */
class Tableau
{
  public:
    explicit Tableau(LpProblem const& p)
        : n_(p.num_vars()), m_(p.constraints.size())
    {
        std::size_t slacks = 0, artificials = 0;
        for (auto const& row : p.constraints)
        {
            Relation rel = normalized_relation(row);
            if (rel != Relation::equal)
                ++slacks;
            if (rel != Relation::less_equal)
                ++artificials;
        }
        art_begin_ = n_ + slacks;
        cols_ = art_begin_ + artificials;
        a_.assign(m_ * (cols_ + 1), 0.0);
        basis_.resize(m_);
        unit_col_.resize(m_);
        sign_.resize(m_);

        std::size_t next_slack = n_, next_art = art_begin_;
        for (std::size_t i = 0; i < m_; ++i)
        {
            auto const& row = p.constraints[i];
            double const s = row.rhs < 0.0 ? -1.0 : 1.0;
            sign_[i] = s;
            for (std::size_t j = 0; j < n_; ++j)
                at(i, j) = s * row.coefficients[j];
            at(i, cols_) = s * row.rhs;

            switch (normalized_relation(row))
            {
                case Relation::less_equal:
                    at(i, next_slack) = 1.0;
                    unit_col_[i] = next_slack++;
                    break;
                case Relation::greater_equal:
                    at(i, next_slack++) = -1.0;
                    at(i, next_art) = 1.0;
                    unit_col_[i] = next_art++;
                    break;
                case Relation::equal:
                    at(i, next_art) = 1.0;
                    unit_col_[i] = next_art++;
                    break;
            }
            basis_[i] = unit_col_[i];
        }
        cost_.assign(cols_, 0.0);
        reduced_.assign(cols_, 0.0);
    }

    bool has_artificials() const { return art_begin_ < cols_; }

    /// Phase one: maximize minus the sum of artificials. True if feasible.
    bool phase_one()
    {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (std::size_t j = art_begin_; j < cols_; ++j)
            cost_[j] = -1.0;
        price();
        run(cols_);

        double scale = 1.0;
        for (std::size_t i = 0; i < m_; ++i)
            scale = std::max(scale, std::fabs(at(i, cols_)));
        if (value_ < -pivot_tol * scale)
            return false;

        // Artificials still basic sit at zero; swap them for real columns
        for (std::size_t i = 0; i < m_; ++i)
        {
            if (basis_[i] < art_begin_)
                continue;
            for (std::size_t j = 0; j < art_begin_; ++j)
            {
                if (std::fabs(at(i, j)) > pivot_tol)
                {
                    pivot(i, j);
                    break;
                }
            }
            // No candidate: the row is redundant and stays zero forever
        }
        return true;
    }

    /// Phase two on the real objective. False if unbounded.
    bool phase_two(std::vector<double> const& objective)
    {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        std::copy(objective.begin(), objective.end(), cost_.begin());
        price();
        return run(art_begin_);
    }

    std::vector<double> primal() const
    {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
        {
            if (basis_[i] < n_)
                x[basis_[i]] = std::max(0.0, at(i, cols_));
        }
        return x;
    }

    /// Shadow prices in terms of the caller's (un-negated) rows.
    std::vector<double> duals() const
    {
        std::vector<double> y(m_);
        for (std::size_t i = 0; i < m_; ++i)
            y[i] = -sign_[i] * reduced_[unit_col_[i]];
        return y;
    }

  private:
    static Relation normalized_relation(Constraint const& row)
    {
        if (row.rhs >= 0.0 || row.relation == Relation::equal)
            return row.relation;
        return row.relation == Relation::less_equal ? Relation::greater_equal
                                                    : Relation::less_equal;
    }

    double& at(std::size_t i, std::size_t j) { return a_[i * (cols_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const
    {
        return a_[i * (cols_ + 1) + j];
    }

    void price()
    {
        for (std::size_t j = 0; j < cols_; ++j)
        {
            double d = cost_[j];
            for (std::size_t i = 0; i < m_; ++i)
                d -= cost_[basis_[i]] * at(i, j);
            reduced_[j] = d;
        }
        value_ = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            value_ += cost_[basis_[i]] * at(i, cols_);
    }

    // Bland's rule: lowest eligible entering index, lowest basic index on
    // ratio ties. Columns at or beyond entering_limit never enter.
    bool run(std::size_t entering_limit)
    {
        for (;;)
        {
            std::size_t enter = entering_limit;
            for (std::size_t j = 0; j < entering_limit; ++j)
            {
                if (reduced_[j] > pivot_tol)
                {
                    enter = j;
                    break;
                }
            }
            if (enter == entering_limit)
                return true;

            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i)
            {
                double const aij = at(i, enter);
                if (aij <= pivot_tol)
                    continue;
                double const ratio = at(i, cols_) / aij;
                if (leave == m_ || ratio < best - pivot_tol)
                {
                    best = ratio;
                    leave = i;
                }
                else if (ratio <= best + pivot_tol
                         && basis_[i] < basis_[leave])
                {
                    leave = i;
                }
            }
            if (leave == m_)
                return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c)
    {
        double const p = at(r, c);
        for (std::size_t j = 0; j <= cols_; ++j)
            at(r, j) /= p;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i < m_; ++i)
        {
            if (i == r)
                continue;
            double const f = at(i, c);
            if (f == 0.0)
                continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        double const d = reduced_[c];
        if (d != 0.0)
        {
            for (std::size_t j = 0; j < cols_; ++j)
                reduced_[j] -= d * at(r, j);
            reduced_[c] = 0.0;
            value_ += d * at(r, cols_);
        }
        basis_[r] = c;
    }

    std::size_t n_;
    std::size_t m_;
    std::size_t cols_ = 0;
    std::size_t art_begin_ = 0;
    std::vector<double> a_;  // m_ x (cols_ + 1), rhs in the last column
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> unit_col_;
    std::vector<double> sign_;
    std::vector<double> cost_;
    std::vector<double> reduced_;
    double value_ = 0.0;
};

}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Solve an LP with the two-phase dense simplex method.
 *
 * Bland's rule is always used, so the pivot sequence (and hence the vertex
 * returned among ties) is deterministic.
 */
inline LpSolution solve(LpProblem const& problem)
{
    check_problem(problem);

    detail::Tableau tab(problem);
    LpSolution sol;
    if (tab.has_artificials() && !tab.phase_one())
    {
        sol.status = LpStatus::infeasible;
        return sol;
    }
    if (!tab.phase_two(problem.objective))
    {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    sol.status = LpStatus::optimal;
    sol.x = tab.primal();
    sol.objective_value = objective_at(problem, sol.x);
    sol.duals = tab.duals();

    double scale = 1.0;
    for (auto const& row : problem.constraints)
        scale = std::max(scale, std::fabs(row.rhs));
    if (max_violation(problem, sol.x) > 1e-7 * scale)
        throw std::runtime_error("simplex lost feasibility (ill-conditioned)");
    return sol;
}

}  // namespace f1champ::lp
