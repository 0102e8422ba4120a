#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace f1champ::lp {

enum class Relation
{
    less_equal,
    greater_equal,
    equal,
};

struct Constraint
{
    std::vector<double> coefficients;
    Relation relation = Relation::less_equal;
    double rhs = 0.0;
    std::string label;
};

/// maximize objective . x subject to the constraints and x >= 0.
struct LpProblem
{
    std::vector<double> objective;
    std::vector<Constraint> constraints;

    std::size_t num_vars() const { return objective.size(); }

    void add(std::vector<double> coefficients, Relation rel, double rhs,
             std::string label = {})
    {
        constraints.push_back(
            {std::move(coefficients), rel, rhs, std::move(label)});
    }
};

enum class LpStatus
{
    optimal,
    infeasible,
    unbounded,
};

inline char const* to_string(LpStatus s)
{
    switch (s)
    {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

struct LpSolution
{
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
    //! Shadow price of each constraint (empty unless optimal)
    std::vector<double> duals;
};

inline void check_problem(LpProblem const& p)
{
    std::size_t const n = p.num_vars();
    if (n == 0)
        throw std::invalid_argument("LP has no variables");
    for (double c : p.objective)
    {
        if (!std::isfinite(c))
            throw std::invalid_argument("LP objective is not finite");
    }
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
    {
        auto const& row = p.constraints[i];
        if (row.coefficients.size() != n)
        {
            throw std::invalid_argument("LP row " + std::to_string(i)
                                        + " has the wrong width");
        }
        bool finite = std::isfinite(row.rhs);
        for (double a : row.coefficients)
            finite = finite && std::isfinite(a);
        if (!finite)
        {
            throw std::invalid_argument("LP row " + std::to_string(i)
                                        + " is not finite");
        }
    }
}

inline double row_activity(Constraint const& row, std::vector<double> const& x)
{
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        s += row.coefficients[j] * x[j];
    return s;
}

/// Largest violation of any constraint or sign bound by \c x.
inline double max_violation(LpProblem const& p, std::vector<double> const& x)
{
    double worst = 0.0;
    for (double v : x)
        worst = std::max(worst, -v);
    for (auto const& row : p.constraints)
    {
        double const lhs = row_activity(row, x);
        double v = 0.0;
        switch (row.relation)
        {
            case Relation::less_equal: v = lhs - row.rhs; break;
            case Relation::greater_equal: v = row.rhs - lhs; break;
            case Relation::equal: v = std::fabs(lhs - row.rhs); break;
        }
        worst = std::max(worst, v);
    }
    return worst;
}

inline double objective_at(LpProblem const& p, std::vector<double> const& x)
{
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        s += p.objective[j] * x[j];
    return s;
}

/// Human-readable algebraic dump; for debugging only.
inline std::string to_text(LpProblem const& p)
{
    std::ostringstream os;
    os.precision(10);
    auto terms = [&os](std::vector<double> const& c) {
        bool first = true;
        for (std::size_t j = 0; j < c.size(); ++j)
        {
            if (c[j] == 0.0)
                continue;
            if (!first)
                os << (c[j] < 0 ? " - " : " + ");
            else if (c[j] < 0)
                os << "-";
            os << std::fabs(c[j]) << " x" << (j + 1);
            first = false;
        }
        if (first)
            os << "0";
    };
    os << "max: ";
    terms(p.objective);
    os << '\n';
    for (std::size_t i = 0; i < p.constraints.size(); ++i)
    {
        auto const& row = p.constraints[i];
        os << (row.label.empty() ? "c" + std::to_string(i + 1) : row.label)
           << ": ";
        terms(row.coefficients);
        switch (row.relation)
        {
            case Relation::less_equal: os << " <= "; break;
            case Relation::greater_equal: os << " >= "; break;
            case Relation::equal: os << " = "; break;
        }
        os << row.rhs << '\n';
    }
    return os.str();
}

}  // namespace f1champ::lp
