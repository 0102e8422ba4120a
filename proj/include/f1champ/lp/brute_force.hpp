#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "problem.hpp"

namespace f1champ::lp {

namespace detail {

struct Hyperplane
{
    std::vector<double> normal;
    double offset = 0.0;
};

/// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>>
solve_square(std::vector<std::vector<double>> a, std::vector<double> b)
{
    std::size_t const n = b.size();
    for (std::size_t col = 0; col < n; ++col)
    {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
        {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col]))
                piv = r;
        }
        if (std::fabs(a[piv][col]) < 1e-12)
            return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r)
        {
            double const f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c)
                a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;)
    {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c)
            s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Visit every k-subset of [0, n) in lexicographic order.
template<class F>
void for_each_subset(std::size_t n, std::size_t k, F&& visit)
{
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    for (;;)
    {
        visit(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

/*!
 * Best vertex of {x : rows hold, x >= 0, extra equalities hold} for the
 * given objective, found by intersecting every choice of hyperplanes.
 */
inline std::optional<std::pair<double, std::vector<double>>>
best_vertex(LpProblem const& p, std::vector<Hyperplane> const& extra_eq)
{
    std::size_t const n = p.num_vars();
    std::vector<Hyperplane> planes;
    for (auto const& row : p.constraints)
        planes.push_back({row.coefficients, row.rhs});
    for (std::size_t j = 0; j < n; ++j)
    {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        planes.push_back({e, 0.0});
    }

    std::optional<std::pair<double, std::vector<double>>> best;
    std::size_t const pick = n - extra_eq.size();
    for_each_subset(planes.size(), pick, [&](auto const& idx) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (auto i : idx)
        {
            a.push_back(planes[i].normal);
            b.push_back(planes[i].offset);
        }
        for (auto const& h : extra_eq)
        {
            a.push_back(h.normal);
            b.push_back(h.offset);
        }
        auto x = solve_square(std::move(a), std::move(b));
        if (!x)
            return;
        double scale = 1.0;
        for (double v : *x)
            scale = std::max(scale, std::fabs(v));
        if (max_violation(p, *x) > 1e-9 * scale)
            return;
        double const obj = objective_at(p, *x);
        if (!best || obj > best->first)
            best = std::make_pair(obj, *x);
    });
    return best;
}

}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Reference LP solver for tiny instances: enumerate every basic solution.
 *
 * With x >= 0 the feasible region has a vertex whenever it is non-empty, so
 * the best feasible vertex is optimal unless some non-negative recession
 * direction improves the objective. Those directions are enumerated the same
 * way over the cone slice sum(d) = 1.
 */
inline LpSolution brute_force_oracle(LpProblem const& problem)
{
    check_problem(problem);
    std::size_t const n = problem.num_vars();
    if (n > 8 || problem.constraints.size() > 12)
        throw std::invalid_argument("brute-force oracle is limited to 8 "
                                    "variables and 12 constraints");

    LpSolution sol;
    auto vertex = detail::best_vertex(problem, {});
    if (!vertex)
    {
        sol.status = LpStatus::infeasible;
        return sol;
    }

    LpProblem cone = problem;
    for (auto& row : cone.constraints)
        row.rhs = 0.0;
    auto ray = detail::best_vertex(
        cone, {detail::Hyperplane{std::vector<double>(n, 1.0), 1.0}});
    if (ray && ray->first > 1e-9)
    {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    sol.status = LpStatus::optimal;
    sol.objective_value = vertex->first;
    sol.x = std::move(vertex->second);
    return sol;
}

}  // namespace f1champ::lp
