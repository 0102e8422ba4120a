#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace f1champ {

struct CurveElement
{
    double inner_radius = 0.0;  // m
    double angle = 0.0;         // rad
    double ref_speed = 0.0;     // m/s, limit for the baseline car
};

struct StraightElement
{
    double length = 0.0;  // m, nominal (before curve absorption)
};

using CircuitElement = std::variant<StraightElement, CurveElement>;

struct Circuit
{
    std::string name;
    double track_width = 0.0;  // m
    std::vector<CircuitElement> elements;
    int laps = 0;
    double max_speed = 0.0;     // m/s
    double pit_penalty = 0.0;   // s per stop
    double fuel_per_lap = 0.0;  // kg
    double speed_scale = 1.0;
};

/// Fastest (maximum radius) line through a single curve.
struct TrajectorySolution
{
    double max_radius = 0.0;
    double absorbed_length = 0.0;  // straight length consumed on each side
    double arc_length = 0.0;
};

class GeometryError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void check_curve(CurveElement const& curve, double track_width)
{
    if (!std::isfinite(curve.inner_radius) || !std::isfinite(curve.angle)
        || !std::isfinite(track_width))
    {
        throw GeometryError("curve geometry must be finite");
    }
    if (curve.angle <= 0.0)
        throw GeometryError("curve angle must be positive");
    if (curve.inner_radius <= 0.0)
        throw GeometryError("curve inner radius must be positive");
    if (track_width <= 0.0)
        throw GeometryError("track width must be positive");
}

}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Radius of the widest circular line that enters and leaves the curve on the
 * outer edge and touches the inner edge at the apex.
 *
 * For rotations of half a turn or more the widest line is the outer edge
 * itself.
 */
inline double max_trajectory_radius(CurveElement const& curve,
                                    double track_width)
{
    detail::check_curve(curve, track_width);
    double const outer = curve.inner_radius + track_width;
    if (curve.angle >= std::numbers::pi)
        return outer;
    double const c = std::cos(curve.angle / 2);
    return (outer - curve.inner_radius * c) / (1.0 - c);
}

/// Length of straight track on either side of the curve that the widest line
/// swallows. Equal to the track width for half turns and beyond.
inline double absorbed_straight_length(CurveElement const& curve,
                                       double track_width)
{
    detail::check_curve(curve, track_width);
    if (curve.angle >= std::numbers::pi)
        return track_width;
    double const r = max_trajectory_radius(curve, track_width);
    return (r - curve.inner_radius) * std::sin(curve.angle / 2);
}

inline TrajectorySolution trajectory(CurveElement const& curve,
                                     double track_width)
{
    TrajectorySolution s;
    s.max_radius = max_trajectory_radius(curve, track_width);
    s.absorbed_length = absorbed_straight_length(curve, track_width);
    s.arc_length = s.max_radius * curve.angle;
    return s;
}

//---------------------------------------------------------------------------//
// LAP LAYOUT
//---------------------------------------------------------------------------//

/// A curve together with the (merged) straight that follows it.
struct TrackSection
{
    CurveElement curve;
    TrajectorySolution line;
    double straight_length = 0.0;
    double straight_effective = 0.0;
};

/*!
 * Normalized cyclic layout: every curve followed by exactly one straight.
 *
 * Runs of straights are merged, back-to-back curves get a zero-length
 * straight between them. Each straight loses the absorbed length of the curve
 * before it and of the curve after it, clamped at zero.
 */
struct LapLayout
{
    std::vector<TrackSection> sections;

    double driven_length() const
    {
        double total = 0.0;
        for (auto const& s : sections)
            total += s.line.arc_length + s.straight_effective;
        return total;
    }
};

inline LapLayout build_layout(Circuit const& circuit)
{
    auto const& elems = circuit.elements;
    std::size_t const n = elems.size();
    std::size_t first_curve = n;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (std::holds_alternative<CurveElement>(elems[i]))
        {
            first_curve = i;
            break;
        }
    }
    if (first_curve == n)
        throw GeometryError("circuit has no curves");

    LapLayout layout;
    for (std::size_t k = 0; k < n; ++k)
    {
        auto const& e = elems[(first_curve + k) % n];
        if (auto const* curve = std::get_if<CurveElement>(&e))
        {
            TrackSection section;
            section.curve = *curve;
            section.line = trajectory(*curve, circuit.track_width);
            layout.sections.push_back(section);
        }
        else
        {
            layout.sections.back().straight_length
                += std::get<StraightElement>(e).length;
        }
    }

    auto& secs = layout.sections;
    for (std::size_t k = 0; k < secs.size(); ++k)
    {
        auto const& next = secs[(k + 1) % secs.size()];
        double const eff = secs[k].straight_length
                           - secs[k].line.absorbed_length
                           - next.line.absorbed_length;
        secs[k].straight_effective = std::max(0.0, eff);
    }
    return layout;
}

/// Effective length of each merged straight, in layout order (the straight
/// following the first curve of the element list comes first).
inline std::vector<double> effective_lengths(Circuit const& circuit)
{
    auto const layout = build_layout(circuit);
    std::vector<double> out;
    out.reserve(layout.sections.size());
    for (auto const& s : layout.sections)
        out.push_back(s.straight_effective);
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Check every circuit invariant and describe each failure.
 *
 * An empty result means the circuit is valid.
 */
inline std::vector<std::string> circuit_problems(Circuit const& c)
{
    std::vector<std::string> problems;
    auto bad = [](double v) { return !std::isfinite(v); };

    if (bad(c.track_width) || c.track_width <= 0.0)
        problems.push_back("track_width_m must be positive");
    if (c.laps < 1)
        problems.push_back("laps must be at least 1");
    if (bad(c.max_speed) || c.max_speed <= 0.0)
        problems.push_back("max_speed_mps must be positive");
    if (bad(c.pit_penalty) || c.pit_penalty < 0.0)
        problems.push_back("pit_penalty_s must be non-negative");
    if (bad(c.fuel_per_lap) || c.fuel_per_lap <= 0.0)
        problems.push_back("fuel_per_lap_kg must be positive");
    if (bad(c.speed_scale) || c.speed_scale <= 0.0)
        problems.push_back("speed_scale must be positive");

    if (c.elements.empty())
        problems.push_back("elements: circuit has no elements");

    int curves = 0;
    int straights = 0;
    for (std::size_t i = 0; i < c.elements.size(); ++i)
    {
        std::string const where = "elements[" + std::to_string(i) + "]";
        if (auto const* s = std::get_if<StraightElement>(&c.elements[i]))
        {
            ++straights;
            if (bad(s->length) || s->length < 0.0)
                problems.push_back(where + ": length_m must be >= 0");
        }
        else
        {
            ++curves;
            auto const& cv = std::get<CurveElement>(c.elements[i]);
            if (bad(cv.inner_radius) || cv.inner_radius <= 0.0)
                problems.push_back(where + ": inner_radius_m must be > 0");
            if (bad(cv.angle) || cv.angle <= 0.0)
                problems.push_back(where + ": angle_rad must be > 0");
            if (bad(cv.ref_speed) || cv.ref_speed <= 0.0)
                problems.push_back(where + ": ref_speed_mps must be > 0");
        }
    }
    if (!c.elements.empty() && curves == 0)
        problems.push_back("elements: at least one curve is required");
    if (!c.elements.empty() && straights == 0)
        problems.push_back("elements: at least one straight is required");
    return problems;
}

}  // namespace f1champ
