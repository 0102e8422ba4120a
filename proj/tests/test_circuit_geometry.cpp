#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <f1champ/circuit_geometry.hpp>
#include <f1champ/circuit_io.hpp>

using namespace f1champ;
using std::numbers::pi;

namespace {

struct GeometricLine
{
    double radius;
    double absorbed;
};

// Independent construction: put the line's centre on the bisector at
// distance d behind the curve centre, make it touch the inner edge at the
// apex (radius = r_i + d) and find d by bisection so that the circle is also
// tangent to the outer edge of the adjoining straights. The absorbed length
// is then the distance along that outer edge from the curve boundary to the
// tangency point.
GeometricLine construct_line(double r_i, double w, double alpha)
{
    double const r_e = r_i + w;
    double const nx = std::sin(alpha / 2), ny = std::cos(alpha / 2);
    auto gap = [&](double d) {
        double const dist_to_edge = r_e - (0.0 * nx + (-d) * ny);
        return dist_to_edge - (r_i + d);
    };
    double lo = 0.0, hi = 1.0;
    while (gap(hi) > 0)
        hi *= 2;
    for (int i = 0; i < 200; ++i)
    {
        double const mid = 0.5 * (lo + hi);
        (gap(mid) > 0 ? lo : hi) = mid;
    }
    double const d = 0.5 * (lo + hi);
    double const radius = r_i + d;
    // Tangency point minus boundary point, projected on the edge direction.
    double const tx = ny, ty = -nx;
    double const px = radius * nx - r_e * nx;
    double const py = -d + radius * ny - r_e * ny;
    return {radius, px * tx + py * ty};
}

Circuit make_circuit(std::vector<CircuitElement> elems, double width = 15.0)
{
    Circuit c;
    c.name = "test";
    c.track_width = width;
    c.elements = std::move(elems);
    c.laps = 10;
    c.max_speed = 90.0;
    c.pit_penalty = 20.0;
    c.fuel_per_lap = 1.3;
    return c;
}

CurveElement quarter() { return {30.0, pi / 2, 40.0}; }

}  // namespace

TEST(Trajectory, HalfTurnIsOuterEdge)
{
    CurveElement c{50.0, pi, 40.0};
    EXPECT_DOUBLE_EQ(max_trajectory_radius(c, 15.0), 65.0);
    EXPECT_DOUBLE_EQ(absorbed_straight_length(c, 15.0), 15.0);
}

TEST(Trajectory, QuarterTurnMatchesTangencyConstruction)
{
    auto const oracle = construct_line(30.0, 15.0, pi / 2);
    EXPECT_NEAR(oracle.radius, 81.21320343559643, 1e-9);
    EXPECT_NEAR(oracle.absorbed, 36.21320343559643, 1e-9);

    EXPECT_NEAR(max_trajectory_radius(quarter(), 15.0), 81.21320343559643,
                1e-9);
    EXPECT_NEAR(absorbed_straight_length(quarter(), 15.0), 36.21320343559643,
                1e-9);
}

TEST(Trajectory, AgreesWithConstructionOnRandomCurves)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> radius(5, 400), width(5, 25),
        angle(0.05, pi - 0.05);
    for (int i = 0; i < 200; ++i)
    {
        double const r = radius(rng), w = width(rng), a = angle(rng);
        auto const oracle = construct_line(r, w, a);
        CurveElement c{r, a, 30.0};
        EXPECT_NEAR(max_trajectory_radius(c, w), oracle.radius,
                    1e-8 * oracle.radius);
        EXPECT_NEAR(absorbed_straight_length(c, w), oracle.absorbed,
                    1e-8 * oracle.radius);
    }
}

TEST(Trajectory, ContinuousAtHalfTurn)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> radius(5, 400), width(5, 25);
    for (int i = 0; i < 1000; ++i)
    {
        double const r = radius(rng), w = width(rng), r_e = r + w;
        double const at_pi = max_trajectory_radius({r, pi, 1.0}, w);
        // dr/dalpha is -w/2 at the half turn, so the gap shrinks linearly.
        for (double eps : {1e-6, 1e-9, 1e-12})
        {
            double const below = max_trajectory_radius({r, pi - eps, 1.0}, w);
            EXPECT_LE(std::fabs(below - at_pi), 0.5 * w * eps * 1.001
                                                    + 1e-13 * r_e);
        }
        double const last = max_trajectory_radius(
            {r, std::nextafter(pi, 0.0), 1.0}, w);
        EXPECT_LE(std::fabs(last - at_pi), 1e-9 * r_e);
    }
}

TEST(Trajectory, RadiusStrictlyDecreasingAndDominatesOuterEdge)
{
    for (double r : {10.0, 50.0, 300.0})
    {
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k < 1000; ++k)
        {
            double const a = pi * k / 1000.0;
            double const rm = max_trajectory_radius({r, a, 1.0}, 15.0);
            EXPECT_LT(rm, prev);
            EXPECT_GE(rm, r + 15.0);
            prev = rm;
        }
    }
}

TEST(Trajectory, AbsorptionNonNegativeAndExactBeyondHalfTurn)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> radius(1, 500), width(1, 30),
        angle(1e-3, 2 * pi);
    for (int i = 0; i < 1000; ++i)
    {
        double const r = radius(rng), w = width(rng), a = angle(rng);
        double const ds = absorbed_straight_length({r, a, 1.0}, w);
        EXPECT_GE(ds, 0.0);
        if (a >= pi)
        {
            EXPECT_EQ(ds, w);
        }
    }
}

TEST(Trajectory, GentleCurvesSwallowLongStraights)
{
    double const ds_small = absorbed_straight_length({30.0, 1e-3, 1.0}, 15.0);
    double const ds_tiny = absorbed_straight_length({30.0, 1e-5, 1.0}, 15.0);
    EXPECT_GT(ds_small, 1e4);
    EXPECT_GT(ds_tiny, 50 * ds_small);
}

TEST(Trajectory, RejectsBadInput)
{
    EXPECT_THROW(max_trajectory_radius({30.0, 0.0, 1.0}, 15.0), GeometryError);
    EXPECT_THROW(max_trajectory_radius({30.0, -1.0, 1.0}, 15.0),
                 GeometryError);
    EXPECT_THROW(max_trajectory_radius({std::nan(""), 1.0, 1.0}, 15.0),
                 GeometryError);
    EXPECT_THROW(absorbed_straight_length({30.0, 1.0, 1.0}, INFINITY),
                 GeometryError);
}

TEST(EffectiveLengths, StraightBetweenTwoCurves)
{
    auto c = make_circuit({quarter(), StraightElement{800.0}, quarter(),
                           StraightElement{2000.0}});
    auto eff = effective_lengths(c);
    ASSERT_EQ(eff.size(), 2u);
    EXPECT_NEAR(eff[0], 727.5735931288071, 1e-9);
}

TEST(EffectiveLengths, ClampsOverAbsorption)
{
    auto c = make_circuit({quarter(), StraightElement{50.0}, quarter(),
                           StraightElement{2000.0}});
    EXPECT_EQ(effective_lengths(c)[0], 0.0);
}

TEST(EffectiveLengths, SingleCurveAbsorbsBothEnds)
{
    auto c = make_circuit({StraightElement{1000.0}, CurveElement{50, pi, 30}});
    auto eff = effective_lengths(c);
    ASSERT_EQ(eff.size(), 1u);
    EXPECT_DOUBLE_EQ(eff[0], 1000.0 - 2 * 15.0);
}

TEST(EffectiveLengths, MergesStraightsAcrossTheStartLine)
{
    auto c = make_circuit({StraightElement{100.0}, CurveElement{50, pi, 30},
                           StraightElement{200.0}, StraightElement{300.0},
                           CurveElement{50, pi, 30}});
    auto layout = build_layout(c);
    ASSERT_EQ(layout.sections.size(), 2u);
    EXPECT_DOUBLE_EQ(layout.sections[0].straight_length, 500.0);
    EXPECT_DOUBLE_EQ(layout.sections[1].straight_length, 100.0);
    EXPECT_DOUBLE_EQ(layout.sections[0].straight_effective, 470.0);
    EXPECT_DOUBLE_EQ(layout.sections[1].straight_effective, 70.0);
}

TEST(EffectiveLengths, BackToBackCurvesShareAZeroStraight)
{
    auto c = make_circuit({CurveElement{50, pi, 30}, CurveElement{50, pi, 30},
                           StraightElement{500.0}});
    auto layout = build_layout(c);
    ASSERT_EQ(layout.sections.size(), 2u);
    EXPECT_EQ(layout.sections[0].straight_length, 0.0);
    EXPECT_EQ(layout.sections[0].straight_effective, 0.0);
    EXPECT_DOUBLE_EQ(layout.sections[1].straight_effective, 470.0);
}

TEST(EffectiveLengths, ZeroStraightInsertionLeavesLapLengthUnchanged)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> len(0, 900), radius(10, 300),
        angle(0.2, 3.5);
    std::uniform_int_distribution<int> count(2, 14), coin(0, 1);
    for (int trial = 0; trial < 300; ++trial)
    {
        std::vector<CircuitElement> elems;
        int const n = count(rng);
        for (int i = 0; i < n; ++i)
        {
            if (coin(rng))
                elems.emplace_back(StraightElement{len(rng)});
            else
                elems.emplace_back(
                    CurveElement{radius(rng), angle(rng), 30.0});
        }
        elems.emplace_back(CurveElement{radius(rng), angle(rng), 30.0});
        auto const base = build_layout(make_circuit(elems)).driven_length();

        std::uniform_int_distribution<std::size_t> pos(0, elems.size());
        auto more = elems;
        more.insert(more.begin() + static_cast<std::ptrdiff_t>(pos(rng)),
                    StraightElement{0.0});
        auto const with_zero = build_layout(make_circuit(more)).driven_length();
        EXPECT_NEAR(with_zero, base, 1e-9 * base);
    }
}

TEST(CircuitFile, LoadsShippedSepang)
{
    auto c = load_circuit(std::string(F1CHAMP_DATA_DIR)
                          + "/circuits/sepang.json");
    EXPECT_EQ(c.laps, 56);
    EXPECT_TRUE(circuit_problems(c).empty());
    EXPECT_GT(c.elements.size(), 10u);
}

TEST(CircuitFile, NamesTheBadElement)
{
    std::string const text = R"({
      "name": "x", "track_width_m": 15, "laps": 3, "max_speed_mps": 80,
      "pit_penalty_s": 20, "fuel_per_lap_kg": 2, "speed_scale": 1,
      "elements": [
        {"kind": "straight", "length_m": 500},
        {"kind": "curve", "inner_radius_m": -40, "angle_rad": 1.0,
         "ref_speed_mps": 30}
      ]})";
    try
    {
        load_circuit_text(text);
        FAIL() << "expected InputError";
    }
    catch (InputError const& e)
    {
        EXPECT_NE(std::string(e.what()).find("elements[1]"),
                  std::string::npos);
        EXPECT_NE(std::string(e.what()).find("inner_radius_m"),
                  std::string::npos);
    }
}

TEST(CircuitFile, ReportsEveryViolation)
{
    std::string const text = R"({
      "name": "x", "track_width_m": -1, "laps": 0, "max_speed_mps": 80,
      "pit_penalty_s": 20, "fuel_per_lap_kg": 2, "elements": []})";
    try
    {
        load_circuit_text(text);
        FAIL() << "expected InputError";
    }
    catch (InputError const& e)
    {
        EXPECT_EQ(e.problems().size(), 3u);
    }
}

TEST(CircuitFile, ParseErrorCarriesLine)
{
    std::string const text = "{\n  \"name\": \"x\",\n  \"laps\": ,\n}";
    try
    {
        load_circuit_text(text, "bad.json");
        FAIL() << "expected InputError";
    }
    catch (InputError const& e)
    {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
            << e.what();
    }
}

TEST(CircuitFile, MissingFieldIsNamed)
{
    std::string const text = R"({"name": "x", "track_width_m": 15})";
    try
    {
        load_circuit_text(text, "c.json");
        FAIL() << "expected InputError";
    }
    catch (InputError const& e)
    {
        EXPECT_NE(std::string(e.what()).find("laps"), std::string::npos);
    }
}

TEST(CircuitFile, RoundTrips)
{
    auto c = load_circuit(std::string(F1CHAMP_DATA_DIR)
                          + "/circuits/monza.json");
    auto back = circuit_from_json(circuit_to_json(c), "mem");
    EXPECT_EQ(build_layout(back).driven_length(),
              build_layout(c).driven_length());
    EXPECT_EQ(back.speed_scale, c.speed_scale);
}
