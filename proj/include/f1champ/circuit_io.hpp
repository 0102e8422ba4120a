#pragma once

#include <string>

#include "circuit_geometry.hpp"
#include "json_util.hpp"

namespace f1champ {

inline Circuit circuit_from_json(json const& j, std::string const& source)
{
    if (!j.is_object())
        throw InputError(source + ": expected a top-level object");

    Circuit c;
    c.name = string_field(j, "name", source);
    c.track_width = number_field(j, "track_width_m", source);
    c.laps = int_field(j, "laps", source);
    c.max_speed = number_field(j, "max_speed_mps", source);
    c.pit_penalty = number_field(j, "pit_penalty_s", source);
    c.fuel_per_lap = number_field(j, "fuel_per_lap_kg", source);
    c.speed_scale = number_field_or(j, "speed_scale", source, 1.0);

    auto const& elems = array_field(j, "elements", source);
    for (std::size_t i = 0; i < elems.size(); ++i)
    {
        auto const& e = elems[i];
        std::string const where = source + ".elements[" + std::to_string(i)
                                  + "]";
        auto const kind = string_field(e, "kind", where);
        if (kind == "straight")
        {
            c.elements.emplace_back(
                StraightElement{number_field(e, "length_m", where)});
        }
        else if (kind == "curve")
        {
            CurveElement cv;
            cv.inner_radius = number_field(e, "inner_radius_m", where);
            cv.angle = number_field(e, "angle_rad", where);
            cv.ref_speed = number_field(e, "ref_speed_mps", where);
            c.elements.emplace_back(cv);
        }
        else
        {
            throw InputError(where + ".kind: unknown element kind '" + kind
                             + "'");
        }
    }

    auto problems = circuit_problems(c);
    if (!problems.empty())
    {
        for (auto& p : problems)
            p = source + ": " + p;
        throw InputError(std::move(problems));
    }
    return c;
}

inline json circuit_to_json(Circuit const& c)
{
    json elems = json::array();
    for (auto const& e : c.elements)
    {
        if (auto const* s = std::get_if<StraightElement>(&e))
        {
            elems.push_back({{"kind", "straight"}, {"length_m", s->length}});
        }
        else
        {
            auto const& cv = std::get<CurveElement>(e);
            elems.push_back({{"kind", "curve"},
                             {"inner_radius_m", cv.inner_radius},
                             {"angle_rad", cv.angle},
                             {"ref_speed_mps", cv.ref_speed}});
        }
    }
    return {{"name", c.name},
            {"track_width_m", c.track_width},
            {"laps", c.laps},
            {"max_speed_mps", c.max_speed},
            {"pit_penalty_s", c.pit_penalty},
            {"fuel_per_lap_kg", c.fuel_per_lap},
            {"speed_scale", c.speed_scale},
            {"elements", std::move(elems)}};
}

inline Circuit load_circuit(std::string const& path)
{
    return circuit_from_json(read_json_file(path), path);
}

inline Circuit load_circuit_text(std::string const& text,
                                 std::string const& source = "<circuit>")
{
    return circuit_from_json(parse_json_text(text, source), source);
}

inline void save_circuit(std::string const& path, Circuit const& c)
{
    write_json_file(path, circuit_to_json(c));
}

}  // namespace f1champ
