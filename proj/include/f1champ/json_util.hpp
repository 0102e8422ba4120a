#pragma once

#include <cstddef>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace f1champ {

using json = nlohmann::json;

/// Malformed or invalid input file. Carries every problem found.
class InputError : public std::runtime_error
{
  public:
    explicit InputError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems))
    {
    }
    explicit InputError(std::string problem)
        : InputError(std::vector<std::string>{std::move(problem)})
    {
    }

    std::vector<std::string> const& problems() const { return problems_; }

  private:
    static std::string join(std::vector<std::string> const& p)
    {
        std::string out;
        for (std::size_t i = 0; i < p.size(); ++i)
        {
            if (i)
                out += "; ";
            out += p[i];
        }
        return out;
    }

    std::vector<std::string> problems_;
};

namespace detail {

inline std::string line_col(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            col = 1;
        }
        else
        {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column "
           + std::to_string(col);
}

}  // namespace detail

inline json parse_json_text(std::string const& text, std::string_view source)
{
    try
    {
        return json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        // nlohmann reports the byte just past the offending token
        std::size_t const at = e.byte > 0 ? e.byte - 1 : 0;
        throw InputError(std::string(source) + ": parse error at "
                         + detail::line_col(text, at));
    }
}

inline std::string read_text_file(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
}

inline json read_json_file(std::string const& path)
{
    return parse_json_text(read_text_file(path), path);
}

inline void write_json_file(std::string const& path, json const& j)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write " + path);
    out << j.dump(2) << '\n';
}

/// Typed field lookup that names the field path on failure.
inline double number_field(json const& j, char const* key,
                           std::string const& where)
{
    auto it = j.find(key);
    if (it == j.end())
        throw InputError(where + "." + key + ": missing");
    if (!it->is_number())
        throw InputError(where + "." + key + ": expected a number");
    return it->get<double>();
}

inline double number_field_or(json const& j, char const* key,
                              std::string const& where, double fallback)
{
    return j.contains(key) ? number_field(j, key, where) : fallback;
}

inline int int_field(json const& j, char const* key, std::string const& where)
{
    auto it = j.find(key);
    if (it == j.end())
        throw InputError(where + "." + key + ": missing");
    if (!it->is_number_integer())
        throw InputError(where + "." + key + ": expected an integer");
    return it->get<int>();
}

inline std::string string_field(json const& j, char const* key,
                                std::string const& where)
{
    auto it = j.find(key);
    if (it == j.end())
        throw InputError(where + "." + key + ": missing");
    if (!it->is_string())
        throw InputError(where + "." + key + ": expected a string");
    return it->get<std::string>();
}

inline json const& array_field(json const& j, char const* key,
                               std::string const& where)
{
    auto it = j.find(key);
    if (it == j.end())
        throw InputError(where + "." + key + ": missing");
    if (!it->is_array())
        throw InputError(where + "." + key + ": expected an array");
    return *it;
}

}  // namespace f1champ
