#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "../championship/engine.hpp"
#include "../json_util.hpp"
#include "../rules.hpp"
#include "event_log.hpp"

namespace f1champ::service {

struct Response
{
    int status = 200;
    json body;
};

inline Response error_response(int status, std::string const& message)
{
    return {status, {{"error", message}}};
}

/// 2 * bytes hex digits from the OS entropy source.
inline std::string random_hex(std::size_t bytes)
{
    static char const digits[] = "0123456789abcdef";
    std::random_device rd;
    std::string out;
    for (std::size_t i = 0; i < bytes; ++i)
    {
        auto const b = static_cast<unsigned>(rd() & 0xffu);
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

/// 64-bit FNV-1a, as 16 hex digits.
inline std::string fnv1a_hex(std::string const& data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static char const digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4)
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return out;
}

inline std::string utc_timestamp()
{
    auto const now = std::chrono::system_clock::now();
    std::time_t const t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string submission_hash(int team, Submission const& s)
{
    json j = submission_to_json(s);
    j["team"] = team;
    return fnv1a_hex(j.dump());
}

class ReplayMismatch : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Principal
{
    bool steward = false;
    int team = 0;
};

//---------------------------------------------------------------------------//
/*!
 * One hosted championship: engine state, tokens and the event log the
 * state is rebuilt from.
 */
class StoredChampionship
{
  public:
    StoredChampionship(std::string id, Rules rules)
        : id_(std::move(id)), champ_(std::move(rules))
    {
    }

    std::string const& id() const { return id_; }
    Championship& champ() { return champ_; }
    Championship const& champ() const { return champ_; }
    std::shared_mutex& mutex() const { return mu_; }

    Principal const* authenticate(std::string const& token) const
    {
        if (token.empty())
            return nullptr;
        auto it = tokens_.find(token);
        return it == tokens_.end() ? nullptr : &it->second;
    }

    void attach_log(std::string const& path)
    {
        log_ = std::make_unique<EventLog>(path);
    }

    void record(json event)
    {
        event["time"] = utc_timestamp();
        if (log_)
            log_->append(event);
    }

    /// Applies one event to the in-memory state.
    void apply(json const& e)
    {
        auto const type = e.at("type").get<std::string>();
        if (type == "created")
        {
            tokens_[e.at("steward_token").get<std::string>()]
                = Principal{true, 0};
        }
        else if (type == "team")
        {
            int const id = champ_.register_team(e.at("name").get<std::string>());
            if (id != e.at("team").get<int>())
                throw ReplayMismatch("team ids out of order in " + id_);
            tokens_[e.at("token").get<std::string>()] = Principal{false, id};
        }
        else if (type == "submission")
        {
            int const team = e.at("team").get<int>();
            auto const sub = submission_from_json(e.at("submission"),
                                                  "submission");
            auto const v = champ_.submit(team, sub);
            if (!v.empty())
                throw ReplayMismatch("logged submission no longer valid: "
                                     + v.front().code);
        }
        else if (type == "race")
        {
            int const race = e.at("race").get<int>();
            auto const& got = champ_.run_race(race);
            if (classification_to_json(got) != e.at("classification"))
                throw ReplayMismatch("race " + std::to_string(race)
                                     + " classification differs on replay");
        }
        else
        {
            throw ReplayMismatch("unknown event type '" + type + "'");
        }
    }

    /// Rebuild from a log file, checking every stored race result.
    static std::unique_ptr<StoredChampionship> replay(std::string const& path)
    {
        auto events = EventLog::read(path);
        if (events.empty() || events.front().value("type", "") != "created")
            throw ReplayMismatch(path + ": log must start with 'created'");
        auto const& first = events.front();
        auto stored = std::make_unique<StoredChampionship>(
            first.at("id").get<std::string>(),
            rules_from_json(first.at("rules"), path + ": rules"));
        for (auto const& e : events)
            stored->apply(e);
        EventLog::drop_torn_tail(path);
        stored->attach_log(path);
        return stored;
    }

  private:
    std::string id_;
    Championship champ_;
    std::map<std::string, Principal> tokens_;
    std::unique_ptr<EventLog> log_;
    mutable std::shared_mutex mu_;
};

struct ServiceOptions
{
    int whatif_per_minute = 0;  // 0 = unlimited
};

//---------------------------------------------------------------------------//
/*!
 * The game API independent of transport. Every call returns an HTTP-style
 * status and a JSON body.
 */
class GameService
{
  public:
    GameService(std::filesystem::path data_dir, Rules default_rules,
                ServiceOptions opt = {})
        : dir_(std::move(data_dir) / "championships")
        , default_rules_(std::move(default_rules))
        , opt_(opt)
    {
        std::filesystem::create_directories(dir_);
        for (auto const& f : std::filesystem::directory_iterator(dir_))
        {
            if (f.path().extension() != ".ndjson")
                continue;
            auto s = StoredChampionship::replay(f.path().string());
            auto const id = s->id();
            hosted_[id] = std::move(s);
        }
    }

    std::vector<std::string> championship_ids() const
    {
        std::lock_guard lock(mu_);
        std::vector<std::string> out;
        for (auto const& [id, s] : hosted_)
            out.push_back(id);
        return out;
    }

    Response create_championship(json const& body)
    {
        Rules rules = default_rules_;
        if (body.is_object() && body.contains("rules"))
        {
            try
            {
                rules = rules_from_json(body.at("rules"), "rules");
            }
            catch (InputError const& e)
            {
                return {400, {{"error", "invalid rules"},
                              {"problems", e.problems()}}};
            }
        }
        std::string const id = "c" + random_hex(8);
        std::string const token = random_hex(16);
        auto stored = std::make_unique<StoredChampionship>(id, rules);
        stored->attach_log((dir_ / (id + ".ndjson")).string());
        json created = {{"type", "created"},
                        {"id", id},
                        {"rules", rules_to_json(rules)},
                        {"steward_token", token}};
        stored->apply(created);
        stored->record(created);
        {
            std::lock_guard lock(mu_);
            hosted_[id] = std::move(stored);
        }
        return {201, {{"id", id}, {"steward_token", token}}};
    }

    Response register_team(std::string const& c, json const& body)
    {
        auto* s = find(c);
        if (!s)
            return not_found(c);
        if (!body.is_object() || !body.contains("name")
            || !body.at("name").is_string()
            || body.at("name").get<std::string>().empty())
            return error_response(400, "body needs a non-empty \"name\"");
        std::unique_lock lock(s->mutex());
        if (!s->champ().results().empty())
            return error_response(409, "registration closed: racing started");
        std::string const token = random_hex(16);
        int const team = static_cast<int>(s->champ().teams().size()) + 1;
        json ev = {{"type", "team"},
                   {"team", team},
                   {"name", body.at("name")},
                   {"token", token}};
        s->record(ev);
        s->apply(ev);
        return {201, {{"team", team}, {"token", token}}};
    }

    Response circuits(std::string const& c, std::string const& token) const
    {
        auto const* s = find(c);
        if (!s)
            return not_found(c);
        std::shared_lock lock(s->mutex());
        if (!s->authenticate(token))
            return unauthorized();
        auto const& r = s->champ().rules();
        json list = json::array();
        for (std::size_t i = 0; i < r.circuits.size(); ++i)
        {
            auto const& e = r.circuits[i];
            list.push_back({{"race", i + 1},
                            {"id", e.id},
                            {"name", e.circuit.name},
                            {"laps", e.circuit.laps},
                            {"fuel_per_lap_kg", e.circuit.fuel_per_lap},
                            {"pit_penalty_s", e.circuit.pit_penalty},
                            {"reference_time_s", e.reference_time},
                            {"circuit", circuit_to_json(e.circuit)}});
        }
        auto rules = rules_to_json(r);
        rules.erase("circuits");
        return {200, {{"circuits", list},
                      {"rules", rules},
                      {"next_race", s->champ().next_race()}}};
    }

    Response submit(std::string const& c, std::string const& token, int race,
                    json const& body)
    {
        auto* s = find(c);
        if (!s)
            return not_found(c);
        std::unique_lock lock(s->mutex());
        auto const* who = s->authenticate(token);
        if (!who)
            return unauthorized();
        if (who->steward)
            return error_response(403, "only teams submit plans");
        auto& champ = s->champ();
        if (race < 1 || race > champ.rules().races())
            return error_response(404, "no race " + std::to_string(race));
        if (race < champ.next_race())
            return error_response(409, "race " + std::to_string(race)
                                           + " is closed");
        if (race > champ.next_race())
            return error_response(409, "race " + std::to_string(race)
                                           + " is not open yet");
        Submission sub;
        try
        {
            sub = submission_from_json(body, "submission", race);
        }
        catch (InputError const& e)
        {
            return {400, {{"error", "malformed submission"},
                          {"problems", e.problems()}}};
        }
        auto const v = validate_submission(champ.team(who->team), sub,
                                           champ.rules());
        if (!v.empty())
            return {422, {{"violations", violations_to_json(v)}}};

        std::string const hash = submission_hash(who->team, sub);
        json ev = {{"type", "submission"},
                   {"team", who->team},
                   {"submission", submission_to_json(sub)},
                   {"hash", hash}};
        s->record(ev);
        s->apply(ev);
        return {200, {{"receipt",
                       {{"team", who->team}, {"race", race}, {"hash", hash}}}}};
    }

    Response whatif(std::string const& c, std::string const& token,
                    json const& body)
    {
        auto const* s = find(c);
        if (!s)
            return not_found(c);

        std::shared_lock lock(s->mutex());
        auto const* who = s->authenticate(token);
        if (!who)
            return unauthorized();
        if (who->steward)
            return error_response(403, "what-if runs belong to teams");
        if (!rate_ok(token))
            return error_response(429, "what-if rate limit reached");
        auto const& champ = s->champ();
        auto const& rules = champ.rules();
        if (!body.is_object())
            return error_response(400, "expected a JSON object");

        int race = 0;
        if (body.contains("circuit") && body.at("circuit").is_string())
        {
            for (std::size_t i = 0; i < rules.circuits.size(); ++i)
                if (rules.circuits[i].id == body.at("circuit").get<std::string>())
                    race = static_cast<int>(i) + 1;
        }
        else if (body.contains("circuit") && body.at("circuit").is_number_integer())
        {
            race = body.at("circuit").get<int>();
        }
        if (race < 1 || race > rules.races())
            return error_response(404, "unknown circuit");

        TeamState probe;
        Submission sub;
        try
        {
            sub = submission_from_json(body, "whatif", race);
            if (body.contains("car"))
            {
                if (body.contains("expenditure"))
                    return error_response(400, "give either \"car\" or "
                                               "\"expenditure\", not both");
                probe.car = car_from_json(body.at("car"), "whatif.car");
            }
            else
            {
                probe = champ.team(who->team);
                probe.history.clear();
            }
        }
        catch (InputError const& e)
        {
            return {400, {{"error", "malformed what-if"},
                          {"problems", e.problems()}}};
        }
        lock.unlock();

        auto v = validate_submission(probe, sub, rules);
        if (body.contains("car") && !within_limits(probe.car, rules.limits))
            v.push_back({"car_limits", "car is outside the limits"});
        if (!v.empty())
            return {422, {{"violations", violations_to_json(v)}}};

        auto const car = apply_expenditure(probe.car, sub.expenditure,
                                           race - 1, rules.schedule,
                                           rules.base);
        auto const& entry = rules.circuits[static_cast<std::size_t>(race - 1)];
        auto const result = f1champ::run_race(champ.model(race), entry.circuit, car,
                                     sub.plan, rules.sim,
                                     rules.limits.race_rules());
        return {200, {{"circuit", entry.id},
                      {"car", car_to_json(car)},
                      {"result", result_to_json(result, true)}}};
    }

    Response run_race(std::string const& c, std::string const& token,
                      int race)
    {
        auto* s = find(c);
        if (!s)
            return not_found(c);
        std::unique_lock lock(s->mutex());
        auto const* who = s->authenticate(token);
        if (!who)
            return unauthorized();
        if (!who->steward)
            return error_response(403, "only the steward runs races");
        auto& champ = s->champ();
        if (race < 1 || race > champ.rules().races())
            return error_response(404, "no race " + std::to_string(race));
        if (race < champ.next_race())
            return {200, classification_to_json(champ.run_race(race))};
        if (race > champ.next_race())
            return error_response(409, "race "
                                           + std::to_string(champ.next_race())
                                           + " has not run yet");
        auto const cls = classification_to_json(champ.run_race(race));
        s->record({{"type", "race"}, {"race", race}, {"classification", cls}});
        return {200, cls};
    }

    Response results(std::string const& c, std::string const& token,
                     int race) const
    {
        auto const* s = find(c);
        if (!s)
            return not_found(c);
        std::shared_lock lock(s->mutex());
        if (!s->authenticate(token))
            return unauthorized();
        auto const& res = s->champ().results();
        if (race < 1 || race > static_cast<int>(res.size()))
            return error_response(404, "race " + std::to_string(race)
                                           + " has no results yet");
        return {200,
                classification_to_json(res[static_cast<std::size_t>(race - 1)])};
    }

    Response standings(std::string const& c, std::string const& token) const
    {
        auto const* s = find(c);
        if (!s)
            return not_found(c);
        std::shared_lock lock(s->mutex());
        if (!s->authenticate(token))
            return unauthorized();
        return {200, {{"next_race", s->champ().next_race()},
                      {"standings", standings_to_json(s->champ().standings())}}};
    }

    /// The caller's own team: car, budget, pending plan, history.
    Response me(std::string const& c, std::string const& token) const
    {
        auto const* s = find(c);
        if (!s)
            return not_found(c);
        std::shared_lock lock(s->mutex());
        auto const* who = s->authenticate(token);
        if (!who)
            return unauthorized();
        if (who->steward)
            return {200, {{"role", "steward"},
                          {"next_race", s->champ().next_race()}}};
        auto const& champ = s->champ();
        auto const& t = champ.team(who->team);
        json history = json::array();
        for (auto const& h : t.history)
        {
            json row = {{"race", h.race}, {"dnf", h.dnf}};
            if (h.dnf)
                row["reason"] = h.dnf_reason;
            if (h.submission)
                row["submission"] = submission_to_json(*h.submission);
            if (h.result)
                row["result"] = result_to_json(*h.result);
            history.push_back(row);
        }
        auto const pending = champ.pending(who->team);
        return {200,
                {{"role", "team"},
                 {"team", t.id},
                 {"name", t.name},
                 {"car", car_to_json(t.car)},
                 {"spent_total", t.spent_total},
                 {"budget_left",
                  champ.rules().limits.total_budget - t.spent_total},
                 {"points", t.points_total},
                 {"next_race", champ.next_race()},
                 {"pending", pending ? submission_to_json(*pending)
                                     : json(nullptr)},
                 {"history", history}}};
    }

  private:
    static Response unauthorized()
    {
        return error_response(401, "missing or unknown token");
    }
    static Response not_found(std::string const& c)
    {
        return error_response(404, "no championship '" + c + "'");
    }

    StoredChampionship* find(std::string const& c) const
    {
        std::lock_guard lock(mu_);
        auto it = hosted_.find(c);
        return it == hosted_.end() ? nullptr : it->second.get();
    }

    bool rate_ok(std::string const& token)
    {
        if (opt_.whatif_per_minute <= 0)
            return true;
        auto const now = std::chrono::steady_clock::now();
        std::lock_guard lock(mu_);
        auto& w = rate_[token];
        if (now - w.start > std::chrono::minutes(1))
            w = {now, 0};
        return ++w.count <= opt_.whatif_per_minute;
    }

    struct Window
    {
        std::chrono::steady_clock::time_point start;
        int count = 0;
    };

    std::filesystem::path dir_;
    Rules default_rules_;
    ServiceOptions opt_;
    mutable std::mutex mu_;
    std::map<std::string, std::unique_ptr<StoredChampionship>> hosted_;
    std::map<std::string, Window> rate_;
};

}  // namespace f1champ::service
