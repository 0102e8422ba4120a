#pragma once

#include <string>

#include <httplib.h>

#include "game_service.hpp"

namespace f1champ::service {

inline std::string bearer_token(httplib::Request const& req)
{
    auto const h = req.get_header_value("Authorization");
    std::string const prefix = "Bearer ";
    if (h.size() > prefix.size() && h.compare(0, prefix.size(), prefix) == 0)
        return h.substr(prefix.size());
    return {};
}

inline void send(httplib::Response& res, Response const& r)
{
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

/// Parses the request body; an empty body reads as an empty object.
inline bool parse_body(httplib::Request const& req, httplib::Response& res,
                       json& out)
{
    if (req.body.empty())
    {
        out = json::object();
        return true;
    }
    try
    {
        out = json::parse(req.body);
        return true;
    }
    catch (json::parse_error const& e)
    {
        send(res, error_response(400, std::string("invalid JSON: ")
                                          + e.what()));
        return false;
    }
}

inline int race_param(httplib::Request const& req, std::size_t i)
{
    try
    {
        return std::stoi(req.matches[static_cast<int>(i)].str());
    }
    catch (std::exception const&)
    {
        return 0;
    }
}

/// Binds the game endpoints onto \c server.
inline void mount(httplib::Server& server, GameService& svc)
{
    server.set_default_headers(
        {{"Access-Control-Allow-Origin", "*"},
         {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(/.*)", [](auto const&, auto& res) { res.status = 204; });

    server.set_exception_handler([](auto const&, auto& res,
                                    std::exception_ptr ep) {
        std::string msg = "internal error";
        try
        {
            std::rethrow_exception(ep);
        }
        catch (std::exception const& e)
        {
            msg = e.what();
        }
        catch (...)
        {
        }
        send(res, error_response(500, msg));
    });

    server.Post("/championships", [&svc](auto const& req, auto& res) {
        json body;
        if (parse_body(req, res, body))
            send(res, svc.create_championship(body));
    });
    server.Post(R"(/championships/([^/]+)/teams)",
                [&svc](auto const& req, auto& res) {
                    json body;
                    if (parse_body(req, res, body))
                        send(res, svc.register_team(req.matches[1], body));
                });
    server.Get(R"(/championships/([^/]+)/circuits)",
               [&svc](auto const& req, auto& res) {
                   send(res, svc.circuits(req.matches[1], bearer_token(req)));
               });
    server.Post(R"(/championships/([^/]+)/races/(\d+)/submission)",
                [&svc](auto const& req, auto& res) {
                    json body;
                    if (parse_body(req, res, body))
                        send(res, svc.submit(req.matches[1], bearer_token(req),
                                             race_param(req, 2), body));
                });
    server.Post(R"(/championships/([^/]+)/whatif)",
                [&svc](auto const& req, auto& res) {
                    json body;
                    if (parse_body(req, res, body))
                        send(res, svc.whatif(req.matches[1], bearer_token(req),
                                             body));
                });
    server.Post(R"(/championships/([^/]+)/races/(\d+)/run)",
                [&svc](auto const& req, auto& res) {
                    send(res, svc.run_race(req.matches[1], bearer_token(req),
                                           race_param(req, 2)));
                });
    server.Get(R"(/championships/([^/]+)/races/(\d+)/results)",
               [&svc](auto const& req, auto& res) {
                   send(res, svc.results(req.matches[1], bearer_token(req),
                                         race_param(req, 2)));
               });
    server.Get(R"(/championships/([^/]+)/standings)",
               [&svc](auto const& req, auto& res) {
                   send(res, svc.standings(req.matches[1], bearer_token(req)));
               });
    server.Get(R"(/championships/([^/]+)/me)",
               [&svc](auto const& req, auto& res) {
                   send(res, svc.me(req.matches[1], bearer_token(req)));
               });
}

}  // namespace f1champ::service
