// f1champ: offline tools and the game server.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include <f1champ/service/http_api.hpp>
#include <f1champ/strategy/tournament.hpp>

using namespace f1champ;
namespace fs = std::filesystem;

namespace {

fs::path default_data_dir()
{
    if (char const* env = std::getenv("F1CHAMP_DATA_DIR"); env && *env)
        return env;
    return F1CHAMP_DEFAULT_DATA_DIR;
}

/// Circuit by rules id, 1-based race number, or file path.
CircuitEntry resolve_circuit(Rules const& rules, std::string const& key)
{
    for (auto const& e : rules.circuits)
        if (e.id == key)
            return e;
    if (!key.empty() && key.find_first_not_of("0123456789") == std::string::npos)
    {
        int const i = std::stoi(key);
        if (i >= 1 && i <= rules.races())
            return rules.circuits[static_cast<std::size_t>(i - 1)];
    }
    CircuitEntry e;
    e.id = fs::path(key).stem().string();
    e.circuit = load_circuit(key);
    e.file = key;
    return e;
}

void print_json(json const& j)
{
    std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Formula 1 championship game engine"};
    app.require_subcommand(1);
    std::string data_dir = default_data_dir().string();
    std::string rules_file;
    app.add_option("--data-dir", data_dir,
                   "Directory with rules.json and circuits/ "
                   "(env F1CHAMP_DATA_DIR)");
    app.add_option("--rules", rules_file,
                   "Rules file (default <data-dir>/rules.json)");

    auto load = [&] {
        return load_rules(rules_file.empty()
                              ? (fs::path(data_dir) / "rules.json").string()
                              : rules_file);
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run one race");
    std::string sim_circuit, sim_car, sim_plan;
    bool sim_trace = false;
    sim->add_option("circuit", sim_circuit,
                    "Circuit id, race number, or circuit file")
        ->required();
    sim->add_option("--car", sim_car, "Car file (default: base car)");
    sim->add_option("--plan", sim_plan,
                    "Race-plan file (default: reference plan)");
    sim->add_flag("--trace", sim_trace, "Include per-lap times");

    // calibrate
    auto* cal = app.add_subcommand(
        "calibrate", "Fit speed_scale to the reference times and save it");
    std::vector<std::string> cal_ids;
    bool cal_dry = false;
    cal->add_option("circuits", cal_ids, "Circuit ids (default: all)");
    cal->add_flag("--dry-run", cal_dry, "Print the scales, write nothing");

    // optimize
    auto* opt = app.add_subcommand("optimize",
                                   "Build a season plan with one strategy");
    std::string opt_kind = "cmlf", opt_out;
    strategy::StrategyOptions sopt;
    bool printed_clf = false;
    opt->add_option("--strategy", opt_kind, "rlf|clf|cmlf|hrlf|u")
        ->check(CLI::IsMember({"rlf", "clf", "cmlf", "hrlf", "u"},
                              CLI::ignore_case));
    opt->add_option("--seed", sopt.seed, "Seed for the random baseline");
    opt->add_option("--probe", sopt.probe, "Sensitivity probe in dollars");
    opt->add_option("--delta-g", sopt.pattern.delta_g_ref,
                    "Gain floor of the first race (s)");
    opt->add_option("--lambda", sopt.pattern.lambda, "Gain floor growth");
    opt->add_flag("--clf-impact-budget", printed_clf,
                  "Use the impact-weighted budget row for CLF");
    opt->add_option("--out", opt_out, "Write the plan to this file");

    // tournament
    auto* tour = app.add_subcommand("tournament",
                                    "Race all strategies against each other");
    std::vector<std::uint64_t> seeds{1};
    bool tour_json = false;
    tour->add_option("--seeds", seeds, "Seeds for the random baseline")
        ->delimiter(',');
    tour->add_flag("--json", tour_json, "Emit JSON");

    // serve
    auto* serve = app.add_subcommand("serve", "Host the game over HTTP");
    int port = 8080;
    std::string host = "0.0.0.0", state_dir;
    service::ServiceOptions svc_opt;
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--state-dir", state_dir,
                      "Where championship logs live (default <data-dir>)");
    serve->add_option("--whatif-per-minute", svc_opt.whatif_per_minute,
                      "What-if rate limit per token (0 = unlimited)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sim)
        {
            auto const rules = load();
            auto const e = resolve_circuit(rules, sim_circuit);
            CarState const car = sim_car.empty()
                                     ? rules.base
                                     : car_from_json(read_json_file(sim_car),
                                                     sim_car);
            RacePlan const plan = sim_plan.empty()
                                      ? e.reference_plan()
                                      : plan_from_json(read_json_file(sim_plan),
                                                       sim_plan);
            auto const r = run_race(e.circuit, car, plan, rules.sim,
                                    rules.limits.race_rules());
            json out = result_to_json(r, sim_trace);
            out["circuit"] = e.id;
            print_json(out);
        }
        else if (*cal)
        {
            auto rules = load();
            for (auto& e : rules.circuits)
            {
                if (!cal_ids.empty()
                    && std::find(cal_ids.begin(), cal_ids.end(), e.id)
                           == cal_ids.end())
                    continue;
                double const s = calibrate_speed_scale(
                    e.circuit, rules.base, e.reference_time,
                    e.reference_plan(), rules.sim, rules.limits.race_rules());
                e.circuit.speed_scale = s;
                double const t = run_race(e.circuit, rules.base,
                                          e.reference_plan(), rules.sim)
                                     .total_time;
                std::cout << e.id << ": speed_scale " << s << ", "
                          << round_centi(t) << " s (target "
                          << e.reference_time << " s)\n";
                if (!cal_dry && !e.file.empty())
                    save_circuit(e.file, e.circuit);
            }
        }
        else if (*opt)
        {
            auto const rules = load();
            if (printed_clf)
                sopt.clf_form = strategy::ClfBudgetRow::impact_weighted;
            auto const t = strategy::build_strategy(
                strategy::parse_strategy(opt_kind), rules, sopt);
            json plans = json::array();
            for (auto const& p : t.race_plans)
                plans.push_back(plan_to_json(p));
            json out = expenditure_to_json(t.spend);
            out["strategy"] = t.name;
            out["total_spend"] = t.spend.total();
            out["race_plans"] = plans;
            if (opt_out.empty())
                print_json(out);
            else
                write_json_file(opt_out, out);
        }
        else if (*tour)
        {
            auto const rules = load();
            strategy::StrategyOptions o;
            o.sensitivities = strategy::base_sensitivities(rules, o.probe);
            json all = json::array();
            for (auto seed : seeds)
            {
                o.seed = seed;
                std::vector<strategy::TeamStrategy> teams;
                for (auto k : {strategy::StrategyKind::cmlf,
                               strategy::StrategyKind::clf,
                               strategy::StrategyKind::rlf,
                               strategy::StrategyKind::hrlf,
                               strategy::StrategyKind::u})
                    teams.push_back(strategy::build_strategy(k, rules, o));
                auto const rep = strategy::run_tournament(teams, rules);
                if (tour_json)
                {
                    auto j = strategy::report_to_json(rep);
                    j["seed"] = seed;
                    all.push_back(j);
                }
                else
                {
                    std::cout << "seed " << seed << '\n'
                              << strategy::report_text(rep) << '\n';
                }
            }
            if (tour_json)
                print_json(all);
        }
        else if (*serve)
        {
            auto const rules = load();
            service::GameService svc(state_dir.empty() ? data_dir : state_dir,
                                     rules, svc_opt);
            httplib::Server server;
            service::mount(server, svc);
            std::cerr << "listening on " << host << ':' << port << '\n';
            if (!server.listen(host, port))
            {
                std::cerr << "cannot listen on " << host << ':' << port
                          << '\n';
                return 1;
            }
        }
    }
    catch (InputError const& e)
    {
        for (auto const& p : e.problems())
            std::cerr << "error: " << p << '\n';
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
