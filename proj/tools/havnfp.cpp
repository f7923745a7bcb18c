#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "havnfp/harness.hpp"
#include "havnfp/service.hpp"

using namespace havnfp;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 2;
constexpr int kInputError = 3;

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

httplib::Server* g_server = nullptr;

void stop_server(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-availability VNF placement solver suite"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    GeneratorConfig gc;
    std::string gen_out;
    gen->add_option("--requests", gc.requests, "Number of requests")->capture_default_str();
    gen->add_option("--aps-per-request", gc.aps_per_request, "Access points per request")->capture_default_str();
    gen->add_option("--vnf-types", gc.vnf_types)->capture_default_str();
    gen->add_option("--clusters", gc.clusters)->capture_default_str();
    gen->add_option("--access-points", gc.access_points)->capture_default_str();
    gen->add_option("--demand-min", gc.demand_min)->capture_default_str();
    gen->add_option("--demand-max", gc.demand_max)->capture_default_str();
    gen->add_option("--capacity-min", gc.capacity_min)->capture_default_str();
    gen->add_option("--capacity-max", gc.capacity_max)->capture_default_str();
    gen->add_option("--palette", gc.palette, "Availability values to draw from");
    gen->add_option("--multiplier", gc.capacity_multiplier, "Total capacity over total demand")->capture_default_str();
    gen->add_option("--seed", gc.seed)->capture_default_str();
    gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

    // validate
    auto* val = app.add_subcommand("validate", "Check an instance document");
    std::string val_in;
    val->add_option("-i,--input", val_in)->required();

    // solve
    auto* sol = app.add_subcommand("solve", "Solve one instance");
    std::string sol_in, sol_out, sol_placement, sol_trace, algo = "vns", policy = "bestfit", split = "fallback";
    std::optional<double> per_start, exact_limit;
    std::optional<std::size_t> max_iters;
    std::optional<unsigned> split_grid;
    std::uint64_t seed = 0, node_budget = ExactConfig{}.node_budget;
    bool sort_desc = false, parallel = false;
    sol->add_option("-i,--input", sol_in, "Instance document ('-' for stdin)")->required();
    sol->add_option("--algo", algo, "greedy | vns | exact | nextfit")->capture_default_str();
    sol->add_option("--policy", policy, "bestfit | firstfit | bestavail (greedy)")->capture_default_str();
    sol->add_option("--split", split, "on | off | fallback")->capture_default_str();
    sol->add_option("--time-limit-per-start", per_start, "VNS budget per starting point, seconds");
    sol->add_option("--max-iters", max_iters, "VNS accepted moves per start");
    sol->add_option("--seed", seed, "VNS neighbor scan seed (0 keeps natural order)");
    sol->add_flag("--parallel-starts", parallel, "Explore VNS starting points concurrently");
    sol->add_flag("--sort-demand-desc", sort_desc, "Greedy processes requests by decreasing demand");
    sol->add_option("--time-limit", exact_limit, "Exact search time limit, seconds");
    sol->add_option("--node-budget", node_budget, "Exact search node budget")->capture_default_str();
    sol->add_option("--split-grid", split_grid, "Exact search fraction grid (2 = halves)");
    sol->add_option("-o,--output", sol_out, "Report JSON (default stdout)");
    sol->add_option("--placement-out", sol_placement, "Write the placement JSON here");
    sol->add_option("--trace", sol_trace, "Write the VNS trace as JSON lines here");

    // campaign
    auto* camp = app.add_subcommand("campaign", "Run an experiment campaign");
    std::string camp_spec, camp_out, camp_summary;
    std::optional<std::size_t> camp_threads;
    camp->add_option("--spec", camp_spec, "Campaign spec JSON")->required();
    camp->add_option("-o,--output", camp_out, "Results CSV (default stdout)");
    camp->add_option("--summary", camp_summary, "Also write the summary CSV here");
    camp->add_option("--threads", camp_threads, "Worker threads");

    // summarize
    auto* summ = app.add_subcommand("summarize", "Aggregate a results CSV");
    std::string summ_in, summ_out;
    summ->add_option("-i,--input", summ_in, "Results CSV")->required();
    summ->add_option("-o,--output", summ_out, "Summary CSV (default stdout)");

    // serve
    auto* serve = app.add_subcommand("serve", "Run the planning HTTP service");
    std::string host = "127.0.0.1", state_dir;
    int port = 8080;
    ServiceConfig svc;
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->capture_default_str();
    serve->add_option("--state-dir", state_dir, "Persist sessions as JSON snapshots here");
    serve->add_option("--solver-threads", svc.solver_threads)->capture_default_str();
    serve->add_option("--time-limit", svc.default_time_limit, "Default VNS budget per start, seconds")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*gen) {
            auto inst = generate(gc);
            write_text(gen_out, save_instance(inst));
            return kOk;
        }
        if (*val) {
            auto inst = load_instance(read_text(val_in));
            bool bad = false;
            for (const auto& v : validate(inst)) {
                bool err = v.severity == Violation::Severity::error;
                bad = bad || err;
                std::cout << (err ? "error: " : "warning: ") << v.message << '\n';
            }
            return bad ? kInputError : kOk;
        }
        if (*sol) {
            auto inst = std::make_shared<const ProblemInstance>(load_instance(read_text(sol_in)));
            std::vector<std::string> errors;
            for (const auto& v : validate(*inst)) {
                if (v.severity == Violation::Severity::error) errors.push_back(v.message);
            }
            if (!errors.empty()) {
                for (const auto& e : errors) std::cerr << "error: " << e << '\n';
                return kInputError;
            }
            SolveOptions options;
            options.algorithm = parse_algorithm(algo);
            if (algo == "greedy") options.algorithm.policy = parse_policy(policy);
            options.split = parse_split_mode(split);
            options.vns.per_start_time_limit = per_start;
            options.vns.max_iterations = max_iters;
            options.vns.seed = seed;
            options.vns.parallel_starts = parallel;
            options.vns.greedy.sort_demand_desc = sort_desc;
            options.exact.time_limit = exact_limit;
            options.exact.node_budget = node_budget;
            options.exact.split_grid = split_grid;
            auto outcome = solve(inst, options);
            json out = report_to_json(*inst, outcome.report);
            if (options.algorithm.kind == AlgorithmKind::exact) out["optimal"] = outcome.optimal;
            write_text(sol_out, out.dump(2) + "\n");
            if (!sol_placement.empty() && outcome.placement) {
                write_text(sol_placement, placement_to_json(*outcome.placement).dump(2) + "\n");
            }
            if (!sol_trace.empty()) {
                std::ofstream t(sol_trace);
                for (const auto& rec : outcome.trace) {
                    t << json{{"start", rec.start},
                              {"operator", std::string(to_string(rec.neighborhood))},
                              {"a_min", rec.a_min},
                              {"delta", rec.delta},
                              {"worst", rec.worst},
                              {"timestamp", rec.timestamp}}
                             .dump()
                      << '\n';
                }
            }
            return outcome.report.feasible ? kOk : kInfeasible;
        }
        if (*camp) {
            json doc;
            try {
                doc = json::parse(read_text(camp_spec));
            } catch (const json::exception& e) {
                throw InputError(std::string("campaign spec: ") + e.what());
            }
            auto spec = campaign_spec_from_json(doc);
            if (camp_threads) spec.threads = *camp_threads;
            auto rows = run_campaign(spec);
            std::ostringstream csv;
            write_rows_csv(csv, rows);
            write_text(camp_out, csv.str());
            if (!camp_summary.empty()) {
                std::ostringstream s;
                write_summary_csv(s, summarize(rows));
                write_text(camp_summary, s.str());
            }
            return kOk;
        }
        if (*summ) {
            std::istringstream in(read_text(summ_in));
            auto rows = read_rows_csv(in);
            std::ostringstream s;
            write_summary_csv(s, summarize(rows));
            write_text(summ_out, s.str());
            return kOk;
        }
        if (*serve) {
            if (!state_dir.empty()) svc.state_dir = state_dir;
            PlanningService service(svc);
            httplib::Server server;
            service.mount(server);
            g_server = &server;
            std::signal(SIGINT, stop_server);
            std::signal(SIGTERM, stop_server);
            std::cerr << "listening on http://" << host << ':' << port << "/v1\n";
            if (!server.listen(host, port)) {
                std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
                return kInputError;
            }
            return kOk;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}
