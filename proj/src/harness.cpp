#include "havnfp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace havnfp {

std::string Algorithm::name() const {
    switch (kind) {
        case AlgorithmKind::greedy: return "greedy-" + std::string(to_string(policy));
        case AlgorithmKind::vns: return "vns";
        case AlgorithmKind::exact: return "exact";
        case AlgorithmKind::next_fit: return "nextfit";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "vns") return {AlgorithmKind::vns};
    if (name == "exact") return {AlgorithmKind::exact};
    if (name == "nextfit" || name == "next-fit") return {AlgorithmKind::next_fit};
    if (name.starts_with("greedy-")) return {AlgorithmKind::greedy, parse_policy(name.substr(7))};
    if (name == "greedy") return {AlgorithmKind::greedy, Policy::best_fit};
    throw InputError("unknown algorithm '" + std::string(name) + "'");
}

SolveOutcome solve(std::shared_ptr<const ProblemInstance> instance, const SolveOptions& options,
                   std::span<const Placement> warm_starts) {
    SolveOutcome out;
    switch (options.algorithm.kind) {
        case AlgorithmKind::greedy: {
            auto g = solve_greedy(instance, options.algorithm.policy, options.split, options.vns.greedy);
            out.placement = std::move(g.placement);
            out.report = std::move(g.report);
            break;
        }
        case AlgorithmKind::vns: {
            auto v = vns(instance, options.vns, options.split, warm_starts);
            out.placement = std::move(v.placement);
            out.report = std::move(v.report);
            out.trace = std::move(v.trace);
            break;
        }
        case AlgorithmKind::exact: {
            auto e = exact_solve(instance, options.exact);
            out.placement = std::move(e.placement);
            out.report = std::move(e.report);
            out.optimal = e.optimal;
            break;
        }
        case AlgorithmKind::next_fit: {
            const auto begin = std::chrono::steady_clock::now();
            out.placement = next_fit_split(instance);
            if (out.placement) {
                out.report = evaluate(*out.placement);
            } else {
                out.report.feasible = false;
                out.report.a_min = 0.0;
            }
            out.report.algorithm = "nextfit";
            out.report.used_split = true;
            out.report.runtime_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
            break;
        }
    }
    return out;
}

namespace {

template <typename T>
T get_or(const nlohmann::json& doc, const char* key, T fallback) {
    if (!doc.contains(key) || doc[key].is_null()) return fallback;
    try {
        return doc[key].get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("campaign spec field '") + key + "': " + e.what());
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sanitize(std::string text) {
    for (auto& ch : text) {
        if (ch == ',') ch = ';';
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return text;
}

}  // namespace

CampaignSpec campaign_spec_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InputError("campaign spec must be a JSON object");
    CampaignSpec s;
    s.request_counts = get_or(doc, "request_counts", s.request_counts);
    s.ap_counts = get_or(doc, "ap_counts", s.ap_counts);
    s.multipliers = get_or(doc, "multipliers", s.multipliers);
    s.replications = get_or(doc, "replications", s.replications);
    s.algorithms = get_or(doc, "algorithms", s.algorithms);
    s.base_seed = get_or(doc, "base_seed", s.base_seed);
    s.threads = get_or(doc, "threads", s.threads);
    if (doc.contains("per_start_time_limit") && !doc["per_start_time_limit"].is_null()) {
        s.per_start_time_limit = get_or(doc, "per_start_time_limit", 0.0);
    }
    if (doc.contains("max_iterations") && !doc["max_iterations"].is_null()) {
        s.max_iterations = get_or(doc, "max_iterations", std::size_t{0});
    }
    if (doc.contains("generator")) {
        const auto& g = doc["generator"];
        auto& c = s.generator;
        c.vnf_types = get_or(g, "vnf_types", c.vnf_types);
        c.clusters = get_or(g, "clusters", c.clusters);
        c.access_points = get_or(g, "access_points", c.access_points);
        c.demand_min = get_or(g, "demand_min", c.demand_min);
        c.demand_max = get_or(g, "demand_max", c.demand_max);
        c.capacity_min = get_or(g, "capacity_min", c.capacity_min);
        c.capacity_max = get_or(g, "capacity_max", c.capacity_max);
        c.palette = get_or(g, "palette", c.palette);
    }
    if (s.request_counts.empty() || s.ap_counts.empty() || s.multipliers.empty() || s.algorithms.empty()) {
        throw InputError("campaign spec lists must be non-empty");
    }
    if (s.replications == 0) throw InputError("campaign spec needs at least one replication");
    for (const auto& a : s.algorithms) (void)parse_algorithm(a);
    for (auto r : s.request_counts) {
        for (auto p : s.ap_counts) {
            GeneratorConfig c = s.generator;
            c.requests = r;
            c.aps_per_request = p;
            check_generator_config(c);
        }
    }
    return s;
}

nlohmann::json campaign_spec_to_json(const CampaignSpec& s) {
    nlohmann::json doc{{"request_counts", s.request_counts},
                       {"ap_counts", s.ap_counts},
                       {"multipliers", s.multipliers},
                       {"replications", s.replications},
                       {"algorithms", s.algorithms},
                       {"base_seed", s.base_seed},
                       {"threads", s.threads}};
    doc["per_start_time_limit"] = s.per_start_time_limit ? nlohmann::json(*s.per_start_time_limit) : nullptr;
    doc["max_iterations"] = s.max_iterations ? nlohmann::json(*s.max_iterations) : nullptr;
    const auto& c = s.generator;
    doc["generator"] = {{"vnf_types", c.vnf_types},       {"clusters", c.clusters},
                        {"access_points", c.access_points}, {"demand_min", c.demand_min},
                        {"demand_max", c.demand_max},       {"capacity_min", c.capacity_min},
                        {"capacity_max", c.capacity_max},   {"palette", c.palette}};
    return doc;
}

std::uint64_t instance_seed(std::uint64_t base_seed, std::size_t requests, std::size_t replication) {
    return splitmix64(splitmix64(splitmix64(base_seed) ^ requests) ^ replication);
}

std::vector<CampaignRow> run_campaign(const CampaignSpec& spec) {
    struct Cell {
        std::size_t requests, aps, replication;
        double multiplier;
    };
    std::vector<Cell> cells;
    for (auto r : spec.request_counts) {
        for (auto p : spec.ap_counts) {
            for (auto m : spec.multipliers) {
                for (std::size_t k = 0; k < spec.replications; ++k) cells.push_back({r, p, k, m});
            }
        }
    }
    std::vector<Algorithm> algorithms;
    for (const auto& a : spec.algorithms) algorithms.push_back(parse_algorithm(a));

    std::vector<std::vector<CampaignRow>> results(cells.size());
    auto run_cell = [&](std::size_t i) {
        const auto& cell = cells[i];
        GeneratorConfig gc = spec.generator;
        gc.requests = cell.requests;
        gc.aps_per_request = cell.aps;
        gc.capacity_multiplier = cell.multiplier;
        gc.seed = instance_seed(spec.base_seed, cell.requests, cell.replication);
        auto instance = std::make_shared<const ProblemInstance>(generate(gc));
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            CampaignRow row;
            row.seed = gc.seed;
            row.requests = cell.requests;
            row.aps = cell.aps;
            row.multiplier = cell.multiplier;
            row.replication = cell.replication;
            row.algorithm = spec.algorithms[a];
            SolveOptions options;
            options.algorithm = algorithms[a];
            options.split = SplitMode::fallback;
            options.vns.per_start_time_limit = spec.per_start_time_limit;
            options.vns.max_iterations = spec.max_iterations;
            try {
                auto outcome = solve(instance, options);
                row.feasible = outcome.report.feasible;
                row.a_min = outcome.report.a_min;
                row.worst_count = outcome.report.worst.size();
                row.splits = outcome.report.splits;
                row.runtime_seconds = outcome.report.runtime_seconds;
                row.fallback = outcome.report.used_split && options.algorithm.kind != AlgorithmKind::next_fit;
            } catch (const std::exception& e) {
                row.feasible = false;
                row.error = sanitize(e.what());
            }
            results[i].push_back(std::move(row));
        }
    };

    std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, cells.size());
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) run_cell(i);
            });
        }
    }

    std::vector<CampaignRow> rows;
    for (auto& r : results) std::ranges::move(r, std::back_inserter(rows));
    return rows;
}

namespace {

constexpr const char* kRowHeader =
    "seed,requests,aps,multiplier,replication,algorithm,a_min,worst_count,splits,runtime_s,feasible,fallback,error";

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line) {
    try {
        std::size_t used = 0;
        T value;
        if constexpr (std::is_floating_point_v<T>) {
            value = std::stod(text, &used);
        } else {
            value = static_cast<T>(std::stoull(text, &used));
        }
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw InputError("line " + std::to_string(line) + ": bad number '" + text + "'");
    }
}

}  // namespace

void write_rows_csv(std::ostream& out, const std::vector<CampaignRow>& rows, bool include_runtime) {
    out << kRowHeader << '\n';
    for (const auto& r : rows) {
        out << r.seed << ',' << r.requests << ',' << r.aps << ',' << format_real(r.multiplier) << ','
            << r.replication << ',' << r.algorithm << ',' << format_real(r.a_min) << ',' << r.worst_count << ','
            << r.splits << ',' << (include_runtime ? format_real(r.runtime_seconds) : std::string()) << ','
            << (r.feasible ? 1 : 0) << ',' << (r.fallback ? 1 : 0) << ',' << r.error << '\n';
    }
}

std::vector<CampaignRow> read_rows_csv(std::istream& in) {
    std::vector<CampaignRow> rows;
    std::string line;
    std::size_t number = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != kRowHeader) throw InputError("line 1: unexpected CSV header");
            header = true;
            continue;
        }
        auto cells = split_line(line);
        if (cells.size() != 13) {
            throw InputError("line " + std::to_string(number) + ": expected 13 columns, got " +
                             std::to_string(cells.size()));
        }
        CampaignRow r;
        r.seed = parse_number<std::uint64_t>(cells[0], number);
        r.requests = parse_number<std::size_t>(cells[1], number);
        r.aps = parse_number<std::size_t>(cells[2], number);
        r.multiplier = parse_number<double>(cells[3], number);
        r.replication = parse_number<std::size_t>(cells[4], number);
        r.algorithm = cells[5];
        r.a_min = parse_number<double>(cells[6], number);
        r.worst_count = parse_number<std::size_t>(cells[7], number);
        r.splits = parse_number<std::size_t>(cells[8], number);
        r.runtime_seconds = cells[9].empty() ? 0.0 : parse_number<double>(cells[9], number);
        r.feasible = cells[10] == "1";
        r.fallback = cells[11] == "1";
        r.error = cells[12];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<CampaignRow>& rows) {
    using Key = std::tuple<std::size_t, std::size_t, double, std::string>;
    std::map<Key, SummaryRow> groups;
    std::map<Key, double> runtime_sum;
    for (const auto& r : rows) {
        Key key{r.requests, r.aps, r.multiplier, r.algorithm};
        auto& g = groups[key];
        g.requests = r.requests;
        g.aps = r.aps;
        g.multiplier = r.multiplier;
        g.algorithm = r.algorithm;
        ++g.rows;
        if (r.feasible) {
            ++g.feasible_rows;
            g.mean_a_min += r.a_min;
            g.mean_splits += static_cast<double>(r.splits);
        }
        runtime_sum[key] += r.runtime_seconds;
    }
    std::vector<SummaryRow> out;
    for (auto& [key, g] : groups) {
        if (g.feasible_rows > 0) {
            g.mean_a_min /= static_cast<double>(g.feasible_rows);
            g.mean_splits /= static_cast<double>(g.feasible_rows);
        } else {
            g.mean_a_min = std::nan("");
        }
        g.mean_runtime_seconds = runtime_sum[key] / static_cast<double>(g.rows);
        out.push_back(g);
    }
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "requests,aps,multiplier,algorithm,rows,feasible_rows,mean_a_min,mean_runtime_s,mean_splits\n";
    for (const auto& r : rows) {
        out << r.requests << ',' << r.aps << ',' << format_real(r.multiplier) << ',' << r.algorithm << ',' << r.rows
            << ',' << r.feasible_rows << ',' << format_real(r.mean_a_min) << ','
            << format_real(r.mean_runtime_seconds) << ',' << format_real(r.mean_splits) << '\n';
    }
}

}  // namespace havnfp
