// Acceptance suite: one PASS/FAIL line per primary criterion; exits nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "havnfp/availability.hpp"
#include "havnfp/exact.hpp"
#include "havnfp/greedy.hpp"
#include "havnfp/harness.hpp"
#include "havnfp/instgen.hpp"
#include "havnfp/placement.hpp"
#include "havnfp/vns.hpp"
#include "support.hpp"

using namespace havnfp;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const char* name, const Verdict& v, double secs) {
    std::printf("%s %-28s %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::shared_ptr<const ProblemInstance> make(const GeneratorConfig& g) {
    return std::make_shared<const ProblemInstance>(generate(g));
}

// Analytic vs sampled availability of 50 placed requests. The palette is far
// lower than in production so that the sampling error is not vanishingly small.
Verdict oracle_agreement() {
    std::size_t agree = 0;
    std::size_t multi = 0;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < 50; ++k) {
        GeneratorConfig g;
        g.requests = 12;
        g.aps_per_request = 1 + k % 3;
        g.vnf_types = 3;
        g.clusters = 3;
        g.capacity_min = 10;
        g.capacity_max = 30;
        g.palette = {0.85, 0.9, 0.95, 0.99};
        g.capacity_multiplier = 1.0 + 0.5 * static_cast<double>(k % 3);
        g.seed = 9000 + k;
        const auto inst = make(g);
        std::optional<Placement> p;
        switch (k % 4) {
            case 0: p = greedy(inst, Policy::best_availability, true); break;
            case 1: p = greedy(inst, Policy::best_fit, true); break;
            case 2: p = greedy(inst, Policy::first_fit, true); break;
            default: p = next_fit_split(inst); break;
        }
        if (!p) return {false, fmt("pair %zu: no placement", k)};
        // Prefer a fragmented request when there is one.
        RequestId r{k % g.requests};
        for (std::size_t i = 0; i < g.requests; ++i) {
            if (p->shares(RequestId{i}).size() > 1) {
                r = RequestId{i};
                break;
            }
        }
        const auto gamma = p->configuration(r);
        if (gamma.fragments.size() > 1) ++multi;
        const double exact = configuration_availability(*inst, r, gamma);
        const auto mc = monte_carlo_availability(*inst, r, gamma, 1'000'000, 77 + k);
        const double se = std::max(mc.standard_error, 1e-12);
        const double z = std::abs(mc.estimate - exact) / se;
        worst_z = std::max(worst_z, z);
        if (z <= 3.0) ++agree;
    }
    return {agree >= 49, fmt("%zu/50 within 3 SE (need 49), %zu multi-fragment, max |z| %.2f", agree, multi, worst_z)};
}

Verdict exactness_chain() {
    std::size_t feasible = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        testing::TinyShape shape;
        shape.servers = 1 + k % 3;
        shape.requests = 1 + (k / 3) % 5;
        shape.clusters = std::min<std::size_t>(2, shape.servers);
        const auto inst = testing::random_tiny(5000 + k, shape);
        const auto ex = exact_solve(inst);
        const auto brute = testing::brute_force_optimum(*inst);
        if (!ex.optimal) return {false, fmt("instance %llu: exact stopped early", (unsigned long long)k)};
        if (ex.placement.has_value() != brute.has_value()) {
            return {false, fmt("instance %llu: exact and brute force disagree on feasibility", (unsigned long long)k)};
        }
        if (!brute) continue;
        ++feasible;
        if (!check_placement(*ex.placement).empty()) {
            return {false, fmt("instance %llu: exact placement fails the checker", (unsigned long long)k)};
        }
        if (ex.report.a_min != *brute) {
            return {false, fmt("instance %llu: exact %.17g != brute force %.17g", (unsigned long long)k,
                               ex.report.a_min, *brute)};
        }
        const auto v = vns(inst, VnsConfig{}, SplitMode::off);
        if (v.placement && !(ex.report.a_min >= v.report.a_min)) {
            return {false, fmt("instance %llu: vns %.17g above exact %.17g", (unsigned long long)k, v.report.a_min,
                               ex.report.a_min)};
        }
        for (auto policy : {Policy::best_fit, Policy::first_fit, Policy::best_availability}) {
            const auto gr = solve_greedy(inst, policy, SplitMode::off);
            if (!gr.report.feasible) continue;
            if (!v.placement || !(v.report.a_min >= gr.report.a_min)) {
                return {false, fmt("instance %llu: greedy %s %.17g above vns", (unsigned long long)k,
                                   std::string(to_string(policy)).c_str(), gr.report.a_min)};
            }
        }
    }
    return {feasible > 0, fmt("100 instances, %zu feasible, chain holds with no tolerance", feasible)};
}

// Demands summing to exactly the total capacity, the tightest case.
std::shared_ptr<const ProblemInstance> tight_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> n_servers(1, 8), n_requests(1, 25), n_clusters(1, 3);
    std::uniform_real_distribution<double> demand(0.5, 10.0), weight(0.2, 1.0), avail(0.9, 0.9999);
    testing::Builder b;
    const std::size_t C = n_clusters(rng);
    for (std::size_t c = 0; c < C; ++c) b.cluster(avail(rng));
    const auto f0 = b.vnf(avail(rng));
    const auto f1 = b.vnf(avail(rng));
    const auto p0 = b.ap();
    b.link_all(0.999);
    const std::size_t R = n_requests(rng);
    double total = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
        const double d = std::round(demand(rng) * 4.0) / 4.0;
        total += d;
        b.request(r % 2 ? f1 : f0, {p0}, d);
    }
    const std::size_t S = n_servers(rng);
    std::vector<double> w(S);
    for (auto& x : w) x = weight(rng);
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    double given = 0.0;
    for (std::size_t s = 0; s + 1 < S; ++s) {
        const double q = std::floor(total * w[s] / wsum * 4.0) / 4.0;
        given += q;
        b.server(ClusterId{s % C}, q, avail(rng));
    }
    b.server(ClusterId{(S - 1) % C}, total - given, avail(rng));
    return b.build();
}

Verdict observation_one() {
    std::size_t failures_seen = 0;
    std::string first;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        std::shared_ptr<const ProblemInstance> inst;
        if (k % 2 == 0) {
            GeneratorConfig g;
            g.requests = 5 + (k * 7) % 120;
            g.aps_per_request = 1 + k % 3;
            g.capacity_multiplier = 1.0;
            g.seed = 20000 + k;
            inst = make(g);
        } else {
            inst = tight_instance(30000 + k);
        }
        auto check = [&](const char* who, const std::optional<Placement>& p) {
            std::string why;
            if (!p) {
                why = "no placement";
            } else if (auto v = check_placement(*p); !v.empty()) {
                why = v.front();
            }
            if (!why.empty()) {
                if (failures_seen++ == 0) first = fmt("instance %llu, %s: %s", (unsigned long long)k, who, why.c_str());
            }
        };
        check("nextfit", next_fit_split(inst));
        check("greedy-bestfit", greedy(inst, Policy::best_fit, true));
        check("greedy-firstfit", greedy(inst, Policy::first_fit, true));
        check("greedy-bestavail", greedy(inst, Policy::best_availability, true));
    }
    if (failures_seen == 0) return {true, "1000 instances (500 exactly tight), 4 solvers each, 0 failures"};
    return {false, fmt("%zu failures; first: %s", failures_seen, first.c_str())};
}

// Campaign rows shared by the trend and access point criteria.
struct Grid {
    std::vector<CampaignRow> rows;
    double secs = 0.0;
};

Grid reference_grid() {
    CampaignSpec spec;
    spec.request_counts = {50};
    spec.ap_counts = {1, 2, 3};
    spec.multipliers = default_multipliers();
    spec.replications = 30;
    spec.base_seed = 1;
    const auto t = Clock::now();
    Grid g{run_campaign(spec), 0.0};
    g.secs = seconds_since(t);
    return g;
}

Verdict trend(const Grid& grid) {
    // Per (multiplier, replication): vns and the best greedy.
    std::map<double, std::map<std::size_t, std::pair<double, double>>> cells;
    for (const auto& row : grid.rows) {
        if (row.aps != 2) continue;
        auto& c = cells[row.multiplier][row.replication];
        const double a = row.feasible ? row.a_min : 0.0;
        if (row.algorithm == "vns") {
            c.first = a;
        } else {
            c.second = std::max(c.second, a);
        }
    }
    bool ok = grid.secs < 1800.0;
    std::string detail;
    double prev = -1.0;
    for (const auto& [m, reps] : cells) {
        double vsum = 0.0, gsum = 0.0;
        for (const auto& [rep, pr] : reps) {
            vsum += pr.first;
            gsum += pr.second;
        }
        const double v = vsum / reps.size();
        const double gap = (vsum - gsum) / reps.size();
        if (v < prev) ok = false;
        if (m == 1.0 && v < 0.999) ok = false;
        if (m == 2.0 && v < 0.9999) ok = false;
        if (m <= 2.0 && !(gap > 0.0)) ok = false;
        prev = v;
        detail += fmt(" m%.2f:%.7f/+%.1e", m, v, gap);
    }
    return {ok, "vns mean/gap over best greedy:" + detail};
}

Verdict access_points(const Grid& grid) {
    // Matched seeds: every (multiplier, replication) cell at each |P_r|.
    std::map<std::size_t, std::pair<double, std::size_t>> by_aps;
    for (const auto& row : grid.rows) {
        if (row.algorithm != "vns") continue;
        auto& [sum, n] = by_aps[row.aps];
        sum += row.feasible ? row.a_min : 0.0;
        ++n;
    }
    const double a1 = by_aps[1].first / by_aps[1].second;
    const double a2 = by_aps[2].first / by_aps[2].second;
    const double a3 = by_aps[3].first / by_aps[3].second;
    const bool ok = a2 > a1 && (a3 - a2) < (a2 - a1);
    return {ok, fmt("vns mean |P|=1 %.7f, 2 %.7f, 3 %.7f; gap 2-1 %.2e, 3-2 %.2e", a1, a2, a3, a2 - a1, a3 - a2)};
}

Verdict budgeted_vns() {
    VnsConfig budgeted;
    budgeted.per_start_time_limit = 10.0;
    double worst_wall = 0.0;
    for (std::size_t rep = 0; rep < 3; ++rep) {
        GeneratorConfig g;
        g.requests = 500;
        g.seed = instance_seed(1, 500, rep);
        const auto inst = make(g);
        const auto t = Clock::now();
        const auto res = vns(inst, budgeted, SplitMode::fallback);
        worst_wall = std::max(worst_wall, seconds_since(t));
        if (!res.placement) return {false, fmt("500-request instance %zu infeasible", rep)};
    }
    double gap_sum = 0.0;
    const std::size_t reps = 30;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        GeneratorConfig g;
        g.requests = 50;
        g.seed = instance_seed(1, 50, rep);
        const auto inst = make(g);
        const auto b = vns(inst, budgeted, SplitMode::fallback);
        const auto u = vns(inst, VnsConfig{}, SplitMode::fallback);
        gap_sum += u.report.a_min - b.report.a_min;
    }
    const double gap = std::abs(gap_sum / reps);
    return {worst_wall < 60.0 && gap <= 0.0005,
            fmt("500 requests: worst wall %.1f s (limit 60); 50 requests: |mean gap| %.2e (limit 5e-4)", worst_wall,
                gap)};
}

Verdict determinism() {
    CampaignSpec spec;
    spec.request_counts = {30, 60};
    spec.ap_counts = {1, 2};
    spec.multipliers = {1.0, 1.5};
    spec.replications = 3;
    spec.base_seed = 42;
    auto csv = [&](std::size_t threads) {
        spec.threads = threads;
        std::ostringstream out;
        write_rows_csv(out, run_campaign(spec), false);
        return out.str();
    };
    const auto a = csv(1);
    const auto b = csv(4);
    const auto c = csv(4);
    const bool ok = a == b && b == c && !a.empty();
    return {ok, fmt("3 runs (1, 4, 4 threads), %zu bytes of CSV, %s", a.size(), ok ? "identical" : "differ")};
}

void run(const char* name, const std::function<Verdict()>& f) {
    const auto t = Clock::now();
    Verdict v;
    try {
        v = f();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    report(name, v, seconds_since(t));
}

}  // namespace

int main() {
    {
        const auto t = Clock::now();
        Verdict v;
        try {
            v = oracle_agreement();
            if (seconds_since(t) >= 120.0) {
                v.pass = false;
                v.detail += "; over the 2 min budget";
            }
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        report("oracle-agreement", v, seconds_since(t));
    }
    {
        const auto t = Clock::now();
        Verdict v;
        try {
            v = exactness_chain();
            if (seconds_since(t) >= 300.0) {
                v.pass = false;
                v.detail += "; over the 5 min budget";
            }
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        report("exactness-chain", v, seconds_since(t));
    }
    run("observation-1-feasibility", observation_one);

    Grid grid;
    try {
        grid = reference_grid();
    } catch (const std::exception& e) {
        std::printf("campaign failed: %s\n", e.what());
    }
    report("trend-replication", trend(grid), grid.secs);
    report("access-point-effect", access_points(grid), 0.0);

    run("budgeted-vns", budgeted_vns);
    run("determinism", determinism);
    return failures == 0 ? 0 : 1;
}
