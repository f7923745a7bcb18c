#include <doctest.h>

#include <sstream>

#include "havnfp/harness.hpp"

using namespace havnfp;

namespace {

CampaignSpec small_spec() {
    CampaignSpec s;
    s.request_counts = {30};
    s.ap_counts = {1, 2};
    s.multipliers = {1.0, 1.5};
    s.replications = 2;
    s.algorithms = {"greedy-bestfit", "greedy-firstfit", "greedy-bestavail", "vns"};
    s.base_seed = 17;
    s.threads = 3;
    return s;
}

std::string csv(const std::vector<CampaignRow>& rows, bool runtime) {
    std::ostringstream out;
    write_rows_csv(out, rows, runtime);
    return out.str();
}

}  // namespace

TEST_CASE("algorithm names") {
    CHECK(parse_algorithm("vns").kind == AlgorithmKind::vns);
    CHECK(parse_algorithm("greedy-bestavail").policy == Policy::best_availability);
    CHECK(parse_algorithm("greedy-firstfit").name() == "greedy-firstfit");
    CHECK(parse_algorithm("exact").name() == "exact");
    CHECK_THROWS_AS((void)parse_algorithm("simplex"), InputError);
}

TEST_CASE("two algorithms on three instances give six rows") {
    CampaignSpec s;
    s.request_counts = {20};
    s.ap_counts = {2};
    s.multipliers = {1.0};
    s.replications = 3;
    s.algorithms = {"greedy-bestfit", "vns"};
    auto rows = run_campaign(s);
    CHECK(rows.size() == 6);
    for (const auto& r : rows) CHECK(r.feasible);
}

TEST_CASE("campaign rows are ordered, dominated and reproducible") {
    auto spec = small_spec();
    auto a = run_campaign(spec);
    REQUIRE(a.size() == 1 * 2 * 2 * 2 * 4);
    for (std::size_t i = 0; i < a.size(); i += 4) {
        for (std::size_t k = 0; k < 3; ++k) CHECK(a[i + 3].a_min >= a[i + k].a_min);
        for (std::size_t k = 1; k < 4; ++k) CHECK(a[i + k].seed == a[i].seed);
    }
    spec.threads = 1;
    auto b = run_campaign(spec);
    CHECK(csv(a, false) == csv(b, false));
    // Matched seeds across access point counts and multipliers.
    CHECK(a[0].seed == a[8].seed);
    CHECK(a[0].seed == a[16].seed);
    CHECK(a[0].seed != a[4].seed);
}

TEST_CASE("unsplit-infeasible instances are rerun with split") {
    CampaignSpec s;
    s.request_counts = {40};
    s.ap_counts = {1};
    s.multipliers = {1.0};
    s.replications = 8;
    s.algorithms = {"greedy-firstfit"};
    s.generator.demand_min = 30;
    s.generator.demand_max = 60;
    auto rows = run_campaign(s);
    std::size_t fallbacks = 0;
    for (const auto& r : rows) {
        CHECK(r.feasible);
        if (r.fallback) {
            ++fallbacks;
            CHECK(r.splits > 0);
        }
    }
    CHECK(fallbacks > 0);
}

TEST_CASE("failures become rows") {
    CampaignSpec s;
    s.request_counts = {30};
    s.ap_counts = {1};
    s.multipliers = {1.0};
    s.replications = 1;
    s.algorithms = {"exact", "greedy-bestfit"};
    auto rows = run_campaign(s);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].feasible);
    CHECK(rows[0].error.find("exact search") != std::string::npos);
    CHECK(rows[1].feasible);
}

TEST_CASE("CSV round-trip and summary") {
    auto rows = run_campaign(small_spec());
    std::istringstream in(csv(rows, true));
    auto back = read_rows_csv(in);
    REQUIRE(back.size() == rows.size());
    CHECK(csv(back, true) == csv(rows, true));
    auto summary = summarize(back);
    CHECK(summary.size() == 2 * 2 * 4);
    for (const auto& s : summary) {
        CHECK(s.rows == 2);
        CHECK(s.feasible_rows == 2);
    }
    double manual = 0.0;
    for (const auto& r : rows) {
        if (r.aps == 1 && r.multiplier == 1.0 && r.algorithm == "vns") manual += r.a_min / 2;
    }
    auto it = std::ranges::find_if(summary, [](const SummaryRow& s) {
        return s.aps == 1 && s.multiplier == 1.0 && s.algorithm == "vns";
    });
    REQUIRE(it != summary.end());
    CHECK(it->mean_a_min == doctest::Approx(manual).epsilon(1e-15));
}

TEST_CASE("empty CSV summarizes to an empty table") {
    std::istringstream empty("");
    auto rows = read_rows_csv(empty);
    CHECK(rows.empty());
    std::ostringstream out;
    write_summary_csv(out, summarize(rows));
    CHECK(out.str() == "requests,aps,multiplier,algorithm,rows,feasible_rows,mean_a_min,mean_runtime_s,mean_splits\n");
}

TEST_CASE("malformed CSV is an input error") {
    std::istringstream bad("not,a,header\n");
    CHECK_THROWS_AS((void)read_rows_csv(bad), InputError);
}

TEST_CASE("spec JSON") {
    auto spec = campaign_spec_from_json(nlohmann::json{{"request_counts", {50}}, {"replications", 3}});
    CHECK(spec.request_counts == std::vector<std::size_t>{50});
    CHECK(spec.replications == 3);
    CHECK(spec.ap_counts == std::vector<std::size_t>{1, 2, 3});
    auto again = campaign_spec_from_json(campaign_spec_to_json(spec));
    CHECK(campaign_spec_to_json(again) == campaign_spec_to_json(spec));
    CHECK_THROWS_AS((void)campaign_spec_from_json(nlohmann::json{{"algorithms", {"nope"}}}), InputError);
    CHECK_THROWS_AS((void)campaign_spec_from_json(nlohmann::json{{"request_counts", nlohmann::json::array()}}),
                    InputError);
    CHECK_THROWS_AS((void)campaign_spec_from_json(nlohmann::json{{"ap_counts", {4}}}), InputError);
}
