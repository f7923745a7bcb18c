#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "havnfp/exact.hpp"
#include "havnfp/instgen.hpp"
#include "havnfp/vns.hpp"

namespace havnfp {

enum class AlgorithmKind { greedy, vns, exact, next_fit };

/// A named solver setup: "greedy-bestfit", "greedy-firstfit", "greedy-bestavail",
/// "vns", "exact" or "nextfit".
struct Algorithm {
    AlgorithmKind kind = AlgorithmKind::vns;
    Policy policy = Policy::best_fit;  // greedy only

    [[nodiscard]] std::string name() const;
    friend bool operator==(const Algorithm&, const Algorithm&) = default;
};

/// Throws InputError for unknown names.
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);

struct SolveOptions {
    Algorithm algorithm;
    SplitMode split = SplitMode::fallback;
    VnsConfig vns;
    ExactConfig exact;
};

struct SolveOutcome {
    std::optional<Placement> placement;
    SolveReport report;
    std::vector<TraceRecord> trace;  // vns only
    bool optimal = false;            // exact only
};

/// Runs one solver. `report.feasible` is false when no placement was found;
/// ExactRefused and InputError propagate.
[[nodiscard]] SolveOutcome solve(std::shared_ptr<const ProblemInstance> instance, const SolveOptions& options,
                                 std::span<const Placement> warm_starts = {});

struct CampaignSpec {
    std::vector<std::size_t> request_counts{50, 100, 200, 300, 400, 500};
    std::vector<std::size_t> ap_counts{1, 2, 3};
    std::vector<double> multipliers = default_multipliers();
    std::size_t replications = 30;
    std::vector<std::string> algorithms{"greedy-bestfit", "greedy-firstfit", "greedy-bestavail", "vns"};
    std::uint64_t base_seed = 1;
    std::optional<double> per_start_time_limit;
    std::optional<std::size_t> max_iterations;
    GeneratorConfig generator;  // counts, ranges and palette; requests/aps/multiplier/seed are overridden
    std::size_t threads = 0;    // 0: hardware concurrency
};

/// Missing keys keep their defaults. Throws InputError on bad values.
[[nodiscard]] CampaignSpec campaign_spec_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json campaign_spec_to_json(const CampaignSpec& spec);

/// Generator seed of one grid cell. Shared across access point counts and
/// multipliers so that those sweeps compare matched instances.
[[nodiscard]] std::uint64_t instance_seed(std::uint64_t base_seed, std::size_t requests, std::size_t replication);

struct CampaignRow {
    std::uint64_t seed = 0;
    std::size_t requests = 0;
    std::size_t aps = 0;
    double multiplier = 1.0;
    std::size_t replication = 0;
    std::string algorithm;
    double a_min = 0.0;
    std::size_t worst_count = 0;
    std::size_t splits = 0;
    double runtime_seconds = 0.0;
    bool feasible = false;
    bool fallback = false;  // the unsplit attempt failed and the split rerun was used
    std::string error;
};

/// Rows ordered by (requests, aps, multiplier, replication, algorithm position in the spec).
[[nodiscard]] std::vector<CampaignRow> run_campaign(const CampaignSpec& spec);

void write_rows_csv(std::ostream& out, const std::vector<CampaignRow>& rows, bool include_runtime = true);
/// Throws InputError on malformed input. An empty document yields no rows.
[[nodiscard]] std::vector<CampaignRow> read_rows_csv(std::istream& in);

struct SummaryRow {
    std::size_t requests = 0;
    std::size_t aps = 0;
    double multiplier = 1.0;
    std::string algorithm;
    std::size_t rows = 0;
    std::size_t feasible_rows = 0;
    double mean_a_min = 0.0;  // over feasible rows; NaN if none
    double mean_runtime_seconds = 0.0;
    double mean_splits = 0.0;
};

[[nodiscard]] std::vector<SummaryRow> summarize(const std::vector<CampaignRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace havnfp
