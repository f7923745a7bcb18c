#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "havnfp/greedy.hpp"
#include "havnfp/placement.hpp"

namespace havnfp {

enum class Neighborhood { vnf_swap, slave_swap, request_swap, request_move };

[[nodiscard]] std::string_view to_string(Neighborhood n);

struct VnsConfig {
    std::optional<double> per_start_time_limit;  // seconds
    std::optional<std::size_t> max_iterations;   // accepted moves per start
    std::array<Neighborhood, 4> order{Neighborhood::vnf_swap, Neighborhood::slave_swap, Neighborhood::request_swap,
                                      Neighborhood::request_move};
    /// 0 scans neighbors in natural order; any other value shuffles scan order deterministically.
    std::uint64_t seed = 0;
    bool parallel_starts = false;
    GreedyOptions greedy;
};

/// One accepted move.
struct TraceRecord {
    std::size_t start = 0;
    Neighborhood neighborhood = Neighborhood::vnf_swap;
    double a_min = 0.0;
    double delta = 0.0;
    std::size_t worst = 0;
    double timestamp = 0.0;  // seconds since the search began
};

/// True when `candidate` has a higher minimum availability, or the same one
/// (within tolerance) with fewer worst requests.
[[nodiscard]] bool is_improving(const SolveReport& candidate, const SolveReport& incumbent);

/// Shared state of one local search run.
class SearchContext {
public:
    using Clock = std::chrono::steady_clock;

    SearchContext(Policy slave_policy, std::optional<Clock::time_point> deadline, std::uint64_t seed);

    [[nodiscard]] Policy slave_policy() const { return slave_policy_; }
    [[nodiscard]] bool expired();
    [[nodiscard]] bool hit_deadline() const { return hit_deadline_; }
    [[nodiscard]] std::size_t evaluations() const { return evaluations_; }

    /// Completes a neighbor (slave pass + evaluation); returns its report if it
    /// should replace the incumbent.
    std::optional<SolveReport> try_neighbor(Placement& candidate, const SolveReport& incumbent);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        if (seed_ != 0) std::ranges::shuffle(items, rng_);
    }

private:
    Policy slave_policy_;
    std::optional<Clock::time_point> deadline_;
    bool hit_deadline_ = false;
    std::size_t evaluations_ = 0;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
};

struct Move {
    Placement placement;
    SolveReport report;
};

/// Each neighborhood returns the first improving neighbor, restricted to the
/// incumbent's worst requests, or nullopt.
[[nodiscard]] std::optional<Move> vnf_swap_neighborhood(const Placement& placement, const SolveReport& incumbent,
                                                        SearchContext& ctx);
[[nodiscard]] std::optional<Move> slave_swap_neighborhood(const Placement& placement, const SolveReport& incumbent,
                                                          SearchContext& ctx);
[[nodiscard]] std::optional<Move> request_swap_neighborhood(const Placement& placement,
                                                            const SolveReport& incumbent, SearchContext& ctx);
[[nodiscard]] std::optional<Move> request_move_neighborhood(const Placement& placement,
                                                            const SolveReport& incumbent, SearchContext& ctx);

/// Local search from one starting placement until no neighborhood improves or a budget runs out.
struct LocalSearchResult {
    Placement placement;
    SolveReport report;
    std::vector<TraceRecord> trace;
    std::size_t evaluations = 0;
    bool hit_deadline = false;
};

[[nodiscard]] LocalSearchResult local_search(Placement start, const VnsConfig& config, Policy slave_policy,
                                             std::size_t start_index,
                                             SearchContext::Clock::time_point search_begin);

struct VnsResult {
    std::optional<Placement> placement;
    SolveReport report;
    std::vector<TraceRecord> trace;
    std::vector<SolveReport> start_reports;  // greedy starting points, in start order
    std::size_t evaluations = 0;
    bool hit_deadline = false;
};

/// Runs local search from the best-availability, best-fit and first-fit greedy
/// placements (plus any `extra_starts`) and keeps the best result.
[[nodiscard]] VnsResult vns(std::shared_ptr<const ProblemInstance> instance, const VnsConfig& config,
                            SplitMode split, std::span<const Placement> extra_starts = {});

}  // namespace havnfp
