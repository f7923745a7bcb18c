#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "havnfp/placement.hpp"

namespace havnfp {

enum class Policy { best_fit, first_fit, best_availability };

/// How a solver may fragment requests. `fallback` solves unsplit first and
/// retries with splitting only if that fails.
enum class SplitMode { off, on, fallback };

[[nodiscard]] std::string_view to_string(Policy p);
[[nodiscard]] std::string_view to_string(SplitMode m);
/// Accepts bestfit|firstfit|bestavail (and the snake_case names). Throws InputError.
[[nodiscard]] Policy parse_policy(std::string_view text);
[[nodiscard]] SplitMode parse_split_mode(std::string_view text);

/// Picks a server for `demand` among `candidates`. Servers whose residual does
/// not cover the demand are discarded; with `split` and no full fit, any
/// server with positive residual qualifies.
[[nodiscard]] std::optional<ServerId> select_server(const Placement& placement, double demand,
                                                    std::span<const ServerId> candidates, Policy policy, bool split);

struct GreedyOptions {
    bool sort_demand_desc = false;
};

/// Assigns every request with the policy, then adds slaves in repeated passes
/// until a pass adds none. nullopt when some request cannot be placed.
[[nodiscard]] std::optional<Placement> greedy(std::shared_ptr<const ProblemInstance> instance, Policy policy,
                                              bool split, const GreedyOptions& options = {});

/// One slave-addition pass loop over all masters in (server, vnf) order.
/// Returns the number of slaves added.
std::size_t add_slaves(Placement& placement, Policy policy);

/// Next-Fit packing with fragmentation: fill servers in id order, splitting a
/// request when the open server runs out. No slaves are placed. nullopt when
/// total demand exceeds total capacity.
[[nodiscard]] std::optional<Placement> next_fit_split(std::shared_ptr<const ProblemInstance> instance);

struct GreedyResult {
    std::optional<Placement> placement;
    SolveReport report;
};

/// Greedy with split handling and timing; `report.feasible` is false when no placement was found.
[[nodiscard]] GreedyResult solve_greedy(std::shared_ptr<const ProblemInstance> instance, Policy policy,
                                        SplitMode split, const GreedyOptions& options = {});

}  // namespace havnfp
