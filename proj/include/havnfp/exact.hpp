#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "havnfp/placement.hpp"

namespace havnfp {

/// The instance is outside what exhaustive search is allowed to attempt.
class ExactRefused : public InputError {
public:
    using InputError::InputError;
};

struct ExactConfig {
    std::size_t max_servers = 4;
    std::size_t max_requests = 8;
    /// Requests may be split into multiples of 1/split_grid. Unset: no split.
    std::optional<unsigned> split_grid;
    std::optional<double> time_limit;  // seconds
    /// Search nodes visited before giving up on proving optimality.
    std::uint64_t node_budget = 100'000'000;
    /// Refuse instances whose product of per-request configuration counts exceeds this.
    double search_space_limit = 1e12;
};

struct ExactResult {
    std::optional<Placement> placement;
    SolveReport report;
    bool optimal = false;  // false when a budget stopped the search
    std::uint64_t nodes = 0;
    double search_space = 0.0;
};

/// Maximizes the minimum request availability over every assignment
/// configuration of every request, with masters reserving their load and each
/// protection edge reserving a slave of the master's size.
[[nodiscard]] ExactResult exact_solve(std::shared_ptr<const ProblemInstance> instance, const ExactConfig& config = {});

}  // namespace havnfp
