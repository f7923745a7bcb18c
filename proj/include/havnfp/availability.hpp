#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "havnfp/model.hpp"

namespace havnfp {

/// One piece of a request: the master server plus every server running the
/// master or one of its slaves. `protection` is kept sorted and contains `master`.
struct Fragment {
    ServerId master;
    std::vector<ServerId> protection;

    Fragment() = default;
    Fragment(ServerId master_server, std::vector<ServerId> protection_set);

    friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct WeightedFragment {
    Fragment fragment;
    double fraction = 1.0;

    friend bool operator==(const WeightedFragment&, const WeightedFragment&) = default;
};

/// All fragments of one request. Masters are pairwise distinct, fractions sum to 1.
struct AssignmentConfiguration {
    std::vector<WeightedFragment> fragments;

    friend bool operator==(const AssignmentConfiguration&, const AssignmentConfiguration&) = default;
};

/// Probability that at least one access link from `cluster` to `points` works.
[[nodiscard]] double access_availability(const ProblemInstance& instance, ClusterId cluster,
                                         std::span<const AccessPointId> points);

/// Probability that at least one instance of `vnf` on `servers` works. Empty set gives 0.
[[nodiscard]] double server_set_availability(const ProblemInstance& instance, VnfTypeId vnf,
                                             std::span<const ServerId> servers);

[[nodiscard]] double fragment_availability(const ProblemInstance& instance, RequestId request,
                                           const Fragment& fragment);

/// Product of the fragment availabilities; fractions do not enter.
[[nodiscard]] double configuration_availability(const ProblemInstance& instance, RequestId request,
                                                const AssignmentConfiguration& configuration);

/// Per-cluster factors of one fragment, for display.
struct ClusterTerm {
    ClusterId cluster;
    bool master_cluster = false;
    double access = 0.0;
    double cluster_availability = 0.0;
    double sync = 1.0;  // 1 for the master's own cluster
    double servers = 0.0;
    double combined = 0.0;  // access * cluster * sync * servers
};

struct FragmentBreakdown {
    std::vector<ClusterTerm> clusters;  // only clusters holding protection servers
    double availability = 0.0;
};

[[nodiscard]] FragmentBreakdown fragment_breakdown(const ProblemInstance& instance, RequestId request,
                                                   const Fragment& fragment);

/// Throws InputError when the configuration breaks its invariants or names unknown servers.
void check_configuration(const ProblemInstance& instance, const AssignmentConfiguration& configuration);

/// How fragments of one request relate inside a sampled world.
enum class FragmentCoupling {
    /// Each fragment sees its own world state, matching the product form over fragments.
    independent,
    /// All fragments share one world state (shared clusters and links fail together).
    shared,
};

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t successes = 0;
};

/// Samples component up/down states independently with their availabilities and
/// reports the fraction of worlds in which the request is served, with the
/// binomial standard error. Result depends only on (inputs, samples, seed).
[[nodiscard]] MonteCarloEstimate monte_carlo_availability(const ProblemInstance& instance, RequestId request,
                                                          const AssignmentConfiguration& configuration,
                                                          std::uint64_t samples, std::uint64_t seed,
                                                          FragmentCoupling coupling = FragmentCoupling::independent,
                                                          unsigned threads = 0);

}  // namespace havnfp
