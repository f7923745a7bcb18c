#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "havnfp/model.hpp"

namespace havnfp {

struct GeneratorConfig {
    std::size_t requests = 50;
    std::size_t aps_per_request = 2;
    std::size_t vnf_types = 5;
    std::size_t clusters = 3;
    std::size_t access_points = 3;
    int demand_min = 1;
    int demand_max = 10;
    int capacity_min = 75;
    int capacity_max = 125;
    std::vector<double> palette{0.9995, 0.9999, 0.99995, 0.99999};
    double capacity_multiplier = 1.0;
    std::uint64_t seed = 1;
};

/// Throws InputError when a range is empty or a count is zero.
void check_generator_config(const GeneratorConfig& config);

/// Random instance. Each entity class draws from its own seeded stream, so
/// changing the access point count only changes request access sets (and
/// larger counts extend smaller ones), and a larger multiplier only appends servers.
[[nodiscard]] ProblemInstance generate(const GeneratorConfig& config);

/// 1.00, 1.25, ..., 3.00
[[nodiscard]] std::vector<double> default_multipliers();

/// One instance per multiplier, all sharing the request set.
[[nodiscard]] std::vector<ProblemInstance> sweep(const GeneratorConfig& config, std::span<const double> multipliers);

}  // namespace havnfp
