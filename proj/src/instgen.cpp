#include "havnfp/instgen.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace havnfp {

namespace {

enum Stream : std::uint32_t { requests_stream = 1, access_sets_stream, servers_stream, components_stream };

std::mt19937_64 stream(std::uint64_t seed, Stream id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id)};
    return std::mt19937_64(seq);
}

std::string name(char prefix, std::size_t index, std::size_t count) {
    const std::size_t width = std::max<std::size_t>(3, std::to_string(count).size());
    std::string digits = std::to_string(index);
    return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

double draw(std::mt19937_64& rng, const std::vector<double>& palette) {
    std::uniform_int_distribution<std::size_t> pick(0, palette.size() - 1);
    return palette[pick(rng)];
}

}  // namespace

void check_generator_config(const GeneratorConfig& c) {
    if (c.requests == 0 || c.vnf_types == 0 || c.clusters == 0 || c.access_points == 0) {
        throw InputError("generator counts must be positive");
    }
    if (c.aps_per_request == 0 || c.aps_per_request > c.access_points) {
        throw InputError("access points per request must lie in [1, " + std::to_string(c.access_points) + "]");
    }
    if (c.demand_min < 1 || c.demand_max < c.demand_min) throw InputError("invalid demand range");
    if (c.capacity_min < 1 || c.capacity_max < c.capacity_min) throw InputError("invalid capacity range");
    if (c.palette.empty()) throw InputError("availability palette is empty");
    for (double a : c.palette) {
        if (!(a > 0.0 && a <= 1.0)) throw InputError("palette values must lie in (0,1]");
    }
    if (!(c.capacity_multiplier > 0.0)) throw InputError("capacity multiplier must be positive");
}

ProblemInstance generate(const GeneratorConfig& c) {
    check_generator_config(c);

    auto comp = stream(c.seed, components_stream);
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < c.clusters; ++i) clusters.push_back({name('c', i, c.clusters), draw(comp, c.palette)});
    std::vector<VnfType> vnfs;
    for (std::size_t i = 0; i < c.vnf_types; ++i) vnfs.push_back({name('f', i, c.vnf_types), draw(comp, c.palette)});
    std::vector<AccessPoint> aps;
    for (std::size_t i = 0; i < c.access_points; ++i) aps.push_back({name('p', i, c.access_points)});
    LinkTable links(c.clusters, c.access_points);
    for (std::size_t k = 0; k < c.clusters; ++k) {
        for (std::size_t p = 0; p < c.access_points; ++p) {
            links.set_access(ClusterId{k}, AccessPointId{p}, draw(comp, c.palette));
        }
    }
    for (std::size_t a = 0; a < c.clusters; ++a) {
        for (std::size_t b = a + 1; b < c.clusters; ++b) links.set_sync(ClusterId{a}, ClusterId{b}, draw(comp, c.palette));
    }

    auto req_rng = stream(c.seed, requests_stream);
    auto ap_rng = stream(c.seed, access_sets_stream);
    std::uniform_int_distribution<int> demand(c.demand_min, c.demand_max);
    std::uniform_int_distribution<std::size_t> vnf(0, c.vnf_types - 1);
    std::vector<Request> requests;
    double total_demand = 0.0;
    std::vector<std::size_t> perm(c.access_points);
    for (std::size_t i = 0; i < c.requests; ++i) {
        Request r;
        r.name = name('r', i, c.requests);
        r.vnf = VnfTypeId{vnf(req_rng)};
        r.demand = demand(req_rng);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), ap_rng);
        for (std::size_t k = 0; k < c.aps_per_request; ++k) r.access_points.push_back(AccessPointId{perm[k]});
        std::ranges::sort(r.access_points);
        total_demand += r.demand;
        requests.push_back(std::move(r));
    }

    auto srv_rng = stream(c.seed, servers_stream);
    std::uniform_int_distribution<int> capacity(c.capacity_min, c.capacity_max);
    std::vector<Server> servers;
    double total_capacity = 0.0;
    const double target = c.capacity_multiplier * total_demand;
    while (total_capacity < target) {
        Server s;
        s.cluster = ClusterId{servers.size() % c.clusters};
        s.capacity = capacity(srv_rng);
        s.availability = draw(srv_rng, c.palette);
        total_capacity += s.capacity;
        servers.push_back(std::move(s));
    }
    // Zero-padded names keep canonical (sorted) order equal to generation order.
    for (std::size_t i = 0; i < servers.size(); ++i) servers[i].name = name('s', i, std::max<std::size_t>(servers.size(), 1000));

    return ProblemInstance(std::move(clusters), std::move(servers), std::move(vnfs), std::move(aps), std::move(links),
                           std::move(requests));
}

std::vector<double> default_multipliers() {
    std::vector<double> out;
    for (int k = 0; k <= 8; ++k) out.push_back(1.0 + 0.25 * k);
    return out;
}

std::vector<ProblemInstance> sweep(const GeneratorConfig& config, std::span<const double> multipliers) {
    std::vector<ProblemInstance> out;
    for (double m : multipliers) {
        GeneratorConfig c = config;
        c.capacity_multiplier = m;
        out.push_back(generate(c));
    }
    return out;
}

}  // namespace havnfp
