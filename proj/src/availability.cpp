#include "havnfp/availability.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <thread>
#include <tuple>

#include "havnfp/tolerances.hpp"

namespace havnfp {

Fragment::Fragment(ServerId master_server, std::vector<ServerId> protection_set)
    : master(master_server), protection(std::move(protection_set)) {
    if (std::ranges::find(protection, master) == protection.end()) protection.push_back(master);
    std::ranges::sort(protection);
    auto dup = std::ranges::unique(protection);
    protection.erase(dup.begin(), dup.end());
}

namespace {

void check_server(const ProblemInstance& instance, ServerId s) {
    if (s.index() >= instance.servers().size()) throw InputError("unknown server " + std::to_string(s.index()));
}

void check_request(const ProblemInstance& instance, RequestId r) {
    if (r.index() >= instance.requests().size()) throw InputError("unknown request " + std::to_string(r.index()));
}

}  // namespace

double access_availability(const ProblemInstance& instance, ClusterId cluster, std::span<const AccessPointId> points) {
    if (cluster.index() >= instance.clusters().size()) {
        throw InputError("unknown cluster " + std::to_string(cluster.index()));
    }
    if (points.empty()) throw InputError("access availability needs at least one access point");
    double all_down = 1.0;
    for (auto p : points) all_down *= 1.0 - instance.links().access(cluster, p);
    return 1.0 - all_down;
}

double server_set_availability(const ProblemInstance& instance, VnfTypeId vnf, std::span<const ServerId> servers) {
    if (vnf.index() >= instance.vnf_types().size()) throw InputError("unknown vnf type " + std::to_string(vnf.index()));
    const double af = instance.vnf_type(vnf).availability;
    double all_down = 1.0;
    for (auto s : servers) {
        check_server(instance, s);
        all_down *= 1.0 - af * instance.server(s).availability;
    }
    return 1.0 - all_down;
}

FragmentBreakdown fragment_breakdown(const ProblemInstance& instance, RequestId request, const Fragment& fragment) {
    check_request(instance, request);
    check_server(instance, fragment.master);
    const auto& req = instance.request(request);
    const ClusterId home = instance.server(fragment.master).cluster;

    // Protection servers grouped by cluster, in cluster id order.
    std::map<ClusterId, std::vector<ServerId>> groups;
    for (auto s : fragment.protection) {
        check_server(instance, s);
        groups[instance.server(s).cluster].push_back(s);
    }
    groups[home];  // the master's cluster is always present

    FragmentBreakdown out;
    double all_down = 1.0;
    for (const auto& [c, servers] : groups) {
        ClusterTerm term;
        term.cluster = c;
        term.master_cluster = c == home;
        term.access = access_availability(instance, c, req.access_points);
        term.cluster_availability = instance.cluster(c).availability;
        term.sync = term.master_cluster ? 1.0 : instance.links().sync(home, c);
        term.servers = server_set_availability(instance, req.vnf, servers);
        term.combined = term.master_cluster ? term.access * term.cluster_availability * term.servers
                                            : term.access * term.cluster_availability * term.sync * term.servers;
        all_down *= 1.0 - term.combined;
        out.clusters.push_back(term);
    }
    out.availability = 1.0 - all_down;
    return out;
}

// Same arithmetic as fragment_breakdown, without allocating per call; this runs
// in the inner loop of every local search.
double fragment_availability(const ProblemInstance& instance, RequestId request, const Fragment& fragment) {
    check_request(instance, request);
    check_server(instance, fragment.master);
    const auto& req = instance.request(request);
    const std::size_t cluster_count = instance.clusters().size();
    const double af = instance.vnf_type(req.vnf).availability;
    const ClusterId home = instance.server(fragment.master).cluster;

    constexpr std::size_t kInline = 32;
    std::array<double, kInline> inline_miss;
    std::vector<double> heap_miss;
    std::span<double> miss;
    if (cluster_count <= kInline) {
        miss = std::span<double>(inline_miss.data(), cluster_count);
    } else {
        heap_miss.resize(cluster_count);
        miss = heap_miss;
    }
    std::ranges::fill(miss, 2.0);  // 2 marks "no protection server here"
    miss[home.index()] = 1.0;
    for (auto s : fragment.protection) {
        check_server(instance, s);
        const auto& srv = instance.server(s);
        auto& m = miss[srv.cluster.index()];
        if (m == 2.0) m = 1.0;
        m *= 1.0 - af * srv.availability;
    }

    double all_down = 1.0;
    for (std::size_t c = 0; c < cluster_count; ++c) {
        if (miss[c] == 2.0) continue;
        const ClusterId cid{c};
        const double access = access_availability(instance, cid, req.access_points);
        const double servers = 1.0 - miss[c];
        const double cluster = instance.cluster(cid).availability;
        const double combined = cid == home ? access * cluster * servers
                                            : access * cluster * instance.links().sync(home, cid) * servers;
        all_down *= 1.0 - combined;
    }
    return 1.0 - all_down;
}

double configuration_availability(const ProblemInstance& instance, RequestId request,
                                  const AssignmentConfiguration& configuration) {
    double a = 1.0;
    for (const auto& wf : configuration.fragments) a *= fragment_availability(instance, request, wf.fragment);
    return a;
}

void check_configuration(const ProblemInstance& instance, const AssignmentConfiguration& configuration) {
    if (configuration.fragments.empty()) throw InputError("assignment configuration has no fragments");
    double total = 0.0;
    std::vector<ServerId> masters;
    for (const auto& wf : configuration.fragments) {
        const auto& f = wf.fragment;
        check_server(instance, f.master);
        for (auto s : f.protection) check_server(instance, s);
        if (std::ranges::find(f.protection, f.master) == f.protection.end()) {
            throw InputError("fragment master not in its protection set");
        }
        auto sorted = f.protection;
        std::ranges::sort(sorted);
        if (std::ranges::adjacent_find(sorted) != sorted.end()) throw InputError("duplicate server in protection set");
        if (!(wf.fraction > 0.0 && wf.fraction <= 1.0 + kFractionEps)) throw InputError("fraction outside (0,1]");
        total += wf.fraction;
        masters.push_back(f.master);
    }
    std::ranges::sort(masters);
    if (std::ranges::adjacent_find(masters) != masters.end()) throw InputError("two fragments share a master server");
    if (std::abs(total - 1.0) > kFractionEps) throw InputError("fractions do not sum to 1");
}

// ---------------------------------------------------------------------------
// Monte Carlo oracle

namespace {

// A fragment succeeds iff some cluster check passes.
struct ClusterCheck {
    std::vector<std::size_t> access;            // any of these up
    std::size_t cluster = 0;                    // must be up
    std::optional<std::size_t> sync;            // must be up when present
    std::vector<std::pair<std::size_t, std::size_t>> hosts;  // (server, software): any pair both up
};

struct SamplingPlan {
    std::vector<double> up_probability;
    std::vector<std::vector<ClusterCheck>> fragments;
};

enum class Kind { access, cluster, sync, server, software };

SamplingPlan build_plan(const ProblemInstance& instance, RequestId request,
                        const AssignmentConfiguration& configuration, FragmentCoupling coupling) {
    const auto& req = instance.request(request);
    const double af = instance.vnf_type(req.vnf).availability;

    SamplingPlan plan;
    // Components are keyed by identity; in independent mode the fragment
    // index is part of the key so no state is shared across fragments.
    std::map<std::tuple<std::size_t, Kind, std::size_t, std::size_t>, std::size_t> slots;
    auto slot = [&](std::size_t frag, Kind kind, std::size_t a, std::size_t b, double p) {
        auto scope = coupling == FragmentCoupling::independent ? frag : 0;
        auto [it, fresh] = slots.try_emplace({scope, kind, a, b}, plan.up_probability.size());
        if (fresh) plan.up_probability.push_back(p);
        return it->second;
    };

    for (std::size_t fi = 0; fi < configuration.fragments.size(); ++fi) {
        const auto& frag = configuration.fragments[fi].fragment;
        const ClusterId home = instance.server(frag.master).cluster;
        std::map<ClusterId, std::vector<ServerId>> groups;
        for (auto s : frag.protection) groups[instance.server(s).cluster].push_back(s);

        std::vector<ClusterCheck> checks;
        for (const auto& [c, servers] : groups) {
            ClusterCheck check;
            for (auto p : req.access_points) {
                check.access.push_back(slot(fi, Kind::access, c.index(), p.index(), instance.links().access(c, p)));
            }
            check.cluster = slot(fi, Kind::cluster, c.index(), 0, instance.cluster(c).availability);
            if (c != home) {
                const std::size_t lo = std::min(c.index(), home.index());
                const std::size_t hi = std::max(c.index(), home.index());
                check.sync = slot(fi, Kind::sync, lo, hi, instance.links().sync(home, c));
            }
            for (auto s : servers) {
                auto server = slot(fi, Kind::server, s.index(), 0, instance.server(s).availability);
                // A software instance is identified by the master it serves and its host.
                auto software = slot(fi, Kind::software, frag.master.index(), s.index(), af);
                check.hosts.emplace_back(server, software);
            }
            checks.push_back(std::move(check));
        }
        plan.fragments.push_back(std::move(checks));
    }
    return plan;
}

bool world_serves(const SamplingPlan& plan, const std::vector<char>& up) {
    for (const auto& checks : plan.fragments) {
        bool ok = std::ranges::any_of(checks, [&up](const ClusterCheck& c) {
            if (!up[c.cluster]) return false;
            if (c.sync && !up[*c.sync]) return false;
            if (std::ranges::none_of(c.access, [&up](std::size_t a) { return up[a] != 0; })) return false;
            return std::ranges::any_of(c.hosts, [&up](const auto& h) { return up[h.first] && up[h.second]; });
        });
        if (!ok) return false;
    }
    return true;
}

constexpr std::uint64_t kBlockSize = 1u << 16;

std::uint64_t run_block(const SamplingPlan& plan, std::uint64_t seed, std::uint64_t block, std::uint64_t count) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<char> up(plan.up_probability.size());
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        for (std::size_t k = 0; k < up.size(); ++k) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            up[k] = u < plan.up_probability[k];
        }
        hits += world_serves(plan, up) ? 1 : 0;
    }
    return hits;
}

}  // namespace

MonteCarloEstimate monte_carlo_availability(const ProblemInstance& instance, RequestId request,
                                            const AssignmentConfiguration& configuration, std::uint64_t samples,
                                            std::uint64_t seed, FragmentCoupling coupling, unsigned threads) {
    check_request(instance, request);
    check_configuration(instance, configuration);
    if (samples == 0) throw InputError("monte carlo needs at least one sample");

    const auto plan = build_plan(instance, request, configuration, coupling);
    const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
    std::vector<std::uint64_t> hits(blocks, 0);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (auto b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
            auto count = std::min(kBlockSize, samples - b * kBlockSize);
            hits[b] = run_block(plan, seed, b, count);
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    MonteCarloEstimate out;
    out.samples = samples;
    for (auto h : hits) out.successes += h;
    out.estimate = static_cast<double>(out.successes) / static_cast<double>(samples);
    out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
    return out;
}

}  // namespace havnfp
