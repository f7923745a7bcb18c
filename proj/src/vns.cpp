#include "havnfp/vns.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "havnfp/tolerances.hpp"

namespace havnfp {

std::string_view to_string(Neighborhood n) {
    switch (n) {
        case Neighborhood::vnf_swap: return "vnfSwap";
        case Neighborhood::slave_swap: return "slaveSwap";
        case Neighborhood::request_swap: return "requestSwap";
        case Neighborhood::request_move: return "requestMove";
    }
    return "?";
}

bool is_improving(const SolveReport& candidate, const SolveReport& incumbent) {
    if (candidate.a_min > incumbent.a_min + kAvailabilityEps) return true;
    return std::abs(candidate.a_min - incumbent.a_min) <= kAvailabilityEps &&
           candidate.worst.size() < incumbent.worst.size();
}

SearchContext::SearchContext(Policy slave_policy, std::optional<Clock::time_point> deadline, std::uint64_t seed)
    : slave_policy_(slave_policy), deadline_(deadline), seed_(seed), rng_(seed) {}

bool SearchContext::expired() {
    if (!deadline_) return false;
    if (Clock::now() >= *deadline_) hit_deadline_ = true;
    return hit_deadline_;
}

std::optional<SolveReport> SearchContext::try_neighbor(Placement& candidate, const SolveReport& incumbent) {
    add_slaves(candidate, slave_policy_);
    ++evaluations_;
    auto report = evaluate(candidate);
    // The extra a_min guard keeps every accepted move from lowering the
    // objective, even inside the tie tolerance.
    if (is_improving(report, incumbent) && report.a_min >= incumbent.a_min) return report;
    return std::nullopt;
}

namespace {

/// Masters serving a worst request, in (server, vnf) order.
std::vector<MasterKey> worst_masters(const Placement& p, const SolveReport& incumbent) {
    std::set<MasterKey> keys;
    for (auto r : incumbent.worst) {
        for (const auto& sh : p.shares(r)) keys.insert({sh.server, p.instance().request(r).vnf});
    }
    return {keys.begin(), keys.end()};
}

// A VNF instance: a master (slave_host empty) or the slave of `master` on `slave_host`.
struct InstanceRef {
    MasterKey master;
    std::optional<ServerId> slave_host;

    [[nodiscard]] ServerId server() const { return slave_host ? *slave_host : master.server; }
    friend auto operator<=>(const InstanceRef&, const InstanceRef&) = default;
};

double instance_size(const Placement& p, const InstanceRef& x) {
    return x.slave_host ? *p.slave_reserved(x.master, *x.slave_host) : p.master_reserved(x.master);
}

/// Exchanges the hosts of `x` and `y` (or moves `x` to `target` when `y` is
/// empty). Masters carry their fragments. Returns false if the result is invalid.
bool apply_swap(Placement& p, const InstanceRef& x, const std::optional<InstanceRef>& y, ServerId target) {
    const ServerId origin = x.server();
    if (!x.slave_host) {
        auto bx = p.detach_master(x.master);
        if (!y) return p.attach_master(bx, target);
        if (!y->slave_host) {
            auto by = p.detach_master(y->master);
            return p.attach_master(bx, target) && p.attach_master(by, origin);
        }
        // y is a slave on `target`
        if (y->master == x.master) {
            // master and its own slave trade places; detaching already removed the slave
            auto it = std::ranges::find(bx.slaves, target, [](const auto& e) { return e.first; });
            const double own = it->second;
            const MasterKey moved{target, x.master.vnf};
            return p.attach_master(bx, target) && p.add_slave(moved, origin, own);
        }
        if (y->master.server == origin) return false;
        const double res = *p.slave_reserved(y->master, target);
        p.remove_slave(y->master, target);
        return p.attach_master(bx, target) && p.add_slave(y->master, origin, res);
    }

    const double res_x = *p.slave_reserved(x.master, origin);
    if (!y) {
        p.remove_slave(x.master, origin);
        return p.add_slave(x.master, target, res_x);
    }
    if (!y->slave_host) {
        // When x protects y, the master's key changes with its host.
        const MasterKey xm = x.master == y->master ? MasterKey{origin, x.master.vnf} : x.master;
        p.remove_slave(x.master, origin);
        auto by = p.detach_master(y->master);
        if (!p.attach_master(by, origin)) return false;
        if (!p.has_master(xm)) return false;
        return p.add_slave(xm, target, std::max(res_x, p.master_reserved(xm)));
    }
    if (y->master == x.master) return false;  // two slaves of one master: nothing changes
    const double res_y = *p.slave_reserved(y->master, target);
    p.remove_slave(x.master, origin);
    p.remove_slave(y->master, target);
    return p.add_slave(x.master, target, res_x) && p.add_slave(y->master, origin, res_y);
}

}  // namespace

std::optional<Move> vnf_swap_neighborhood(const Placement& placement, const SolveReport& incumbent,
                                          SearchContext& ctx) {
    const auto& inst = placement.instance();
    std::vector<InstanceRef> sources;
    for (auto mk : worst_masters(placement, incumbent)) {
        sources.push_back({mk, std::nullopt});
        for (auto h : placement.slaves_of(mk)) sources.push_back({mk, h});
    }
    ctx.shuffle(sources);

    std::vector<ServerId> servers(inst.servers().size());
    for (std::size_t s = 0; s < servers.size(); ++s) servers[s] = ServerId{s};
    ctx.shuffle(servers);

    for (const auto& x : sources) {
        const ServerId origin = x.server();
        const double size_x = instance_size(placement, x);
        for (auto target : servers) {
            if (target == origin) continue;
            std::vector<std::optional<InstanceRef>> partners{std::nullopt};
            for (std::size_t f = 0; f < inst.vnf_types().size(); ++f) {
                MasterKey mk{target, VnfTypeId{f}};
                if (placement.has_master(mk)) partners.emplace_back(InstanceRef{mk, std::nullopt});
            }
            for (auto mk : placement.slaves_hosted_on(target)) partners.emplace_back(InstanceRef{mk, target});

            for (const auto& y : partners) {
                const double size_y = y ? instance_size(placement, *y) : 0.0;
                if (placement.used(target) - size_y + size_x > inst.server(target).capacity + kCapacityEps) continue;
                if (placement.used(origin) - size_x + size_y > inst.server(origin).capacity + kCapacityEps) continue;
                if (ctx.expired()) return std::nullopt;
                Placement candidate = placement;
                if (!apply_swap(candidate, x, y, target)) continue;
                if (auto rep = ctx.try_neighbor(candidate, incumbent)) return Move{std::move(candidate), *rep};
            }
        }
    }
    return std::nullopt;
}

std::optional<Move> slave_swap_neighborhood(const Placement& placement, const SolveReport& incumbent,
                                            SearchContext& ctx) {
    const auto& inst = placement.instance();
    auto targets = worst_masters(placement, incumbent);
    std::vector<InstanceRef> slaves;
    for (auto mk : placement.masters()) {
        for (auto h : placement.slaves_of(mk)) slaves.push_back({mk, h});
    }
    ctx.shuffle(slaves);
    ctx.shuffle(targets);

    for (const auto& z : slaves) {
        const ServerId host = *z.slave_host;
        const double freed = *placement.slave_reserved(z.master, host);
        for (auto mk : targets) {
            if (mk == z.master || mk.server == host || placement.slave_reserved(mk, host)) continue;
            if (placement.used(host) - freed + placement.master_reserved(mk) > inst.server(host).capacity + kCapacityEps) {
                continue;
            }
            if (ctx.expired()) return std::nullopt;
            Placement candidate = placement;
            candidate.remove_slave(z.master, host);
            if (!candidate.add_slave(mk, host)) continue;
            if (auto rep = ctx.try_neighbor(candidate, incumbent)) return Move{std::move(candidate), *rep};
        }
    }
    return std::nullopt;
}

std::optional<Move> request_swap_neighborhood(const Placement& placement, const SolveReport& incumbent,
                                              SearchContext& ctx) {
    const auto& inst = placement.instance();
    auto worst = incumbent.worst;
    ctx.shuffle(worst);
    std::vector<RequestId> others(inst.requests().size());
    for (std::size_t r = 0; r < others.size(); ++r) others[r] = RequestId{r};
    ctx.shuffle(others);

    for (auto r : worst) {
        const auto own = std::vector<FragmentShare>(placement.shares(r).begin(), placement.shares(r).end());
        for (const auto& mine : own) {
            for (auto other : others) {
                if (other == r) continue;
                const auto theirs = std::vector<FragmentShare>(placement.shares(other).begin(),
                                                               placement.shares(other).end());
                for (const auto& their : theirs) {
                    if (their.server == mine.server) continue;
                    if (ctx.expired()) return std::nullopt;
                    Placement candidate = placement;
                    candidate.remove_fragment(r, mine.server);
                    candidate.remove_fragment(other, their.server);
                    if (!candidate.assign_amount(r, their.server, mine.amount)) continue;
                    if (!candidate.assign_amount(other, mine.server, their.amount)) continue;
                    if (auto rep = ctx.try_neighbor(candidate, incumbent)) return Move{std::move(candidate), *rep};
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<Move> request_move_neighborhood(const Placement& placement, const SolveReport& incumbent,
                                              SearchContext& ctx) {
    const auto& inst = placement.instance();
    auto worst = incumbent.worst;
    ctx.shuffle(worst);
    std::vector<ServerId> servers(inst.servers().size());
    for (std::size_t s = 0; s < servers.size(); ++s) servers[s] = ServerId{s};
    ctx.shuffle(servers);

    for (auto r : worst) {
        const auto own = std::vector<FragmentShare>(placement.shares(r).begin(), placement.shares(r).end());
        for (const auto& mine : own) {
            for (auto target : servers) {
                if (target == mine.server) continue;
                if (placement.used(target) + mine.amount > inst.server(target).capacity + kCapacityEps) continue;
                if (ctx.expired()) return std::nullopt;
                Placement candidate = placement;
                if (!candidate.move_fragment(r, mine.server, target)) continue;
                if (auto rep = ctx.try_neighbor(candidate, incumbent)) return Move{std::move(candidate), *rep};
            }
        }
    }
    return std::nullopt;
}

LocalSearchResult local_search(Placement start, const VnsConfig& config, Policy slave_policy, std::size_t start_index,
                               SearchContext::Clock::time_point search_begin) {
    using Clock = SearchContext::Clock;
    std::optional<Clock::time_point> deadline;
    if (config.per_start_time_limit) {
        deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(*config.per_start_time_limit));
    }
    SearchContext ctx(slave_policy, deadline, config.seed == 0 ? 0 : config.seed + start_index);

    auto report = evaluate(start);
    LocalSearchResult out{std::move(start), report, {}, 0, false};
    std::size_t accepted = 0;
    bool improved = true;
    while (improved) {
        improved = false;
        if (config.max_iterations && accepted >= *config.max_iterations) break;
        for (auto n : config.order) {
            std::optional<Move> move;
            switch (n) {
                case Neighborhood::vnf_swap: move = vnf_swap_neighborhood(out.placement, out.report, ctx); break;
                case Neighborhood::slave_swap: move = slave_swap_neighborhood(out.placement, out.report, ctx); break;
                case Neighborhood::request_swap:
                    move = request_swap_neighborhood(out.placement, out.report, ctx);
                    break;
                case Neighborhood::request_move:
                    move = request_move_neighborhood(out.placement, out.report, ctx);
                    break;
            }
            if (ctx.hit_deadline()) break;
            if (!move) continue;
            TraceRecord rec;
            rec.start = start_index;
            rec.neighborhood = n;
            rec.a_min = move->report.a_min;
            rec.delta = move->report.a_min - out.report.a_min;
            rec.worst = move->report.worst.size();
            rec.timestamp = std::chrono::duration<double>(Clock::now() - search_begin).count();
            out.trace.push_back(rec);
            out.placement = std::move(move->placement);
            out.report = std::move(move->report);
            ++accepted;
            improved = true;
            break;
        }
        if (ctx.hit_deadline()) break;
    }
    out.evaluations = ctx.evaluations();
    out.hit_deadline = ctx.hit_deadline();
    return out;
}

VnsResult vns(std::shared_ptr<const ProblemInstance> instance, const VnsConfig& config, SplitMode split,
              std::span<const Placement> extra_starts) {
    using Clock = SearchContext::Clock;
    const auto begin = Clock::now();

    struct Start {
        Placement placement;
        Policy slave_policy;
        bool used_split;
    };
    std::vector<Start> starts;
    VnsResult out;
    for (auto policy : {Policy::best_availability, Policy::best_fit, Policy::first_fit}) {
        auto g = solve_greedy(instance, policy, split, config.greedy);
        out.start_reports.push_back(g.report);
        if (g.placement) starts.push_back({std::move(*g.placement), policy, g.report.used_split});
    }
    for (const auto& p : extra_starts) {
        if (p.fully_assigned()) starts.push_back({p, Policy::best_availability, false});
    }

    std::vector<LocalSearchResult> results;
    if (config.parallel_starts && starts.size() > 1) {
        std::vector<std::future<LocalSearchResult>> jobs;
        for (std::size_t i = 0; i < starts.size(); ++i) {
            jobs.push_back(std::async(std::launch::async, [&, i] {
                return local_search(starts[i].placement, config, starts[i].slave_policy, i, begin);
            }));
        }
        for (auto& j : jobs) results.push_back(j.get());
    } else {
        for (std::size_t i = 0; i < starts.size(); ++i) {
            results.push_back(local_search(starts[i].placement, config, starts[i].slave_policy, i, begin));
        }
    }

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.trace.insert(out.trace.end(), results[i].trace.begin(), results[i].trace.end());
        out.evaluations += results[i].evaluations;
        out.hit_deadline = out.hit_deadline || results[i].hit_deadline;
        if (!best) {
            best = i;
            continue;
        }
        const auto& a = results[i].report;
        const auto& b = results[*best].report;
        if (a.a_min > b.a_min || (a.a_min == b.a_min && a.worst.size() < b.worst.size())) best = i;
    }

    if (best) {
        out.report = results[*best].report;
        out.report.used_split = starts[*best].used_split;
        out.placement = std::move(results[*best].placement);
    } else {
        out.report.feasible = false;
        out.report.a_min = 0.0;
        out.report.used_split = split != SplitMode::off;
    }
    out.report.algorithm = config.per_start_time_limit ? "vns-tl" : "vns";
    out.report.runtime_seconds = std::chrono::duration<double>(Clock::now() - begin).count();
    return out;
}

}  // namespace havnfp
