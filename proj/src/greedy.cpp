#include "havnfp/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "havnfp/tolerances.hpp"

namespace havnfp {

std::string_view to_string(Policy p) {
    switch (p) {
        case Policy::best_fit: return "bestfit";
        case Policy::first_fit: return "firstfit";
        case Policy::best_availability: return "bestavail";
    }
    return "?";
}

std::string_view to_string(SplitMode m) {
    switch (m) {
        case SplitMode::off: return "off";
        case SplitMode::on: return "on";
        case SplitMode::fallback: return "fallback";
    }
    return "?";
}

Policy parse_policy(std::string_view text) {
    if (text == "bestfit" || text == "best_fit") return Policy::best_fit;
    if (text == "firstfit" || text == "first_fit") return Policy::first_fit;
    if (text == "bestavail" || text == "best_availability" || text == "bestavailability") {
        return Policy::best_availability;
    }
    throw InputError("unknown policy '" + std::string(text) + "'");
}

SplitMode parse_split_mode(std::string_view text) {
    if (text == "off" || text == "false") return SplitMode::off;
    if (text == "on" || text == "true") return SplitMode::on;
    if (text == "fallback") return SplitMode::fallback;
    throw InputError("unknown split mode '" + std::string(text) + "'");
}

namespace {

double server_score(const ProblemInstance& inst, ServerId s) {
    const auto& srv = inst.server(s);
    return srv.availability * inst.cluster(srv.cluster).availability;
}

std::optional<ServerId> pick(const Placement& placement, double demand, std::span<const ServerId> qualified,
                             Policy policy) {
    if (qualified.empty()) return std::nullopt;
    const auto& inst = placement.instance();
    switch (policy) {
        case Policy::first_fit: return std::ranges::min(qualified);
        case Policy::best_fit:
            return *std::ranges::min_element(qualified, [&](ServerId a, ServerId b) {
                double sa = placement.residual(a) - demand;
                double sb = placement.residual(b) - demand;
                return sa != sb ? sa < sb : a < b;
            });
        case Policy::best_availability:
            return *std::ranges::min_element(qualified, [&](ServerId a, ServerId b) {
                double sa = server_score(inst, a);
                double sb = server_score(inst, b);
                return sa != sb ? sa > sb : a < b;
            });
    }
    return std::nullopt;
}

}  // namespace

std::optional<ServerId> select_server(const Placement& placement, double demand, std::span<const ServerId> candidates,
                                      Policy policy, bool split) {
    std::vector<ServerId> fits;
    for (auto s : candidates) {
        if (placement.residual(s) + kCapacityEps >= demand) fits.push_back(s);
    }
    if (fits.empty() && split) {
        for (auto s : candidates) {
            if (placement.residual(s) > kCapacityEps) fits.push_back(s);
        }
    }
    return pick(placement, demand, fits, policy);
}

std::size_t add_slaves(Placement& placement, Policy policy) {
    const auto server_count = placement.instance().servers().size();
    std::size_t added_total = 0;
    std::vector<ServerId> candidates;
    for (;;) {
        std::size_t added = 0;
        for (auto key : placement.masters()) {
            if (!placement.has_master(key)) continue;
            const auto slaves = placement.slaves_of(key);
            candidates.clear();
            for (std::size_t s = 0; s < server_count; ++s) {
                ServerId sid{s};
                if (sid != key.server && !std::ranges::binary_search(slaves, sid)) candidates.push_back(sid);
            }
            auto chosen = select_server(placement, placement.master_reserved(key), candidates, policy, false);
            if (chosen && placement.add_slave(key, *chosen)) ++added;
        }
        added_total += added;
        if (added == 0) break;
    }
    return added_total;
}

std::optional<Placement> greedy(std::shared_ptr<const ProblemInstance> instance, Policy policy, bool split,
                                const GreedyOptions& options) {
    const auto& inst = *instance;
    Placement placement(instance);

    std::vector<std::size_t> order(inst.requests().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (options.sort_demand_desc) {
        std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
            return inst.requests()[a].demand > inst.requests()[b].demand;
        });
    }
    std::vector<ServerId> all(inst.servers().size());
    for (std::size_t s = 0; s < all.size(); ++s) all[s] = ServerId{s};

    for (auto i : order) {
        const RequestId r{i};
        double remaining = inst.requests()[i].demand;
        if (!(remaining > 0.0)) continue;
        while (remaining > kCapacityEps) {
            auto s = select_server(placement, remaining, all, policy, split);
            if (!s) return std::nullopt;
            double amount = std::min(remaining, std::max(0.0, placement.residual(*s)));
            // A full fit takes the whole remainder, even across the epsilon slack.
            if (placement.residual(*s) + kCapacityEps >= remaining) amount = remaining;
            if (!placement.assign_amount(r, *s, amount)) return std::nullopt;
            remaining -= amount;
        }
    }
    add_slaves(placement, policy);
    return placement;
}

std::optional<Placement> next_fit_split(std::shared_ptr<const ProblemInstance> instance) {
    const auto& inst = *instance;
    if (inst.total_demand() > inst.total_capacity() + kCapacityEps) return std::nullopt;
    Placement placement(instance);
    std::size_t open = 0;
    const std::size_t servers = inst.servers().size();
    for (std::size_t i = 0; i < inst.requests().size(); ++i) {
        const RequestId r{i};
        double remaining = inst.requests()[i].demand;
        while (remaining > kCapacityEps) {
            while (open < servers && placement.residual(ServerId{open}) <= kCapacityEps) ++open;
            if (open == servers) return std::nullopt;
            const ServerId s{open};
            double room = placement.residual(s);
            double amount = room + kCapacityEps >= remaining ? remaining : room;
            if (!placement.assign_amount(r, s, amount)) return std::nullopt;
            remaining -= amount;
            if (amount == room) ++open;  // server filled: close it
        }
    }
    return placement;
}

GreedyResult solve_greedy(std::shared_ptr<const ProblemInstance> instance, Policy policy, SplitMode split,
                          const GreedyOptions& options) {
    auto start = std::chrono::steady_clock::now();
    GreedyResult out;
    bool used_split = split == SplitMode::on;
    out.placement = greedy(instance, policy, split == SplitMode::on, options);
    if (!out.placement && split == SplitMode::fallback) {
        used_split = true;
        out.placement = greedy(instance, policy, true, options);
    }
    if (out.placement) {
        out.report = evaluate(*out.placement);
    } else {
        out.report.feasible = false;
        out.report.a_min = 0.0;
    }
    out.report.algorithm = "greedy-" + std::string(to_string(policy));
    out.report.used_split = used_split;
    out.report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace havnfp
