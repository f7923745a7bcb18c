#include "havnfp/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "havnfp/availability.hpp"
#include "havnfp/tolerances.hpp"

namespace havnfp {

namespace {

struct Piece {
    ServerId master;
    double amount = 0.0;
    std::vector<ServerId> slaves;  // protection minus master
};

struct Config {
    std::vector<Piece> pieces;
    double availability = 0.0;
};

// Every (master, protection-set) choice for one master server.
std::vector<std::vector<ServerId>> slave_subsets(std::size_t servers, ServerId master) {
    std::vector<ServerId> others;
    for (std::size_t s = 0; s < servers; ++s) {
        if (ServerId{s} != master) others.push_back(ServerId{s});
    }
    std::vector<std::vector<ServerId>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others.size()); ++mask) {
        std::vector<ServerId> subset;
        for (std::size_t i = 0; i < others.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) subset.push_back(others[i]);
        }
        out.push_back(std::move(subset));
    }
    return out;
}

// Distributions of `units` grid units over servers (order matters, zeros allowed).
void compositions(std::size_t servers, unsigned units, std::vector<unsigned>& cur,
                  std::vector<std::vector<unsigned>>& out) {
    if (cur.size() + 1 == servers) {
        cur.push_back(units);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (unsigned k = 0; k <= units; ++k) {
        cur.push_back(k);
        compositions(servers, units - k, cur, out);
        cur.pop_back();
    }
}

std::vector<Config> request_configs(const ProblemInstance& inst, RequestId r, std::optional<unsigned> grid) {
    const std::size_t n = inst.servers().size();
    const double demand = inst.request(r).demand;
    std::vector<std::vector<unsigned>> splits;
    if (grid && *grid > 1) {
        std::vector<unsigned> cur;
        compositions(n, *grid, cur, splits);
    } else {
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<unsigned> one(n, 0);
            one[s] = 1;
            splits.push_back(std::move(one));
        }
    }
    const unsigned units = grid && *grid > 1 ? *grid : 1;

    std::vector<Config> out;
    for (const auto& split : splits) {
        std::vector<ServerId> masters;
        for (std::size_t s = 0; s < n; ++s) {
            if (split[s] > 0) masters.push_back(ServerId{s});
        }
        // Cartesian product of slave subsets, one per master.
        std::vector<std::vector<std::vector<ServerId>>> options;
        for (auto m : masters) options.push_back(slave_subsets(n, m));
        std::vector<std::size_t> pick(masters.size(), 0);
        for (;;) {
            Config c;
            AssignmentConfiguration gamma;
            for (std::size_t k = 0; k < masters.size(); ++k) {
                const double fraction = static_cast<double>(split[masters[k].index()]) / units;
                Piece piece{masters[k], demand * fraction, options[k][pick[k]]};
                std::vector<ServerId> protection = piece.slaves;
                protection.push_back(piece.master);
                gamma.fragments.push_back({Fragment(piece.master, std::move(protection)), fraction});
                c.pieces.push_back(std::move(piece));
            }
            c.availability = configuration_availability(inst, r, gamma);
            out.push_back(std::move(c));
            std::size_t k = 0;
            while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
            if (k == pick.size()) break;
        }
    }
    // Most available first so good incumbents appear early.
    std::ranges::stable_sort(out, [](const Config& a, const Config& b) { return a.availability > b.availability; });
    return out;
}

class Search {
public:
    Search(const ProblemInstance& inst, std::vector<std::vector<Config>> configs, const ExactConfig& config)
        : inst_(inst),
          configs_(std::move(configs)),
          config_(config),
          servers_(inst.servers().size()),
          vnfs_(inst.vnf_types().size()),
          load_(servers_ * vnfs_, 0.0),
          slave_refs_(servers_ * vnfs_ * servers_, 0),
          chosen_(configs_.size(), 0) {
        best_possible_.resize(configs_.size() + 1, 1.0);
        for (std::size_t i = configs_.size(); i-- > 0;) {
            double top = configs_[i].empty() ? 0.0 : configs_[i].front().availability;
            best_possible_[i] = std::min(best_possible_[i + 1], top);
        }
        if (config.time_limit) {
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(*config.time_limit));
        }
    }

    void run() { dfs(0, 1.0); }

    [[nodiscard]] bool found() const { return found_; }
    [[nodiscard]] bool stopped() const { return stopped_; }
    [[nodiscard]] std::uint64_t nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<std::size_t>& best() const { return best_; }
    [[nodiscard]] const std::vector<std::vector<Config>>& configs() const { return configs_; }

private:
    std::size_t key(ServerId s, VnfTypeId f) const { return s.index() * vnfs_ + f.index(); }

    bool capacity_ok() const {
        for (std::size_t s = 0; s < servers_; ++s) {
            double used = 0.0;
            for (std::size_t f = 0; f < vnfs_; ++f) used += load_[s * vnfs_ + f];
            for (std::size_t m = 0; m < servers_; ++m) {
                for (std::size_t f = 0; f < vnfs_; ++f) {
                    if (slave_refs_[(m * vnfs_ + f) * servers_ + s] > 0) used += load_[m * vnfs_ + f];
                }
            }
            if (used > inst_.servers()[s].capacity + kCapacityEps) return false;
        }
        return true;
    }

    void apply(std::size_t r, const Config& c, int sign) {
        const VnfTypeId f = inst_.requests()[r].vnf;
        for (const auto& piece : c.pieces) {
            load_[key(piece.master, f)] += sign * piece.amount;
            for (auto h : piece.slaves) slave_refs_[key(piece.master, f) * servers_ + h.index()] += sign;
        }
        if (sign < 0) {
            // Undo exactly: loads of inactive masters return to zero.
            for (const auto& piece : c.pieces) {
                auto& l = load_[key(piece.master, f)];
                if (std::abs(l) < kCapacityEps * 1e-3) l = 0.0;
            }
        }
    }

    bool out_of_budget() {
        if (nodes_ >= config_.node_budget) stopped_ = true;
        if (deadline_ && (nodes_ & 1023) == 0 && std::chrono::steady_clock::now() >= *deadline_) stopped_ = true;
        return stopped_;
    }

    void dfs(std::size_t r, double partial_min) {
        if (r == configs_.size()) {
            if (!found_ || partial_min > best_value_) {
                found_ = true;
                best_value_ = partial_min;
                best_ = chosen_;
            }
            return;
        }
        for (std::size_t i = 0; i < configs_[r].size(); ++i) {
            if (stopped_ || out_of_budget()) return;
            ++nodes_;
            const auto& c = configs_[r][i];
            const double bound = std::min({partial_min, c.availability, best_possible_[r + 1]});
            // Configurations are sorted, so once the bound fails it fails for the rest.
            if (found_ && bound <= best_value_) return;
            apply(r, c, +1);
            if (capacity_ok()) {
                chosen_[r] = i;
                dfs(r + 1, std::min(partial_min, c.availability));
            }
            apply(r, c, -1);
        }
    }

    const ProblemInstance& inst_;
    std::vector<std::vector<Config>> configs_;
    const ExactConfig& config_;
    std::size_t servers_;
    std::size_t vnfs_;
    std::vector<double> load_;       // per (master server, vnf)
    std::vector<int> slave_refs_;    // per (master server, vnf, slave host)
    std::vector<std::size_t> chosen_;
    std::vector<double> best_possible_;
    std::vector<std::size_t> best_;
    double best_value_ = -1.0;
    bool found_ = false;
    bool stopped_ = false;
    std::uint64_t nodes_ = 0;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
};

}  // namespace

ExactResult exact_solve(std::shared_ptr<const ProblemInstance> instance, const ExactConfig& config) {
    const auto begin = std::chrono::steady_clock::now();
    const auto& inst = *instance;
    if (inst.servers().size() > config.max_servers) {
        throw ExactRefused("exact search handles at most " + std::to_string(config.max_servers) + " servers, got " +
                           std::to_string(inst.servers().size()));
    }
    if (inst.requests().size() > config.max_requests) {
        throw ExactRefused("exact search handles at most " + std::to_string(config.max_requests) +
                           " requests, got " + std::to_string(inst.requests().size()));
    }

    ExactResult out;
    std::vector<std::vector<Config>> configs;
    out.search_space = 1.0;
    for (std::size_t r = 0; r < inst.requests().size(); ++r) {
        configs.push_back(request_configs(inst, RequestId{r}, config.split_grid));
        out.search_space *= static_cast<double>(configs.back().size());
    }
    if (out.search_space > config.search_space_limit) {
        throw ExactRefused("search space of " + std::to_string(out.search_space) + " assignments exceeds the limit of " +
                           std::to_string(config.search_space_limit));
    }

    Search search(inst, std::move(configs), config);
    search.run();
    out.nodes = search.nodes();
    out.optimal = !search.stopped();

    if (search.found()) {
        Placement p(instance);
        const auto& all = search.configs();
        std::vector<std::vector<ServerId>> slaves(inst.servers().size() * inst.vnf_types().size());
        for (std::size_t r = 0; r < all.size(); ++r) {
            const auto& c = all[r][search.best()[r]];
            const VnfTypeId f = inst.requests()[r].vnf;
            for (const auto& piece : c.pieces) {
                if (!p.assign_amount(RequestId{r}, piece.master, piece.amount)) {
                    throw std::logic_error("exact search produced an unplaceable fragment");
                }
                auto& s = slaves[piece.master.index() * inst.vnf_types().size() + f.index()];
                s.insert(s.end(), piece.slaves.begin(), piece.slaves.end());
            }
        }
        for (std::size_t i = 0; i < slaves.size(); ++i) {
            auto& hosts = slaves[i];
            std::ranges::sort(hosts);
            hosts.erase(std::ranges::unique(hosts).begin(), hosts.end());
            MasterKey mk{ServerId{i / inst.vnf_types().size()}, VnfTypeId{i % inst.vnf_types().size()}};
            for (auto h : hosts) {
                if (!p.add_slave(mk, h)) throw std::logic_error("exact search produced an unplaceable slave");
            }
        }
        out.report = evaluate(p);
        out.placement = std::move(p);
    } else {
        out.report.feasible = false;
        out.report.a_min = 0.0;
    }
    out.report.algorithm = "exact";
    out.report.used_split = config.split_grid.value_or(1) > 1;
    out.report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    return out;
}

}  // namespace havnfp
