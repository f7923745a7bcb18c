#pragma once

#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "havnfp/model.hpp"

namespace havnfp::testing {

/// Assembles small instances by hand.
class Builder {
public:
    ClusterId cluster(double availability = 1.0) {
        clusters_.push_back({"c" + std::to_string(clusters_.size()), availability});
        return ClusterId{clusters_.size() - 1};
    }
    ServerId server(ClusterId c, double capacity, double availability = 1.0) {
        servers_.push_back({"s" + std::to_string(servers_.size()), c, capacity, availability});
        return ServerId{servers_.size() - 1};
    }
    VnfTypeId vnf(double availability = 1.0) {
        vnfs_.push_back({"f" + std::to_string(vnfs_.size()), availability});
        return VnfTypeId{vnfs_.size() - 1};
    }
    AccessPointId ap() {
        aps_.push_back({"p" + std::to_string(aps_.size())});
        return AccessPointId{aps_.size() - 1};
    }
    void access(ClusterId c, AccessPointId p, double a) { access_.push_back({c, p, a}); }
    void sync(ClusterId a, ClusterId b, double v) { sync_.push_back({a, b, v}); }
    /// Sets every access link of every cluster and every sync link to `a`.
    void link_all(double a) {
        for (std::size_t c = 0; c < clusters_.size(); ++c) {
            for (std::size_t p = 0; p < aps_.size(); ++p) access(ClusterId{c}, AccessPointId{p}, a);
            for (std::size_t d = c + 1; d < clusters_.size(); ++d) sync(ClusterId{c}, ClusterId{d}, a);
        }
    }
    RequestId request(VnfTypeId f, std::vector<AccessPointId> points, double demand) {
        requests_.push_back({"r" + std::to_string(requests_.size()), f, std::move(points), demand});
        return RequestId{requests_.size() - 1};
    }

    [[nodiscard]] ProblemInstance instance() const {
        LinkTable links(clusters_.size(), aps_.size());
        for (const auto& l : access_) links.set_access(l.c, l.p, l.a);
        for (const auto& l : sync_) links.set_sync(l.a, l.b, l.v);
        return ProblemInstance(clusters_, servers_, vnfs_, aps_, links, requests_);
    }
    [[nodiscard]] std::shared_ptr<const ProblemInstance> build() const {
        return std::make_shared<const ProblemInstance>(instance());
    }

private:
    struct AccessLink {
        ClusterId c;
        AccessPointId p;
        double a;
    };
    struct SyncLink {
        ClusterId a, b;
        double v;
    };
    std::vector<Cluster> clusters_;
    std::vector<Server> servers_;
    std::vector<VnfType> vnfs_;
    std::vector<AccessPoint> aps_;
    std::vector<AccessLink> access_;
    std::vector<SyncLink> sync_;
    std::vector<Request> requests_;
};

struct TinyShape {
    std::size_t clusters = 2;
    std::size_t servers = 3;
    std::size_t requests = 4;
    std::size_t vnfs = 2;
    std::size_t aps = 2;
    double availability_min = 0.8;
    double availability_max = 0.999;
    int demand_max = 6;
    int capacity_min = 4;
    int capacity_max = 14;
};

/// Random small instance with availabilities spread widely, so solvers see real trade-offs.
inline std::shared_ptr<const ProblemInstance> random_tiny(std::uint64_t seed, const TinyShape& shape = {}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> avail(shape.availability_min, shape.availability_max);
    std::uniform_int_distribution<int> demand(1, shape.demand_max);
    std::uniform_int_distribution<int> cap(shape.capacity_min, shape.capacity_max);
    Builder b;
    std::vector<ClusterId> cs;
    for (std::size_t i = 0; i < shape.clusters; ++i) cs.push_back(b.cluster(avail(rng)));
    for (std::size_t i = 0; i < shape.servers; ++i) b.server(cs[i % cs.size()], cap(rng), avail(rng));
    std::vector<VnfTypeId> fs;
    for (std::size_t i = 0; i < shape.vnfs; ++i) fs.push_back(b.vnf(avail(rng)));
    std::vector<AccessPointId> ps;
    for (std::size_t i = 0; i < shape.aps; ++i) ps.push_back(b.ap());
    for (auto c : cs) {
        for (auto p : ps) b.access(c, p, avail(rng));
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) b.sync(cs[i], cs[j], avail(rng));
    }
    std::uniform_int_distribution<std::size_t> pick_f(0, fs.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_p(0, ps.size() - 1);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < shape.requests; ++i) {
        std::vector<AccessPointId> points{ps[pick_p(rng)]};
        for (auto p : ps) {
            if (p != points.front() && coin(rng)) points.push_back(p);
        }
        std::ranges::sort(points);
        b.request(fs[pick_f(rng)], points, demand(rng));
    }
    return b.build();
}

}  // namespace havnfp::testing
