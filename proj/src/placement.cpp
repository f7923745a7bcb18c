#include "havnfp/placement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "havnfp/tolerances.hpp"

namespace havnfp {

using nlohmann::json;

namespace {

template <typename Vec, typename Key>
auto find_sorted(Vec& v, const Key& key) {
    return std::ranges::lower_bound(v, key, {}, [](const auto& e) { return e.first; });
}

}  // namespace

Placement::Placement(std::shared_ptr<const ProblemInstance> instance) : instance_(std::move(instance)) {
    if (!instance_) throw InputError("placement needs an instance");
    vnf_count_ = instance_->vnf_types().size();
    masters_.resize(instance_->servers().size() * vnf_count_);
    shares_.resize(instance_->requests().size());
    hosted_slaves_.resize(instance_->servers().size());
    used_.assign(instance_->servers().size(), 0.0);
}

std::size_t Placement::slot_index(MasterKey key) const {
    if (key.server.index() >= used_.size() || key.vnf.index() >= vnf_count_) {
        throw InputError("master (" + std::to_string(key.server.index()) + ", " + std::to_string(key.vnf.index()) +
                         ") out of range");
    }
    return key.server.index() * vnf_count_ + key.vnf.index();
}

double Placement::residual(ServerId s) const { return instance_->server(s).capacity - used(s); }

std::optional<double> Placement::slave_reserved(MasterKey key, ServerId host) const {
    const auto& slaves = slot(key).slaves;
    auto it = find_sorted(slaves, host);
    if (it == slaves.end() || it->first != host) return std::nullopt;
    return it->second;
}

std::vector<ServerId> Placement::slaves_of(MasterKey key) const {
    std::vector<ServerId> out;
    for (const auto& [h, _] : slot(key).slaves) out.push_back(h);
    return out;
}

std::vector<MasterKey> Placement::masters() const {
    std::vector<MasterKey> out;
    for (std::size_t i = 0; i < masters_.size(); ++i) {
        if (masters_[i].active) out.push_back({ServerId{i / vnf_count_}, VnfTypeId{i % vnf_count_}});
    }
    return out;
}

std::vector<std::pair<RequestId, double>> Placement::served_by(MasterKey key) const { return slot(key).served; }

bool Placement::is_assigned(RequestId r) const { return !shares_.at(r.index()).empty(); }

double Placement::assigned_amount(RequestId r) const {
    double total = 0.0;
    for (const auto& sh : shares_.at(r.index())) total += sh.amount;
    return total;
}

bool Placement::fully_assigned() const {
    for (std::size_t r = 0; r < shares_.size(); ++r) {
        double d = instance_->requests()[r].demand;
        if (std::abs(assigned_amount(RequestId{r}) / d - 1.0) > kFractionEps) return false;
    }
    return true;
}

AssignmentConfiguration Placement::configuration(RequestId r) const {
    AssignmentConfiguration out;
    const auto& req = instance_->request(r);
    for (const auto& sh : shares_.at(r.index())) {
        std::vector<ServerId> protection{sh.server};
        for (const auto& [h, _] : slot({sh.server, req.vnf}).slaves) protection.push_back(h);
        out.fragments.push_back({Fragment(sh.server, std::move(protection)), sh.amount / req.demand});
    }
    return out;
}

std::vector<VnfInstance> Placement::vnf_instances() const {
    std::vector<VnfInstance> out;
    auto keys = masters();
    for (auto k : keys) out.push_back({k.server, k.vnf, Role::master, slot(k).reserved, std::nullopt});
    for (auto k : keys) {
        for (const auto& [h, res] : slot(k).slaves) out.push_back({h, k.vnf, Role::slave, res, k.server});
    }
    return out;
}

std::size_t Placement::slave_count() const {
    std::size_t n = 0;
    for (const auto& m : masters_) n += m.slaves.size();
    return n;
}

void Placement::refresh_reserved(MasterKey key) {
    auto& m = slot(key);
    double total = 0.0;
    for (const auto& [_, amount] : m.served) total += amount;
    m.reserved = total;
}

void Placement::refresh_used(ServerId s) {
    double total = 0.0;
    for (std::size_t f = 0; f < vnf_count_; ++f) {
        const auto& m = masters_[s.index() * vnf_count_ + f];
        if (m.active) total += m.reserved;
    }
    for (auto key : hosted_slaves_[s.index()]) total += *slave_reserved(key, s);
    used_[s.index()] = total;
}

void Placement::unhost_slave(MasterKey master, ServerId host) {
    auto& hosted = hosted_slaves_[host.index()];
    hosted.erase(std::ranges::find(hosted, master));
    refresh_used(host);
}

bool Placement::assign_amount(RequestId r, ServerId s, double amount) {
    const auto& req = instance_->request(r);
    if (s.index() >= used_.size()) throw InputError("unknown server " + std::to_string(s.index()));
    if (!(amount > 0.0)) return false;
    if (assigned_amount(r) + amount > req.demand + kCapacityEps) return false;
    if (used(s) + amount > instance_->server(s).capacity + kCapacityEps) return false;

    const MasterKey key{s, req.vnf};
    auto& m = slot(key);
    m.active = true;
    if (auto it = find_sorted(m.served, r); it != m.served.end() && it->first == r) {
        it->second += amount;
    } else {
        m.served.insert(it, {r, amount});
    }
    auto& shares = shares_[r.index()];
    auto sh = std::ranges::lower_bound(shares, s, {}, &FragmentShare::server);
    if (sh != shares.end() && sh->server == s) {
        sh->amount += amount;
    } else {
        shares.insert(sh, {s, amount});
    }
    refresh_reserved(key);
    refresh_used(s);

    // Keep every slave at least as large as its master; drop those that cannot grow.
    const double reserved = m.reserved;
    for (std::size_t i = 0; i < m.slaves.size();) {
        auto& [host, res] = m.slaves[i];
        if (res >= reserved) {
            ++i;
            continue;
        }
        if (residual(host) + kCapacityEps >= reserved - res) {
            res = reserved;
            refresh_used(host);
            ++i;
        } else {
            ServerId h = host;
            m.slaves.erase(m.slaves.begin() + static_cast<std::ptrdiff_t>(i));
            unhost_slave(key, h);
        }
    }
    return true;
}

bool Placement::assign_fraction(RequestId r, ServerId s, double fraction) {
    return assign_amount(r, s, fraction * instance_->request(r).demand);
}

bool Placement::add_slave(MasterKey master, ServerId host, std::optional<double> reserved) {
    if (host.index() >= used_.size()) throw InputError("unknown server " + std::to_string(host.index()));
    auto& m = slot(master);
    if (!m.active || host == master.server) return false;
    auto it = find_sorted(m.slaves, host);
    if (it != m.slaves.end() && it->first == host) return false;
    const double res = reserved.value_or(m.reserved);
    if (res < m.reserved) return false;
    if (residual(host) + kCapacityEps < res) return false;

    m.slaves.insert(it, {host, res});
    auto& hosted = hosted_slaves_[host.index()];
    hosted.insert(std::ranges::lower_bound(hosted, master), master);
    refresh_used(host);
    return true;
}

bool Placement::remove_slave(MasterKey master, ServerId host) {
    auto& m = slot(master);
    auto it = find_sorted(m.slaves, host);
    if (it == m.slaves.end() || it->first != host) return false;
    m.slaves.erase(it);
    unhost_slave(master, host);
    return true;
}

void Placement::drop_master(MasterKey key) {
    auto& m = slot(key);
    auto slaves = std::move(m.slaves);
    m = MasterSlot{};
    for (const auto& [h, _] : slaves) unhost_slave(key, h);
    refresh_used(key.server);
}

double Placement::remove_fragment(RequestId r, ServerId s) {
    const auto& req = instance_->request(r);
    auto& shares = shares_.at(r.index());
    auto sh = std::ranges::lower_bound(shares, s, {}, &FragmentShare::server);
    if (sh == shares.end() || sh->server != s) return 0.0;
    const double amount = sh->amount;
    shares.erase(sh);

    const MasterKey key{s, req.vnf};
    auto& m = slot(key);
    m.served.erase(find_sorted(m.served, r));
    if (m.served.empty()) {
        drop_master(key);
    } else {
        refresh_reserved(key);
        refresh_used(s);
    }
    return amount;
}

bool Placement::move_fragment(RequestId r, ServerId from, ServerId to) {
    if (from == to || to.index() >= used_.size()) return false;
    const auto& shares = shares_.at(r.index());
    auto sh = std::ranges::lower_bound(shares, from, {}, &FragmentShare::server);
    if (sh == shares.end() || sh->server != from) return false;
    const double amount = sh->amount;
    // Removing the fragment never adds load on `to`, so this check decides the move.
    if (used(to) + amount > instance_->server(to).capacity + kCapacityEps) return false;
    remove_fragment(r, from);
    [[maybe_unused]] bool ok = assign_amount(r, to, amount);
    return ok;
}

Placement::MasterBundle Placement::detach_master(MasterKey key) {
    auto& m = slot(key);
    MasterBundle bundle{key.vnf, m.served, m.slaves};
    for (const auto& [r, _] : m.served) {
        auto& shares = shares_[r.index()];
        shares.erase(std::ranges::lower_bound(shares, key.server, {}, &FragmentShare::server));
    }
    drop_master(key);
    return bundle;
}

bool Placement::attach_master(const MasterBundle& bundle, ServerId host) {
    const MasterKey key{host, bundle.vnf};
    if (bundle.served.empty() || slot(key).active) return false;
    double total = 0.0;
    for (const auto& [_, amount] : bundle.served) total += amount;
    if (used(host) + total > instance_->server(host).capacity + kCapacityEps) return false;

    auto& m = slot(key);
    m.active = true;
    m.served = bundle.served;
    for (const auto& [r, amount] : bundle.served) {
        auto& shares = shares_[r.index()];
        shares.insert(std::ranges::lower_bound(shares, host, {}, &FragmentShare::server), {host, amount});
    }
    refresh_reserved(key);
    refresh_used(host);
    for (const auto& [h, res] : bundle.slaves) {
        if (h == host) continue;
        (void)add_slave(key, h, std::max(res, m.reserved));
    }
    return true;
}

bool operator==(const Placement& a, const Placement& b) {
    return a.instance_ == b.instance_ && a.masters_ == b.masters_ && a.shares_ == b.shares_ &&
           a.hosted_slaves_ == b.hosted_slaves_ && a.used_ == b.used_;
}

// ---------------------------------------------------------------------------

SolveReport evaluate(const Placement& placement) {
    const auto& inst = placement.instance();
    SolveReport report;
    report.per_request.reserve(inst.requests().size());
    for (std::size_t i = 0; i < inst.requests().size(); ++i) {
        RequestId r{i};
        const double d = inst.requests()[i].demand;
        if (!placement.is_assigned(r) || std::abs(placement.assigned_amount(r) / d - 1.0) > kFractionEps) {
            throw InputError("request '" + inst.requests()[i].name + "' is not fully assigned");
        }
        auto config = placement.configuration(r);
        if (config.fragments.size() > 1) ++report.splits;
        report.per_request.push_back(configuration_availability(inst, r, config));
    }
    if (report.per_request.empty()) {
        report.vacuous = true;
        report.a_min = 1.0;
        return report;
    }
    report.a_min = std::ranges::min(report.per_request);
    for (std::size_t i = 0; i < report.per_request.size(); ++i) {
        if (report.per_request[i] <= report.a_min + kAvailabilityEps) report.worst.push_back(RequestId{i});
    }
    return report;
}

std::vector<std::string> check_placement(const Placement& placement, bool require_complete) {
    const auto& inst = placement.instance();
    std::vector<std::string> problems;
    auto server_name = [&](ServerId s) { return inst.server(s).name; };

    // Ledgers rebuilt from the flat instance list.
    std::map<MasterKey, double> u;
    std::map<MasterKey, std::map<ServerId, double>> v;
    for (const auto& vi : placement.vnf_instances()) {
        if (vi.role == Role::master) {
            if (!u.emplace(MasterKey{vi.server, vi.vnf}, vi.reserved).second) {
                problems.push_back("two masters of one type on server " + server_name(vi.server));
            }
            continue;
        }
        MasterKey mk{*vi.master_server, vi.vnf};
        if (vi.server == mk.server) problems.push_back("slave shares its master's server " + server_name(vi.server));
        if (!v[mk].emplace(vi.server, vi.reserved).second) {
            problems.push_back("two slaves of one master on server " + server_name(vi.server));
        }
    }

    // Assignment and per-master load from the fragments.
    std::map<MasterKey, double> load;
    for (std::size_t i = 0; i < inst.requests().size(); ++i) {
        RequestId r{i};
        const auto& req = inst.requests()[i];
        double fractions = 0.0;
        std::set<ServerId> masters;
        for (const auto& sh : placement.shares(r)) {
            MasterKey mk{sh.server, req.vnf};
            fractions += sh.amount / req.demand;
            load[mk] += sh.amount;
            if (!masters.insert(sh.server).second) problems.push_back("request " + req.name + ": repeated master");
            if (!u.contains(mk)) {
                problems.push_back("request " + req.name + ": no master on " + server_name(sh.server));
            }
        }
        const bool partial_ok = !require_complete && fractions < 1.0 + kFractionEps;
        if (std::abs(fractions - 1.0) > kFractionEps && !partial_ok) {
            problems.push_back("request " + req.name + ": fractions sum to " + std::to_string(fractions));
        }
        for (const auto& wf : placement.configuration(r).fragments) {
            MasterKey mk{wf.fragment.master, req.vnf};
            for (auto s : wf.fragment.protection) {
                if (s != mk.server && !(v.contains(mk) && v[mk].contains(s))) {
                    problems.push_back("request " + req.name + ": protection server " + server_name(s) +
                                       " runs no slave of its master");
                }
            }
        }
    }

    for (const auto& [mk, res] : u) {
        if (load[mk] > res + kCapacityEps) {
            problems.push_back("master on " + server_name(mk.server) + " serves more than it reserves");
        }
        if (load[mk] <= 0.0) problems.push_back("master on " + server_name(mk.server) + " serves nothing");
        if (placement.master_reserved(mk) != load[mk]) {
            problems.push_back("master ledger drift on " + server_name(mk.server));
        }
        if (v.contains(mk)) {
            for (const auto& [h, vres] : v[mk]) {
                if (vres + kCapacityEps < res) {
                    problems.push_back("slave on " + server_name(h) + " reserves less than its master");
                }
            }
        }
    }
    for (const auto& [mk, _] : v) {
        if (!u.contains(mk)) problems.push_back("slave without master (" + server_name(mk.server) + ")");
    }

    // Capacity, summed in the same order the placement uses.
    std::vector<double> used(inst.servers().size(), 0.0);
    for (const auto& [mk, res] : u) used[mk.server.index()] += res;
    for (const auto& [mk, hosts] : v) {
        for (const auto& [h, res] : hosts) used[h.index()] += res;
    }
    for (std::size_t s = 0; s < used.size(); ++s) {
        const ServerId sid{s};
        if (used[s] > inst.servers()[s].capacity + kCapacityEps) {
            problems.push_back("server " + server_name(sid) + " over capacity");
        }
        if (std::abs(used[s] - placement.used(sid)) > kCapacityEps) {
            problems.push_back("usage ledger drift on server " + server_name(sid));
        }
    }
    return problems;
}

json placement_to_json(const Placement& placement) {
    const auto& inst = placement.instance();
    json out;
    out["instances"] = json::array();
    for (const auto& vi : placement.vnf_instances()) {
        json e = {{"server", inst.server(vi.server).name},
                  {"vnf", inst.vnf_type(vi.vnf).name},
                  {"role", vi.role == Role::master ? "master" : "slave"},
                  {"reserved", vi.reserved}};
        if (vi.master_server) e["master"] = inst.server(*vi.master_server).name;
        out["instances"].push_back(std::move(e));
    }
    out["assignments"] = json::array();
    for (std::size_t i = 0; i < inst.requests().size(); ++i) {
        RequestId r{i};
        json frags = json::array();
        auto config = placement.configuration(r);
        auto shares = placement.shares(r);
        for (std::size_t k = 0; k < config.fragments.size(); ++k) {
            const auto& wf = config.fragments[k];
            json prot = json::array();
            for (auto s : wf.fragment.protection) prot.push_back(inst.server(s).name);
            frags.push_back({{"master", inst.server(wf.fragment.master).name},
                             {"protection", prot},
                             {"fraction", wf.fraction},
                             {"amount", shares[k].amount}});
        }
        out["assignments"].push_back({{"request", inst.requests()[i].name}, {"fragments", frags}});
    }
    return out;
}

Placement placement_from_json(std::shared_ptr<const ProblemInstance> instance, const json& doc) {
    Placement p(instance);
    const auto& inst = *instance;
    auto server = [&](const json& v) {
        auto id = inst.find_server(v.get<std::string>());
        if (!id) throw InputError("placement names unknown server '" + v.get<std::string>() + "'");
        return *id;
    };
    try {
        for (const auto& a : doc.at("assignments")) {
            auto r = inst.find_request(a.at("request").get<std::string>());
            if (!r) throw InputError("placement names unknown request '" + a.at("request").get<std::string>() + "'");
            for (const auto& f : a.at("fragments")) {
                double amount = f.contains("amount") ? f.at("amount").get<double>()
                                                     : f.at("fraction").get<double>() * inst.request(*r).demand;
                if (!p.assign_amount(*r, server(f.at("master")), amount)) {
                    throw InputError("placement fragment of '" + inst.request(*r).name + "' does not fit");
                }
            }
        }
        for (const auto& e : doc.at("instances")) {
            if (e.at("role").get<std::string>() != "slave") continue;
            auto vnf = inst.find_vnf_type(e.at("vnf").get<std::string>());
            if (!vnf) throw InputError("placement names unknown vnf type");
            MasterKey mk{server(e.at("master")), *vnf};
            if (!p.add_slave(mk, server(e.at("server")), e.at("reserved").get<double>())) {
                throw InputError("placement slave on '" + e.at("server").get<std::string>() + "' is not valid");
            }
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed placement document: ") + e.what());
    }
    return p;
}

json report_to_json(const ProblemInstance& instance, const SolveReport& report) {
    json out = {{"algorithm", report.algorithm},
                {"feasible", report.feasible},
                {"vacuous", report.vacuous},
                {"a_min", report.a_min},
                {"splits", report.splits},
                {"runtime_seconds", report.runtime_seconds},
                {"used_split", report.used_split}};
    json worst = json::array();
    for (auto r : report.worst) worst.push_back(instance.request(r).name);
    out["worst"] = worst;
    json per = json::array();
    for (std::size_t i = 0; i < report.per_request.size(); ++i) {
        per.push_back({{"request", instance.requests()[i].name}, {"availability", report.per_request[i]}});
    }
    out["per_request"] = per;
    return out;
}

}  // namespace havnfp
