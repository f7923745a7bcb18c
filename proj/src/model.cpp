#include "havnfp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "havnfp/tolerances.hpp"

namespace havnfp {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// LinkTable

LinkTable::LinkTable(std::size_t clusters, std::size_t access_points)
    : clusters_(clusters),
      access_points_(access_points),
      access_(clusters * access_points),
      sync_(clusters * clusters) {}

std::size_t LinkTable::access_slot(ClusterId c, AccessPointId p) const {
    if (c.index() >= clusters_ || p.index() >= access_points_) {
        throw InputError("access link (" + std::to_string(c.index()) + ", " + std::to_string(p.index()) +
                         ") out of range");
    }
    return c.index() * access_points_ + p.index();
}

std::size_t LinkTable::sync_slot(ClusterId a, ClusterId b) const {
    if (a.index() >= clusters_ || b.index() >= clusters_) {
        throw InputError("sync link {" + std::to_string(a.index()) + ", " + std::to_string(b.index()) +
                         "} out of range");
    }
    const std::size_t lo = std::min(a.index(), b.index());
    const std::size_t hi = std::max(a.index(), b.index());
    return lo * clusters_ + hi;
}

void LinkTable::set_access(ClusterId c, AccessPointId p, double availability) {
    access_[access_slot(c, p)] = availability;
}

void LinkTable::set_sync(ClusterId a, ClusterId b, double availability) {
    sync_[sync_slot(a, b)] = availability;
}

double LinkTable::access(ClusterId c, AccessPointId p) const { return access_[access_slot(c, p)].value_or(0.0); }

double LinkTable::sync(ClusterId a, ClusterId b) const { return sync_[sync_slot(a, b)].value_or(0.0); }

bool LinkTable::has_access(ClusterId c, AccessPointId p) const { return access_[access_slot(c, p)].has_value(); }

bool LinkTable::has_sync(ClusterId a, ClusterId b) const { return sync_[sync_slot(a, b)].has_value(); }

// ---------------------------------------------------------------------------
// ProblemInstance

ProblemInstance::ProblemInstance(std::vector<Cluster> clusters, std::vector<Server> servers,
                                 std::vector<VnfType> vnf_types, std::vector<AccessPoint> access_points,
                                 LinkTable links, std::vector<Request> requests)
    : clusters_(std::move(clusters)),
      servers_(std::move(servers)),
      vnf_types_(std::move(vnf_types)),
      access_points_(std::move(access_points)),
      links_(std::move(links)),
      requests_(std::move(requests)) {
    if (links_.cluster_count() != clusters_.size() || links_.access_point_count() != access_points_.size()) {
        throw InputError("link table dimensions do not match clusters/access points");
    }
    build_indices();
}

void ProblemInstance::build_indices() {
    servers_by_cluster_.assign(clusters_.size(), {});
    for (std::size_t s = 0; s < servers_.size(); ++s) {
        auto c = servers_[s].cluster.index();
        if (c < clusters_.size()) servers_by_cluster_[c].push_back(ServerId{s});
    }
    auto index = [](auto& table, const auto& items) {
        table.clear();
        for (std::size_t i = 0; i < items.size(); ++i) table.emplace(items[i].name, i);
    };
    index(cluster_names_, clusters_);
    index(server_names_, servers_);
    index(vnf_names_, vnf_types_);
    index(access_point_names_, access_points_);
    index(request_names_, requests_);
}

double ProblemInstance::total_demand() const {
    return std::accumulate(requests_.begin(), requests_.end(), 0.0,
                           [](double acc, const Request& r) { return acc + r.demand; });
}

double ProblemInstance::total_capacity() const {
    return std::accumulate(servers_.begin(), servers_.end(), 0.0,
                           [](double acc, const Server& s) { return acc + s.capacity; });
}

namespace {

template <typename IdT>
std::optional<IdT> lookup(const std::unordered_map<std::string, std::size_t>& table, std::string_view name) {
    auto it = table.find(std::string(name));
    if (it == table.end()) return std::nullopt;
    return IdT{it->second};
}

}  // namespace

std::optional<ClusterId> ProblemInstance::find_cluster(std::string_view name) const {
    return lookup<ClusterId>(cluster_names_, name);
}
std::optional<ServerId> ProblemInstance::find_server(std::string_view name) const {
    return lookup<ServerId>(server_names_, name);
}
std::optional<VnfTypeId> ProblemInstance::find_vnf_type(std::string_view name) const {
    return lookup<VnfTypeId>(vnf_names_, name);
}
std::optional<AccessPointId> ProblemInstance::find_access_point(std::string_view name) const {
    return lookup<AccessPointId>(access_point_names_, name);
}
std::optional<RequestId> ProblemInstance::find_request(std::string_view name) const {
    return lookup<RequestId>(request_names_, name);
}

bool operator==(const ProblemInstance& a, const ProblemInstance& b) {
    auto same_clusters = std::ranges::equal(a.clusters_, b.clusters_, [](const Cluster& x, const Cluster& y) {
        return x.name == y.name && x.availability == y.availability;
    });
    auto same_servers = std::ranges::equal(a.servers_, b.servers_, [](const Server& x, const Server& y) {
        return x.name == y.name && x.cluster == y.cluster && x.capacity == y.capacity &&
               x.availability == y.availability;
    });
    auto same_vnfs = std::ranges::equal(a.vnf_types_, b.vnf_types_, [](const VnfType& x, const VnfType& y) {
        return x.name == y.name && x.availability == y.availability;
    });
    auto same_aps = std::ranges::equal(a.access_points_, b.access_points_,
                                       [](const AccessPoint& x, const AccessPoint& y) { return x.name == y.name; });
    auto same_requests = std::ranges::equal(a.requests_, b.requests_, [](const Request& x, const Request& y) {
        return x.name == y.name && x.vnf == y.vnf && x.access_points == y.access_points && x.demand == y.demand;
    });
    return same_clusters && same_servers && same_vnfs && same_aps && same_requests && a.links_ == b.links_;
}

// ---------------------------------------------------------------------------
// validate

namespace {

bool probability_open(double p) { return p > 0.0 && p <= 1.0; }
bool probability_closed(double p) { return p >= 0.0 && p <= 1.0; }

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<Violation> validate(const ProblemInstance& instance) {
    std::vector<Violation> out;
    auto error = [&out](std::string msg) { out.push_back({Violation::Severity::error, std::move(msg)}); };

    for (std::size_t i = 0; i < instance.clusters().size(); ++i) {
        if (!probability_open(instance.clusters()[i].availability)) {
            error("cluster " + std::to_string(i) + ": availability outside (0,1]");
        }
    }
    for (std::size_t i = 0; i < instance.servers().size(); ++i) {
        const auto& s = instance.servers()[i];
        auto tag = "server " + std::to_string(i) + ": ";
        if (!(s.capacity > 0.0)) error(tag + "capacity must be positive");
        if (!probability_open(s.availability)) error(tag + "availability outside (0,1]");
        if (s.cluster.index() >= instance.clusters().size()) error(tag + "unknown cluster");
    }
    for (std::size_t i = 0; i < instance.vnf_types().size(); ++i) {
        if (!probability_open(instance.vnf_types()[i].availability)) {
            error("vnf type " + std::to_string(i) + ": availability outside (0,1]");
        }
    }
    const auto& links = instance.links();
    for (std::size_t c = 0; c < instance.clusters().size(); ++c) {
        for (std::size_t p = 0; p < instance.access_points().size(); ++p) {
            double a = links.access(ClusterId{c}, AccessPointId{p});
            if (!probability_closed(a)) {
                error("access link (" + std::to_string(c) + ", " + std::to_string(p) + "): availability outside [0,1]");
            }
        }
        for (std::size_t d = c + 1; d < instance.clusters().size(); ++d) {
            double a = links.sync(ClusterId{c}, ClusterId{d});
            if (!probability_closed(a)) {
                error("sync link {" + std::to_string(c) + ", " + std::to_string(d) + "}: availability outside [0,1]");
            }
        }
    }
    for (std::size_t i = 0; i < instance.requests().size(); ++i) {
        const auto& r = instance.requests()[i];
        auto tag = "request " + std::to_string(i) + ": ";
        if (!(r.demand > 0.0)) error(tag + "demand must be positive");
        if (r.access_points.empty()) error(tag + "empty access point set");
        if (r.vnf.index() >= instance.vnf_types().size()) error(tag + "unknown vnf type");
        for (auto p : r.access_points) {
            if (p.index() >= instance.access_points().size()) error(tag + "unknown access point");
        }
        auto sorted = r.access_points;
        std::ranges::sort(sorted);
        if (std::ranges::adjacent_find(sorted) != sorted.end()) error(tag + "duplicate access point");
    }

    double demand = instance.total_demand();
    double capacity = instance.total_capacity();
    if (demand > capacity + kCapacityEps) {
        out.push_back({Violation::Severity::warning, "capacity deficit: total demand " + fmt_real(demand) +
                                                         " exceeds total capacity " + fmt_real(capacity)});
    }
    return out;
}

bool is_valid(const ProblemInstance& instance) {
    return std::ranges::none_of(validate(instance),
                                [](const Violation& v) { return v.severity == Violation::Severity::error; });
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        auto line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("", line, "syntax error at line " + std::to_string(line) + ": " + e.what());
    }
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path, 0, path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) {
        auto full = path.empty() ? std::string(key) : path + "." + key;
        throw ParseError(full, 0, "missing field '" + full + "'");
    }
    return *it;
}

const json& array_field(const json& obj, const char* key, const std::string& path) {
    const auto& v = field(obj, key, path);
    if (!v.is_array()) {
        auto full = path.empty() ? std::string(key) : path + "." + key;
        throw ParseError(full, 0, "field '" + full + "' must be an array");
    }
    return v;
}

std::string string_field(const json& obj, const char* key, const std::string& path) {
    const auto& v = field(obj, key, path);
    if (!v.is_string()) throw ParseError(path + "." + key, 0, "field '" + path + "." + key + "' must be a string");
    return v.get<std::string>();
}

double number_field(const json& obj, const char* key, const std::string& path) {
    const auto& v = field(obj, key, path);
    if (!v.is_number()) throw ParseError(path + "." + key, 0, "field '" + path + "." + key + "' must be a number");
    return v.get<double>();
}

std::string at(const char* array, std::size_t i) { return std::string(array) + "[" + std::to_string(i) + "]"; }

template <typename IdT, typename Finder>
IdT resolve(Finder&& find, const std::string& name, const std::string& path) {
    auto id = find(name);
    if (!id) throw ParseError(path, 0, path + ": unknown name '" + name + "'");
    return *id;
}

void check_unique(const std::vector<std::string>& names, const char* array) {
    std::vector<std::string> sorted = names;
    std::ranges::sort(sorted);
    auto dup = std::ranges::adjacent_find(sorted);
    if (dup != sorted.end()) throw ParseError(array, 0, std::string(array) + ": duplicate name '" + *dup + "'");
}

// Reorders a document into the canonical layout. Works on any document that
// has the instance schema, independent of load_instance.
ordered_json canonical_form(const json& doc) {
    auto by_name = [](const json& a, const json& b) {
        return a.at("name").get<std::string>() < b.at("name").get<std::string>();
    };
    auto sorted = [](json arr, auto cmp) {
        std::vector<json> items(arr.begin(), arr.end());
        std::ranges::stable_sort(items, cmp);
        return items;
    };
    auto num = [](const json& v) { return v.get<double>(); };

    ordered_json out = ordered_json::object();

    out["clusters"] = ordered_json::array();
    for (const auto& c : sorted(array_field(doc, "clusters", ""), by_name)) {
        out["clusters"].push_back({{"name", c.at("name")}, {"availability", num(c.at("availability"))}});
    }
    out["servers"] = ordered_json::array();
    for (const auto& s : sorted(array_field(doc, "servers", ""), by_name)) {
        out["servers"].push_back({{"name", s.at("name")},
                                  {"cluster", s.at("cluster")},
                                  {"capacity", num(s.at("capacity"))},
                                  {"availability", num(s.at("availability"))}});
    }
    out["vnf_types"] = ordered_json::array();
    for (const auto& f : sorted(array_field(doc, "vnf_types", ""), by_name)) {
        out["vnf_types"].push_back({{"name", f.at("name")}, {"availability", num(f.at("availability"))}});
    }
    out["access_points"] = ordered_json::array();
    for (const auto& p : sorted(array_field(doc, "access_points", ""), by_name)) {
        out["access_points"].push_back({{"name", p.at("name")}});
    }
    out["access_links"] = ordered_json::array();
    for (const auto& l : sorted(array_field(doc, "access_links", ""), [](const json& a, const json& b) {
             return std::tuple(a.at("cluster").get<std::string>(), a.at("access_point").get<std::string>()) <
                    std::tuple(b.at("cluster").get<std::string>(), b.at("access_point").get<std::string>());
         })) {
        out["access_links"].push_back({{"cluster", l.at("cluster")},
                                       {"access_point", l.at("access_point")},
                                       {"availability", num(l.at("availability"))}});
    }
    std::vector<json> syncs;
    for (const auto& l : array_field(doc, "sync_links", "")) {
        auto a = l.at("cluster_a").get<std::string>();
        auto b = l.at("cluster_b").get<std::string>();
        if (b < a) std::swap(a, b);
        syncs.push_back({{"cluster_a", a}, {"cluster_b", b}, {"availability", num(l.at("availability"))}});
    }
    std::ranges::stable_sort(syncs, [](const json& a, const json& b) {
        return std::tuple(a.at("cluster_a").get<std::string>(), a.at("cluster_b").get<std::string>()) <
               std::tuple(b.at("cluster_a").get<std::string>(), b.at("cluster_b").get<std::string>());
    });
    out["sync_links"] = ordered_json::array();
    for (const auto& l : syncs) {
        out["sync_links"].push_back(
            {{"cluster_a", l.at("cluster_a")}, {"cluster_b", l.at("cluster_b")}, {"availability", l.at("availability")}});
    }
    out["requests"] = ordered_json::array();
    for (const auto& r : sorted(array_field(doc, "requests", ""), by_name)) {
        std::vector<std::string> aps = r.at("access_points").get<std::vector<std::string>>();
        std::ranges::sort(aps);
        out["requests"].push_back({{"name", r.at("name")},
                                   {"vnf", r.at("vnf")},
                                   {"access_points", aps},
                                   {"demand", num(r.at("demand"))}});
    }
    return out;
}

void write_value(std::ostringstream& os, const ordered_json& v, int indent);

void write_scalar(std::ostringstream& os, const ordered_json& v) {
    if (v.is_number()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        os << buf;
    } else {
        os << v.dump();
    }
}

void write_value(std::ostringstream& os, const ordered_json& v, int indent) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    std::string inner(static_cast<std::size_t>(indent + 2), ' ');
    if (v.is_object()) {
        // Leaf objects (no nested containers except scalar arrays) go on one line.
        bool flat = std::ranges::all_of(v, [](const ordered_json& x) {
            return !x.is_object() && (!x.is_array() || std::ranges::none_of(x, [](const auto& y) {
                                          return y.is_structured();
                                      }));
        });
        if (flat) {
            os << "{";
            bool first = true;
            for (const auto& [k, x] : v.items()) {
                os << (first ? "" : ", ") << ordered_json(k).dump() << ": ";
                write_value(os, x, indent);
                first = false;
            }
            os << "}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [k, x] : v.items()) {
            os << (first ? "" : ",\n") << inner << ordered_json(k).dump() << ": ";
            write_value(os, x, indent + 2);
            first = false;
        }
        os << "\n" << pad << "}";
    } else if (v.is_array()) {
        bool scalars = std::ranges::none_of(v, [](const auto& y) { return y.is_structured(); });
        if (v.empty() || scalars) {
            os << "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ", ";
                write_scalar(os, v[i]);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            os << (i ? ",\n" : "") << inner;
            write_value(os, v[i], indent + 2);
        }
        os << "\n" << pad << "]";
    } else {
        write_scalar(os, v);
    }
}

std::string write_canonical(const ordered_json& doc) {
    std::ostringstream os;
    write_value(os, doc, 0);
    os << "\n";
    return os.str();
}

json instance_document(const ProblemInstance& inst) {
    json doc = json::object();
    doc["clusters"] = json::array();
    for (const auto& c : inst.clusters()) doc["clusters"].push_back({{"name", c.name}, {"availability", c.availability}});
    doc["servers"] = json::array();
    for (const auto& s : inst.servers()) {
        doc["servers"].push_back({{"name", s.name},
                                  {"cluster", inst.cluster(s.cluster).name},
                                  {"capacity", s.capacity},
                                  {"availability", s.availability}});
    }
    doc["vnf_types"] = json::array();
    for (const auto& f : inst.vnf_types()) doc["vnf_types"].push_back({{"name", f.name}, {"availability", f.availability}});
    doc["access_points"] = json::array();
    for (const auto& p : inst.access_points()) doc["access_points"].push_back({{"name", p.name}});
    doc["access_links"] = json::array();
    doc["sync_links"] = json::array();
    const auto& links = inst.links();
    for (std::size_t c = 0; c < inst.clusters().size(); ++c) {
        for (std::size_t p = 0; p < inst.access_points().size(); ++p) {
            if (!links.has_access(ClusterId{c}, AccessPointId{p})) continue;
            doc["access_links"].push_back({{"cluster", inst.clusters()[c].name},
                                           {"access_point", inst.access_points()[p].name},
                                           {"availability", links.access(ClusterId{c}, AccessPointId{p})}});
        }
        for (std::size_t d = c + 1; d < inst.clusters().size(); ++d) {
            if (!links.has_sync(ClusterId{c}, ClusterId{d})) continue;
            doc["sync_links"].push_back({{"cluster_a", inst.clusters()[c].name},
                                         {"cluster_b", inst.clusters()[d].name},
                                         {"availability", links.sync(ClusterId{c}, ClusterId{d})}});
        }
    }
    doc["requests"] = json::array();
    for (const auto& r : inst.requests()) {
        json aps = json::array();
        for (auto p : r.access_points) aps.push_back(inst.access_points()[p.index()].name);
        doc["requests"].push_back(
            {{"name", r.name}, {"vnf", inst.vnf_type(r.vnf).name}, {"access_points", aps}, {"demand", r.demand}});
    }
    return doc;
}

ProblemInstance instance_from_document(const json& doc) {
    if (!doc.is_object()) throw ParseError("", 0, "instance document must be a JSON object");

    std::vector<Cluster> clusters;
    const auto& jc = array_field(doc, "clusters", "");
    for (std::size_t i = 0; i < jc.size(); ++i) {
        auto path = at("clusters", i);
        clusters.push_back({string_field(jc[i], "name", path), number_field(jc[i], "availability", path)});
    }
    std::vector<VnfType> vnfs;
    const auto& jf = array_field(doc, "vnf_types", "");
    for (std::size_t i = 0; i < jf.size(); ++i) {
        auto path = at("vnf_types", i);
        vnfs.push_back({string_field(jf[i], "name", path), number_field(jf[i], "availability", path)});
    }
    std::vector<AccessPoint> aps;
    const auto& jp = array_field(doc, "access_points", "");
    for (std::size_t i = 0; i < jp.size(); ++i) aps.push_back({string_field(jp[i], "name", at("access_points", i))});

    auto names_of = [](const auto& items) {
        std::vector<std::string> names;
        for (const auto& x : items) names.push_back(x.name);
        return names;
    };
    check_unique(names_of(clusters), "clusters");
    check_unique(names_of(vnfs), "vnf_types");
    check_unique(names_of(aps), "access_points");

    std::unordered_map<std::string, std::size_t> cluster_ids, vnf_ids, ap_ids;
    for (std::size_t i = 0; i < clusters.size(); ++i) cluster_ids.emplace(clusters[i].name, i);
    for (std::size_t i = 0; i < vnfs.size(); ++i) vnf_ids.emplace(vnfs[i].name, i);
    for (std::size_t i = 0; i < aps.size(); ++i) ap_ids.emplace(aps[i].name, i);
    auto finder = [](const auto& table) {
        return [&table](const std::string& n) -> std::optional<std::size_t> {
            auto it = table.find(n);
            return it == table.end() ? std::nullopt : std::optional<std::size_t>(it->second);
        };
    };

    std::vector<Server> servers;
    const auto& js = array_field(doc, "servers", "");
    for (std::size_t i = 0; i < js.size(); ++i) {
        auto path = at("servers", i);
        auto c = resolve<std::size_t>(finder(cluster_ids), string_field(js[i], "cluster", path), path + ".cluster");
        servers.push_back({string_field(js[i], "name", path), ClusterId{c}, number_field(js[i], "capacity", path),
                           number_field(js[i], "availability", path)});
    }
    check_unique(names_of(servers), "servers");

    LinkTable links(clusters.size(), aps.size());
    const auto& jal = array_field(doc, "access_links", "");
    for (std::size_t i = 0; i < jal.size(); ++i) {
        auto path = at("access_links", i);
        auto c = resolve<std::size_t>(finder(cluster_ids), string_field(jal[i], "cluster", path), path + ".cluster");
        auto p = resolve<std::size_t>(finder(ap_ids), string_field(jal[i], "access_point", path),
                                      path + ".access_point");
        links.set_access(ClusterId{c}, AccessPointId{p}, number_field(jal[i], "availability", path));
    }
    const auto& jsl = array_field(doc, "sync_links", "");
    for (std::size_t i = 0; i < jsl.size(); ++i) {
        auto path = at("sync_links", i);
        auto a = resolve<std::size_t>(finder(cluster_ids), string_field(jsl[i], "cluster_a", path),
                                      path + ".cluster_a");
        auto b = resolve<std::size_t>(finder(cluster_ids), string_field(jsl[i], "cluster_b", path),
                                      path + ".cluster_b");
        if (a == b) throw ParseError(path, 0, path + ": sync link must join two distinct clusters");
        links.set_sync(ClusterId{a}, ClusterId{b}, number_field(jsl[i], "availability", path));
    }

    std::vector<Request> requests;
    const auto& jr = array_field(doc, "requests", "");
    for (std::size_t i = 0; i < jr.size(); ++i) {
        auto path = at("requests", i);
        Request r;
        r.name = string_field(jr[i], "name", path);
        r.vnf = VnfTypeId{resolve<std::size_t>(finder(vnf_ids), string_field(jr[i], "vnf", path), path + ".vnf")};
        const auto& jap = array_field(jr[i], "access_points", path);
        for (std::size_t k = 0; k < jap.size(); ++k) {
            auto apath = path + ".access_points[" + std::to_string(k) + "]";
            if (!jap[k].is_string()) throw ParseError(apath, 0, apath + ": must be a string");
            r.access_points.push_back(AccessPointId{resolve<std::size_t>(finder(ap_ids), jap[k].get<std::string>(), apath)});
        }
        r.demand = number_field(jr[i], "demand", path);
        requests.push_back(std::move(r));
    }
    check_unique(names_of(requests), "requests");

    return ProblemInstance(std::move(clusters), std::move(servers), std::move(vnfs), std::move(aps), std::move(links),
                           std::move(requests));
}

}  // namespace

ProblemInstance load_instance(std::string_view text) { return instance_from_document(parse_document(text)); }

std::string save_instance(const ProblemInstance& instance) {
    return write_canonical(canonical_form(instance_document(instance)));
}

std::string canonicalize_instance_document(std::string_view text) {
    auto doc = parse_document(text);
    try {
        return write_canonical(canonical_form(doc));
    } catch (const json::exception& e) {
        throw ParseError("", 0, std::string("malformed instance document: ") + e.what());
    }
}

ProblemInstance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_instance(buf.str());
}

void write_instance_file(const ProblemInstance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write instance file '" + path + "'");
    out << save_instance(instance);
}

}  // namespace havnfp
