#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "havnfp/ids.hpp"

namespace havnfp {

/// Malformed or inconsistent input (bad ids, bad document). Maps to CLI exit code 3.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Instance document could not be parsed. Carries the offending field path and,
/// for syntax errors, the 1-based line.
class ParseError : public InputError {
public:
    ParseError(std::string field, std::size_t line, const std::string& what)
        : InputError(what), field_(std::move(field)), line_(line) {}

    [[nodiscard]] const std::string& field() const { return field_; }
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

struct Cluster {
    std::string name;
    double availability = 1.0;
};

struct Server {
    std::string name;
    ClusterId cluster;
    double capacity = 0.0;
    double availability = 1.0;
};

struct VnfType {
    std::string name;
    double availability = 1.0;
};

struct AccessPoint {
    std::string name;
};

struct Request {
    std::string name;
    VnfTypeId vnf;
    std::vector<AccessPointId> access_points;
    double demand = 0.0;
};

/// Availabilities of access links (cluster, access point) and synchronization
/// links {cluster, cluster}. A link that was never set is absent and reads as 0.
class LinkTable {
public:
    LinkTable() = default;
    LinkTable(std::size_t clusters, std::size_t access_points);

    void set_access(ClusterId c, AccessPointId p, double availability);
    void set_sync(ClusterId a, ClusterId b, double availability);

    [[nodiscard]] double access(ClusterId c, AccessPointId p) const;
    [[nodiscard]] double sync(ClusterId a, ClusterId b) const;
    [[nodiscard]] bool has_access(ClusterId c, AccessPointId p) const;
    [[nodiscard]] bool has_sync(ClusterId a, ClusterId b) const;

    [[nodiscard]] std::size_t cluster_count() const { return clusters_; }
    [[nodiscard]] std::size_t access_point_count() const { return access_points_; }

    friend bool operator==(const LinkTable&, const LinkTable&) = default;

private:
    [[nodiscard]] std::size_t access_slot(ClusterId c, AccessPointId p) const;
    [[nodiscard]] std::size_t sync_slot(ClusterId a, ClusterId b) const;

    std::size_t clusters_ = 0;
    std::size_t access_points_ = 0;
    std::vector<std::optional<double>> access_;
    std::vector<std::optional<double>> sync_;
};

/// Full problem input. Immutable once built; share it via
/// std::shared_ptr<const ProblemInstance>.
class ProblemInstance {
public:
    ProblemInstance() = default;
    ProblemInstance(std::vector<Cluster> clusters, std::vector<Server> servers, std::vector<VnfType> vnf_types,
                    std::vector<AccessPoint> access_points, LinkTable links, std::vector<Request> requests);

    [[nodiscard]] std::span<const Cluster> clusters() const { return clusters_; }
    [[nodiscard]] std::span<const Server> servers() const { return servers_; }
    [[nodiscard]] std::span<const VnfType> vnf_types() const { return vnf_types_; }
    [[nodiscard]] std::span<const AccessPoint> access_points() const { return access_points_; }
    [[nodiscard]] std::span<const Request> requests() const { return requests_; }
    [[nodiscard]] const LinkTable& links() const { return links_; }

    [[nodiscard]] const Cluster& cluster(ClusterId id) const { return clusters_.at(id.index()); }
    [[nodiscard]] const Server& server(ServerId id) const { return servers_.at(id.index()); }
    [[nodiscard]] const VnfType& vnf_type(VnfTypeId id) const { return vnf_types_.at(id.index()); }
    [[nodiscard]] const Request& request(RequestId id) const { return requests_.at(id.index()); }

    /// Servers of one cluster, in id order.
    [[nodiscard]] std::span<const ServerId> servers_in(ClusterId c) const { return servers_by_cluster_.at(c.index()); }

    [[nodiscard]] double total_demand() const;
    [[nodiscard]] double total_capacity() const;

    [[nodiscard]] std::optional<ClusterId> find_cluster(std::string_view name) const;
    [[nodiscard]] std::optional<ServerId> find_server(std::string_view name) const;
    [[nodiscard]] std::optional<VnfTypeId> find_vnf_type(std::string_view name) const;
    [[nodiscard]] std::optional<AccessPointId> find_access_point(std::string_view name) const;
    [[nodiscard]] std::optional<RequestId> find_request(std::string_view name) const;

    friend bool operator==(const ProblemInstance& a, const ProblemInstance& b);

private:
    void build_indices();

    std::vector<Cluster> clusters_;
    std::vector<Server> servers_;
    std::vector<VnfType> vnf_types_;
    std::vector<AccessPoint> access_points_;
    LinkTable links_;
    std::vector<Request> requests_;

    std::vector<std::vector<ServerId>> servers_by_cluster_;
    std::unordered_map<std::string, std::size_t> cluster_names_;
    std::unordered_map<std::string, std::size_t> server_names_;
    std::unordered_map<std::string, std::size_t> vnf_names_;
    std::unordered_map<std::string, std::size_t> access_point_names_;
    std::unordered_map<std::string, std::size_t> request_names_;
};

struct Violation {
    enum class Severity { error, warning };

    Severity severity = Severity::error;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks every type invariant. Empty result means the instance is well formed.
/// A total demand above total capacity is reported as a warning only.
[[nodiscard]] std::vector<Violation> validate(const ProblemInstance& instance);

/// True when validate() reports no error-severity violation.
[[nodiscard]] bool is_valid(const ProblemInstance& instance);

/// Parses the instance document. Names are mapped to dense ids in document order.
/// Throws ParseError on syntax errors, missing fields and dangling name references.
[[nodiscard]] ProblemInstance load_instance(std::string_view text);

/// Canonical document: arrays sorted by name, reals with 17 significant digits.
[[nodiscard]] std::string save_instance(const ProblemInstance& instance);

/// Canonical form of an instance document, computed on the document alone.
[[nodiscard]] std::string canonicalize_instance_document(std::string_view text);

[[nodiscard]] ProblemInstance read_instance_file(const std::string& path);
void write_instance_file(const ProblemInstance& instance, const std::string& path);

}  // namespace havnfp
