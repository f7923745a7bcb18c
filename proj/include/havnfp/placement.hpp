#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "havnfp/availability.hpp"
#include "havnfp/model.hpp"

namespace havnfp {

/// A master VNF instance is identified by its host and type: a server runs at
/// most one master of each type.
struct MasterKey {
    ServerId server;
    VnfTypeId vnf;

    friend auto operator<=>(const MasterKey&, const MasterKey&) = default;
};

enum class Role { master, slave };

/// Flat view of one VNF instance, as exported.
struct VnfInstance {
    ServerId server;
    VnfTypeId vnf;
    Role role = Role::master;
    double reserved = 0.0;
    std::optional<ServerId> master_server;  // slaves only: where their master runs

    friend bool operator==(const VnfInstance&, const VnfInstance&) = default;
};

/// Resource amount of one request placed on one master server.
struct FragmentShare {
    ServerId server;
    double amount = 0.0;

    friend bool operator==(const FragmentShare&, const FragmentShare&) = default;
};

/// Solution state: master/slave instances, request fragments and the resource
/// ledgers u (master reservations) and v (slave reservations).
///
/// A master's reservation always equals the load of the fragments it serves.
/// A slave reserves at least its master's reservation. Every mutating call
/// either succeeds or returns false leaving the state untouched.
class Placement {
public:
    explicit Placement(std::shared_ptr<const ProblemInstance> instance);

    [[nodiscard]] const ProblemInstance& instance() const { return *instance_; }
    [[nodiscard]] const std::shared_ptr<const ProblemInstance>& instance_ptr() const { return instance_; }

    // -- queries ------------------------------------------------------------

    [[nodiscard]] double used(ServerId s) const { return used_.at(s.index()); }
    [[nodiscard]] double residual(ServerId s) const;

    [[nodiscard]] bool has_master(MasterKey key) const { return slot(key).active; }
    /// u[f][s]; zero when no master.
    [[nodiscard]] double master_reserved(MasterKey key) const { return slot(key).reserved; }
    /// v[f][s][s']; nullopt when no slave of that master on `host`.
    [[nodiscard]] std::optional<double> slave_reserved(MasterKey key, ServerId host) const;
    /// Slave hosts of a master, in server order.
    [[nodiscard]] std::vector<ServerId> slaves_of(MasterKey key) const;
    /// Active masters in (server, vnf) order.
    [[nodiscard]] std::vector<MasterKey> masters() const;
    /// Masters whose slaves live on `host`.
    [[nodiscard]] std::span<const MasterKey> slaves_hosted_on(ServerId host) const {
        return hosted_slaves_.at(host.index());
    }
    /// Requests served by a master with the amount each places there.
    [[nodiscard]] std::vector<std::pair<RequestId, double>> served_by(MasterKey key) const;

    [[nodiscard]] std::span<const FragmentShare> shares(RequestId r) const { return shares_.at(r.index()); }
    [[nodiscard]] bool is_assigned(RequestId r) const;
    [[nodiscard]] bool fully_assigned() const;
    [[nodiscard]] double assigned_amount(RequestId r) const;

    /// The request's fragments with protection sets derived from the masters' slaves.
    [[nodiscard]] AssignmentConfiguration configuration(RequestId r) const;

    [[nodiscard]] std::vector<VnfInstance> vnf_instances() const;
    [[nodiscard]] std::size_t slave_count() const;

    // -- mutations ------------------------------------------------------------

    /// Places `amount` resource units of request r on server s, creating or
    /// growing the master of f_r there and merging with an existing fragment.
    /// Slaves of a grown master are grown too; a slave whose host cannot grow is dropped.
    [[nodiscard]] bool assign_amount(RequestId r, ServerId s, double amount);
    [[nodiscard]] bool assign_fraction(RequestId r, ServerId s, double fraction);

    /// Adds a slave of `master` on `host`, reserving `reserved` (default: the master's reservation).
    [[nodiscard]] bool add_slave(MasterKey master, ServerId host, std::optional<double> reserved = std::nullopt);

    /// Removes a slave; returns false when there is none.
    bool remove_slave(MasterKey master, ServerId host);

    /// Removes request r's fragment on server s and returns its amount (0 when absent).
    /// A master left without load is removed together with its slaves.
    double remove_fragment(RequestId r, ServerId s);

    /// Moves request r's fragment from one master server to another. Atomic.
    [[nodiscard]] bool move_fragment(RequestId r, ServerId from, ServerId to);

    /// Removes a master with all its fragments and slaves; returns what was removed.
    struct MasterBundle {
        VnfTypeId vnf;
        std::vector<std::pair<RequestId, double>> served;
        std::vector<std::pair<ServerId, double>> slaves;
    };
    MasterBundle detach_master(MasterKey key);
    /// Re-creates a detached master on `host`. Fails when `host` already runs a
    /// master of that type or lacks capacity. Slaves that would land on `host`
    /// or do not fit are dropped.
    [[nodiscard]] bool attach_master(const MasterBundle& bundle, ServerId host);

    friend bool operator==(const Placement& a, const Placement& b);

private:
    struct MasterSlot {
        bool active = false;
        double reserved = 0.0;
        std::vector<std::pair<RequestId, double>> served;  // sorted by request
        std::vector<std::pair<ServerId, double>> slaves;   // sorted by host

        friend bool operator==(const MasterSlot&, const MasterSlot&) = default;
    };

    [[nodiscard]] std::size_t slot_index(MasterKey key) const;
    [[nodiscard]] const MasterSlot& slot(MasterKey key) const { return masters_[slot_index(key)]; }
    MasterSlot& slot(MasterKey key) { return masters_[slot_index(key)]; }

    void refresh_reserved(MasterKey key);
    void refresh_used(ServerId s);
    void drop_master(MasterKey key);
    void unhost_slave(MasterKey master, ServerId host);

    std::shared_ptr<const ProblemInstance> instance_;
    std::size_t vnf_count_ = 0;
    std::vector<MasterSlot> masters_;                     // [server * |F| + vnf]
    std::vector<std::vector<FragmentShare>> shares_;      // per request, sorted by server
    std::vector<std::vector<MasterKey>> hosted_slaves_;   // per server, sorted
    std::vector<double> used_;                            // per server
};

/// Objective and per-request breakdown of a placement.
struct SolveReport {
    std::string algorithm;
    bool feasible = true;
    bool vacuous = false;  // no requests: A_min is 1 by convention
    double a_min = 1.0;
    std::vector<double> per_request;
    std::vector<RequestId> worst;
    std::size_t splits = 0;
    double runtime_seconds = 0.0;
    bool used_split = false;
};

/// Evaluates a fully assigned placement. Throws InputError naming the first unassigned request.
[[nodiscard]] SolveReport evaluate(const Placement& placement);

/// Rebuilds the ledgers from the exported instances and fragments and checks
/// assignment, reservation, slave coupling and capacity constraints. Also
/// reports any mismatch with the incrementally maintained ledgers. Empty means valid.
/// Without `require_complete`, requests may be partly or not at all assigned.
[[nodiscard]] std::vector<std::string> check_placement(const Placement& placement, bool require_complete = true);

[[nodiscard]] nlohmann::json placement_to_json(const Placement& placement);
/// Rebuilds a placement from its export. Throws InputError on unknown names or infeasible content.
[[nodiscard]] Placement placement_from_json(std::shared_ptr<const ProblemInstance> instance, const nlohmann::json& doc);

[[nodiscard]] nlohmann::json report_to_json(const ProblemInstance& instance, const SolveReport& report);

}  // namespace havnfp
