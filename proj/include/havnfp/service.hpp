#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "havnfp/harness.hpp"

namespace httplib {
class Server;
}

namespace havnfp {

/// Applies one what-if delta to an instance. Instance-changing delta types:
/// add_request, remove_request, scale_capacity, set_availability. toggle_split
/// leaves the instance unchanged. Throws InputError for malformed deltas; the
/// result may still fail validate().
[[nodiscard]] ProblemInstance apply_delta(const ProblemInstance& instance, const nlohmann::json& delta);

/// Carries a placement over to an edited instance by names, then assigns any
/// request left unplaced. nullopt when the result would not be complete.
[[nodiscard]] std::optional<Placement> transfer_placement(const Placement& placement,
                                                          std::shared_ptr<const ProblemInstance> target);

/// Fixed-size pool for solver work, kept apart from request handling threads.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t threads);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    void submit(std::function<void()> job);

private:
    std::mutex mutex_;
    std::condition_variable wake_;
    std::deque<std::function<void()>> queue_;
    bool stopping_ = false;
    std::vector<std::jthread> threads_;
};

struct ServiceConfig {
    std::optional<std::filesystem::path> state_dir;  // JSON snapshot per session
    std::size_t solver_threads = 2;
    double default_time_limit = 10.0;  // VNS per-start budget when a request gives none
};

struct HttpResponse {
    int status = 200;
    nlohmann::json body;
};

/// Session store and /v1 API. handle() is transport-independent; mount()
/// wires it into an HTTP server.
class PlanningService {
public:
    explicit PlanningService(ServiceConfig config = {});
    ~PlanningService();

    HttpResponse handle(const std::string& method, const std::string& path, const std::string& body);
    void mount(httplib::Server& server);

    /// Blocks until no solve is running (used by tests and shutdown).
    void wait_idle();

private:
    struct HistoryEntry {
        nlohmann::json delta;
        double a_min_before = 0.0;
        double a_min_after = 0.0;
        bool feasible = true;
    };

    struct Session {
        std::string id;
        std::mutex mutex;
        bool solving = false;
        std::shared_ptr<const ProblemInstance> initial;
        std::shared_ptr<const ProblemInstance> instance;
        std::optional<Placement> placement;
        std::optional<SolveReport> report;
        SolveOptions options;
        std::vector<HistoryEntry> history;
    };

    struct Job {
        std::string session;
        std::string status = "running";  // running | done | failed
        HttpResponse result;
    };

    HttpResponse create_session(const std::string& body);
    HttpResponse get_session(Session& s);
    HttpResponse solve(const std::shared_ptr<Session>& s, const std::string& body);
    HttpResponse what_if(const std::shared_ptr<Session>& s, const std::string& body);
    HttpResponse placement(Session& s);
    HttpResponse availability(Session& s);
    HttpResponse job(const std::string& id);

    std::shared_ptr<Session> find(const std::string& id);
    std::string new_id(const char* prefix);
    SolveOptions parse_solve_options(const nlohmann::json& body, const SolveOptions& base) const;
    HttpResponse run_on_pool(std::function<HttpResponse()> work);
    void persist(Session& s);
    void restore();
    nlohmann::json session_json(Session& s);

    ServiceConfig config_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::map<std::string, std::shared_ptr<Job>> jobs_;
    std::uint64_t counter_ = 0;
    std::uint64_t id_salt_ = 0;
    std::mutex idle_mutex_;
    std::condition_variable idle_;
    std::size_t running_ = 0;
    WorkerPool pool_;
};

}  // namespace havnfp
