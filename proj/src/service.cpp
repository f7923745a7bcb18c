#include "havnfp/service.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <random>
#include <set>
#include <sstream>

#include <httplib.h>

#include "havnfp/availability.hpp"
#include "havnfp/tolerances.hpp"

namespace havnfp {

using nlohmann::json;

namespace {

json instance_doc(const ProblemInstance& inst) { return json::parse(save_instance(inst)); }

ProblemInstance load_doc(const json& doc) { return load_instance(doc.dump()); }

double number_field(const json& delta, const char* key) {
    if (!delta.contains(key) || !delta[key].is_number()) {
        throw InputError(std::string("delta field '") + key + "' must be a number");
    }
    return delta[key].get<double>();
}

std::string string_field(const json& delta, const char* key) {
    if (!delta.contains(key) || !delta[key].is_string()) {
        throw InputError(std::string("delta field '") + key + "' must be a string");
    }
    return delta[key].get<std::string>();
}

json& find_named(json& array, const std::string& name, const char* what) {
    for (auto& e : array) {
        if (e.value("name", "") == name) return e;
    }
    throw InputError(std::string("unknown ") + what + " '" + name + "'");
}

}  // namespace

ProblemInstance apply_delta(const ProblemInstance& instance, const json& delta) {
    if (!delta.is_object()) throw InputError("delta must be an object");
    const std::string type = string_field(delta, "type");
    if (type == "toggle_split") return instance;

    json doc = instance_doc(instance);
    if (type == "add_request") {
        if (!delta.contains("request") || !delta["request"].is_object()) {
            throw InputError("delta field 'request' must be an object");
        }
        doc["requests"].push_back(delta["request"]);
    } else if (type == "remove_request") {
        const std::string name = string_field(delta, "request");
        auto& reqs = doc["requests"];
        auto it = std::find_if(reqs.begin(), reqs.end(), [&](const json& r) { return r.value("name", "") == name; });
        if (it == reqs.end()) throw InputError("unknown request '" + name + "'");
        reqs.erase(it);
    } else if (type == "scale_capacity") {
        const double factor = number_field(delta, "factor");
        std::set<std::string> only;
        if (delta.contains("servers")) {
            for (const auto& s : delta["servers"]) only.insert(s.get<std::string>());
            for (const auto& name : only) (void)find_named(doc["servers"], name, "server");
        }
        for (auto& s : doc["servers"]) {
            if (only.empty() || only.contains(s["name"].get<std::string>())) {
                s["capacity"] = s["capacity"].get<double>() * factor;
            }
        }
    } else if (type == "set_availability") {
        const std::string target = string_field(delta, "target");
        const double value = number_field(delta, "value");
        if (target == "all") {
            for (const char* key : {"clusters", "servers", "vnf_types", "access_links", "sync_links"}) {
                for (auto& e : doc[key]) e["availability"] = value;
            }
        } else if (target == "cluster") {
            find_named(doc["clusters"], string_field(delta, "name"), "cluster")["availability"] = value;
        } else if (target == "server") {
            find_named(doc["servers"], string_field(delta, "name"), "server")["availability"] = value;
        } else if (target == "vnf") {
            find_named(doc["vnf_types"], string_field(delta, "name"), "vnf type")["availability"] = value;
        } else if (target == "access_link") {
            const auto c = string_field(delta, "cluster");
            const auto p = string_field(delta, "access_point");
            bool found = false;
            for (auto& l : doc["access_links"]) {
                if (l["cluster"] == c && l["access_point"] == p) {
                    l["availability"] = value;
                    found = true;
                }
            }
            if (!found) doc["access_links"].push_back({{"cluster", c}, {"access_point", p}, {"availability", value}});
        } else if (target == "sync_link") {
            const auto a = string_field(delta, "cluster_a");
            const auto b = string_field(delta, "cluster_b");
            bool found = false;
            for (auto& l : doc["sync_links"]) {
                if ((l["cluster_a"] == a && l["cluster_b"] == b) || (l["cluster_a"] == b && l["cluster_b"] == a)) {
                    l["availability"] = value;
                    found = true;
                }
            }
            if (!found) doc["sync_links"].push_back({{"cluster_a", a}, {"cluster_b", b}, {"availability", value}});
        } else {
            throw InputError("unknown availability target '" + target + "'");
        }
    } else {
        throw InputError("unknown delta type '" + type + "'");
    }
    return load_doc(doc);
}

std::optional<Placement> transfer_placement(const Placement& placement, std::shared_ptr<const ProblemInstance> target) {
    const auto& from = placement.instance();
    const auto& to = *target;
    Placement p(target);
    for (std::size_t i = 0; i < to.requests().size(); ++i) {
        const RequestId r{i};
        auto old = from.find_request(to.requests()[i].name);
        if (!old) continue;
        for (const auto& share : placement.shares(*old)) {
            auto s = to.find_server(from.server(share.server).name);
            if (!s || !p.assign_amount(r, *s, share.amount)) {
                if (p.is_assigned(r)) {
                    // Partially transferred: start this request over.
                    for (std::size_t k = p.shares(r).size(); k-- > 0;) (void)p.remove_fragment(r, p.shares(r)[k].server);
                }
                break;
            }
        }
        if (p.is_assigned(r) && std::abs(p.assigned_amount(r) - to.requests()[i].demand) > kCapacityEps) {
            for (std::size_t k = p.shares(r).size(); k-- > 0;) (void)p.remove_fragment(r, p.shares(r)[k].server);
        }
    }
    for (const auto& vi : placement.vnf_instances()) {
        if (vi.role != Role::slave) continue;
        auto host = to.find_server(from.server(vi.server).name);
        auto master = to.find_server(from.server(*vi.master_server).name);
        auto vnf = to.find_vnf_type(from.vnf_type(vi.vnf).name);
        if (!host || !master || !vnf) continue;
        const MasterKey key{*master, *vnf};
        if (p.has_master(key)) (void)p.add_slave(key, *host);
    }
    std::vector<ServerId> all(to.servers().size());
    for (std::size_t s = 0; s < all.size(); ++s) all[s] = ServerId{s};
    for (std::size_t i = 0; i < to.requests().size(); ++i) {
        const RequestId r{i};
        if (p.is_assigned(r)) continue;
        double remaining = to.requests()[i].demand;
        while (remaining > kCapacityEps) {
            auto s = select_server(p, remaining, all, Policy::best_fit, true);
            if (!s) return std::nullopt;
            double amount = p.residual(*s) + kCapacityEps >= remaining ? remaining : p.residual(*s);
            if (!p.assign_amount(r, *s, amount)) return std::nullopt;
            remaining -= amount;
        }
    }
    if (!p.fully_assigned()) return std::nullopt;
    add_slaves(p, Policy::best_availability);
    return p;
}

WorkerPool::WorkerPool(std::size_t threads) {
    for (std::size_t i = 0; i < std::max<std::size_t>(1, threads); ++i) {
        threads_.emplace_back([this] {
            for (;;) {
                std::function<void()> job;
                {
                    std::unique_lock lock(mutex_);
                    wake_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
                    if (queue_.empty()) return;
                    job = std::move(queue_.front());
                    queue_.pop_front();
                }
                job();
            }
        });
    }
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    wake_.notify_all();
}

void WorkerPool::submit(std::function<void()> job) {
    {
        std::lock_guard lock(mutex_);
        queue_.push_back(std::move(job));
    }
    wake_.notify_one();
}

namespace {

HttpResponse error(int status, const std::string& message, json violations = nullptr) {
    json body{{"error", message}};
    if (!violations.is_null()) body["violations"] = std::move(violations);
    return {status, std::move(body)};
}

json violations_json(const std::vector<Violation>& vs) {
    json out = json::array();
    for (const auto& v : vs) {
        out.push_back({{"severity", v.severity == Violation::Severity::error ? "error" : "warning"},
                       {"message", v.message}});
    }
    return out;
}

std::vector<Violation> errors_only(const std::vector<Violation>& vs) {
    std::vector<Violation> out;
    std::ranges::copy_if(vs, std::back_inserter(out),
                         [](const Violation& v) { return v.severity == Violation::Severity::error; });
    return out;
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(path);
    while (std::getline(in, part, '/')) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

json options_json(const SolveOptions& o) {
    json out{{"algorithm", o.algorithm.name()}, {"split", std::string(to_string(o.split))}};
    out["timeLimit"] = o.vns.per_start_time_limit ? json(*o.vns.per_start_time_limit) : json(nullptr);
    return out;
}

json solve_json(const ProblemInstance& inst, const SolveOutcome& outcome) {
    json out{{"report", report_to_json(inst, outcome.report)}};
    out["placement"] = outcome.placement ? placement_to_json(*outcome.placement) : json(nullptr);
    if (outcome.placement) out["violations"] = check_placement(*outcome.placement);
    if (outcome.report.algorithm == "exact") out["optimal"] = outcome.optimal;
    return out;
}

json report_diff(const ProblemInstance& old_inst, const SolveReport& old_report, const ProblemInstance& new_inst,
                 const SolveReport& new_report) {
    std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> values;
    for (std::size_t i = 0; i < old_report.per_request.size(); ++i) {
        values[old_inst.requests()[i].name].first = old_report.per_request[i];
    }
    for (std::size_t i = 0; i < new_report.per_request.size(); ++i) {
        values[new_inst.requests()[i].name].second = new_report.per_request[i];
    }
    json per = json::array();
    for (const auto& [name, v] : values) {
        json e{{"request", name}};
        e["old"] = v.first ? json(*v.first) : json(nullptr);
        e["new"] = v.second ? json(*v.second) : json(nullptr);
        e["delta"] = v.first && v.second ? json(*v.second - *v.first) : json(nullptr);
        per.push_back(std::move(e));
    }
    std::set<std::string> old_worst, new_worst;
    for (auto r : old_report.worst) old_worst.insert(old_inst.request(r).name);
    for (auto r : new_report.worst) new_worst.insert(new_inst.request(r).name);
    json added = json::array(), removed = json::array();
    for (const auto& n : new_worst) {
        if (!old_worst.contains(n)) added.push_back(n);
    }
    for (const auto& n : old_worst) {
        if (!new_worst.contains(n)) removed.push_back(n);
    }
    return {{"a_min_old", old_report.a_min},
            {"a_min_new", new_report.a_min},
            {"a_min_delta", new_report.a_min - old_report.a_min},
            {"per_request", per},
            {"worst_added", added},
            {"worst_removed", removed}};
}

}  // namespace

PlanningService::PlanningService(ServiceConfig config)
    : config_(std::move(config)), id_salt_(std::random_device{}()), pool_(config_.solver_threads) {
    if (config_.state_dir) {
        std::filesystem::create_directories(*config_.state_dir);
        restore();
    }
}

PlanningService::~PlanningService() { wait_idle(); }

void PlanningService::wait_idle() {
    std::unique_lock lock(idle_mutex_);
    idle_.wait(lock, [&] { return running_ == 0; });
}

std::string PlanningService::new_id(const char* prefix) {
    std::lock_guard lock(mutex_);
    std::mt19937_64 rng(id_salt_ ^ (++counter_ * 0x9e3779b97f4a7c15ULL));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%016llx", prefix, static_cast<unsigned long long>(rng()));
    return buf;
}

std::shared_ptr<PlanningService::Session> PlanningService::find(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

HttpResponse PlanningService::handle(const std::string& method, const std::string& path, const std::string& body) {
    try {
        const auto parts = split_path(path);
        if (parts.empty() || parts[0] != "v1") return error(404, "no such endpoint");
        if (parts.size() == 2 && parts[1] == "health") return {200, {{"status", "ok"}}};
        if (parts.size() == 3 && parts[1] == "jobs") {
            if (method != "GET") return error(405, "method not allowed");
            return job(parts[2]);
        }
        if (parts.size() < 2 || parts[1] != "sessions") return error(404, "no such endpoint");
        if (parts.size() == 2) {
            if (method != "POST") return error(405, "method not allowed");
            return create_session(body);
        }
        auto session = find(parts[2]);
        if (!session) return error(404, "unknown session '" + parts[2] + "'");
        if (parts.size() == 3) {
            if (method == "GET") return get_session(*session);
            if (method == "DELETE") {
                std::lock_guard lock(mutex_);
                sessions_.erase(parts[2]);
                if (config_.state_dir) std::filesystem::remove(*config_.state_dir / (parts[2] + ".json"));
                return {200, {{"deleted", parts[2]}}};
            }
            return error(405, "method not allowed");
        }
        if (parts.size() == 4) {
            const auto& what = parts[3];
            if (what == "solve" || what == "whatif") {
                if (method != "POST") return error(405, "method not allowed");
                return what == "solve" ? solve(session, body) : what_if(session, body);
            }
            if (what == "placement" || what == "availability") {
                if (method != "GET") return error(405, "method not allowed");
                return what == "placement" ? placement(*session) : availability(*session);
            }
        }
        return error(404, "no such endpoint");
    } catch (const json::exception& e) {
        return error(400, std::string("malformed JSON: ") + e.what());
    } catch (const InputError& e) {
        return error(422, e.what());
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

HttpResponse PlanningService::create_session(const std::string& body) {
    std::shared_ptr<const ProblemInstance> inst;
    try {
        inst = std::make_shared<const ProblemInstance>(load_instance(body));
    } catch (const InputError& e) {
        return error(422, "invalid instance", json::array({{{"severity", "error"}, {"message", e.what()}}}));
    }
    auto errs = errors_only(validate(*inst));
    if (!errs.empty()) return error(422, "invalid instance", violations_json(errs));
    auto s = std::make_shared<Session>();
    s->id = new_id("s");
    s->initial = inst;
    s->instance = inst;
    s->options.algorithm = {AlgorithmKind::vns};
    s->options.split = SplitMode::fallback;
    s->options.vns.per_start_time_limit = config_.default_time_limit;
    {
        std::lock_guard lock(mutex_);
        sessions_[s->id] = s;
    }
    persist(*s);
    return {201, {{"id", s->id}, {"url", "/v1/sessions/" + s->id}, {"warnings", violations_json(validate(*inst))}}};
}

json PlanningService::session_json(Session& s) {
    json out{{"id", s.id}, {"instance", instance_doc(*s.instance)}, {"options", options_json(s.options)}};
    out["solving"] = s.solving;
    out["report"] = s.report ? report_to_json(*s.instance, *s.report) : json(nullptr);
    json hist = json::array();
    for (const auto& h : s.history) {
        hist.push_back({{"delta", h.delta},
                        {"a_min_before", h.a_min_before},
                        {"a_min_after", h.a_min_after},
                        {"feasible", h.feasible}});
    }
    out["history"] = hist;
    return out;
}

HttpResponse PlanningService::get_session(Session& s) {
    std::lock_guard lock(s.mutex);
    return {200, session_json(s)};
}

SolveOptions PlanningService::parse_solve_options(const json& body, const SolveOptions& base) const {
    SolveOptions o = base;
    if (body.contains("algorithm")) {
        const auto name = body["algorithm"].get<std::string>();
        o.algorithm = parse_algorithm(name);
        if (name == "greedy" && body.contains("policy")) {
            o.algorithm.policy = parse_policy(body["policy"].get<std::string>());
        }
    } else if (body.contains("policy") && o.algorithm.kind == AlgorithmKind::greedy) {
        o.algorithm.policy = parse_policy(body["policy"].get<std::string>());
    }
    if (body.contains("split")) {
        const auto& v = body["split"];
        o.split = v.is_boolean() ? (v.get<bool>() ? SplitMode::on : SplitMode::off)
                                 : parse_split_mode(v.get<std::string>());
    }
    if (body.contains("timeLimit")) {
        if (body["timeLimit"].is_null()) {
            o.vns.per_start_time_limit.reset();
        } else {
            const double t = body["timeLimit"].get<double>();
            if (!(t > 0.0)) throw InputError("timeLimit must be positive");
            o.vns.per_start_time_limit = t;
            o.exact.time_limit = t;
        }
    }
    if (body.contains("seed")) o.vns.seed = body["seed"].get<std::uint64_t>();
    if (body.contains("maxIterations")) o.vns.max_iterations = body["maxIterations"].get<std::size_t>();
    return o;
}

HttpResponse PlanningService::run_on_pool(std::function<HttpResponse()> work) {
    auto task = std::make_shared<std::packaged_task<HttpResponse()>>(std::move(work));
    auto result = task->get_future();
    pool_.submit([task] { (*task)(); });
    return result.get();
}

HttpResponse PlanningService::solve(const std::shared_ptr<Session>& s, const std::string& body_text) {
    const json body = body_text.empty() ? json::object() : json::parse(body_text);
    if (!body.is_object()) return error(400, "solve body must be an object");
    std::shared_ptr<const ProblemInstance> inst;
    SolveOptions options;
    {
        std::lock_guard lock(s->mutex);
        if (s->solving) return error(409, "a solve is already running for this session");
        options = parse_solve_options(body, s->options);
        s->solving = true;
        inst = s->instance;
    }
    {
        std::lock_guard lock(idle_mutex_);
        ++running_;
    }
    auto work = [this, s, inst, options]() -> HttpResponse {
        HttpResponse response;
        try {
            auto outcome = havnfp::solve(inst, options);
            response = {200, solve_json(*inst, outcome)};
            std::lock_guard lock(s->mutex);
            s->options = options;
            s->placement = std::move(outcome.placement);
            s->report = outcome.report;
        } catch (const InputError& e) {
            response = error(422, e.what());
        } catch (const std::exception& e) {
            response = error(500, e.what());
        }
        {
            std::lock_guard lock(s->mutex);
            s->solving = false;
            persist(*s);
        }
        {
            std::lock_guard lock(idle_mutex_);
            --running_;
        }
        idle_.notify_all();
        return response;
    };

    if (body.value("async", false)) {
        auto job = std::make_shared<Job>();
        job->session = s->id;
        const auto id = new_id("j");
        {
            std::lock_guard lock(mutex_);
            jobs_[id] = job;
        }
        pool_.submit([this, job, work] {
            auto r = work();
            std::lock_guard lock(mutex_);
            job->result = std::move(r);
            job->status = job->result.status == 200 ? "done" : "failed";
        });
        return {202, {{"job", id}, {"poll", "/v1/jobs/" + id}}};
    }
    return run_on_pool(work);
}

HttpResponse PlanningService::job(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return error(404, "unknown job '" + id + "'");
    const auto& j = *it->second;
    json out{{"job", id}, {"session", j.session}, {"status", j.status}};
    if (j.status != "running") {
        out["http_status"] = j.result.status;
        out["result"] = j.result.body;
    }
    return {j.status == "running" ? 202 : 200, out};
}

HttpResponse PlanningService::what_if(const std::shared_ptr<Session>& s, const std::string& body_text) {
    const json body = json::parse(body_text);
    if (!body.is_object() || !body.contains("delta")) return error(400, "whatif body needs a 'delta'");
    const json delta = body["delta"];
    const bool commit = body.value("commit", false);

    std::shared_ptr<const ProblemInstance> old_inst;
    std::optional<Placement> old_placement;
    std::optional<SolveReport> old_report;
    SolveOptions options;
    {
        std::lock_guard lock(s->mutex);
        if (s->solving) return error(409, "a solve is already running for this session");
        old_inst = s->instance;
        old_placement = s->placement;
        old_report = s->report;
        options = parse_solve_options(body, s->options);
    }

    std::shared_ptr<const ProblemInstance> new_inst;
    try {
        new_inst = std::make_shared<const ProblemInstance>(apply_delta(*old_inst, delta));
    } catch (const InputError& e) {
        return error(422, "invalid delta", json::array({{{"severity", "error"}, {"message", e.what()}}}));
    }
    auto errs = errors_only(validate(*new_inst));
    if (!errs.empty()) return error(422, "invalid delta", violations_json(errs));

    SolveOptions new_options = options;
    if (delta.value("type", "") == "toggle_split") {
        new_options.split = delta.contains("split") ? parse_split_mode(delta["split"].get<std::string>())
                            : options.split == SplitMode::off ? SplitMode::fallback
                                                              : SplitMode::off;
    }

    {
        std::lock_guard lock(s->mutex);
        if (s->solving) return error(409, "a solve is already running for this session");
        s->solving = true;
    }
    {
        std::lock_guard lock(idle_mutex_);
        ++running_;
    }
    auto work = [&]() -> HttpResponse {
        if (!old_report) {
            auto before = havnfp::solve(old_inst, options);
            old_report = before.report;
            old_placement = std::move(before.placement);
        }
        std::vector<Placement> warm;
        if (old_placement) {
            if (auto t = transfer_placement(*old_placement, new_inst)) warm.push_back(std::move(*t));
        }
        auto after = havnfp::solve(new_inst, new_options, warm);
        json out = solve_json(*new_inst, after);
        out["old_report"] = report_to_json(*old_inst, *old_report);
        out["diff"] = report_diff(*old_inst, *old_report, *new_inst, after.report);
        out["committed"] = commit;
        if (commit) {
            std::lock_guard lock(s->mutex);
            s->history.push_back({delta, old_report->a_min, after.report.a_min, after.report.feasible});
            s->instance = new_inst;
            s->options = new_options;
            s->placement = std::move(after.placement);
            s->report = after.report;
        }
        return {200, out};
    };
    HttpResponse response;
    try {
        response = run_on_pool(work);
    } catch (const InputError& e) {
        response = error(422, e.what());
    } catch (const std::exception& e) {
        response = error(500, e.what());
    }
    {
        std::lock_guard lock(s->mutex);
        s->solving = false;
        persist(*s);
    }
    {
        std::lock_guard lock(idle_mutex_);
        --running_;
    }
    idle_.notify_all();
    return response;
}

HttpResponse PlanningService::placement(Session& s) {
    std::lock_guard lock(s.mutex);
    if (!s.placement) return error(404, "session has no placement yet");
    json out = placement_to_json(*s.placement);
    out["violations"] = check_placement(*s.placement);
    return {200, out};
}

HttpResponse PlanningService::availability(Session& s) {
    std::lock_guard lock(s.mutex);
    if (!s.placement) return error(404, "session has no placement yet");
    const auto& inst = *s.instance;
    const auto report = evaluate(*s.placement);
    std::set<std::size_t> worst;
    for (auto r : report.worst) worst.insert(r.index());
    json requests = json::array();
    for (std::size_t i = 0; i < inst.requests().size(); ++i) {
        const RequestId r{i};
        json frags = json::array();
        for (const auto& wf : s.placement->configuration(r).fragments) {
            auto b = fragment_breakdown(inst, r, wf.fragment);
            json clusters = json::array();
            for (const auto& t : b.clusters) {
                clusters.push_back({{"cluster", inst.cluster(t.cluster).name},
                                    {"master_cluster", t.master_cluster},
                                    {"access", t.access},
                                    {"cluster_availability", t.cluster_availability},
                                    {"sync", t.sync},
                                    {"servers", t.servers},
                                    {"combined", t.combined}});
            }
            json prot = json::array();
            for (auto sv : wf.fragment.protection) prot.push_back(inst.server(sv).name);
            frags.push_back({{"master", inst.server(wf.fragment.master).name},
                             {"protection", prot},
                             {"fraction", wf.fraction},
                             {"availability", b.availability},
                             {"clusters", clusters}});
        }
        requests.push_back({{"request", inst.requests()[i].name},
                            {"availability", report.per_request[i]},
                            {"worst", worst.contains(i)},
                            {"fragments", frags}});
    }
    json worst_names = json::array();
    for (auto r : report.worst) worst_names.push_back(inst.request(r).name);
    return {200,
            {{"a_min", report.a_min}, {"vacuous", report.vacuous}, {"worst", worst_names}, {"requests", requests}}};
}

void PlanningService::persist(Session& s) {
    if (!config_.state_dir) return;
    json doc = session_json(s);
    doc["initial"] = instance_doc(*s.initial);
    doc["placement"] = s.placement ? placement_to_json(*s.placement) : json(nullptr);
    doc["report_algorithm"] = s.report ? json(s.report->algorithm) : json(nullptr);
    doc.erase("solving");
    const auto path = *config_.state_dir / (s.id + ".json");
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << doc.dump(1);
    }
    std::filesystem::rename(tmp, path);
}

void PlanningService::restore() {
    for (const auto& entry : std::filesystem::directory_iterator(*config_.state_dir)) {
        if (entry.path().extension() != ".json") continue;
        try {
            std::ifstream in(entry.path());
            const json doc = json::parse(in);
            auto s = std::make_shared<Session>();
            s->id = doc.at("id").get<std::string>();
            s->initial = std::make_shared<const ProblemInstance>(load_doc(doc.at("initial")));
            s->instance = std::make_shared<const ProblemInstance>(load_doc(doc.at("instance")));
            s->options = parse_solve_options(doc.at("options"), s->options);
            for (const auto& h : doc.at("history")) {
                s->history.push_back({h.at("delta"), h.at("a_min_before").get<double>(),
                                      h.at("a_min_after").get<double>(), h.at("feasible").get<bool>()});
            }
            if (!doc.at("placement").is_null()) {
                s->placement = placement_from_json(s->instance, doc.at("placement"));
                s->report = evaluate(*s->placement);
                if (doc.at("report_algorithm").is_string()) s->report->algorithm = doc["report_algorithm"];
            }
            std::lock_guard lock(mutex_);
            sessions_[s->id] = s;
        } catch (const std::exception&) {
            // Unreadable snapshots are skipped; the file is left for inspection.
        }
    }
}

void PlanningService::mount(httplib::Server& server) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        auto r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body.dump(), "application/json");
    };
    server.Get(R"(/v1/.*)", handler);
    server.Post(R"(/v1/.*)", handler);
    server.Delete(R"(/v1/.*)", handler);
    server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

}  // namespace havnfp
