#include <optional>
#include <sstream>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "havnfp/harness.hpp"
#include "havnfp/instgen.hpp"
#include "havnfp/model.hpp"
#include "havnfp/placement.hpp"

namespace py = pybind11;
using namespace havnfp;
using nlohmann::json;

namespace {

// Documents cross the boundary as JSON text; the Python package decodes them.

std::string generate_text(std::size_t requests, std::size_t aps_per_request, double multiplier, std::uint64_t seed,
                          std::size_t vnf_types, std::size_t clusters, std::size_t access_points) {
    GeneratorConfig g;
    g.requests = requests;
    g.aps_per_request = aps_per_request;
    g.capacity_multiplier = multiplier;
    g.seed = seed;
    g.vnf_types = vnf_types;
    g.clusters = clusters;
    g.access_points = access_points;
    check_generator_config(g);
    return save_instance(generate(g));
}

std::string validate_text(const std::string& instance) {
    json out = json::array();
    for (const auto& v : validate(load_instance(instance))) {
        out.push_back({{"severity", v.severity == Violation::Severity::error ? "error" : "warning"},
                       {"message", v.message}});
    }
    return out.dump();
}

std::string solve_text(const std::string& instance, const std::string& algorithm, const std::string& policy,
                       const std::string& split, std::optional<double> per_start_time_limit,
                       std::optional<std::size_t> max_iterations, std::uint64_t seed) {
    auto inst = std::make_shared<const ProblemInstance>(load_instance(instance));
    SolveOptions options;
    options.algorithm = parse_algorithm(algorithm);
    if (algorithm == "greedy") options.algorithm.policy = parse_policy(policy);
    options.split = parse_split_mode(split);
    options.vns.per_start_time_limit = per_start_time_limit;
    options.vns.max_iterations = max_iterations;
    options.vns.seed = seed;
    SolveOutcome outcome;
    {
        py::gil_scoped_release release;
        outcome = solve(inst, options);
    }
    json out{{"report", report_to_json(*inst, outcome.report)}, {"placement", nullptr}};
    if (options.algorithm.kind == AlgorithmKind::exact) out["optimal"] = outcome.optimal;
    if (outcome.placement) out["placement"] = placement_to_json(*outcome.placement);
    return out.dump();
}

std::string evaluate_text(const std::string& instance, const std::string& placement) {
    auto inst = std::make_shared<const ProblemInstance>(load_instance(instance));
    auto p = placement_from_json(inst, json::parse(placement));
    json out{{"report", report_to_json(*inst, evaluate(p))}, {"violations", check_placement(p)}};
    return out.dump();
}

std::string campaign_csv(const std::string& spec, bool include_runtime) {
    const auto parsed = campaign_spec_from_json(json::parse(spec));
    std::vector<CampaignRow> rows;
    {
        py::gil_scoped_release release;
        rows = run_campaign(parsed);
    }
    std::ostringstream out;
    write_rows_csv(out, rows, include_runtime);
    return out.str();
}

std::string summarize_csv(const std::string& rows_csv) {
    std::istringstream in(rows_csv);
    std::ostringstream out;
    write_summary_csv(out, summarize(read_rows_csv(in)));
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_havnfp, m) {
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    m.def("generate", &generate_text, py::arg("requests") = 50, py::arg("aps_per_request") = 2,
          py::arg("multiplier") = 1.0, py::arg("seed") = 1, py::arg("vnf_types") = 5, py::arg("clusters") = 3,
          py::arg("access_points") = 3);
    m.def("validate", &validate_text, py::arg("instance"));
    m.def("solve", &solve_text, py::arg("instance"), py::arg("algorithm") = "vns", py::arg("policy") = "bestfit",
          py::arg("split") = "fallback", py::arg("per_start_time_limit") = std::nullopt,
          py::arg("max_iterations") = std::nullopt, py::arg("seed") = 0);
    m.def("evaluate", &evaluate_text, py::arg("instance"), py::arg("placement"));
    m.def("campaign", &campaign_csv, py::arg("spec"), py::arg("include_runtime") = true);
    m.def("summarize", &summarize_csv, py::arg("rows_csv"));
}
