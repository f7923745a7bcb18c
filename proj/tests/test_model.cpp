#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "havnfp/instgen.hpp"
#include "support.hpp"

using namespace havnfp;
using havnfp::testing::Builder;
using nlohmann::json;

namespace {

std::string sample_text() {
    std::ifstream in(HAVNFP_DATA_DIR "/sample_instance.json");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool has_message(const std::vector<Violation>& vs, const std::string& text, Violation::Severity sev) {
    for (const auto& v : vs) {
        if (v.severity == sev && v.message.find(text) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("well-formed three-cluster instance has no violations") {
    auto inst = load_instance(sample_text());
    CHECK(inst.clusters().size() == 3);
    CHECK(validate(inst).empty());
    CHECK(is_valid(inst));
}

TEST_CASE("empty access point set is reported by request") {
    Builder b;
    auto c = b.cluster();
    b.server(c, 10);
    auto f = b.vnf();
    b.ap();
    b.request(f, {}, 3);
    auto vs = validate(b.instance());
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].message == "request 0: empty access point set");
    CHECK(vs[0].severity == Violation::Severity::error);
}

TEST_CASE("capacity deficit is a warning, not an error") {
    GeneratorConfig g;
    g.requests = 40;
    g.seed = 3;
    auto inst = generate(g);
    auto doc = json::parse(save_instance(inst));
    for (auto& s : doc["servers"]) s["capacity"] = 1;
    auto shrunk = load_instance(doc.dump());
    auto vs = validate(shrunk);
    CHECK(has_message(vs, "capacity deficit", Violation::Severity::warning));
    CHECK(is_valid(shrunk));
}

TEST_CASE("probability and capacity rules") {
    Builder b;
    auto c = b.cluster(1.5);
    b.server(c, 0, 0.0);
    auto f = b.vnf(-0.1);
    auto p = b.ap();
    b.access(c, p, 2.0);
    b.request(f, {p}, -1);
    auto vs = validate(b.instance());
    CHECK(vs.size() >= 5);
    CHECK_FALSE(is_valid(b.instance()));
}

TEST_CASE("servers_in partitions the servers") {
    auto inst = load_instance(sample_text());
    std::vector<int> seen(inst.servers().size(), 0);
    for (std::size_t c = 0; c < inst.clusters().size(); ++c) {
        for (auto s : inst.servers_in(ClusterId{c})) {
            ++seen[s.index()];
            CHECK(inst.server(s).cluster == ClusterId{c});
        }
    }
    for (int n : seen) CHECK(n == 1);
}

TEST_CASE("canonical sample file round-trips bit-identically") {
    const auto text = sample_text();
    CHECK(canonicalize_instance_document(text) == text);
    CHECK(save_instance(load_instance(text)) == text);
}

TEST_CASE("save after load equals canonicalize for shuffled documents") {
    auto doc = json::parse(sample_text());
    for (const char* key : {"clusters", "servers", "requests", "access_links", "sync_links"}) {
        std::reverse(doc[key].begin(), doc[key].end());
    }
    for (auto& l : doc["sync_links"]) std::swap(l["cluster_a"], l["cluster_b"]);
    for (auto& r : doc["requests"]) std::reverse(r["access_points"].begin(), r["access_points"].end());
    const auto shuffled = doc.dump(4);
    CHECK(save_instance(load_instance(shuffled)) == canonicalize_instance_document(shuffled));
    CHECK(canonicalize_instance_document(shuffled) == sample_text());
}

TEST_CASE("generated 50-request instance round-trips structurally") {
    GeneratorConfig g;
    g.requests = 50;
    g.seed = 11;
    auto inst = generate(g);
    auto again = load_instance(save_instance(inst));
    CHECK(again == inst);
}

TEST_CASE("missing requests field is named") {
    auto doc = json::parse(sample_text());
    doc.erase("requests");
    try {
        (void)load_instance(doc.dump());
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.field() == "requests");
        CHECK(std::string(e.what()).find("requests") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry a line number") {
    const std::string text = "{\n  \"clusters\": [\n    {\"name\": \"a\",, }\n  ]\n}\n";
    try {
        (void)load_instance(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("dangling and duplicate names are rejected") {
    auto doc = json::parse(sample_text());
    doc["requests"][0]["vnf"] = "nope";
    CHECK_THROWS_AS((void)load_instance(doc.dump()), ParseError);
    doc = json::parse(sample_text());
    doc["servers"].push_back(doc["servers"][0]);
    CHECK_THROWS_AS((void)load_instance(doc.dump()), ParseError);
}

TEST_CASE("missing links read as zero") {
    Builder b;
    auto c0 = b.cluster();
    auto c1 = b.cluster();
    auto p = b.ap();
    b.access(c0, p, 0.7);
    auto inst = b.instance();
    CHECK(inst.links().access(c0, p) == 0.7);
    CHECK(inst.links().access(c1, p) == 0.0);
    CHECK_FALSE(inst.links().has_access(c1, p));
    CHECK(inst.links().sync(c0, c1) == 0.0);
}

TEST_CASE("sync links are symmetric") {
    Builder b;
    auto c0 = b.cluster();
    auto c1 = b.cluster();
    b.sync(c1, c0, 0.25);
    auto inst = b.instance();
    CHECK(inst.links().sync(c0, c1) == 0.25);
    CHECK(inst.links().sync(c1, c0) == 0.25);
}

TEST_CASE("ids are assigned in document order and names resolve") {
    auto inst = load_instance(sample_text());
    for (std::size_t i = 0; i < inst.servers().size(); ++i) {
        CHECK(inst.find_server(inst.servers()[i].name) == ServerId{i});
    }
    CHECK_FALSE(inst.find_request("missing").has_value());
}
