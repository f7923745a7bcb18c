#include <doctest.h>

#include <cmath>

#include "havnfp/availability.hpp"
#include "support.hpp"

using namespace havnfp;
using havnfp::testing::Builder;

namespace {

AssignmentConfiguration single(ServerId master, std::vector<ServerId> protection) {
    return {{{Fragment(master, std::move(protection)), 1.0}}};
}

// One cluster, one server, one access point, everything at `a`.
std::shared_ptr<const ProblemInstance> single_cluster(double a) {
    Builder b;
    auto c = b.cluster(a);
    b.server(c, 10, a);
    auto f = b.vnf(a);
    auto p = b.ap();
    b.access(c, p, a);
    b.request(f, {p}, 1);
    return b.build();
}

}  // namespace

TEST_CASE("access availability") {
    Builder b;
    auto c = b.cluster();
    auto p0 = b.ap();
    auto p1 = b.ap();
    auto p2 = b.ap();
    b.access(c, p0, 0.9999);
    auto inst = b.instance();
    std::vector<AccessPointId> one{p0};
    CHECK(access_availability(inst, c, one) == doctest::Approx(0.9999).epsilon(1e-15));

    Builder b2;
    auto c2 = b2.cluster();
    auto q0 = b2.ap();
    auto q1 = b2.ap();
    b2.access(c2, q0, 0.9);
    b2.access(c2, q1, 0.9);
    std::vector<AccessPointId> two{q0, q1};
    CHECK(std::abs(access_availability(b2.instance(), c2, two) - 0.99) < 1e-15);

    Builder b3;
    auto c3 = b3.cluster();
    auto r0 = b3.ap();
    auto r1 = b3.ap();
    b3.access(c3, r1, 0.5);
    std::vector<AccessPointId> both{r0, r1};
    CHECK(access_availability(b3.instance(), c3, both) == 0.5);

    std::vector<AccessPointId> bad{AccessPointId{7}};
    CHECK_THROWS_AS((void)access_availability(inst, c, bad), InputError);
    (void)p1;
    (void)p2;
}

TEST_CASE("server set availability") {
    Builder b;
    auto c = b.cluster();
    auto s0 = b.server(c, 1, 0.5);
    auto s1 = b.server(c, 1, 0.5);
    auto s2 = b.server(c, 1, 0.9999);
    auto f = b.vnf(1.0);
    auto g = b.vnf(0.9999);
    auto inst = b.instance();
    CHECK(server_set_availability(inst, f, {}) == 0.0);
    std::vector<ServerId> pair{s0, s1};
    CHECK(server_set_availability(inst, f, pair) == 0.75);
    std::vector<ServerId> one{s2};
    CHECK(std::abs(server_set_availability(inst, g, one) - 0.99980001) < 1e-15);
    std::vector<ServerId> bad{ServerId{9}};
    CHECK_THROWS_AS((void)server_set_availability(inst, f, bad), InputError);
}

TEST_CASE("fragment availability closed forms") {
    SUBCASE("perfect components") {
        auto inst = single_cluster(1.0);
        CHECK(fragment_availability(*inst, RequestId{0}, Fragment(ServerId{0}, {ServerId{0}})) == 1.0);
    }
    SUBCASE("single cluster master only at 0.99") {
        auto inst = single_cluster(0.99);
        double a = fragment_availability(*inst, RequestId{0}, Fragment(ServerId{0}, {ServerId{0}}));
        CHECK(std::abs(a - 0.96059601) < 1e-15);
    }
    SUBCASE("slave behind a dead sync link contributes nothing") {
        Builder b;
        auto ca = b.cluster(0.99);
        auto cb = b.cluster(0.99);
        auto sa = b.server(ca, 10, 0.99);
        auto sb = b.server(cb, 10, 0.99);
        auto f = b.vnf(0.99);
        auto p = b.ap();
        b.access(ca, p, 0.99);
        b.access(cb, p, 0.99);
        b.sync(ca, cb, 0.0);
        b.request(f, {p}, 1);
        auto inst = b.build();
        double alone = fragment_availability(*inst, RequestId{0}, Fragment(sa, {sa}));
        double with = fragment_availability(*inst, RequestId{0}, Fragment(sa, {sa, sb}));
        CHECK(alone == with);
        CHECK(std::abs(alone - 0.96059601) < 1e-15);
    }
}

TEST_CASE("configuration availability is the product over fragments") {
    auto inst = single_cluster(0.99);
    Builder b;
    auto c = b.cluster(0.99);
    auto s0 = b.server(c, 10, 0.99);
    auto s1 = b.server(c, 10, 0.99);
    auto f = b.vnf(0.99);
    auto p = b.ap();
    b.access(c, p, 0.99);
    b.request(f, {p}, 2);
    auto two = b.build();
    AssignmentConfiguration split{{{Fragment(s0, {s0}), 0.5}, {Fragment(s1, {s1}), 0.5}}};
    double a = configuration_availability(*two, RequestId{0}, split);
    CHECK(std::abs(a - 0.96059601 * 0.96059601) < 1e-15);
    CHECK(std::abs(a - 0.92274469) < 1e-8);
    // Fractions do not enter the formula.
    AssignmentConfiguration skewed{{{Fragment(s0, {s0}), 0.9}, {Fragment(s1, {s1}), 0.1}}};
    CHECK(configuration_availability(*two, RequestId{0}, skewed) == a);
}

TEST_CASE("singleton and doubled product examples") {
    // 0.9 fragment: cluster 0.9, everything else 1.
    Builder b;
    auto c = b.cluster(0.9);
    auto s0 = b.server(c, 10);
    auto s1 = b.server(c, 10);
    auto f = b.vnf();
    auto p = b.ap();
    b.access(c, p, 1.0);
    b.request(f, {p}, 2);
    auto inst = b.build();
    CHECK(configuration_availability(*inst, RequestId{0}, single(s0, {s0})) == doctest::Approx(0.9).epsilon(1e-15));
    AssignmentConfiguration two{{{Fragment(s0, {s0}), 0.5}, {Fragment(s1, {s1}), 0.5}}};
    CHECK(configuration_availability(*inst, RequestId{0}, two) == doctest::Approx(0.81).epsilon(1e-15));
}

TEST_CASE("configuration invariants are enforced") {
    auto inst = single_cluster(0.9);
    AssignmentConfiguration empty;
    CHECK_THROWS_AS(check_configuration(*inst, empty), InputError);
    AssignmentConfiguration bad_sum{{{Fragment(ServerId{0}, {ServerId{0}}), 0.7}}};
    CHECK_THROWS_AS(check_configuration(*inst, bad_sum), InputError);
    CHECK_NOTHROW(check_configuration(*inst, single(ServerId{0}, {ServerId{0}})));
}

TEST_CASE("fragment keeps the master in its protection set") {
    Fragment f(ServerId{2}, {ServerId{1}, ServerId{1}});
    CHECK(f.protection == std::vector<ServerId>{ServerId{1}, ServerId{2}});
}

TEST_CASE("breakdown matches the fast path") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        havnfp::testing::TinyShape shape;
        shape.clusters = 3;
        shape.servers = 5;
        auto inst = havnfp::testing::random_tiny(seed, shape);
        std::vector<ServerId> prot{ServerId{0}, ServerId{2}, ServerId{4}};
        Fragment frag(ServerId{seed % 5}, prot);
        auto b = fragment_breakdown(*inst, RequestId{0}, frag);
        CHECK(b.availability == fragment_availability(*inst, RequestId{0}, frag));
        for (const auto& t : b.clusters) {
            CHECK(t.combined == doctest::Approx(t.access * t.cluster_availability * t.sync * t.servers));
        }
    }
}

TEST_CASE("monotone in the protection set and bounded") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        havnfp::testing::TinyShape shape;
        shape.clusters = 3;
        shape.servers = 6;
        shape.availability_min = 0.0;
        shape.availability_max = 1.0;
        auto inst = havnfp::testing::random_tiny(seed, shape);
        const ServerId master{seed % 6};
        std::vector<ServerId> prot{master};
        double last = fragment_availability(*inst, RequestId{0}, Fragment(master, prot));
        CHECK(last >= 0.0);
        CHECK(last <= 1.0);
        for (std::size_t s = 0; s < 6; ++s) {
            if (ServerId{s} == master) continue;
            prot.push_back(ServerId{s});
            double next = fragment_availability(*inst, RequestId{0}, Fragment(master, prot));
            CHECK(next >= last);
            CHECK(next <= 1.0);
            last = next;
        }
    }
}

TEST_CASE("splitting degrades availability") {
    Builder b;
    auto c = b.cluster(0.99);
    std::vector<ServerId> ss;
    for (int i = 0; i < 4; ++i) ss.push_back(b.server(c, 10, 0.99));
    auto f = b.vnf(0.99);
    auto p = b.ap();
    b.access(c, p, 0.99);
    b.request(f, {p}, 4);
    auto inst = b.build();
    const double a = fragment_availability(*inst, RequestId{0}, Fragment(ss[0], {ss[0]}));
    for (std::size_t k = 2; k <= 4; ++k) {
        AssignmentConfiguration g;
        for (std::size_t i = 0; i < k; ++i) g.fragments.push_back({Fragment(ss[i], {ss[i]}), 1.0 / k});
        double v = configuration_availability(*inst, RequestId{0}, g);
        CHECK(v < a);
        CHECK(v == doctest::Approx(std::pow(a, k)).epsilon(1e-14));
    }
}

TEST_CASE("monte carlo trivial cases") {
    auto perfect = single_cluster(1.0);
    auto est = monte_carlo_availability(*perfect, RequestId{0}, single(ServerId{0}, {ServerId{0}}), 10000, 5);
    CHECK(est.estimate == 1.0);
    CHECK(est.standard_error == 0.0);
    CHECK(est.samples == 10000);

    Builder b;
    auto c = b.cluster(1.0);
    b.server(c, 10);
    auto f = b.vnf();
    auto p = b.ap();
    b.access(c, p, 0.0);
    b.request(f, {p}, 1);
    auto dead = b.build();
    auto zero = monte_carlo_availability(*dead, RequestId{0}, single(ServerId{0}, {ServerId{0}}), 10000, 5);
    CHECK(zero.estimate == 0.0);
}

TEST_CASE("monte carlo agrees with the 0.99^4 fragment") {
    auto inst = single_cluster(0.99);
    auto est = monte_carlo_availability(*inst, RequestId{0}, single(ServerId{0}, {ServerId{0}}), 1'000'000, 42);
    CHECK(std::abs(est.estimate - 0.96059601) <= 3.0 * est.standard_error);
}

TEST_CASE("monte carlo is reproducible and thread-count independent") {
    havnfp::testing::TinyShape shape;
    shape.clusters = 3;
    shape.servers = 5;
    auto inst = havnfp::testing::random_tiny(9, shape);
    AssignmentConfiguration g{{{Fragment(ServerId{0}, {ServerId{0}, ServerId{1}}), 0.5},
                               {Fragment(ServerId{2}, {ServerId{2}, ServerId{4}}), 0.5}}};
    auto a = monte_carlo_availability(*inst, RequestId{0}, g, 300'000, 77, FragmentCoupling::independent, 1);
    auto b = monte_carlo_availability(*inst, RequestId{0}, g, 300'000, 77, FragmentCoupling::independent, 4);
    CHECK(a.successes == b.successes);
    auto c = monte_carlo_availability(*inst, RequestId{0}, g, 300'000, 78, FragmentCoupling::independent, 4);
    CHECK(c.successes != a.successes);
}

TEST_CASE("monte carlo agrees on random split configurations") {
    int agree = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        havnfp::testing::TinyShape shape;
        shape.clusters = 3;
        shape.servers = 5;
        shape.availability_min = 0.6;
        shape.availability_max = 0.99;
        auto inst = havnfp::testing::random_tiny(100 + t, shape);
        AssignmentConfiguration g{{{Fragment(ServerId{1}, {ServerId{1}, ServerId{3}}), 0.5},
                                   {Fragment(ServerId{2}, {ServerId{0}, ServerId{2}}), 0.5}}};
        double exact = configuration_availability(*inst, RequestId{0}, g);
        auto est = monte_carlo_availability(*inst, RequestId{0}, g, 200'000, 1000 + t);
        if (std::abs(exact - est.estimate) <= 3.0 * est.standard_error) ++agree;
    }
    CHECK(agree >= trials - 1);
}
