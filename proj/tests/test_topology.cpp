#include <catch2/catch_amalgamated.hpp>

#include "dopf/topology.hpp"

using namespace dopf;

namespace {

NetworkTopology two_bus() {
    NetworkTopology t;
    t.omega = 2.0 * kPi * 50.0;
    t.bus_names = {"a", "b"};
    t.lines.push_back({0, 1, 0.3, 1.0e-3});
    t.loads.push_back({1, 2.0, 0.0});
    VscSpec v;
    v.bus = 0;
    v.lcl = {0.15, 3.8e-3, 680e-6, 0.05, 300e-6};
    t.vscs.push_back(v);
    return t;
}

} // namespace

TEST_CASE("a well-formed topology validates") {
    CHECK_NOTHROW(validate(two_bus()));
}

TEST_CASE("vsc_at finds converters by bus") {
    const NetworkTopology t = two_bus();
    CHECK(t.vsc_at(0) == 0);
    CHECK(t.vsc_at(1) == -1);
}

TEST_CASE("validation rejects structural defects") {
    SECTION("zero frequency") {
        NetworkTopology t = two_bus();
        t.omega = 0.0;
        CHECK_THROWS_AS(validate(t), validation_error);
    }
    SECTION("line endpoint out of range") {
        NetworkTopology t = two_bus();
        t.lines[0].to = 7;
        CHECK_THROWS_AS(validate(t), validation_error);
    }
    SECTION("self-loop line") {
        NetworkTopology t = two_bus();
        t.lines[0].to = 0;
        CHECK_THROWS_AS(validate(t), validation_error);
    }
    SECTION("nonpositive line resistance") {
        NetworkTopology t = two_bus();
        t.lines[0].r = 0.0;
        CHECK_THROWS_AS(validate(t), validation_error);
    }
    SECTION("nonpositive load resistance") {
        NetworkTopology t = two_bus();
        t.loads[0].r = -1.0;
        CHECK_THROWS_AS(validate(t), validation_error);
    }
    SECTION("two converters on one bus") {
        NetworkTopology t = two_bus();
        t.vscs.push_back(t.vscs[0]);
        CHECK_THROWS_AS(validate(t), validation_error);
    }
    SECTION("missing filter parameter") {
        NetworkTopology t = two_bus();
        t.vscs[0].lcl.c_f = 0.0;
        CHECK_THROWS_AS(validate(t), validation_error);
    }
    SECTION("disconnected bus") {
        NetworkTopology t = two_bus();
        t.bus_names.push_back("island");
        CHECK_THROWS_AS(validate(t), validation_error);
    }
}
