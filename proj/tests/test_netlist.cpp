#include <doctest.h>

#include "portnet/errors.hpp"
#include "portnet/netlist.hpp"
#include "portnet/poi.hpp"
#include "testutil.hpp"

using namespace portnet;

namespace {

const char* kPhaseShifter = R"(# two-stage switched phase shifter
.title demo_shifter
.ports in out
L1 in a 1n @net1
C1 a 0 1p @net1
S1 in a off
L2 a out 2n @net2
C2 out 0 0.5p @net2
S2 a out off
.range L1 0.5n 5n log
.range C1 0.2p 2p log
.range L2 0.5n 5n log
.range C2 0.2p 2p log
)";

} // namespace

TEST_CASE("parses the two-line tagged netlist") {
    const Netlist n = parse_netlist("L1 in mid 1n @net1\nC1 mid 0 1p @net1\n.ports in mid\n");
    REQUIRE(n.entries.size() == 2);
    CHECK(n.entries[0].element.kind == ElementKind::Inductor);
    CHECK(n.entries[0].element.value == doctest::Approx(1e-9));
    CHECK(n.entries[0].enetwork == "net1");
    const Partition p = partition(n);
    REQUIRE(p.enetworks.size() == 1);
    CHECK(p.enetworks[0].circuit.elements.size() == 2);
    CHECK(p.residual_elements.empty());
}

TEST_CASE("value suffixes") {
    const Netlist n = parse_netlist(
        "R1 a 0 1.5k\nR2 a 0 2meg\nR3 a 0 3g\nC1 a 0 4f\nC2 a 0 5u\nR4 a 0 6m\n");
    CHECK(n.entries[0].element.value == doctest::Approx(1500.0));
    CHECK(n.entries[1].element.value == doctest::Approx(2e6));
    CHECK(n.entries[2].element.value == doctest::Approx(3e9));
    CHECK(n.entries[3].element.value == doctest::Approx(4e-15));
    CHECK(n.entries[4].element.value == doctest::Approx(5e-6));
    CHECK(n.entries[5].element.value == doctest::Approx(6e-3));
}

TEST_CASE("parse errors carry line numbers") {
    SUBCASE("malformed value") {
        try {
            parse_netlist("L1 in out 1x\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
            CHECK(std::string(e.what()).find("malformed value") != std::string::npos);
        }
    }
    SUBCASE("duplicate name") {
        CHECK_THROWS_AS(parse_netlist("R1 a 0 5\nR1 b 0 5\n"), ParseError);
    }
    SUBCASE("undeclared port node") {
        CHECK_THROWS_AS(parse_netlist("R1 a 0 5\n.ports a missing\n"), ParseError);
    }
    SUBCASE("unknown directive") {
        CHECK_THROWS_AS(parse_netlist(".model foo\n"), ParseError);
    }
    SUBCASE("unknown element letter") {
        CHECK_THROWS_AS(parse_netlist("X1 a b 5\n"), ParseError);
    }
    SUBCASE("range for a switch") {
        CHECK_THROWS_AS(parse_netlist("S1 a b on\n.range S1 1 2\n"), ParseError);
    }
    SUBCASE("negative value") {
        CHECK_THROWS_AS(parse_netlist("R1 a 0 -5\n"), ParseError);
    }
}

TEST_CASE("render/parse round-trip is exact") {
    const Netlist n = parse_netlist(kPhaseShifter);
    const std::string text = render_netlist(n);
    const Netlist back = parse_netlist(text);
    CHECK(back.title == n.title);
    CHECK(back.in_port == n.in_port);
    CHECK(back.out_port == n.out_port);
    REQUIRE(back.entries.size() == n.entries.size());
    for (std::size_t i = 0; i < n.entries.size(); ++i) {
        CHECK(back.entries[i].element.name == n.entries[i].element.name);
        CHECK(back.entries[i].element.kind == n.entries[i].element.kind);
        CHECK(back.entries[i].element.node1 == n.entries[i].element.node1);
        CHECK(back.entries[i].element.node2 == n.entries[i].element.node2);
        CHECK(back.entries[i].element.value == n.entries[i].element.value);  // bit-exact
        CHECK(back.entries[i].element.on == n.entries[i].element.on);
        CHECK(back.entries[i].enetwork == n.entries[i].enetwork);
        CHECK(back.entries[i].fixed == n.entries[i].fixed);
    }
    CHECK(back.ranges.size() == n.ranges.size());
    // and rendering the reparsed netlist reproduces the same bytes
    CHECK(render_netlist(back) == text);
}

TEST_CASE("partition of the phase shifter") {
    const Netlist n = parse_netlist(kPhaseShifter);
    const Partition p = partition(n);
    REQUIRE(p.enetworks.size() == 2);
    CHECK(p.enetworks[0].label == "net1");
    CHECK(p.enetworks[1].label == "net2");
    // ports oriented along the signal path
    CHECK(p.enetworks[0].circuit.port1.node == "in");
    CHECK(p.enetworks[0].circuit.port2.node == "a");
    CHECK(p.enetworks[1].circuit.port1.node == "a");
    CHECK(p.enetworks[1].circuit.port2.node == "out");
    // switches stay residual, exposed as binary features
    REQUIRE(p.residual_elements == std::vector<std::string>{"S1", "S2"});
    REQUIRE(p.residual_params.size() == 2);
    CHECK(p.residual_params[0].first == "S1");
    CHECK(p.residual_params[0].second == 0.0);
}

TEST_CASE("whole-circuit tagging yields a single E-network and empty residual") {
    const Netlist n = parse_netlist(
        ".ports in out\nL1 in m 1n @all\nC1 m 0 1p @all\nL2 m out 2n @all\n");
    const Partition p = partition(n);
    REQUIRE(p.enetworks.size() == 1);
    CHECK(p.enetworks[0].circuit.elements.size() == 3);
    CHECK(p.residual_elements.empty());
    CHECK(p.residual_params.empty());
}

TEST_CASE("untagged netlist is all residual") {
    const Netlist n = parse_netlist(".ports in out\nR1 in out 50\nG1 out 0 in 0 0.02\n");
    const Partition p = partition(n);
    CHECK(p.enetworks.empty());
    REQUIRE(p.residual_params.size() == 2);
    CHECK(p.residual_params[0].first == "R1");
    CHECK(p.residual_params[1].second == doctest::Approx(0.02));
}

TEST_CASE("untagged vccs between tagged networks lands in the residual") {
    const Netlist n = parse_netlist(
        ".ports in out\nL1 in a 1n @net1\nG1 b 0 a 0 0.05\nL2 b out 1n @net2\n");
    const Partition p = partition(n);
    CHECK(p.enetworks.size() == 2);
    REQUIRE(p.residual_elements == std::vector<std::string>{"G1"});
}

TEST_CASE("partition rejects bad tag groups") {
    SUBCASE("three boundary nodes") {
        const Netlist n = parse_netlist(
            ".ports in out\nL1 in a 1n @bad\nL2 a out 1n @bad\nR1 a 0 50\nR2 in b 10\nR3 b a 10\n");
        // 'bad' touches in, a, out; 'a' is also used by R1/R3 outside the group
        CHECK_THROWS_AS(partition(n), NotTwoPort);
    }
    SUBCASE("unreachable group") {
        const Netlist n = parse_netlist(
            ".ports in out\nR1 in out 50\nL1 x y 1n @island\nC1 y z 1p @island\nR2 x 0 5\nR3 z 0 5\n");
        CHECK_THROWS_AS(partition(n), AmbiguousOrder);
    }
    SUBCASE("no ports but tagged groups") {
        const Netlist n = parse_netlist("L1 a b 1n @g\nR1 b 0 5\n");
        CHECK_THROWS_AS(partition(n), AmbiguousOrder);
    }
}

TEST_CASE("partition order is invariant under declaration reordering") {
    const Netlist a = parse_netlist(kPhaseShifter);
    // same circuit, lines shuffled
    const Netlist b = parse_netlist(R"(.title demo_shifter
.ports in out
S2 a out off
C2 out 0 0.5p @net2
L2 a out 2n @net2
C1 a 0 1p @net1
S1 in a off
L1 in a 1n @net1
)");
    const Partition pa = partition(a);
    const Partition pb = partition(b);
    REQUIRE(pa.enetworks.size() == pb.enetworks.size());
    for (std::size_t i = 0; i < pa.enetworks.size(); ++i) {
        CHECK(pa.enetworks[i].label == pb.enetworks[i].label);
        CHECK(pa.enetworks[i].topology_key == pb.enetworks[i].topology_key);
    }
}

TEST_CASE("partition is exhaustive and disjoint") {
    const Netlist n = parse_netlist(kPhaseShifter);
    const Partition p = partition(n);
    std::set<std::string> seen;
    for (const Enetwork& en : p.enetworks)
        for (const std::string& name : en.element_names) CHECK(seen.insert(name).second);
    for (const std::string& name : p.residual_elements) CHECK(seen.insert(name).second);
    CHECK(seen.size() == n.entries.size());
}

TEST_CASE("enumerate_parameters") {
    SUBCASE("ranged elements in declaration order") {
        const Netlist n = parse_netlist(kPhaseShifter);
        const std::vector<DesignParameter> params = enumerate_parameters(n);
        REQUIRE(params.size() == 4);
        CHECK(params[0].name == "L1");
        CHECK(params[0].owner == "net1");
        CHECK(params[0].log_scale);
        CHECK(params[3].name == "C2");
        CHECK(params[3].owner == "net2");
    }
    SUBCASE("fixed elements are excluded") {
        const Netlist n = parse_netlist(".ports a b\nR1 a b 50 fixed\nR2 b 0 10\n.range R2 1 100\n");
        const std::vector<DesignParameter> params = enumerate_parameters(n);
        REQUIRE(params.size() == 1);
        CHECK(params[0].name == "R2");
        CHECK(params[0].owner == "residual");
    }
    SUBCASE("missing range") {
        const Netlist n = parse_netlist(".ports a b\nR1 a b 50\n");
        CHECK_THROWS_AS(enumerate_parameters(n), MissingRange);
    }
}

TEST_CASE("reduced circuit reproduces the full circuit") {
    Netlist n = parse_netlist(kPhaseShifter);
    n.set_switch("S1", true);
    const Partition p = partition(n);
    const ReferenceImpedance z0;
    const Frequency f(2e9);

    std::vector<SMatrix> slot_s;
    for (const Enetwork& en : p.enetworks) slot_s.push_back(mna_two_port(en.circuit, f, z0));
    const SMatrix direct = mna_two_port(whole_circuit(n), f, z0);
    const SMatrix reduced = mna_two_port(reduced_circuit(n, p, slot_s, z0), f, z0);
    CHECK(testutil::s_near(reduced, direct, 1e-9));
}

TEST_CASE("reduced circuit equals ABCD cascade for a plain two-stage chain") {
    // no switches: the interconnect is a pure cascade, so the stamped
    // reconstruction and the chain product must agree
    const Netlist n = parse_netlist(
        ".ports in out\nL1 in a 1n @net1\nC1 a 0 1p @net1\nL2 a out 2n @net2\nC2 out 0 0.5p @net2\n");
    const Partition p = partition(n);
    const ReferenceImpedance z0;
    for (const Frequency& f : FrequencyGrid::log_spaced(1e6, 15e9, 7)) {
        std::vector<SMatrix> slot_s;
        std::vector<AbcdMatrix> stages;
        for (const Enetwork& en : p.enetworks) {
            slot_s.push_back(mna_two_port(en.circuit, f, z0));
            stages.push_back(s_to_abcd(slot_s.back(), z0));
        }
        const SMatrix via_cascade = abcd_to_s(cascade(stages), z0);
        const SMatrix via_stamp = mna_two_port(reduced_circuit(n, p, slot_s, z0), f, z0);
        CHECK(testutil::s_near(via_stamp, via_cascade, 1e-9));
    }
}

TEST_CASE("topology keys distinguish variants and ignore values") {
    const Netlist a = parse_netlist(".ports in out\nL1 in a 1n @g\nC1 a 0 1p @g\nR9 a out 5\n");
    const Netlist b = parse_netlist(".ports in out\nL7 in a 9n @g\nC3 a 0 7p @g\nR9 a out 5\n");
    const Netlist c = parse_netlist(".ports in out\nC1 in a 1p @g\nL1 a 0 1n @g\nR9 a out 5\n");
    CHECK(partition(a).enetworks[0].topology_key == partition(b).enetworks[0].topology_key);
    CHECK(partition(a).enetworks[0].topology_key != partition(c).enetworks[0].topology_key);
}
