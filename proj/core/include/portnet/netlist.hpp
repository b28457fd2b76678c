#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "portnet/elements.hpp"
#include "portnet/mna.hpp"

namespace portnet {

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
    bool log_scale = false;
};

/// One netlist line: the element plus its annotations.
struct NetlistEntry {
    Element element;
    std::string enetwork;  // empty = residual
    bool fixed = false;
    int line = 0;
};

/// Parsed circuit description. Line grammar:
///
///   NAME node1 node2 [ctrl+ ctrl-] VALUE[unit] [@enetwork] [fixed]
///   .ports IN OUT
///   .range NAME lo hi [log]
///   .title TEXT
///   # comment
///
/// The first letter of NAME selects the kind: R, L, C, S (switch, value is
/// on|off), G (vccs, with control node pair), W (short, no value), O (open,
/// no value). Values accept SI suffixes f p n u m k meg g. Ground is node 0.
struct Netlist {
    std::string title = "untitled";
    std::vector<NetlistEntry> entries;
    std::string in_port, out_port;
    std::map<std::string, ParamRange> ranges;  // keyed by element name

    std::set<std::string> nodes() const;
    const NetlistEntry* find(const std::string& name) const;
    void set_value(const std::string& name, double value);
    void set_switch(const std::string& name, bool on);
};

Netlist parse_netlist(const std::string& text);
Netlist load_netlist(const std::filesystem::path& path);

/// Canonical text form; parse(render(n)) reproduces n exactly.
std::string render_netlist(const Netlist& n);
void save_netlist(const std::filesystem::path& path, const Netlist& n);

/// One tagged E-network extracted as a two-port. port1 faces the input.
struct Enetwork {
    std::string label;
    Subcircuit circuit;
    std::vector<std::string> element_names;  // declaration order
    std::string topology_key;
};

struct Partition {
    std::vector<Enetwork> enetworks;               // ordered along the signal path
    std::vector<std::string> residual_elements;    // names, declaration order
    /// Residual design-parameter carriers: element values, switch states as 0/1.
    std::vector<std::pair<std::string, double>> residual_params;
};

/// Splits a netlist into its tagged E-networks plus the residual set.
/// Throws NotTwoPort when a tag group has != 2 boundary nodes (besides
/// ground) and AmbiguousOrder when a group cannot be placed on the
/// input->output path.
Partition partition(const Netlist& n);

struct DesignParameter {
    std::string name;
    std::string owner;  // E-network label or "residual"
    double lo = 0.0, hi = 0.0;
    bool log_scale = false;
};

/// Every non-fixed R/L/C/vccs element, in declaration order, must carry a
/// range; switches are exposed as binary features, not parameters.
std::vector<DesignParameter> enumerate_parameters(const Netlist& n);

/// The whole circuit as a single two-port between the declared ports.
Subcircuit whole_circuit(const Netlist& n);

/// Residual elements plus one admittance block per E-network: evaluating
/// this reproduces the full circuit from per-E-network S-parameters alone.
StampedCircuit reduced_circuit(const Netlist& n, const Partition& p,
                               std::span<const SMatrix> enetwork_s, ReferenceImpedance z0);

} // namespace portnet
