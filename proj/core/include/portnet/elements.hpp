#pragma once

#include <map>
#include <string>
#include <vector>

#include "portnet/types.hpp"

namespace portnet {

enum class ElementKind {
    Resistor,   // value = ohms
    Inductor,   // value = henries
    Capacitor,  // value = farads
    Switch,     // on: 1 mOhm series resistance, off: branch removed
    Vccs,       // value = transconductance in siemens, controlled by (ctrl_pos, ctrl_neg)
    Port,       // marker only, never stamped
    Short,      // large fixed conductance
    Open,       // zero admittance
};

const char* element_kind_name(ElementKind k);

/// Switch on-resistance and the conductance used for explicit shorts.
/// Shorts are stamped as big conductances instead of merging nodes so node
/// numbering stays stable; the solver's refinement absorbs the dynamic range.
inline constexpr double kSwitchOnResistanceOhms = 1e-3;
inline constexpr double kShortConductanceSiemens = 1e9;

struct Element {
    std::string name;
    ElementKind kind = ElementKind::Open;
    std::string node1, node2;
    std::string ctrl_pos, ctrl_neg;  // Vccs only
    double value = 0.0;
    bool on = false;                 // Switch only
};

/// Branch admittance of a two-terminal element at one frequency.
/// Vccs is not a branch (it is stamped separately); Port is rejected.
Complex element_admittance(const Element& e, Frequency f);

/// One port of a two-port: a node measured against a reference node
/// (ground "0" throughout this toolkit).
struct Port {
    std::string node;
    std::string ref = "0";
};

/// BFS distance of every node reachable from `start` over the element
/// graph. Ground never conducts traversal; the map omits unreachable nodes.
std::map<std::string, int> bfs_node_depths(const std::vector<Element>& elements,
                                           const std::string& start);

/// A connected group of elements exposed through exactly two ports.
struct Subcircuit {
    std::vector<Element> elements;
    Port port1, port2;

    /// Canonical fingerprint of (element kinds, connectivity), independent
    /// of element names, values and declaration order. Keys datasets and
    /// models across topologies.
    std::string topology_key() const;
};

} // namespace portnet
