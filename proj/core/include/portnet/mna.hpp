#pragma once

#include <vector>

#include "portnet/elements.hpp"
#include "portnet/twoport.hpp"

namespace portnet {

/// A two-port block known only by its 2x2 admittance matrix, both ports
/// referenced to ground. Stamping one of these is exactly equivalent to
/// stamping the elements it summarizes, so a partitioned circuit can be
/// re-assembled from per-E-network S-parameters without touching their
/// internals.
struct TwoPortStamp {
    std::string node1, node2;
    std::array<Complex, 4> y;  // y11, y12, y21, y22
};

TwoPortStamp make_two_port_stamp(const std::string& node1, const std::string& node2,
                                 const SMatrix& s, ReferenceImpedance z0);

/// Elements plus two-port blocks plus the external ports: everything the
/// nodal assembler can stamp.
struct StampedCircuit {
    std::vector<Element> elements;
    std::vector<TwoPortStamp> blocks;
    Port port1, port2;
};

/// Solves the linear network at one frequency with both ports terminated in
/// z0, one excitation per port, and forms S from the reflected/incident wave
/// ratios. Pure and reentrant; callers may sweep frequencies in parallel.
SMatrix mna_two_port(const StampedCircuit& c, Frequency f, ReferenceImpedance z0);
SMatrix mna_two_port(const Subcircuit& c, Frequency f, ReferenceImpedance z0);

std::vector<SMatrix> sweep_s(const Subcircuit& c, const FrequencyGrid& grid,
                             ReferenceImpedance z0);
std::vector<SMatrix> sweep_s(const StampedCircuit& c, const FrequencyGrid& grid,
                             ReferenceImpedance z0);

} // namespace portnet
