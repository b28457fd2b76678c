#include "portnet/mna.hpp"

#include <map>

#include "portnet/errors.hpp"
#include "portnet/linear_solver.hpp"

namespace portnet {

TwoPortStamp make_two_port_stamp(const std::string& node1, const std::string& node2,
                                 const SMatrix& s, ReferenceImpedance z0) {
    return TwoPortStamp{node1, node2, s_to_y(s, z0)};
}

namespace {

struct NodeIndex {
    std::map<std::string, int> index;
    int count = 0;

    void add(const std::string& node) {
        if (node == "0") return;
        if (index.emplace(node, count).second) ++count;
    }
    // -1 means ground
    int of(const std::string& node) const {
        if (node == "0") return -1;
        auto it = index.find(node);
        if (it == index.end())
            throw InvalidTopology("node '" + node + "' does not exist in circuit");
        return it->second;
    }
};

void stamp_branch(CompensatedMatrix& y, int a, int b, Complex adm) {
    if (adm == Complex(0.0, 0.0)) return;
    if (a >= 0) y.add(a, a, adm);
    if (b >= 0) y.add(b, b, adm);
    if (a >= 0 && b >= 0) {
        y.add(a, b, -adm);
        y.add(b, a, -adm);
    }
}

void stamp_vccs(CompensatedMatrix& y, int op, int on, int cp, int cn, double gm) {
    // current gm*(v_cp - v_cn) flows from node1 to node2 through the source
    if (op >= 0 && cp >= 0) y.add(op, cp, gm);
    if (op >= 0 && cn >= 0) y.add(op, cn, -gm);
    if (on >= 0 && cp >= 0) y.add(on, cp, -gm);
    if (on >= 0 && cn >= 0) y.add(on, cn, gm);
}

} // namespace

SMatrix mna_two_port(const StampedCircuit& c, Frequency f, ReferenceImpedance z0) {
    if (c.port1.node == "0" || c.port2.node == "0")
        throw InvalidTopology("a port node cannot be the ground node");

    NodeIndex nodes;
    bool port1_touched = false, port2_touched = false;
    auto touch = [&](const std::string& n) {
        nodes.add(n);
        if (n == c.port1.node) port1_touched = true;
        if (n == c.port2.node) port2_touched = true;
    };
    for (const Element& e : c.elements) {
        touch(e.node1);
        touch(e.node2);
        if (e.kind == ElementKind::Vccs) {
            touch(e.ctrl_pos);
            touch(e.ctrl_neg);
        }
    }
    for (const TwoPortStamp& b : c.blocks) {
        touch(b.node1);
        touch(b.node2);
    }
    if (!port1_touched || !port2_touched)
        throw InvalidTopology("port node not connected to any element");
    nodes.add(c.port1.ref);
    nodes.add(c.port2.ref);

    const int n = nodes.count;
    CompensatedMatrix y(n, n);

    for (const Element& e : c.elements) {
        if (e.kind == ElementKind::Vccs) {
            if (!(e.value > 0.0) || !std::isfinite(e.value))
                throw InvalidElement(e.name + ": vccs transconductance must be positive");
            stamp_vccs(y, nodes.of(e.node1), nodes.of(e.node2), nodes.of(e.ctrl_pos),
                       nodes.of(e.ctrl_neg), e.value);
        } else {
            stamp_branch(y, nodes.of(e.node1), nodes.of(e.node2), element_admittance(e, f));
        }
    }
    for (const TwoPortStamp& b : c.blocks) {
        const int p = nodes.of(b.node1);
        const int q = nodes.of(b.node2);
        if (p >= 0) y.add(p, p, b.y[0]);
        if (p >= 0 && q >= 0) {
            y.add(p, q, b.y[1]);
            y.add(q, p, b.y[2]);
        }
        if (q >= 0) y.add(q, q, b.y[3]);
    }

    // Both ports terminated in z0 for every excitation.
    const double g0 = 1.0 / z0.ohms();
    stamp_branch(y, nodes.of(c.port1.node), nodes.of(c.port1.ref), Complex(g0, 0.0));
    stamp_branch(y, nodes.of(c.port2.node), nodes.of(c.port2.ref), Complex(g0, 0.0));

    const LinearSolver solver(y);

    // Norton source 2/z0 at the driven port makes the incident wave a = 1,
    // so b_i = V_i - delta_ik and S columns read off directly.
    auto port_voltage = [&](const std::vector<Complex>& v, const Port& p) {
        const int a = nodes.of(p.node);
        const int r = nodes.of(p.ref);
        Complex val = a >= 0 ? v[a] : Complex(0.0, 0.0);
        if (r >= 0) val -= v[r];
        return val;
    };
    auto excite = [&](const Port& p) {
        std::vector<Complex> rhs(n, Complex(0.0, 0.0));
        const int a = nodes.of(p.node);
        const int r = nodes.of(p.ref);
        if (a >= 0) rhs[a] += Complex(2.0 * g0, 0.0);
        if (r >= 0) rhs[r] -= Complex(2.0 * g0, 0.0);
        return solver.solve(rhs);
    };

    const std::vector<Complex> v1 = excite(c.port1);
    const std::vector<Complex> v2 = excite(c.port2);

    SMatrix s;
    s.s11 = port_voltage(v1, c.port1) - 1.0;
    s.s21 = port_voltage(v1, c.port2);
    s.s12 = port_voltage(v2, c.port1);
    s.s22 = port_voltage(v2, c.port2) - 1.0;
    return s;
}

SMatrix mna_two_port(const Subcircuit& c, Frequency f, ReferenceImpedance z0) {
    return mna_two_port(StampedCircuit{c.elements, {}, c.port1, c.port2}, f, z0);
}

std::vector<SMatrix> sweep_s(const StampedCircuit& c, const FrequencyGrid& grid,
                             ReferenceImpedance z0) {
    std::vector<SMatrix> out;
    out.reserve(grid.size());
    for (const Frequency& f : grid) {
        try {
            out.push_back(mna_two_port(c, f, z0));
        } catch (const Error& err) {
            throw SingularNetwork("at " + std::to_string(f.hertz()) + " Hz: " + err.what());
        }
    }
    return out;
}

std::vector<SMatrix> sweep_s(const Subcircuit& c, const FrequencyGrid& grid,
                             ReferenceImpedance z0) {
    return sweep_s(StampedCircuit{c.elements, {}, c.port1, c.port2}, grid, z0);
}

} // namespace portnet
