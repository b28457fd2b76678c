#include "portnet/elements.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "portnet/errors.hpp"

namespace portnet {

const char* element_kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::Resistor: return "resistor";
        case ElementKind::Inductor: return "inductor";
        case ElementKind::Capacitor: return "capacitor";
        case ElementKind::Switch: return "switch";
        case ElementKind::Vccs: return "vccs";
        case ElementKind::Port: return "port";
        case ElementKind::Short: return "short";
        case ElementKind::Open: return "open";
    }
    return "?";
}

Complex element_admittance(const Element& e, Frequency f) {
    const bool needs_positive_value = e.kind == ElementKind::Resistor ||
                                      e.kind == ElementKind::Inductor ||
                                      e.kind == ElementKind::Capacitor;
    if (needs_positive_value && (!(e.value > 0.0) || !std::isfinite(e.value)))
        throw InvalidElement(e.name + ": " + element_kind_name(e.kind) +
                             " value must be positive and finite");
    switch (e.kind) {
        case ElementKind::Resistor: return Complex(1.0 / e.value, 0.0);
        case ElementKind::Capacitor: return f.s() * e.value;
        case ElementKind::Inductor: return 1.0 / (f.s() * e.value);
        case ElementKind::Switch:
            return e.on ? Complex(1.0 / kSwitchOnResistanceOhms, 0.0) : Complex(0.0, 0.0);
        case ElementKind::Short: return Complex(kShortConductanceSiemens, 0.0);
        case ElementKind::Open: return Complex(0.0, 0.0);
        case ElementKind::Vccs:
            throw InvalidElement(e.name + ": vccs has no branch admittance");
        case ElementKind::Port:
            throw InvalidElement(e.name + ": port is not a stampable element");
    }
    throw InvalidElement(e.name + ": unknown element kind");
}

std::map<std::string, int> bfs_node_depths(const std::vector<Element>& elements,
                                           const std::string& start) {
    std::map<std::string, std::set<std::string>> adj;
    auto link = [&adj](const std::string& a, const std::string& b) {
        if (a != "0" && b != "0") {
            adj[a].insert(b);
            adj[b].insert(a);
        } else {
            adj[a];
            adj[b];
        }
    };
    for (const Element& e : elements) {
        link(e.node1, e.node2);
        if (e.kind == ElementKind::Vccs) {
            // the signal path runs control -> output through the source
            link(e.ctrl_pos, e.node1);
            link(e.ctrl_pos, e.node2);
            link(e.ctrl_neg, e.node1);
            link(e.ctrl_neg, e.node2);
        }
    }
    std::map<std::string, int> depth;
    std::queue<std::string> q;
    depth[start] = 0;
    q.push(start);
    while (!q.empty()) {
        const std::string n = q.front();
        q.pop();
        auto it = adj.find(n);
        if (it == adj.end()) continue;
        for (const std::string& m : it->second) {
            if (m == "0" || depth.count(m)) continue;
            depth[m] = depth[n] + 1;
            q.push(m);
        }
    }
    return depth;
}

std::string Subcircuit::topology_key() const {
    const std::map<std::string, int> depth = bfs_node_depths(elements, port1.node);

    // Canonical node names: ports and ground are fixed; internal nodes are
    // ordered by (BFS depth from port1, incidence signature).
    std::map<std::string, std::string> canon;
    canon["0"] = "G";
    canon[port1.node] = "P1";
    canon[port2.node] = "P2";

    auto node_class = [&](const std::string& n) -> std::string {
        auto it = canon.find(n);
        return it != canon.end() ? it->second : std::string("I");
    };

    std::map<std::string, std::multiset<std::string>> signature;
    for (const Element& e : elements) {
        const std::string k = element_kind_name(e.kind);
        signature[e.node1].insert(k + ">" + node_class(e.node2));
        signature[e.node2].insert(k + ">" + node_class(e.node1));
    }

    std::vector<std::string> internal;
    for (const auto& [node, sig] : signature)
        if (!canon.count(node)) internal.push_back(node);
    std::sort(internal.begin(), internal.end(), [&](const std::string& a, const std::string& b) {
        const int da = depth.count(a) ? depth.at(a) : 1 << 20;
        const int db = depth.count(b) ? depth.at(b) : 1 << 20;
        if (da != db) return da < db;
        return signature.at(a) < signature.at(b);
    });
    for (std::size_t i = 0; i < internal.size(); ++i)
        canon[internal[i]] = "N" + std::to_string(i + 1);

    std::vector<std::string> descriptors;
    descriptors.reserve(elements.size());
    for (const Element& e : elements) {
        std::string a = canon.at(e.node1), b = canon.at(e.node2);
        std::string d;
        if (e.kind == ElementKind::Vccs) {
            // direction and control nodes matter
            d = std::string(element_kind_name(e.kind)) + "(" + a + "," + b + ";" +
                canon.at(e.ctrl_pos) + "," + canon.at(e.ctrl_neg) + ")";
        } else {
            if (b < a) std::swap(a, b);
            d = std::string(element_kind_name(e.kind)) + "(" + a + "," + b + ")";
        }
        descriptors.push_back(std::move(d));
    }
    std::sort(descriptors.begin(), descriptors.end());

    std::string key;
    for (std::size_t i = 0; i < descriptors.size(); ++i) {
        if (i) key += ";";
        key += descriptors[i];
    }
    return key;
}

} // namespace portnet
