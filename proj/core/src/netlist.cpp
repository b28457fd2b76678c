#include "portnet/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "portnet/errors.hpp"

namespace portnet {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool valid_node(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

double parse_value(const std::string& tok, int line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double base = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed value '" + tok + "'", line);
    const std::string suffix = lower(std::string(end));
    double scale = 1.0;
    if (suffix.empty()) scale = 1.0;
    else if (suffix == "f") scale = 1e-15;
    else if (suffix == "p") scale = 1e-12;
    else if (suffix == "n") scale = 1e-9;
    else if (suffix == "u") scale = 1e-6;
    else if (suffix == "m") scale = 1e-3;
    else if (suffix == "k") scale = 1e3;
    else if (suffix == "meg") scale = 1e6;
    else if (suffix == "g") scale = 1e9;
    else throw ParseError("malformed value '" + tok + "'", line);
    return base * scale;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

} // namespace

std::set<std::string> Netlist::nodes() const {
    std::set<std::string> out;
    for (const NetlistEntry& e : entries) {
        out.insert(e.element.node1);
        out.insert(e.element.node2);
        if (e.element.kind == ElementKind::Vccs) {
            out.insert(e.element.ctrl_pos);
            out.insert(e.element.ctrl_neg);
        }
    }
    return out;
}

const NetlistEntry* Netlist::find(const std::string& name) const {
    for (const NetlistEntry& e : entries)
        if (e.element.name == name) return &e;
    return nullptr;
}

void Netlist::set_value(const std::string& name, double value) {
    for (NetlistEntry& e : entries) {
        if (e.element.name == name) {
            e.element.value = value;
            return;
        }
    }
    throw InvalidElement("no element named '" + name + "'");
}

void Netlist::set_switch(const std::string& name, bool on) {
    for (NetlistEntry& e : entries) {
        if (e.element.name == name) {
            if (e.element.kind != ElementKind::Switch)
                throw InvalidElement("'" + name + "' is not a switch");
            e.element.on = on;
            return;
        }
    }
    throw InvalidElement("no element named '" + name + "'");
}

Netlist parse_netlist(const std::string& text) {
    Netlist n;
    std::set<std::string> names;
    std::vector<std::pair<std::string, int>> pending_ranges_lines;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool ports_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::vector<std::string> toks = tokenize(raw);
        if (toks.empty()) continue;

        if (toks[0][0] == '.') {
            const std::string directive = lower(toks[0]);
            if (directive == ".ports") {
                if (toks.size() != 3) throw ParseError(".ports needs exactly two nodes", line_no);
                if (ports_seen) throw ParseError("duplicate .ports directive", line_no);
                n.in_port = toks[1];
                n.out_port = toks[2];
                ports_seen = true;
            } else if (directive == ".range") {
                if (toks.size() != 4 && toks.size() != 5)
                    throw ParseError(".range needs NAME lo hi [log]", line_no);
                ParamRange r;
                r.lo = parse_value(toks[2], line_no);
                r.hi = parse_value(toks[3], line_no);
                r.log_scale = false;
                if (toks.size() == 5) {
                    if (lower(toks[4]) != "log")
                        throw ParseError("unknown .range flag '" + toks[4] + "'", line_no);
                    r.log_scale = true;
                }
                if (!(r.lo > 0.0) || !(r.lo < r.hi))
                    throw ParseError(".range needs 0 < lo < hi", line_no);
                if (n.ranges.count(toks[1]))
                    throw ParseError("duplicate .range for '" + toks[1] + "'", line_no);
                n.ranges[toks[1]] = r;
                pending_ranges_lines.emplace_back(toks[1], line_no);
            } else if (directive == ".title") {
                if (toks.size() < 2) throw ParseError(".title needs a name", line_no);
                std::string t = toks[1];
                for (std::size_t i = 2; i < toks.size(); ++i) t += " " + toks[i];
                n.title = t;
            } else {
                throw ParseError("unknown directive '" + toks[0] + "'", line_no);
            }
            continue;
        }

        // element line
        NetlistEntry entry;
        entry.line = line_no;
        Element& e = entry.element;
        e.name = toks[0];
        if (!valid_node(e.name)) throw ParseError("bad element name '" + e.name + "'", line_no);
        if (!names.insert(e.name).second)
            throw ParseError("duplicate element name '" + e.name + "'", line_no);

        const char kind_char = static_cast<char>(std::toupper(static_cast<unsigned char>(toks[0][0])));
        std::size_t pos = 1;
        auto need = [&](const char* what) -> const std::string& {
            if (pos >= toks.size()) throw ParseError(std::string("missing ") + what, line_no);
            return toks[pos++];
        };
        auto take_node = [&](const char* what) {
            const std::string& t = need(what);
            if (!valid_node(t)) throw ParseError(std::string("bad node '") + t + "'", line_no);
            return t;
        };

        switch (kind_char) {
            case 'R': e.kind = ElementKind::Resistor; break;
            case 'L': e.kind = ElementKind::Inductor; break;
            case 'C': e.kind = ElementKind::Capacitor; break;
            case 'S': e.kind = ElementKind::Switch; break;
            case 'G': e.kind = ElementKind::Vccs; break;
            case 'W': e.kind = ElementKind::Short; break;
            case 'O': e.kind = ElementKind::Open; break;
            default:
                throw ParseError("unknown element type '" + e.name + "' (first letter selects R/L/C/S/G/W/O)", line_no);
        }

        e.node1 = take_node("node1");
        e.node2 = take_node("node2");
        if (e.kind == ElementKind::Vccs) {
            e.ctrl_pos = take_node("control node +");
            e.ctrl_neg = take_node("control node -");
        }
        if (e.kind == ElementKind::Switch) {
            const std::string state = lower(need("switch state (on|off)"));
            if (state == "on") e.on = true;
            else if (state == "off") e.on = false;
            else throw ParseError("switch state must be on or off, got '" + state + "'", line_no);
        } else if (e.kind != ElementKind::Short && e.kind != ElementKind::Open) {
            e.value = parse_value(need("value"), line_no);
            if (!(e.value > 0.0) || !std::isfinite(e.value))
                throw ParseError("value must be positive and finite", line_no);
        }

        while (pos < toks.size()) {
            const std::string& t = toks[pos++];
            if (t[0] == '@') {
                if (!entry.enetwork.empty()) throw ParseError("duplicate E-network tag", line_no);
                entry.enetwork = t.substr(1);
                if (entry.enetwork.empty()) throw ParseError("empty E-network label", line_no);
            } else if (lower(t) == "fixed") {
                entry.fixed = true;
            } else {
                throw ParseError("unexpected token '" + t + "'", line_no);
            }
        }
        n.entries.push_back(std::move(entry));
    }

    // cross-reference checks
    const std::set<std::string> used_nodes = n.nodes();
    if (ports_seen) {
        for (const std::string* p : {&n.in_port, &n.out_port})
            if (!used_nodes.count(*p))
                throw ParseError("undeclared node '" + *p + "' in .ports", 0);
        if (n.in_port == "0" || n.out_port == "0")
            throw ParseError("a port cannot be the ground node", 0);
    }
    for (const auto& [name, line] : pending_ranges_lines) {
        const NetlistEntry* e = n.find(name);
        if (!e) throw ParseError("range for unknown element '" + name + "'", line);
        const ElementKind k = e->element.kind;
        if (k == ElementKind::Switch || k == ElementKind::Short || k == ElementKind::Open ||
            k == ElementKind::Port)
            throw ParseError("element '" + name + "' cannot carry a range", line);
    }
    return n;
}

Netlist load_netlist(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    try {
        return parse_netlist(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

std::string render_netlist(const Netlist& n) {
    std::string out;
    out += ".title " + n.title + "\n";
    if (!n.in_port.empty()) out += ".ports " + n.in_port + " " + n.out_port + "\n";
    for (const NetlistEntry& entry : n.entries) {
        const Element& e = entry.element;
        out += e.name + " " + e.node1 + " " + e.node2;
        if (e.kind == ElementKind::Vccs) out += " " + e.ctrl_pos + " " + e.ctrl_neg;
        if (e.kind == ElementKind::Switch) out += e.on ? " on" : " off";
        else if (e.kind != ElementKind::Short && e.kind != ElementKind::Open)
            out += " " + fmt(e.value);
        if (!entry.enetwork.empty()) out += " @" + entry.enetwork;
        if (entry.fixed) out += " fixed";
        out += "\n";
    }
    for (const auto& [name, r] : n.ranges) {
        out += ".range " + name + " " + fmt(r.lo) + " " + fmt(r.hi);
        if (r.log_scale) out += " log";
        out += "\n";
    }
    return out;
}

void save_netlist(const std::filesystem::path& path, const Netlist& n) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << render_netlist(n);
    if (!f) throw IoError("write failed: " + path.string());
}

Partition partition(const Netlist& n) {
    Partition out;

    std::vector<std::string> labels;  // first-appearance order
    std::map<std::string, std::vector<const NetlistEntry*>> groups;
    for (const NetlistEntry& e : n.entries) {
        if (e.enetwork.empty()) continue;
        if (!groups.count(e.enetwork)) labels.push_back(e.enetwork);
        groups[e.enetwork].push_back(&e);
    }

    // residual set
    for (const NetlistEntry& e : n.entries) {
        if (!e.enetwork.empty()) continue;
        out.residual_elements.push_back(e.element.name);
        const ElementKind k = e.element.kind;
        if (k == ElementKind::Switch) {
            out.residual_params.emplace_back(e.element.name, e.element.on ? 1.0 : 0.0);
        } else if (!e.fixed && (k == ElementKind::Resistor || k == ElementKind::Inductor ||
                                k == ElementKind::Capacitor || k == ElementKind::Vccs)) {
            out.residual_params.emplace_back(e.element.name, e.element.value);
        }
    }

    if (labels.empty()) return out;

    if (n.in_port.empty())
        throw AmbiguousOrder("netlist has E-networks but no .ports directive to orient them");

    // node ownership: which nodes does each group touch, and who else uses them
    auto nodes_of = [](const Element& e) {
        std::vector<std::string> v{e.node1, e.node2};
        if (e.kind == ElementKind::Vccs) {
            v.push_back(e.ctrl_pos);
            v.push_back(e.ctrl_neg);
        }
        return v;
    };
    std::map<std::string, std::set<std::string>> group_nodes;
    std::map<std::string, std::set<std::string>> node_users;  // node -> labels ("" = residual)
    for (const NetlistEntry& e : n.entries)
        for (const std::string& node : nodes_of(e.element))
            if (node != "0") node_users[node].insert(e.enetwork);
    for (const std::string& label : labels)
        for (const NetlistEntry* e : groups[label])
            for (const std::string& node : nodes_of(e->element))
                if (node != "0") group_nodes[label].insert(node);

    std::vector<Element> all_elements;
    for (const NetlistEntry& e : n.entries) all_elements.push_back(e.element);
    const std::map<std::string, int> depth = bfs_node_depths(all_elements, n.in_port);

    struct Placed {
        std::string label;
        int depth;
        std::string b1, b2;  // boundary nodes, b1 upstream
        std::vector<const NetlistEntry*> members;
    };
    std::vector<Placed> placed;
    for (const std::string& label : labels) {
        std::vector<std::string> boundary;
        for (const std::string& node : group_nodes[label]) {
            const bool used_outside = node_users[node].size() > 1;
            const bool is_port = node == n.in_port || node == n.out_port;
            if (used_outside || is_port) boundary.push_back(node);
        }
        if (boundary.size() != 2)
            throw NotTwoPort("E-network '" + label + "' has " + std::to_string(boundary.size()) +
                             " boundary nodes besides ground, expected 2");
        for (const std::string& b : boundary)
            if (!depth.count(b))
                throw AmbiguousOrder("E-network '" + label + "' is not reachable from the input port");
        std::string b1 = boundary[0], b2 = boundary[1];
        const int d1 = depth.at(b1), d2 = depth.at(b2);
        if (d2 < d1 || (d1 == d2 && b2 < b1)) std::swap(b1, b2);
        placed.push_back(Placed{label, std::min(d1, d2), b1, b2, groups[label]});
    }
    std::sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.label < b.label;
    });

    for (const Placed& p : placed) {
        Enetwork en;
        en.label = p.label;
        en.circuit.port1 = Port{p.b1, "0"};
        en.circuit.port2 = Port{p.b2, "0"};
        for (const NetlistEntry* e : p.members) {
            en.circuit.elements.push_back(e->element);
            en.element_names.push_back(e->element.name);
        }
        en.topology_key = en.circuit.topology_key();
        out.enetworks.push_back(std::move(en));
    }
    return out;
}

std::vector<DesignParameter> enumerate_parameters(const Netlist& n) {
    std::vector<DesignParameter> out;
    for (const NetlistEntry& e : n.entries) {
        const ElementKind k = e.element.kind;
        const bool valued = k == ElementKind::Resistor || k == ElementKind::Inductor ||
                            k == ElementKind::Capacitor || k == ElementKind::Vccs;
        if (!valued || e.fixed) continue;
        auto it = n.ranges.find(e.element.name);
        if (it == n.ranges.end())
            throw MissingRange("element '" + e.element.name + "' has no .range and is not fixed");
        DesignParameter p;
        p.name = e.element.name;
        p.owner = e.enetwork.empty() ? "residual" : e.enetwork;
        p.lo = it->second.lo;
        p.hi = it->second.hi;
        p.log_scale = it->second.log_scale;
        out.push_back(std::move(p));
    }
    return out;
}

Subcircuit whole_circuit(const Netlist& n) {
    if (n.in_port.empty())
        throw InvalidTopology("netlist has no .ports directive");
    Subcircuit c;
    for (const NetlistEntry& e : n.entries) c.elements.push_back(e.element);
    c.port1 = Port{n.in_port, "0"};
    c.port2 = Port{n.out_port, "0"};
    return c;
}

StampedCircuit reduced_circuit(const Netlist& n, const Partition& p,
                               std::span<const SMatrix> enetwork_s, ReferenceImpedance z0) {
    if (enetwork_s.size() != p.enetworks.size())
        throw SchemaMismatch("need one S-matrix per E-network (" +
                             std::to_string(p.enetworks.size()) + ", got " +
                             std::to_string(enetwork_s.size()) + ")");
    if (n.in_port.empty())
        throw InvalidTopology("netlist has no .ports directive");
    StampedCircuit c;
    c.port1 = Port{n.in_port, "0"};
    c.port2 = Port{n.out_port, "0"};
    std::set<std::string> tagged;
    for (const Enetwork& en : p.enetworks)
        for (const std::string& name : en.element_names) tagged.insert(name);
    for (const NetlistEntry& e : n.entries)
        if (!tagged.count(e.element.name)) c.elements.push_back(e.element);
    for (std::size_t i = 0; i < p.enetworks.size(); ++i) {
        const Enetwork& en = p.enetworks[i];
        c.blocks.push_back(make_two_port_stamp(en.circuit.port1.node, en.circuit.port2.node,
                                               enetwork_s[i], z0));
    }
    return c;
}

} // namespace portnet
