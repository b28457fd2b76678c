#include "portnet/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json_util.hpp"
#include "portnet/model_io.hpp"

namespace portnet {

using detail::json;

const char* goal_kind_name(GoalKind g) {
    switch (g) {
        case GoalKind::Equals: return "equals";
        case GoalKind::LessThan: return "less_than";
        case GoalKind::GreaterThan: return "greater_than";
    }
    return "?";
}

GoalKind goal_kind_from_name(const std::string& name) {
    if (name == "equals") return GoalKind::Equals;
    if (name == "less_than") return GoalKind::LessThan;
    if (name == "greater_than") return GoalKind::GreaterThan;
    throw SchemaMismatch("unknown goal kind '" + name + "'");
}

std::vector<double> decode_genome(const SizingProblem& p, std::span<const double> genome) {
    if (genome.size() != p.params.size())
        throw SchemaMismatch("genome length does not match parameter count");
    std::vector<double> values(genome.size());
    for (std::size_t i = 0; i < genome.size(); ++i) {
        const DesignParameter& d = p.params[i];
        const double g = std::clamp(genome[i], 0.0, 1.0);
        values[i] = d.log_scale ? std::exp(std::log(d.lo) + g * (std::log(d.hi) - std::log(d.lo)))
                                : d.lo + g * (d.hi - d.lo);
    }
    return values;
}

namespace {

Netlist instantiated(const SizingProblem& p, std::span<const double> values,
                     const std::map<std::string, bool>& switches) {
    Netlist net = p.netlist;
    for (std::size_t i = 0; i < p.params.size(); ++i) net.set_value(p.params[i].name, values[i]);
    for (const auto& [name, on] : switches) net.set_switch(name, on);
    return net;
}

double oracle_target_value(const SizingProblem& p, std::span<const double> values,
                           const SizingTarget& t) {
    const Netlist net = instantiated(p, values, t.switches);
    const SMatrix s = mna_two_port(whole_circuit(net), Frequency(t.frequency_hz),
                                   ReferenceImpedance(p.z0));
    return poi_from_s(s).by_name(t.poi);
}

double composed_target_value(const SizingProblem& p, std::span<const double> values,
                             const SizingTarget& t) {
    if (!p.model) throw SchemaMismatch("composed simulator requested but no model attached");
    const ComposedModel& model = *p.model;
    const ComposedMeta& meta = model.meta();

    const double rel = std::abs(meta.frequency_hz - t.frequency_hz) /
                       std::max(meta.frequency_hz, t.frequency_hz);
    if (rel > 1e-9)
        throw SchemaMismatch("model was trained at " + std::to_string(meta.frequency_hz) +
                             " Hz, target asks for " + std::to_string(t.frequency_hz) + " Hz");

    std::map<std::string, double> by_name;
    for (std::size_t i = 0; i < p.params.size(); ++i) by_name[p.params[i].name] = values[i];

    std::vector<std::vector<double>> sub_inputs;
    for (const std::vector<std::string>& names : meta.slot_params) {
        std::vector<double> in;
        for (const std::string& name : names) {
            auto it = by_name.find(name);
            if (it == by_name.end())
                throw SchemaMismatch("sub-model input '" + name + "' is not a sized parameter");
            in.push_back(it->second);
        }
        sub_inputs.push_back(std::move(in));
    }
    std::vector<double> xr;
    for (const std::string& name : meta.xr_names) {
        const NetlistEntry* e = p.netlist.find(name);
        if (!e) throw SchemaMismatch("residual feature '" + name + "' missing from netlist");
        if (e->element.kind == ElementKind::Switch) {
            auto it = t.switches.find(name);
            const bool on = it != t.switches.end() ? it->second : e->element.on;
            xr.push_back(on ? 1.0 : 0.0);
        } else if (auto it = by_name.find(name); it != by_name.end()) {
            xr.push_back(it->second);
        } else {
            xr.push_back(e->element.value);
        }
    }

    const std::vector<double> pred = model.predict(sub_inputs, xr);
    for (std::size_t i = 0; i < meta.target_names.size(); ++i)
        if (meta.target_names[i] == t.poi) return pred[i];
    throw SchemaMismatch("model does not predict PoI '" + t.poi + "'");
}

double target_error(const SizingTarget& t, double v) {
    switch (t.goal) {
        case GoalKind::Equals: return std::abs(v - t.value);
        case GoalKind::LessThan: return std::max(0.0, v - t.value);
        case GoalKind::GreaterThan: return std::max(0.0, t.value - v);
    }
    return 0.0;
}

bool target_pass(const SizingTarget& t, double v) {
    switch (t.goal) {
        case GoalKind::Equals: return std::abs(v - t.value) <= t.tolerance;
        case GoalKind::LessThan: return v < t.value;
        case GoalKind::GreaterThan: return v > t.value;
    }
    return false;
}

} // namespace

std::vector<double> evaluate_targets(const SizingProblem& p, std::span<const double> values,
                                     SimulatorKind simulator) {
    std::vector<double> out;
    out.reserve(p.targets.size());
    for (const SizingTarget& t : p.targets) {
        const double v = simulator == SimulatorKind::Oracle ? oracle_target_value(p, values, t)
                                                            : composed_target_value(p, values, t);
        if (std::isnan(v)) throw SingularNetwork("target '" + t.poi + "' evaluated to NaN");
        out.push_back(v);
    }
    return out;
}

std::vector<VerifyRecord> verify(const SizingProblem& p, std::span<const double> values) {
    std::vector<VerifyRecord> out;
    const bool have_model = p.model.has_value();
    for (const SizingTarget& t : p.targets) {
        VerifyRecord r;
        r.target = t;
        r.oracle_value = oracle_target_value(p, values, t);
        r.surrogate_value = have_model ? composed_target_value(p, values, t) : r.oracle_value;
        r.surrogate_pass = target_pass(t, r.surrogate_value);
        r.oracle_pass = target_pass(t, r.oracle_value);
        r.gap = std::abs(r.surrogate_value - r.oracle_value);
        out.push_back(std::move(r));
    }
    return out;
}

SizingResult run_sizing(const SizingProblem& p) {
    if (p.params.empty()) throw SchemaMismatch("sizing needs at least one design parameter");
    if (p.targets.empty()) throw SchemaMismatch("sizing needs at least one target");

    std::vector<std::size_t> equality_idx;
    for (std::size_t i = 0; i < p.targets.size(); ++i)
        if (p.targets[i].goal == GoalKind::Equals) equality_idx.push_back(i);
    const int n_obj = std::max<std::size_t>(1, equality_idx.size());

    SizingResult result;
    const Evaluator evaluator = [&](std::span<const double> genome) {
        ++result.surrogate_evaluations;
        const std::vector<double> values = decode_genome(p, genome);
        const std::vector<double> poi = evaluate_targets(p, values, p.simulator);
        std::vector<double> objectives;
        double violation = 0.0;
        for (std::size_t i = 0; i < p.targets.size(); ++i) {
            const double err = p.targets[i].weight * target_error(p.targets[i], poi[i]);
            if (p.targets[i].goal == GoalKind::Equals)
                objectives.push_back(err);
            else
                violation += err;
        }
        if (objectives.empty()) objectives.push_back(violation);
        return std::make_pair(objectives, violation);
    };

    result.evolve = evolve(static_cast<int>(p.params.size()), n_obj, evaluator, p.nsga2);

    // final oracle verification over a small, diverse candidate set
    std::vector<std::vector<double>> candidates;
    std::set<std::vector<double>> seen;
    for (int i : result.evolve.pareto_front) {
        if (seen.insert(result.evolve.population[i].genome).second)
            candidates.push_back(result.evolve.population[i].genome);
    }
    for (const Individual& ind : result.evolve.generation_bests) {
        if (seen.insert(ind.genome).second) candidates.push_back(ind.genome);
    }

    for (const std::vector<double>& genome : candidates) {
        SizedCandidate c;
        c.genome = genome;
        c.values = decode_genome(p, genome);
        c.report = verify(p, c.values);
        result.oracle_evaluations += static_cast<long>(c.report.size());
        c.oracle_error = 0.0;
        c.oracle_pass = true;
        for (const VerifyRecord& r : c.report) {
            c.oracle_error += r.target.weight * target_error(r.target, r.oracle_value);
            if (r.target.goal != GoalKind::Equals && !r.oracle_pass) c.oracle_pass = false;
        }
        result.verified.push_back(std::move(c));
    }
    std::stable_sort(result.verified.begin(), result.verified.end(),
                     [](const SizedCandidate& a, const SizedCandidate& b) {
                         if (a.oracle_pass != b.oracle_pass) return a.oracle_pass;
                         return a.oracle_error < b.oracle_error;
                     });
    return result;
}

SizingProblem load_problem(const std::filesystem::path& path) {
    const json j = detail::load_json_file(path);
    const std::filesystem::path dir = path.parent_path();

    SizingProblem p;
    p.netlist = load_netlist(dir / j.at("netlist").get<std::string>());
    p.params = enumerate_parameters(p.netlist);
    p.z0 = j.value("z0", 50.0);
    const std::string sim = j.value("simulator", "composed");
    if (sim == "composed") p.simulator = SimulatorKind::Composed;
    else if (sim == "oracle") p.simulator = SimulatorKind::Oracle;
    else throw SchemaMismatch("unknown simulator '" + sim + "'");
    if (j.contains("model"))
        p.model = load_composed(dir / j.at("model").get<std::string>());
    if (p.simulator == SimulatorKind::Composed && !p.model)
        throw SchemaMismatch("composed simulator requires a 'model' entry");

    for (const json& tj : j.at("targets")) {
        SizingTarget t;
        t.poi = tj.at("poi").get<std::string>();
        PoiVector{}.by_name(t.poi);  // validate
        t.frequency_hz = tj.at("frequency_hz").get<double>();
        t.goal = goal_kind_from_name(tj.at("goal").get<std::string>());
        t.value = tj.at("value").get<double>();
        t.weight = tj.value("weight", 1.0);
        t.tolerance = tj.value("tolerance", 0.0);
        if (tj.contains("switches")) {
            for (auto it = tj.at("switches").begin(); it != tj.at("switches").end(); ++it) {
                const json& v = it.value();
                bool on;
                if (v.is_boolean()) on = v.get<bool>();
                else if (v.is_string()) on = v.get<std::string>() == "on";
                else throw SchemaMismatch("switch state must be bool or \"on\"/\"off\"");
                t.switches[it.key()] = on;
            }
        }
        p.targets.push_back(std::move(t));
    }
    if (j.contains("nsga2")) {
        const json& c = j.at("nsga2");
        p.nsga2.population = c.value("population", 30);
        p.nsga2.generations = c.value("generations", 30);
        p.nsga2.crossover_prob = c.value("crossover_prob", 0.9);
        p.nsga2.mutation_prob = c.value("mutation_prob", -1.0);
        p.nsga2.sbx_eta = c.value("sbx_eta", 15.0);
        p.nsga2.pm_eta = c.value("pm_eta", 20.0);
        p.nsga2.seed = c.value("seed", 0ULL);
    }
    return p;
}

namespace {

json record_to_json(const VerifyRecord& r) {
    json t;
    t["poi"] = r.target.poi;
    t["frequency_hz"] = r.target.frequency_hz;
    t["goal"] = goal_kind_name(r.target.goal);
    t["value"] = r.target.value;
    json sw = json::object();
    for (const auto& [name, on] : r.target.switches) sw[name] = on;
    t["switches"] = sw;
    json out;
    out["target"] = t;
    out["surrogate"] = r.surrogate_value;
    out["oracle"] = r.oracle_value;
    out["gap"] = r.gap;
    out["surrogate_pass"] = r.surrogate_pass;
    out["oracle_pass"] = r.oracle_pass;
    return out;
}

} // namespace

void save_result(const std::filesystem::path& path, const SizingProblem& p,
                 const SizingResult& r) {
    json j;
    j["surrogate_evaluations"] = r.surrogate_evaluations;
    j["oracle_evaluations"] = r.oracle_evaluations;

    json candidates = json::array();
    for (const SizedCandidate& c : r.verified) {
        json cj;
        cj["genome"] = c.genome;
        json values = json::object();
        for (std::size_t i = 0; i < p.params.size(); ++i) values[p.params[i].name] = c.values[i];
        cj["values"] = values;
        cj["oracle_error"] = c.oracle_error;
        cj["oracle_pass"] = c.oracle_pass;
        json report = json::array();
        for (const VerifyRecord& rec : c.report) report.push_back(record_to_json(rec));
        cj["report"] = report;
        candidates.push_back(std::move(cj));
    }
    j["candidates"] = candidates;

    json pareto = json::array();
    for (int i : r.evolve.pareto_front) {
        const Individual& ind = r.evolve.population[i];
        json pj;
        pj["genome"] = ind.genome;
        pj["objectives"] = ind.objectives;
        pj["constraint_violation"] = ind.constraint_violation;
        pareto.push_back(std::move(pj));
    }
    j["pareto"] = pareto;
    detail::write_file_atomic(path, j.dump(1) + "\n");
}

std::string generation_stats_csv(const EvolveResult& r) {
    std::string out = "generation,evaluations,best_error,feasible,front_size\n";
    for (const GenerationStats& s : r.stats) {
        out += std::to_string(s.generation);
        out += "," + std::to_string(s.evaluations);
        out += "," + detail::fmt17(s.best_error);
        out += "," + std::to_string(s.feasible);
        out += "," + std::to_string(s.front_size);
        out += "\n";
    }
    return out;
}

} // namespace portnet
