#include <future>
#include <map>
#include <thread>

#include "common.hpp"
#include "portnet/dataset.hpp"
#include "portnet/metrics.hpp"
#include "portnet/model_io.hpp"
#include "portnet/poi.hpp"

namespace portnet::cli {

namespace {

// ---------------------------------------------------------------------------
// Data-efficiency comparison: sweep the training-set size of four methods on
// one topology family until each reaches a target average R2 on a shared
// test set, then report the oracle-call counts.
//
//   per-topology-fc   one dense net per topology, raw parameters in
//   per-topology-cci  one chunked net per topology, raw parameter groups in
//   modular-fc        shared S-feature main model (dense) + per-variant subs
//   modular-cci       shared S-feature main model (chunked) + per-variant subs
// ---------------------------------------------------------------------------

struct CompareTrain {
    std::vector<int> hidden{32, 32, 32};
    std::vector<int> chunk_hidden{16, 16};
    int latent = 8;
    double lr = 1e-3;
    int max_epochs = 4000;
    int patience = 125;
    int batch_size = 32;
};

struct CompareConfig {
    std::vector<std::string> family_paths;
    double frequency_hz = 2e9;
    std::vector<std::string> targets{"insertion_phase_deg", "input_return_loss_db"};
    double target_r2 = 0.90;
    double sub_target_r2 = 0.95;
    int test_rows_per_topology = 50;
    std::vector<int> per_topology_steps{100, 200, 400, 800, 1600};
    std::vector<int> sub_steps{50, 100, 200, 400};
    std::vector<int> main_steps{250, 500, 1000, 2000};
    std::vector<std::string> methods{"per-topology-fc", "per-topology-cci", "modular-fc",
                                     "modular-cci"};
    CompareTrain train;
};

CompareConfig load_compare_config(const json& j, const std::filesystem::path& base_dir) {
    CompareConfig c;
    if (!j.contains("family")) throw IoError("compare config needs a 'family' list");
    for (const json& p : j.at("family"))
        c.family_paths.push_back((base_dir / p.get<std::string>()).string());
    c.frequency_hz = j.value("frequency_hz", c.frequency_hz);
    if (j.contains("targets")) c.targets = j.at("targets").get<std::vector<std::string>>();
    c.target_r2 = j.value("target_r2", c.target_r2);
    c.sub_target_r2 = j.value("sub_target_r2", c.sub_target_r2);
    c.test_rows_per_topology = j.value("test_rows_per_topology", c.test_rows_per_topology);
    if (j.contains("per_topology_steps"))
        c.per_topology_steps = j.at("per_topology_steps").get<std::vector<int>>();
    if (j.contains("sub_steps")) c.sub_steps = j.at("sub_steps").get<std::vector<int>>();
    if (j.contains("main_steps")) c.main_steps = j.at("main_steps").get<std::vector<int>>();
    if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("train")) {
        const json& t = j.at("train");
        c.train.hidden = t.value("hidden", c.train.hidden);
        c.train.chunk_hidden = t.value("chunk_hidden", c.train.chunk_hidden);
        c.train.latent = t.value("latent", c.train.latent);
        c.train.lr = t.value("lr", c.train.lr);
        c.train.max_epochs = t.value("max_epochs", c.train.max_epochs);
        c.train.patience = t.value("patience", c.train.patience);
        c.train.batch_size = t.value("batch_size", c.train.batch_size);
    }
    return c;
}

TrainConfig train_config(const CompareTrain& t, std::uint64_t seed) {
    TrainConfig cfg;
    cfg.learning_rate = t.lr;
    cfg.max_epochs = t.max_epochs;
    cfg.patience = t.patience;
    cfg.batch_size = t.batch_size;
    cfg.seed = seed;
    return cfg;
}

/// One family member with its raw-feature column plan:
/// [slot-1 params | slot-2 params | ... | residual values | switch states].
struct Member {
    Netlist net;
    Partition part;
    std::vector<DesignParameter> params;          // full declaration order
    std::vector<std::string> columns;             // raw layout
    std::vector<int> slot_widths;                 // raw params per slot
    std::vector<std::vector<int>> slot_col_index; // columns of each slot
    std::vector<int> xr_col_index;                // columns of the residual block
    std::map<std::string, int> col_of;
    std::map<std::string, const DesignParameter*> param_by_name;
    std::vector<std::string> switch_names;
};

Member make_member(const std::filesystem::path& path) {
    Member m;
    m.net = load_netlist(path);
    m.part = partition(m.net);
    m.params = enumerate_parameters(m.net);
    for (const DesignParameter& p : m.params) m.param_by_name[p.name] = &p;

    for (const Enetwork& en : m.part.enetworks) {
        std::vector<int> cols;
        for (const DesignParameter& p : m.params) {
            if (p.owner != en.label) continue;
            cols.push_back(static_cast<int>(m.columns.size()));
            m.col_of[p.name] = static_cast<int>(m.columns.size());
            m.columns.push_back(p.name);
        }
        m.slot_widths.push_back(static_cast<int>(cols.size()));
        m.slot_col_index.push_back(std::move(cols));
    }
    for (const DesignParameter& p : m.params) {
        if (p.owner != "residual") continue;
        m.xr_col_index.push_back(static_cast<int>(m.columns.size()));
        m.col_of[p.name] = static_cast<int>(m.columns.size());
        m.columns.push_back(p.name);
    }
    for (const NetlistEntry& e : m.net.entries) {
        if (e.element.kind != ElementKind::Switch || !e.enetwork.empty()) continue;
        m.switch_names.push_back(e.element.name);
        m.xr_col_index.push_back(static_cast<int>(m.columns.size()));
        m.col_of[e.element.name] = static_cast<int>(m.columns.size());
        m.columns.push_back(e.element.name);
    }
    return m;
}

double sample_value(const DesignParameter& p, Rng& rng) {
    if (p.log_scale) return std::exp(rng.uniform(std::log(p.lo), std::log(p.hi)));
    return rng.uniform(p.lo, p.hi);
}

/// Raw rows for one member: parameters and switch states in, PoI out.
struct RawTable {
    RowMatrix x;
    RowMatrix y;
};

RawTable sample_raw_rows(const Member& m, int count, std::uint64_t seed, double freq_hz,
                         double z0_ohms, std::span<const std::string> targets) {
    const Frequency f(freq_hz);
    const ReferenceImpedance z0(z0_ohms);
    Rng rng(seed);
    RawTable out;
    out.x = RowMatrix(count, static_cast<int>(m.columns.size()));
    out.y = RowMatrix(count, static_cast<int>(targets.size()));
    Netlist work = m.net;
    long attempts = 0;
    for (int r = 0; r < count;) {
        if (++attempts > 10L * count) throw SamplingError("oracle kept failing during sampling");
        auto row = out.x.row(r);
        for (std::size_t c = 0; c < m.columns.size(); ++c) {
            const std::string& name = m.columns[c];
            auto it = m.param_by_name.find(name);
            if (it != m.param_by_name.end()) {
                row[c] = sample_value(*it->second, rng);
                work.set_value(name, row[c]);
            } else {
                row[c] = rng.bernoulli(0.5) ? 1.0 : 0.0;
                work.set_switch(name, row[c] > 0.5);
            }
        }
        try {
            const PoiVector poi = poi_from_s(mna_two_port(whole_circuit(work), f, z0));
            bool ok = true;
            for (std::size_t t = 0; t < targets.size(); ++t) {
                const double v = poi.by_name(targets[t]);
                if (!std::isfinite(v)) { ok = false; break; }
                out.y.at(r, t) = v;
            }
            if (!ok) continue;
            ++r;
        } catch (const Error&) {
            continue;
        }
    }
    return out;
}

std::vector<int> all_rows(int n) {
    std::vector<int> rows(n);
    for (int i = 0; i < n; ++i) rows[i] = i;
    return rows;
}

/// Pooled per-target R2 across members, averaged over targets.
double pooled_r2(const std::vector<RowMatrix>& predictions, const std::vector<RowMatrix>& truths) {
    int rows = 0;
    for (const RowMatrix& p : predictions) rows += p.rows;
    const int cols = predictions.front().cols;
    RowMatrix pred(rows, cols), truth(rows, cols);
    int at = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        std::copy(predictions[i].v.begin(), predictions[i].v.end(), pred.v.begin() + static_cast<long>(at) * cols);
        std::copy(truths[i].v.begin(), truths[i].v.end(), truth.v.begin() + static_cast<long>(at) * cols);
        at += predictions[i].rows;
    }
    return mean(r2_per_column(pred, truth));
}

/// Runs fn(i) for i in [0, n) on a couple of threads, results in order.
template <typename Fn>
auto parallel_map(int n, Fn fn) {
    using Result = decltype(fn(0));
    std::vector<std::future<Result>> futures;
    futures.reserve(n);
    for (int i = 0; i < n; ++i)
        futures.push_back(std::async(std::launch::async, [i, &fn]() { return fn(i); }));
    std::vector<Result> results;
    results.reserve(n);
    for (auto& f : futures) results.push_back(f.get());
    return results;
}

struct MethodResult {
    std::string method;
    bool reached = false;
    double achieved_r2 = 0.0;
    long oracle_calls = 0;
    std::string detail;
};

struct Variant {
    std::string topology_key;
    const Enetwork* enetwork = nullptr;   // representative
    const Member* member = nullptr;
    std::vector<DesignParameter> params;  // owned by the E-network
    Mlp model;
    int rows_used = 0;
    double r2 = 0.0;
};

} // namespace

void register_compare(CLI::App& app) {
    auto g = std::make_shared<GlobalArgs>();
    CLI::App* cmd = app.add_subcommand(
        "compare", "Training-data budget comparison across modeling methods (--config JSON)");
    add_global_options(cmd, *g);

    cmd->callback([g]() {
        if (g->config_path.empty())
            throw IoError("compare needs --config with the experiment description");
        ManifestScope manifest("compare", *g);
        manifest.add_input(g->config_path);
        const CompareConfig cfg = load_compare_config(
            g->config, std::filesystem::path(g->config_path).parent_path());

        const double f_hz = cfg.frequency_hz;
        const Frequency f(f_hz);
        const ReferenceImpedance z0(g->z0);
        const std::uint64_t seed = g->seed;
        const Rng seeder(seed);

        std::vector<Member> members;
        for (const std::string& p : cfg.family_paths) {
            manifest.add_input(p);
            members.push_back(make_member(p));
        }
        const int n_members = static_cast<int>(members.size());
        const int n_targets = static_cast<int>(cfg.targets.size());

        // shared multi-topology test set
        std::vector<RawTable> test;
        for (int i = 0; i < n_members; ++i)
            test.push_back(sample_raw_rows(members[i], cfg.test_rows_per_topology,
                                           seeder.fork(9000 + i).seed(), f_hz, z0.ohms(),
                                           cfg.targets));
        std::cout << "test set: " << n_members << " topologies x " << cfg.test_rows_per_topology
                  << " rows\n";

        std::vector<MethodResult> results;

        // ----------------------------------------------------- raw baselines
        auto run_per_topology = [&](const std::string& method) {
            MethodResult res;
            res.method = method;
            const bool chunked = method == "per-topology-cci";
            for (int n : cfg.per_topology_steps) {
                auto train_one = [&](int i) {
                    const Member& m = members[i];
                    const RawTable data = sample_raw_rows(
                        m, n, seeder.fork(1000 + i * 37 + n).seed(), f_hz, z0.ohms(), cfg.targets);
                    const SplitIndices split = split_rows(n, {}, 0.10, 0.10, seed + i);
                    std::unique_ptr<TrainableModel> model;
                    Rng init(seeder.fork(2000 + i * 37 + n).seed());
                    if (chunked) {
                        CciConfig cc;
                        cc.latent_width = cfg.train.latent;
                        cc.chunk_hidden = cfg.train.chunk_hidden;
                        auto mm = std::make_unique<CciModel>(
                            m.slot_widths, static_cast<int>(m.xr_col_index.size()), n_targets, cc);
                        mm->init_weights(init);
                        model = std::move(mm);
                    } else {
                        auto mm = std::make_unique<Mlp>(static_cast<int>(m.columns.size()),
                                                        cfg.train.hidden, n_targets);
                        mm->init_weights(init);
                        model = std::move(mm);
                    }
                    train(*model, data.x, data.y, split.train, split.val,
                          train_config(cfg.train, seed + 31 * i));
                    return predict_rows(*model, test[i].x, all_rows(test[i].x.rows));
                };
                const std::vector<RowMatrix> preds = parallel_map(n_members, train_one);
                std::vector<RowMatrix> truths;
                for (const RawTable& t : test) truths.push_back(t.y);
                const double r2 = pooled_r2(preds, truths);
                res.oracle_calls = static_cast<long>(n) * n_members;
                res.achieved_r2 = r2;
                res.detail = std::to_string(n) + " rows/topology";
                std::cout << "  " << method << ": " << n << " rows/topology -> avg r2 " << r2
                          << "\n";
                if (r2 >= cfg.target_r2) {
                    res.reached = true;
                    break;
                }
            }
            return res;
        };

        // ------------------------------------------------------ modular path
        // sub-models are swept once and shared by both modular methods
        std::vector<Variant> variants;
        for (const Member& m : members) {
            for (const Enetwork& en : m.part.enetworks) {
                bool seen = false;
                for (const Variant& v : variants) seen |= v.topology_key == en.topology_key;
                if (seen) continue;
                Variant v;
                v.topology_key = en.topology_key;
                v.enetwork = &en;
                v.member = &m;
                for (const DesignParameter& p : m.params)
                    if (p.owner == en.label) v.params.push_back(p);
                variants.push_back(std::move(v));
            }
        }

        bool subs_trained = false;
        long sub_calls_total = 0;
        auto ensure_subs = [&]() {
            if (subs_trained) return;
            auto train_variant = [&](int vi) {
                Variant& v = variants[vi];
                const SamplerConfig test_cfg{.seed = seeder.fork(3000 + vi).seed(),
                                             .count = 200};
                const SubDataset test_ds = gen_sub_dataset(v.enetwork->circuit, v.enetwork->label,
                                                           v.params, test_cfg, f, z0);
                for (int n : cfg.sub_steps) {
                    SamplerConfig c{.seed = seeder.fork(4000 + vi * 13 + n).seed(), .count = n};
                    const SubDataset ds =
                        gen_sub_dataset(v.enetwork->circuit, v.enetwork->label, v.params, c, f, z0);
                    const SplitIndices split = split_rows(n, {}, 0.10, 0.10, seed + vi);
                    Mlp model(ds.x.cols, {32, 32}, ds.s.cols);
                    Rng init(seeder.fork(5000 + vi * 13 + n).seed());
                    model.init_weights(init);
                    train(model, ds.x, ds.s, split.train, split.val,
                          train_config(cfg.train, seed + 77 * vi));
                    const double r2 =
                        mean(r2_on_rows(model, test_ds.x, test_ds.s, all_rows(test_ds.x.rows)));
                    v.model = std::move(model);
                    v.rows_used = n;
                    v.r2 = r2;
                    if (r2 >= cfg.sub_target_r2) break;
                }
                return 0;
            };
            parallel_map(static_cast<int>(variants.size()), train_variant);
            for (const Variant& v : variants) {
                sub_calls_total += v.rows_used;
                std::cout << "  sub-model [" << v.enetwork->label << " variant] " << v.rows_used
                          << " rows -> avg r2 " << v.r2 << "\n";
            }
            subs_trained = true;
        };

        auto run_modular = [&](const std::string& method) {
            ensure_subs();
            MethodResult res;
            res.method = method;
            const bool chunked = method == "modular-cci";

            // variant lookup per member slot
            std::vector<std::vector<const Variant*>> slot_variant(n_members);
            for (int i = 0; i < n_members; ++i)
                for (const Enetwork& en : members[i].part.enetworks) {
                    const Variant* found = nullptr;
                    for (const Variant& v : variants)
                        if (v.topology_key == en.topology_key) found = &v;
                    slot_variant[i].push_back(found);
                }

            std::vector<Netlist> family;
            for (const Member& m : members) family.push_back(m.net);

            for (int n : cfg.main_steps) {
                SamplerConfig c{.seed = seeder.fork(6000 + n).seed(), .count = n};
                const MainDataset ds = gen_main_dataset(family, c, f, z0, cfg.targets);
                const SplitIndices split = split_rows(n, ds.topo_index, 0.10, 0.10, seed + n);
                const int xr_total = ds.x.cols - ds.n_enetworks * ds.s_width;
                std::unique_ptr<TrainableModel> model;
                Rng init(seeder.fork(7000 + n).seed());
                if (chunked) {
                    CciConfig cc;
                    cc.latent_width = cfg.train.latent;
                    cc.chunk_hidden = cfg.train.chunk_hidden;
                    auto mm = std::make_unique<CciModel>(ds.n_enetworks, ds.s_width, xr_total,
                                                         n_targets, cc);
                    mm->init_weights(init);
                    model = std::move(mm);
                } else {
                    auto mm =
                        std::make_unique<Mlp>(ds.x.cols, cfg.train.hidden, n_targets);
                    mm->init_weights(init);
                    model = std::move(mm);
                }
                train(*model, ds.x, ds.y, split.train, split.val,
                      train_config(cfg.train, seed + n));

                // end-to-end composed prediction over the shared raw test set
                std::vector<RowMatrix> preds;
                std::vector<RowMatrix> truths;
                for (int i = 0; i < n_members; ++i) {
                    const Member& m = members[i];
                    RowMatrix p(test[i].x.rows, n_targets);
                    for (int r = 0; r < test[i].x.rows; ++r) {
                        const auto raw = test[i].x.row(r);
                        std::vector<double> feats;
                        feats.reserve(ds.x.cols);
                        for (std::size_t s = 0; s < m.slot_col_index.size(); ++s) {
                            std::vector<double> in;
                            for (int col : m.slot_col_index[s]) in.push_back(raw[col]);
                            const std::vector<double> sf = slot_variant[i][s]->model.predict(in);
                            feats.insert(feats.end(), sf.begin(), sf.end());
                        }
                        // residual features in the main dataset's order
                        for (int k = 0; k < xr_total; ++k) {
                            const std::string& name =
                                ds.feature_names[static_cast<std::size_t>(ds.n_enetworks) *
                                                     ds.s_width + k];
                            feats.push_back(raw[m.col_of.at(name)]);
                        }
                        const std::vector<double> out = model->predict(feats);
                        std::copy(out.begin(), out.end(), p.row(r).begin());
                    }
                    preds.push_back(std::move(p));
                    truths.push_back(test[i].y);
                }
                const double r2 = pooled_r2(preds, truths);
                res.oracle_calls = n + sub_calls_total;
                res.achieved_r2 = r2;
                res.detail = std::to_string(n) + " main rows + " +
                             std::to_string(sub_calls_total) + " sub rows";
                std::cout << "  " << method << ": " << n << " main rows -> composed avg r2 " << r2
                          << "\n";
                if (r2 >= cfg.target_r2) {
                    res.reached = true;
                    break;
                }
            }
            return res;
        };

        for (const std::string& method : cfg.methods) {
            if (method == "per-topology-fc" || method == "per-topology-cci")
                results.push_back(run_per_topology(method));
            else if (method == "modular-fc" || method == "modular-cci")
                results.push_back(run_modular(method));
            else
                throw IoError("unknown compare method '" + method + "'");
        }

        // table output
        std::string csv = "method,reached,achieved_r2,oracle_calls,detail\n";
        std::cout << "\nmethod            reached  avg_r2   oracle_calls\n";
        for (const MethodResult& r : results) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%-17s %-8s %-8.4f %ld\n", r.method.c_str(),
                          r.reached ? "yes" : "no", r.achieved_r2, r.oracle_calls);
            std::cout << buf;
            csv += r.method + "," + (r.reached ? "yes" : "no") + "," +
                   std::to_string(r.achieved_r2) + "," + std::to_string(r.oracle_calls) + "," +
                   r.detail + "\n";
        }
        const std::filesystem::path csv_path =
            std::filesystem::path(g->out_dir) / "compare.csv";
        std::filesystem::create_directories(g->out_dir);
        write_text_file_atomic(csv_path, csv);
        manifest.add_output(csv_path);
        manifest.finish(csv_path.string() + ".manifest.json");
    });
}

} // namespace portnet::cli
