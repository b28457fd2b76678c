#include <iomanip>

#include "common.hpp"
#include "portnet/dataset.hpp"
#include "portnet/metrics.hpp"
#include "portnet/model_io.hpp"
#include "portnet/poi.hpp"
#include "portnet/sizing.hpp"
#include "portnet/touchstone.hpp"

namespace portnet::cli {

namespace {

std::filesystem::path out_file(const GlobalArgs& g, const std::string& name) {
    std::filesystem::create_directories(g.out_dir);
    return std::filesystem::path(g.out_dir) / name;
}

std::vector<std::string> default_targets() {
    return {"input_return_loss_db", "insertion_loss_db", "insertion_phase_deg",
            "output_return_loss_db"};
}

struct TrainArgs {
    std::vector<int> hidden;
    double lr = 1e-3;
    int max_epochs = 5000;
    int patience = 125;
    int batch_size = 32;
    double val_frac = 0.10;
    double test_frac = 0.10;
};

void add_train_options(CLI::App* cmd, TrainArgs& t) {
    cmd->add_option("--hidden", t.hidden, "Hidden layer widths");
    cmd->add_option("--lr", t.lr, "Adam learning rate");
    cmd->add_option("--max-epochs", t.max_epochs, "Epoch cap");
    cmd->add_option("--patience", t.patience, "Early-stopping patience");
    cmd->add_option("--batch-size", t.batch_size, "Minibatch size (0 = full batch)");
    cmd->add_option("--val-frac", t.val_frac, "Validation fraction");
    cmd->add_option("--test-frac", t.test_frac, "Held-out test fraction");
}

TrainConfig to_train_config(const TrainArgs& t, std::uint64_t seed) {
    TrainConfig cfg;
    cfg.learning_rate = t.lr;
    cfg.max_epochs = t.max_epochs;
    cfg.patience = t.patience;
    cfg.batch_size = t.batch_size;
    cfg.seed = seed;
    return cfg;
}

void print_r2_table(const std::vector<std::string>& names, const std::vector<double>& r2) {
    for (std::size_t i = 0; i < names.size(); ++i)
        std::cout << "  r2[" << names[i] << "] = " << r2[i] << "\n";
    std::cout << "  r2[average] = " << mean(r2) << "\n";
}

} // namespace

// ---------------------------------------------------------------- simulate

void register_simulate(CLI::App& app) {
    auto g = std::make_shared<GlobalArgs>();
    auto netlist_path = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand("simulate", "Sweep a netlist: S-parameter and PoI files");
    add_global_options(cmd, *g);
    cmd->add_option("--netlist", *netlist_path, "Circuit file")->required()->check(CLI::ExistingFile);

    cmd->callback([g, netlist_path]() {
        ManifestScope manifest("simulate", *g);
        manifest.add_input(*netlist_path);

        const Netlist net = load_netlist(*netlist_path);
        const FrequencyGrid grid = parse_grid(g->grid);
        const ReferenceImpedance z0(g->z0);
        const SweepPoi sweep = sweep_poi(whole_circuit(net), grid, z0);

        const std::string stem = std::filesystem::path(*netlist_path).stem().string();
        const std::filesystem::path csv_path = out_file(*g, stem + ".sweep.csv");
        const std::filesystem::path s2p_path = out_file(*g, stem + ".s2p");
        write_text_file_atomic(csv_path, sweep_csv(sweep));
        std::vector<S2pRecord> records;
        for (std::size_t i = 0; i < sweep.s.size(); ++i)
            records.push_back(S2pRecord{sweep.grid[i].hertz(), sweep.s[i]});
        write_text_file_atomic(s2p_path, render_s2p(records, z0, net.title));

        manifest.add_output(csv_path);
        manifest.add_output(s2p_path);
        manifest.finish(out_file(*g, stem + ".manifest.json"));
        std::cout << "wrote " << csv_path.string() << " and " << s2p_path.string() << " ("
                  << grid.size() << " points)\n";
    });
}

// ---------------------------------------------------------------- gen-data

void register_gen_data(CLI::App& app) {
    auto g = std::make_shared<GlobalArgs>();
    auto netlists = std::make_shared<std::vector<std::string>>();
    auto kind = std::make_shared<std::string>("sub");
    auto enetwork = std::make_shared<std::string>();
    auto count = std::make_shared<int>(0);
    auto freqs = std::make_shared<std::vector<double>>();
    auto out_path = std::make_shared<std::string>();
    auto targets_csv = std::make_shared<std::string>();
    auto s_source = std::make_shared<std::string>("topologies");
    auto freq_feature = std::make_shared<bool>(false);

    CLI::App* cmd = app.add_subcommand("gen-data", "Sample oracle training data");
    add_global_options(cmd, *g);
    cmd->add_option("--netlist", *netlists, "Circuit file(s); repeat for a topology family")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--kind", *kind, "sub | main")->check(CLI::IsMember({"sub", "main"}));
    cmd->add_option("--enetwork", *enetwork, "E-network label (sub datasets)");
    cmd->add_option("--count", *count, "Rows to sample")->required();
    cmd->add_option("--freq", *freqs, "Frequency in Hz; repeat for a multi-frequency table")
        ->required();
    cmd->add_option("--out-file", *out_path, "Output dataset file")->required();
    cmd->add_option("--targets", *targets_csv, "Comma-separated PoI targets (main)");
    cmd->add_option("--s-source", *s_source, "topologies | synthetic")
        ->check(CLI::IsMember({"topologies", "synthetic"}));
    cmd->add_flag("--freq-feature", *freq_feature, "Append log10(f) as an input feature");

    cmd->callback([=]() {
        ManifestScope manifest("gen-data", *g);
        for (const std::string& p : *netlists) manifest.add_input(p);
        const ReferenceImpedance z0(g->z0);

        if (freqs->size() > 1 && !*freq_feature)
            throw SchemaMismatch("multi-frequency tables need --freq-feature");

        SamplerConfig cfg;
        cfg.seed = g->seed;
        cfg.count = *count;
        cfg.frequency_feature = *freq_feature;
        cfg.s_source = *s_source == "synthetic" ? SamplerConfig::SSource::SyntheticPassive
                                                : SamplerConfig::SSource::FromTopologies;

        if (*kind == "sub") {
            if (netlists->size() != 1)
                throw SchemaMismatch("sub datasets take exactly one --netlist");
            const Netlist net = load_netlist(netlists->front());
            const Partition part = partition(net);
            if (part.enetworks.empty())
                throw NotTwoPort("netlist has no tagged E-network");
            const Enetwork* chosen = nullptr;
            if (enetwork->empty()) {
                if (part.enetworks.size() > 1)
                    throw SchemaMismatch("netlist has several E-networks; pass --enetwork LABEL");
                chosen = &part.enetworks.front();
            } else {
                for (const Enetwork& en : part.enetworks)
                    if (en.label == *enetwork) chosen = &en;
                if (!chosen) throw SchemaMismatch("no E-network labeled '" + *enetwork + "'");
            }
            std::vector<DesignParameter> params;
            for (const DesignParameter& p : enumerate_parameters(net))
                if (p.owner == chosen->label) params.push_back(p);

            SubDataset merged;
            for (std::size_t i = 0; i < freqs->size(); ++i) {
                SamplerConfig fc = cfg;
                fc.seed = freqs->size() == 1 ? cfg.seed : Rng(cfg.seed).fork(i).seed();
                const SubDataset ds = gen_sub_dataset(chosen->circuit, chosen->label, params, fc,
                                                      Frequency((*freqs)[i]), z0);
                if (i == 0) {
                    merged = ds;
                } else {
                    merged.x.v.insert(merged.x.v.end(), ds.x.v.begin(), ds.x.v.end());
                    merged.s.v.insert(merged.s.v.end(), ds.s.v.begin(), ds.s.v.end());
                    merged.x.rows += ds.x.rows;
                    merged.s.rows += ds.s.rows;
                }
            }
            if (freqs->size() > 1) merged.frequency_hz = 0.0;  // spans the listed frequencies
            if (merged.x.rows < *count)
                std::cerr << "warning: all parameters fixed, emitted a single distinct row\n";
            save_sub_dataset(*out_path, merged);
        } else {
            std::vector<Netlist> family;
            for (const std::string& p : *netlists) family.push_back(load_netlist(p));
            const std::vector<std::string> targets =
                targets_csv->empty() ? default_targets() : split_csv_list(*targets_csv);

            MainDataset merged;
            for (std::size_t i = 0; i < freqs->size(); ++i) {
                SamplerConfig fc = cfg;
                fc.seed = freqs->size() == 1 ? cfg.seed : Rng(cfg.seed).fork(i).seed();
                const MainDataset ds =
                    gen_main_dataset(family, fc, Frequency((*freqs)[i]), z0, targets);
                if (i == 0) {
                    merged = ds;
                } else {
                    merged.x.v.insert(merged.x.v.end(), ds.x.v.begin(), ds.x.v.end());
                    merged.y.v.insert(merged.y.v.end(), ds.y.v.begin(), ds.y.v.end());
                    merged.topo_index.insert(merged.topo_index.end(), ds.topo_index.begin(),
                                             ds.topo_index.end());
                    merged.x.rows += ds.x.rows;
                    merged.y.rows += ds.y.rows;
                }
            }
            if (freqs->size() > 1) merged.frequency_hz = 0.0;
            save_main_dataset(*out_path, merged);
        }
        manifest.add_output(*out_path);
        manifest.finish(*out_path + ".manifest.json");
        std::cout << "wrote " << *out_path << "\n";
    });
}

// ------------------------------------------------------- train-sub / train-main

void register_train(CLI::App& app) {
    // train-sub
    {
        auto g = std::make_shared<GlobalArgs>();
        auto t = std::make_shared<TrainArgs>();
        t->hidden = {32, 32};  // two hidden layers of 32 for every sub-model
        auto data_path = std::make_shared<std::string>();
        auto model_path = std::make_shared<std::string>();
        CLI::App* cmd = app.add_subcommand("train-sub",
                                           "Train one E-network sub-model (params -> S features)");
        add_global_options(cmd, *g);
        add_train_options(cmd, *t);
        cmd->add_option("--data", *data_path, "Sub dataset")->required()->check(CLI::ExistingFile);
        cmd->add_option("--model-out", *model_path, "Checkpoint path")->required();

        cmd->callback([=]() {
            ManifestScope manifest("train-sub", *g);
            manifest.add_input(*data_path);
            const SubDataset ds = load_sub_dataset(*data_path);
            if (ds.x.rows < 10) throw SamplingError("dataset too small to train on");
            const SplitIndices split =
                split_rows(ds.x.rows, {}, t->val_frac, t->test_frac, g->seed);

            Mlp model(ds.x.cols, t->hidden, ds.s.cols);
            Rng init(Rng::splitmix(g->seed ^ 0x5eedbeefULL));
            model.init_weights(init);
            const TrainResult result =
                train(model, ds.x, ds.s, split.train, split.val, to_train_config(*t, g->seed));

            ModelMeta meta;
            meta.role = "sub";
            meta.frequency_hz = ds.frequency_hz;
            meta.encoding = encoding_name(ds.encoding);
            meta.input_names = ds.param_names;
            meta.target_names = encoding_feature_names(ds.encoding, "");
            meta.topology_key = ds.topology_key;
            meta.enetwork_label = ds.enetwork_label;
            meta.init_seed = g->seed;
            meta.train_seed = g->seed;
            save_model(*model_path, model, meta);
            save_history_csv(*model_path + ".history.csv", result);

            const std::vector<double> r2 = r2_on_rows(model, ds.x, ds.s, split.test);
            std::cout << "trained " << *model_path << " (" << result.epochs_run
                      << " epochs, best " << result.best_epoch << ")\n";
            print_r2_table(meta.target_names, r2);

            manifest.add_output(*model_path);
            manifest.add_output(*model_path + ".history.csv");
            manifest.finish(*model_path + ".manifest.json");
        });
    }

    // train-main
    {
        auto g = std::make_shared<GlobalArgs>();
        auto t = std::make_shared<TrainArgs>();
        t->hidden = {32, 32, 32};  // three hidden layers of 32: the default main model
        auto data_path = std::make_shared<std::string>();
        auto model_path = std::make_shared<std::string>();
        auto structure = std::make_shared<std::string>("cci");
        auto latent = std::make_shared<int>(8);
        auto chunk_hidden = std::make_shared<std::vector<int>>(std::vector<int>{16, 16});
        auto xr_head_only = std::make_shared<bool>(false);
        CLI::App* cmd = app.add_subcommand(
            "train-main", "Train the topology-general main model (S features + x_R -> PoI)");
        add_global_options(cmd, *g);
        add_train_options(cmd, *t);
        cmd->add_option("--data", *data_path, "Main dataset")->required()->check(CLI::ExistingFile);
        cmd->add_option("--model-out", *model_path, "Checkpoint path")->required();
        cmd->add_option("--structure", *structure, "cci | fc")->check(CLI::IsMember({"cci", "fc"}));
        cmd->add_option("--latent", *latent, "CCI latent width");
        cmd->add_option("--chunk-hidden", *chunk_hidden, "CCI chunk hidden widths");
        cmd->add_flag("--xr-head-only", *xr_head_only,
                      "Feed residual features to the head only (no chunk routing)");

        cmd->callback([=]() {
            ManifestScope manifest("train-main", *g);
            manifest.add_input(*data_path);
            const MainDataset ds = load_main_dataset(*data_path);
            if (ds.x.rows < 10) throw SamplingError("dataset too small to train on");
            const SplitIndices split =
                split_rows(ds.x.rows, ds.topo_index, t->val_frac, t->test_frac, g->seed);

            const int xr_total = ds.x.cols - ds.n_enetworks * ds.s_width;
            std::unique_ptr<TrainableModel> model;
            Rng init(Rng::splitmix(g->seed ^ 0x5eedbeefULL));
            if (*structure == "fc") {
                auto m = std::make_unique<Mlp>(ds.x.cols, t->hidden, ds.y.cols);
                m->init_weights(init);
                model = std::move(m);
            } else {
                CciConfig cfg;
                cfg.latent_width = *latent;
                cfg.chunk_hidden = *chunk_hidden;
                cfg.xr_to_chunks = !*xr_head_only;
                auto m = std::make_unique<CciModel>(ds.n_enetworks, ds.s_width, xr_total,
                                                    ds.y.cols, cfg);
                m->init_weights(init);
                model = std::move(m);
            }
            const TrainResult result =
                train(*model, ds.x, ds.y, split.train, split.val, to_train_config(*t, g->seed));

            ModelMeta meta;
            meta.role = "main";
            meta.frequency_hz = ds.frequency_hz;
            meta.encoding = encoding_name(ds.encoding);
            meta.input_names = ds.feature_names;
            meta.target_names = ds.target_names;
            meta.slots = ds.n_enetworks;
            meta.s_width = ds.s_width;
            meta.xr_width = xr_total;
            meta.init_seed = g->seed;
            meta.train_seed = g->seed;
            if (auto* mlp = dynamic_cast<Mlp*>(model.get()))
                save_model(*model_path, *mlp, meta);
            else
                save_model(*model_path, *dynamic_cast<CciModel*>(model.get()), meta);
            save_history_csv(*model_path + ".history.csv", result);

            const std::vector<double> r2 = r2_on_rows(*model, ds.x, ds.y, split.test);
            std::cout << "trained " << *model_path << " (" << result.epochs_run
                      << " epochs, best " << result.best_epoch << ")\n";
            print_r2_table(ds.target_names, r2);

            manifest.add_output(*model_path);
            manifest.add_output(*model_path + ".history.csv");
            manifest.finish(*model_path + ".manifest.json");
        });
    }
}

// -------------------------------------------------------------------- eval

void register_eval(CLI::App& app) {
    auto g = std::make_shared<GlobalArgs>();
    auto model_path = std::make_shared<std::string>();
    auto data_path = std::make_shared<std::string>();
    auto report_path = std::make_shared<std::string>();
    auto split_seed = std::make_shared<std::int64_t>(-1);
    auto all_rows = std::make_shared<bool>(false);
    auto val_frac = std::make_shared<double>(0.10);
    auto test_frac = std::make_shared<double>(0.10);

    CLI::App* cmd = app.add_subcommand("eval", "R2 of a checkpoint on a dataset's held-out rows");
    add_global_options(cmd, *g);
    cmd->add_option("--model", *model_path, "Checkpoint")->required()->check(CLI::ExistingFile);
    cmd->add_option("--data", *data_path, "Dataset")->required()->check(CLI::ExistingFile);
    cmd->add_option("--report", *report_path, "Write a JSON report here");
    cmd->add_option("--split-seed", *split_seed,
                    "Split seed (defaults to the seed the model was trained with)");
    cmd->add_option("--val-frac", *val_frac, "Validation fraction used at training time");
    cmd->add_option("--test-frac", *test_frac, "Held-out fraction used at training time");
    cmd->add_flag("--all", *all_rows, "Evaluate on every row instead of the held-out split");

    cmd->callback([=]() {
        ManifestScope manifest("eval", *g);
        manifest.add_input(*model_path);
        manifest.add_input(*data_path);
        SavedModel saved = load_model(*model_path);
        const TrainableModel& model = main_model_ref(saved.model);

        RowMatrix x, y;
        std::vector<int> strata;
        std::vector<std::string> target_names;
        if (saved.meta.role == "sub") {
            const SubDataset ds = load_sub_dataset(*data_path);
            if (ds.param_names != saved.meta.input_names)
                throw SchemaMismatch("model and dataset disagree on the parameter columns");
            if (saved.meta.topology_key != ds.topology_key)
                throw SchemaMismatch("model was trained on topology '" + saved.meta.topology_key +
                                     "', dataset holds '" + ds.topology_key + "'");
            x = ds.x;
            y = ds.s;
            target_names = encoding_feature_names(ds.encoding, "");
        } else {
            const MainDataset ds = load_main_dataset(*data_path);
            if (ds.feature_names != saved.meta.input_names)
                throw SchemaMismatch("model and dataset disagree on the feature schema");
            if (ds.target_names != saved.meta.target_names)
                throw SchemaMismatch("model and dataset disagree on the PoI targets");
            x = ds.x;
            y = ds.y;
            strata = ds.topo_index;
            target_names = ds.target_names;
        }
        if (model.input_width() != x.cols || model.output_width() != y.cols)
            throw SchemaMismatch("checkpoint shape does not match the dataset");

        std::vector<int> rows;
        if (*all_rows) {
            rows.resize(x.rows);
            for (int i = 0; i < x.rows; ++i) rows[i] = i;
        } else {
            const std::uint64_t seed =
                *split_seed >= 0 ? static_cast<std::uint64_t>(*split_seed) : saved.meta.train_seed;
            rows = split_rows(x.rows, strata, *val_frac, *test_frac, seed).test;
        }
        const std::vector<double> r2 = r2_on_rows(model, x, y, rows);
        std::cout << "evaluated " << rows.size() << " rows\n";
        print_r2_table(target_names, r2);

        if (!report_path->empty()) {
            json report;
            report["model"] = *model_path;
            report["data"] = *data_path;
            report["rows"] = rows.size();
            json per = json::object();
            for (std::size_t i = 0; i < target_names.size(); ++i) per[target_names[i]] = r2[i];
            report["r2"] = per;
            report["r2_average"] = mean(r2);
            write_text_file_atomic(*report_path, report.dump(1) + "\n");
            manifest.add_output(*report_path);
            manifest.finish(*report_path + ".manifest.json");
        }
    });
}

// ------------------------------------------------------------------ compose

void register_compose(CLI::App& app) {
    auto g = std::make_shared<GlobalArgs>();
    auto main_path = std::make_shared<std::string>();
    auto sub_paths = std::make_shared<std::vector<std::string>>();
    auto netlist_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();

    CLI::App* cmd =
        app.add_subcommand("compose", "Join sub-models and a main model into one predictor");
    add_global_options(cmd, *g);
    cmd->add_option("--main", *main_path, "Main-model checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--subs", *sub_paths, "Sub-model checkpoints (one per E-network variant)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--netlist", *netlist_path, "Netlist whose partition picks the slot order")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--model-out", *out_path, "Composed checkpoint path")->required();

    cmd->callback([=]() {
        ManifestScope manifest("compose", *g);
        manifest.add_input(*main_path);
        manifest.add_input(*netlist_path);

        SavedModel main_saved = load_model(*main_path);
        if (main_saved.meta.role != "main")
            throw SchemaMismatch(*main_path + " is not a main-model checkpoint");

        std::vector<SavedModel> subs;
        for (const std::string& p : *sub_paths) {
            manifest.add_input(p);
            SavedModel s = load_model(p);
            if (s.meta.role != "sub") throw SchemaMismatch(p + " is not a sub-model checkpoint");
            subs.push_back(std::move(s));
        }

        const Netlist net = load_netlist(*netlist_path);
        const Partition part = partition(net);
        if (static_cast<int>(part.enetworks.size()) != main_saved.meta.slots)
            throw SchemaMismatch("main model expects " + std::to_string(main_saved.meta.slots) +
                                 " E-networks, netlist has " +
                                 std::to_string(part.enetworks.size()));

        ComposedMeta meta;
        meta.frequency_hz = main_saved.meta.frequency_hz;
        meta.encoding = encoding_from_name(main_saved.meta.encoding);
        meta.target_names = main_saved.meta.target_names;
        const int s_width = encoding_width(meta.encoding);
        meta.xr_names.assign(main_saved.meta.input_names.begin() +
                                 static_cast<long>(main_saved.meta.slots) * s_width,
                             main_saved.meta.input_names.end());

        const std::vector<DesignParameter> net_params = enumerate_parameters(net);
        std::vector<Mlp> ordered_subs;
        for (const Enetwork& en : part.enetworks) {
            const SavedModel* match = nullptr;
            for (const SavedModel& s : subs)
                if (s.meta.topology_key == en.topology_key) match = &s;
            if (!match)
                throw SchemaMismatch("no sub-model matches E-network '" + en.label +
                                     "' (topology key " + en.topology_key + ")");
            if (std::abs(match->meta.frequency_hz - meta.frequency_hz) >
                1e-9 * std::max(1.0, meta.frequency_hz))
                throw SchemaMismatch("sub-model frequency differs from the main model");
            if (match->meta.encoding != main_saved.meta.encoding)
                throw SchemaMismatch("sub-model encoding differs from the main model");
            // slot inputs are THIS netlist's ranged elements, declaration
            // order, which must line up with the sub-model's training inputs
            std::vector<std::string> slot_names;
            for (const DesignParameter& p : net_params)
                if (p.owner == en.label) slot_names.push_back(p.name);
            if (slot_names.size() != match->meta.input_names.size())
                throw SchemaMismatch("E-network '" + en.label + "' exposes " +
                                     std::to_string(slot_names.size()) +
                                     " parameters but its sub-model expects " +
                                     std::to_string(match->meta.input_names.size()));
            ordered_subs.push_back(std::get<Mlp>(match->model));
            meta.slot_labels.push_back(en.label);
            meta.slot_params.push_back(std::move(slot_names));
        }

        const ComposedModel composed =
            compose(std::move(ordered_subs), std::move(main_saved.model), std::move(meta));
        save_composed(*out_path, composed);
        manifest.add_output(*out_path);
        manifest.finish(*out_path + ".manifest.json");
        std::cout << "wrote " << *out_path << "\n";
    });
}

// --------------------------------------------------------------------- size

void register_size(CLI::App& app) {
    auto g = std::make_shared<GlobalArgs>();
    auto problem_path = std::make_shared<std::string>();

    CLI::App* cmd = app.add_subcommand("size", "NSGA-II sizing against a problem file");
    add_global_options(cmd, *g);
    cmd->add_option("--problem", *problem_path, "Problem JSON")
        ->required()
        ->check(CLI::ExistingFile);

    cmd->callback([=]() {
        ManifestScope manifest("size", *g);
        manifest.add_input(*problem_path);

        SizingProblem problem = load_problem(*problem_path);
        if (g->seed_given()) problem.nsga2.seed = g->seed;
        const SizingResult result = run_sizing(problem);

        const std::filesystem::path result_path = out_file(*g, "sizing_result.json");
        const std::filesystem::path stats_path = out_file(*g, "sizing_generations.csv");
        save_result(result_path, problem, result);
        write_text_file_atomic(stats_path, generation_stats_csv(result.evolve));

        std::cout << "surrogate evaluations: " << result.surrogate_evaluations
                  << ", oracle evaluations: " << result.oracle_evaluations << "\n";
        if (!result.verified.empty()) {
            const SizedCandidate& best = result.verified.front();
            std::cout << "best candidate (oracle error " << best.oracle_error << "):\n";
            for (std::size_t i = 0; i < problem.params.size(); ++i)
                std::cout << "  " << problem.params[i].name << " = " << best.values[i] << "\n";
            std::cout << std::left << std::setw(34) << "target" << std::setw(14) << "surrogate"
                      << std::setw(14) << "oracle"
                      << "pass\n";
            for (const VerifyRecord& r : best.report) {
                std::ostringstream label;
                label << r.target.poi
                      << (r.target.goal == GoalKind::Equals
                              ? " = "
                              : (r.target.goal == GoalKind::LessThan ? " < " : " > "))
                      << r.target.value;
                std::cout << std::left << std::setw(34) << label.str() << std::setw(14)
                          << r.surrogate_value << std::setw(14) << r.oracle_value
                          << (r.oracle_pass ? "yes" : "no") << "\n";
            }
        }
        manifest.add_output(result_path);
        manifest.add_output(stats_path);
        manifest.finish(out_file(*g, "sizing_result.manifest.json"));
    });
}

} // namespace portnet::cli
