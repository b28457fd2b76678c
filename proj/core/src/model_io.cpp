#include "portnet/model_io.hpp"

#include "json_util.hpp"

namespace portnet {

using detail::json;

namespace {

json layer_to_json(const DenseLayer& l) {
    json j;
    j["in"] = l.in;
    j["out"] = l.out;
    j["relu"] = l.relu;
    j["w"] = l.w;
    j["b"] = l.b;
    return j;
}

DenseLayer layer_from_json(const json& j) {
    DenseLayer l(j.at("in").get<int>(), j.at("out").get<int>(), j.at("relu").get<bool>());
    l.w = j.at("w").get<std::vector<double>>();
    l.b = j.at("b").get<std::vector<double>>();
    if (l.w.size() != static_cast<std::size_t>(l.in) * l.out ||
        l.b.size() != static_cast<std::size_t>(l.out))
        throw SchemaMismatch("layer weight shapes are inconsistent");
    return l;
}

json stack_to_json(const DenseStack& s) {
    json j = json::array();
    for (const DenseLayer& l : s.layers) j.push_back(layer_to_json(l));
    return j;
}

DenseStack stack_from_json(const json& j) {
    DenseStack s;
    for (const json& l : j) s.layers.push_back(layer_from_json(l));
    return s;
}

json norm_to_json(const Normalizer& n) {
    json j;
    j["mean"] = n.mean;
    j["stdev"] = n.stdev;
    return j;
}

Normalizer norm_from_json(const json& j) {
    Normalizer n;
    n.mean = j.at("mean").get<std::vector<double>>();
    n.stdev = j.at("stdev").get<std::vector<double>>();
    return n;
}

json meta_to_json(const ModelMeta& m) {
    json j;
    j["role"] = m.role;
    j["frequency_hz"] = m.frequency_hz;
    j["encoding"] = m.encoding;
    j["input_names"] = m.input_names;
    j["target_names"] = m.target_names;
    j["topology_key"] = m.topology_key;
    j["enetwork_label"] = m.enetwork_label;
    j["slots"] = m.slots;
    j["s_width"] = m.s_width;
    j["xr_width"] = m.xr_width;
    j["init_seed"] = m.init_seed;
    j["train_seed"] = m.train_seed;
    return j;
}

ModelMeta meta_from_json(const json& j) {
    ModelMeta m;
    m.role = j.at("role").get<std::string>();
    m.frequency_hz = j.at("frequency_hz").get<double>();
    m.encoding = j.at("encoding").get<std::string>();
    m.input_names = j.at("input_names").get<std::vector<std::string>>();
    m.target_names = j.at("target_names").get<std::vector<std::string>>();
    m.topology_key = j.at("topology_key").get<std::string>();
    m.enetwork_label = j.at("enetwork_label").get<std::string>();
    m.slots = j.at("slots").get<int>();
    m.s_width = j.at("s_width").get<int>();
    m.xr_width = j.at("xr_width").get<int>();
    m.init_seed = j.at("init_seed").get<std::uint64_t>();
    m.train_seed = j.at("train_seed").get<std::uint64_t>();
    return m;
}

json mlp_to_json(const Mlp& model) {
    json j;
    j["kind"] = "mlp";
    j["layers"] = stack_to_json(model.stack());
    j["input_norm"] = norm_to_json(model.input_norm());
    j["output_norm"] = norm_to_json(model.output_norm());
    return j;
}

Mlp mlp_from_json(const json& j) {
    const DenseStack stack = stack_from_json(j.at("layers"));
    if (stack.layers.empty()) throw SchemaMismatch("mlp checkpoint has no layers");
    std::vector<int> hidden;
    for (std::size_t i = 0; i + 1 < stack.layers.size(); ++i)
        hidden.push_back(stack.layers[i].out);
    Mlp model(stack.layers.front().in, hidden, stack.layers.back().out);
    model.stack() = stack;
    model.input_norm() = norm_from_json(j.at("input_norm"));
    model.output_norm() = norm_from_json(j.at("output_norm"));
    return model;
}

json cci_to_json(const CciModel& model) {
    json j;
    j["kind"] = "cci";
    j["slot_widths"] = model.slot_widths();
    j["xr_width"] = model.xr_width();
    j["n_targets"] = model.output_width();
    j["latent_width"] = model.config().latent_width;
    j["chunk_hidden"] = model.config().chunk_hidden;
    j["xr_to_chunks"] = model.config().xr_to_chunks;
    json chunks = json::array();
    for (const DenseStack& c : model.chunks()) chunks.push_back(stack_to_json(c));
    j["chunks"] = chunks;
    j["head"] = stack_to_json(model.head());
    j["input_norm"] = norm_to_json(model.input_norm());
    j["output_norm"] = norm_to_json(model.output_norm());
    return j;
}

CciModel cci_from_json(const json& j) {
    CciConfig cfg;
    cfg.latent_width = j.at("latent_width").get<int>();
    cfg.chunk_hidden = j.at("chunk_hidden").get<std::vector<int>>();
    cfg.xr_to_chunks = j.at("xr_to_chunks").get<bool>();
    CciModel model(j.at("slot_widths").get<std::vector<int>>(), j.at("xr_width").get<int>(),
                   j.at("n_targets").get<int>(), cfg);
    const json& chunks = j.at("chunks");
    if (chunks.size() != model.chunks().size())
        throw SchemaMismatch("cci checkpoint chunk count mismatch");
    for (std::size_t i = 0; i < chunks.size(); ++i)
        model.chunks()[i] = stack_from_json(chunks[i]);
    model.head() = stack_from_json(j.at("head"));
    model.input_norm() = norm_from_json(j.at("input_norm"));
    model.output_norm() = norm_from_json(j.at("output_norm"));
    return model;
}

json model_to_json(const MainModel& model) {
    if (std::holds_alternative<Mlp>(model)) return mlp_to_json(std::get<Mlp>(model));
    return cci_to_json(std::get<CciModel>(model));
}

MainModel model_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "mlp") return mlp_from_json(j);
    if (kind == "cci") return cci_from_json(j);
    throw SchemaMismatch("unknown model kind '" + kind + "'");
}

} // namespace

void save_model(const std::filesystem::path& path, const Mlp& model, const ModelMeta& meta) {
    json j = mlp_to_json(model);
    j["meta"] = meta_to_json(meta);
    detail::write_file_atomic(path, j.dump(1) + "\n");
}

void save_model(const std::filesystem::path& path, const CciModel& model, const ModelMeta& meta) {
    json j = cci_to_json(model);
    j["meta"] = meta_to_json(meta);
    detail::write_file_atomic(path, j.dump(1) + "\n");
}

SavedModel load_model(const std::filesystem::path& path) {
    const json j = detail::load_json_file(path);
    SavedModel out{model_from_json(j), meta_from_json(j.at("meta"))};
    return out;
}

void save_composed(const std::filesystem::path& path, const ComposedModel& model) {
    json j;
    j["kind"] = "composed";
    json meta;
    meta["frequency_hz"] = model.meta().frequency_hz;
    meta["encoding"] = encoding_name(model.meta().encoding);
    meta["slot_labels"] = model.meta().slot_labels;
    meta["slot_params"] = model.meta().slot_params;
    meta["xr_names"] = model.meta().xr_names;
    meta["target_names"] = model.meta().target_names;
    j["meta"] = meta;
    json subs = json::array();
    for (const Mlp& sub : model.subs()) subs.push_back(mlp_to_json(sub));
    j["subs"] = subs;
    j["main"] = model_to_json(model.main());
    detail::write_file_atomic(path, j.dump(1) + "\n");
}

ComposedModel load_composed(const std::filesystem::path& path) {
    const json j = detail::load_json_file(path);
    if (j.value("kind", "") != "composed")
        throw SchemaMismatch(path.string() + " is not a composed-model checkpoint");
    const json& meta = j.at("meta");
    ComposedMeta m;
    m.frequency_hz = meta.at("frequency_hz").get<double>();
    m.encoding = encoding_from_name(meta.at("encoding").get<std::string>());
    m.slot_labels = meta.at("slot_labels").get<std::vector<std::string>>();
    m.slot_params = meta.at("slot_params").get<std::vector<std::vector<std::string>>>();
    m.xr_names = meta.at("xr_names").get<std::vector<std::string>>();
    m.target_names = meta.at("target_names").get<std::vector<std::string>>();
    std::vector<Mlp> subs;
    for (const json& s : j.at("subs")) subs.push_back(mlp_from_json(s));
    return compose(std::move(subs), model_from_json(j.at("main")), std::move(m));
}

void save_history_csv(const std::filesystem::path& path, const TrainResult& result) {
    std::string out = "epoch,train_mae,val_mae\n";
    for (const EpochStats& e : result.history) {
        out += std::to_string(e.epoch);
        out += "," + detail::fmt17(e.train_mae);
        out += "," + detail::fmt17(e.val_mae);
        out += "\n";
    }
    detail::write_file_atomic(path, out);
}

} // namespace portnet
