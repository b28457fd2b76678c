#include "portnet/composed.hpp"

#include "portnet/errors.hpp"

namespace portnet {

const TrainableModel& main_model_ref(const MainModel& m) {
    return std::visit([](const auto& v) -> const TrainableModel& { return v; }, m);
}

ComposedModel::ComposedModel(std::vector<Mlp> subs, MainModel main, ComposedMeta meta)
    : subs_(std::move(subs)), main_(std::move(main)), meta_(std::move(meta)) {
    const int s_width = encoding_width(meta_.encoding);
    int total = 0;
    for (const Mlp& sub : subs_) {
        if (sub.output_width() != s_width)
            throw SchemaMismatch("sub-model output width " + std::to_string(sub.output_width()) +
                                 " does not match encoding width " + std::to_string(s_width));
        total += sub.output_width();
    }
    total += static_cast<int>(meta_.xr_names.size());
    if (main_model_ref(main_).input_width() != total)
        throw SchemaMismatch("main model expects " +
                             std::to_string(main_model_ref(main_).input_width()) +
                             " features, composition provides " + std::to_string(total));
    if (meta_.slot_labels.size() != subs_.size() || meta_.slot_params.size() != subs_.size())
        throw SchemaMismatch("composition metadata does not cover every slot");
}

std::vector<double> ComposedModel::predict(std::span<const std::vector<double>> sub_inputs,
                                           std::span<const double> xr) const {
    if (sub_inputs.size() != subs_.size())
        throw SchemaMismatch("expected " + std::to_string(subs_.size()) + " sub-model inputs");
    std::vector<double> features;
    features.reserve(static_cast<std::size_t>(main_model_ref(main_).input_width()));
    for (std::size_t i = 0; i < subs_.size(); ++i) {
        const std::vector<double> s = subs_[i].predict(sub_inputs[i]);
        features.insert(features.end(), s.begin(), s.end());
    }
    features.insert(features.end(), xr.begin(), xr.end());
    return main_model_ref(main_).predict(features);
}

std::vector<double> ComposedModel::predict_from_s(std::span<const double> s_features,
                                                  std::span<const double> xr) const {
    std::vector<double> features(s_features.begin(), s_features.end());
    features.insert(features.end(), xr.begin(), xr.end());
    return main_model_ref(main_).predict(features);
}

ComposedModel compose(std::vector<Mlp> subs, MainModel main, ComposedMeta meta) {
    return ComposedModel(std::move(subs), std::move(main), std::move(meta));
}

} // namespace portnet
