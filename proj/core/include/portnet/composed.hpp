#pragma once

#include <variant>

#include "portnet/cci.hpp"
#include "portnet/dataset.hpp"
#include "portnet/mlp.hpp"

namespace portnet {

using MainModel = std::variant<Mlp, CciModel>;

const TrainableModel& main_model_ref(const MainModel& m);

struct ComposedMeta {
    double frequency_hz = 0.0;
    SEncoding encoding = SEncoding::Reciprocal6;
    std::vector<std::string> slot_labels;               // E-network labels, path order
    std::vector<std::vector<std::string>> slot_params;  // sub-model input names per slot
    std::vector<std::string> xr_names;
    std::vector<std::string> target_names;
};

/// The full predictor: per-E-network sub-models feeding a topology-general
/// main model. predict() is literally main(concat(sub outputs), x_R) — no
/// re-normalization or other drift between the stages.
class ComposedModel {
public:
    ComposedModel() = default;
    ComposedModel(std::vector<Mlp> subs, MainModel main, ComposedMeta meta);

    const ComposedMeta& meta() const { return meta_; }
    const std::vector<Mlp>& subs() const { return subs_; }
    const MainModel& main() const { return main_; }

    /// Design parameters per slot in, PoI targets out.
    std::vector<double> predict(std::span<const std::vector<double>> sub_inputs,
                                std::span<const double> xr) const;

    /// Main model only, on already-known S features (oracle or measured).
    std::vector<double> predict_from_s(std::span<const double> s_features,
                                       std::span<const double> xr) const;

private:
    std::vector<Mlp> subs_;
    MainModel main_;
    ComposedMeta meta_;
};

/// Validates slot/encoding widths and assembles the composed model.
/// Throws SchemaMismatch when the sub outputs do not line up with the main
/// model's input slots.
ComposedModel compose(std::vector<Mlp> subs, MainModel main, ComposedMeta meta);

} // namespace portnet
