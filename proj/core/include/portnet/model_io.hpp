#pragma once

#include <filesystem>

#include "portnet/composed.hpp"

namespace portnet {

/// Checkpoint metadata kept alongside the weights. `role` is "sub" or
/// "main"; slot geometry fields apply to main models only.
struct ModelMeta {
    std::string role;
    double frequency_hz = 0.0;
    std::string encoding;  // S-feature encoding name
    std::vector<std::string> input_names;
    std::vector<std::string> target_names;
    std::string topology_key;     // sub models
    std::string enetwork_label;   // sub models
    int slots = 0;
    int s_width = 0;
    int xr_width = 0;
    std::uint64_t init_seed = 0;
    std::uint64_t train_seed = 0;
};

struct SavedModel {
    MainModel model;  // Mlp or CciModel
    ModelMeta meta;
};

void save_model(const std::filesystem::path& path, const Mlp& model, const ModelMeta& meta);
void save_model(const std::filesystem::path& path, const CciModel& model, const ModelMeta& meta);
SavedModel load_model(const std::filesystem::path& path);

void save_composed(const std::filesystem::path& path, const ComposedModel& model);
ComposedModel load_composed(const std::filesystem::path& path);

/// Loss-vs-epoch table: epoch,train_mae,val_mae.
void save_history_csv(const std::filesystem::path& path, const TrainResult& result);

} // namespace portnet
