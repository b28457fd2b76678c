#pragma once

#include "portnet/mlp.hpp"

namespace portnet {

struct CciConfig {
    int latent_width = 8;
    std::vector<int> chunk_hidden = {16, 16};
    /// Routes the residual features into every chunk in addition to the
    /// head. Without this the single linear head makes the model additive
    /// in x_R, which cannot express switch-state interactions.
    bool xr_to_chunks = true;
};

/// Chunked main-model structure: one small stack per E-network slot,
/// chained through a latent vector along the signal path, joined by a
/// single linear head. Trained on the same rows as the fully-connected
/// variant ([s_1..s_N, x_R] -> targets).
class CciModel : public TrainableModel {
public:
    CciModel() = default;
    /// Uniform slot width (S-feature blocks).
    CciModel(int slots, int s_width, int xr_width, int n_targets, const CciConfig& cfg);
    /// Per-slot widths (e.g. raw design-parameter groups along the path).
    CciModel(std::vector<int> slot_widths, int xr_width, int n_targets, const CciConfig& cfg);

    void init_weights(Rng& rng);

    std::size_t parameter_count() const override;
    void copy_parameters(std::span<double> out) const override;
    void set_parameters(std::span<const double> p) override;
    int input_width() const override;
    int output_width() const override { return n_targets_; }
    Normalizer& input_norm() override { return in_norm_; }
    Normalizer& output_norm() override { return out_norm_; }
    const Normalizer& input_norm() const override { return in_norm_; }
    const Normalizer& output_norm() const override { return out_norm_; }

    double loss_and_gradient(const RowMatrix& x, const RowMatrix& y_norm,
                             std::span<const int> rows, std::span<double> grad) override;
    double loss(const RowMatrix& x, const RowMatrix& y_norm,
                std::span<const int> rows) const override;
    std::vector<double> predict(std::span<const double> x) const override;

    int slots() const { return static_cast<int>(slot_widths_.size()); }
    const std::vector<int>& slot_widths() const { return slot_widths_; }
    int xr_width() const { return xr_width_; }
    const CciConfig& config() const { return cfg_; }
    std::vector<DenseStack>& chunks() { return chunks_; }
    const std::vector<DenseStack>& chunks() const { return chunks_; }
    DenseStack& head() { return head_; }
    const DenseStack& head() const { return head_; }

private:
    struct Trace {
        std::vector<DenseStack::Cache> chunk_caches;
        DenseStack::Cache head_cache;
        std::vector<double> out;
    };
    void forward_normalized(std::span<const double> xn, Trace& trace) const;

    std::vector<int> slot_widths_;
    int xr_width_ = 0, n_targets_ = 0;
    CciConfig cfg_;
    std::vector<DenseStack> chunks_;
    DenseStack head_;  // exactly one linear layer
    Normalizer in_norm_, out_norm_;
};

} // namespace portnet
