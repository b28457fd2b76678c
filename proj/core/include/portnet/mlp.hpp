#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "portnet/rng.hpp"
#include "portnet/row_matrix.hpp"

namespace portnet {

/// Per-feature affine standardization, fitted on the training split and
/// stored with the model. Features with zero spread get stdev 1 so that
/// apply/invert stays an exact round-trip.
struct Normalizer {
    std::vector<double> mean, stdev;

    void fit(const RowMatrix& data, std::span<const int> rows);
    void apply(std::span<const double> in, std::span<double> out) const;
    void invert(std::span<const double> in, std::span<double> out) const;
    int width() const { return static_cast<int>(mean.size()); }
    /// Identity transform of the given width.
    static Normalizer identity(int width);
};

struct DenseLayer {
    int in = 0, out = 0;
    std::vector<double> w;  // out x in, row-major
    std::vector<double> b;
    bool relu = false;

    DenseLayer() = default;
    DenseLayer(int in_w, int out_w, bool relu_act)
        : in(in_w), out(out_w), w(static_cast<std::size_t>(in_w) * out_w), b(out_w), relu(relu_act) {}
    std::size_t param_count() const { return w.size() + b.size(); }
};

/// A stack of dense layers with manual forward/backward. Shared by the
/// fully-connected model and the chunked main-model structure.
struct DenseStack {
    std::vector<DenseLayer> layers;

    int input_width() const { return layers.empty() ? 0 : layers.front().in; }
    int output_width() const { return layers.empty() ? 0 : layers.back().out; }
    std::size_t param_count() const;
    /// He-uniform for ReLU layers, Glorot-uniform for linear ones; biases 0.
    void init_weights(Rng& rng);

    struct Cache {
        // act[0] is the input, act[i] the output of layer i-1
        std::vector<std::vector<double>> act;
    };
    void forward(std::span<const double> x, Cache& cache) const;
    /// Backpropagates dL/d(output); accumulates parameter gradients into
    /// `grad` (layer order, w then b) and writes dL/d(input) to `delta_in`.
    void backward(const Cache& cache, std::span<const double> delta_out, std::span<double> grad,
                  std::span<double> delta_in) const;
    void copy_params(std::span<double> out) const;
    void set_params(std::span<const double> in);
};

/// What the trainer needs from a model: flat parameters and the MAE loss
/// with its gradient, computed on normalized targets.
class TrainableModel {
public:
    virtual ~TrainableModel() = default;
    virtual std::size_t parameter_count() const = 0;
    virtual void copy_parameters(std::span<double> out) const = 0;
    virtual void set_parameters(std::span<const double> p) = 0;
    virtual int input_width() const = 0;
    virtual int output_width() const = 0;
    virtual Normalizer& input_norm() = 0;
    virtual Normalizer& output_norm() = 0;
    virtual const Normalizer& input_norm() const = 0;
    virtual const Normalizer& output_norm() const = 0;

    /// Mean |error| over the batch in normalized target space; accumulates
    /// parameter gradients into pre-zeroed `grad`.
    virtual double loss_and_gradient(const RowMatrix& x, const RowMatrix& y_norm,
                                     std::span<const int> rows, std::span<double> grad) = 0;
    /// Same loss without touching gradients.
    virtual double loss(const RowMatrix& x, const RowMatrix& y_norm,
                        std::span<const int> rows) const = 0;
    /// Inference: raw features in, de-normalized prediction out.
    virtual std::vector<double> predict(std::span<const double> x) const = 0;
};

/// Feed-forward regressor: standardization, ReLU hidden layers, linear output.
class Mlp : public TrainableModel {
public:
    Mlp() = default;
    Mlp(int input, std::span<const int> hidden, int output);
    Mlp(int input, std::initializer_list<int> hidden, int output)
        : Mlp(input, std::span<const int>(hidden.begin(), hidden.size()), output) {}

    void init_weights(Rng& rng) { stack_.init_weights(rng); }

    std::size_t parameter_count() const override { return stack_.param_count(); }
    void copy_parameters(std::span<double> out) const override { stack_.copy_params(out); }
    void set_parameters(std::span<const double> p) override { stack_.set_params(p); }
    int input_width() const override { return stack_.input_width(); }
    int output_width() const override { return stack_.output_width(); }
    Normalizer& input_norm() override { return in_norm_; }
    Normalizer& output_norm() override { return out_norm_; }
    const Normalizer& input_norm() const override { return in_norm_; }
    const Normalizer& output_norm() const override { return out_norm_; }

    double loss_and_gradient(const RowMatrix& x, const RowMatrix& y_norm,
                             std::span<const int> rows, std::span<double> grad) override;
    double loss(const RowMatrix& x, const RowMatrix& y_norm,
                std::span<const int> rows) const override;
    std::vector<double> predict(std::span<const double> x) const override;

    DenseStack& stack() { return stack_; }
    const DenseStack& stack() const { return stack_; }

private:
    DenseStack stack_;
    Normalizer in_norm_, out_norm_;
};

struct AdamState {
    std::vector<double> m, v;
    long t = 0;
    AdamState() = default;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update, in place.
void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               double lr, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);

struct TrainConfig {
    double learning_rate = 1e-3;
    int max_epochs = 5000;
    int patience = 125;
    int batch_size = 32;  // <= 0 trains full-batch
    std::uint64_t seed = 0;
};

struct EpochStats {
    int epoch;
    double train_mae;
    double val_mae;
};

struct TrainResult {
    std::vector<EpochStats> history;
    int best_epoch = -1;
    double best_val_mae = 0.0;
    int epochs_run = 0;
};

/// Adam + early stopping. Fits the model's normalizers on the training
/// rows, stops after `patience` epochs without strict validation
/// improvement, and restores the best-validation weights. Deterministic
/// under cfg.seed (given a deterministic initial model).
TrainResult train(TrainableModel& model, const RowMatrix& x, const RowMatrix& y,
                  std::span<const int> train_rows, std::span<const int> val_rows,
                  const TrainConfig& cfg);

} // namespace portnet
