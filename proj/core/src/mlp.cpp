#include "portnet/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "portnet/errors.hpp"

namespace portnet {

void Normalizer::fit(const RowMatrix& data, std::span<const int> rows) {
    if (rows.empty()) throw TrainingDiverged("cannot fit a normalizer on zero rows");
    const int w = data.cols;
    mean.assign(w, 0.0);
    stdev.assign(w, 0.0);
    for (int r : rows)
        for (int c = 0; c < w; ++c) mean[c] += data.at(r, c);
    for (int c = 0; c < w; ++c) mean[c] /= static_cast<double>(rows.size());
    for (int r : rows)
        for (int c = 0; c < w; ++c) {
            const double d = data.at(r, c) - mean[c];
            stdev[c] += d * d;
        }
    for (int c = 0; c < w; ++c) {
        stdev[c] = std::sqrt(stdev[c] / static_cast<double>(rows.size()));
        if (!(stdev[c] > 0.0)) stdev[c] = 1.0;
    }
}

void Normalizer::apply(std::span<const double> in, std::span<double> out) const {
    for (std::size_t i = 0; i < mean.size(); ++i) out[i] = (in[i] - mean[i]) / stdev[i];
}

void Normalizer::invert(std::span<const double> in, std::span<double> out) const {
    for (std::size_t i = 0; i < mean.size(); ++i) out[i] = in[i] * stdev[i] + mean[i];
}

Normalizer Normalizer::identity(int width) {
    Normalizer n;
    n.mean.assign(width, 0.0);
    n.stdev.assign(width, 1.0);
    return n;
}

std::size_t DenseStack::param_count() const {
    std::size_t n = 0;
    for (const DenseLayer& l : layers) n += l.param_count();
    return n;
}

void DenseStack::init_weights(Rng& rng) {
    for (DenseLayer& l : layers) {
        const double limit = l.relu ? std::sqrt(6.0 / l.in) : std::sqrt(6.0 / (l.in + l.out));
        for (double& w : l.w) w = rng.uniform(-limit, limit);
        std::fill(l.b.begin(), l.b.end(), 0.0);
    }
}

void DenseStack::forward(std::span<const double> x, Cache& cache) const {
    cache.act.resize(layers.size() + 1);
    cache.act[0].assign(x.begin(), x.end());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const DenseLayer& l = layers[i];
        const std::vector<double>& in = cache.act[i];
        std::vector<double>& out = cache.act[i + 1];
        out.assign(l.out, 0.0);
        for (int o = 0; o < l.out; ++o) {
            const double* wr = l.w.data() + static_cast<std::size_t>(o) * l.in;
            double acc = l.b[o];
            for (int c = 0; c < l.in; ++c) acc += wr[c] * in[c];
            out[o] = l.relu && acc < 0.0 ? 0.0 : acc;
        }
    }
}

void DenseStack::backward(const Cache& cache, std::span<const double> delta_out,
                          std::span<double> grad, std::span<double> delta_in) const {
    std::vector<double> delta(delta_out.begin(), delta_out.end());
    std::size_t offset = param_count();
    for (std::size_t li = layers.size(); li-- > 0;) {
        const DenseLayer& l = layers[li];
        const std::vector<double>& in = cache.act[li];
        const std::vector<double>& out = cache.act[li + 1];
        offset -= l.param_count();
        double* gw = grad.data() + offset;
        double* gb = gw + l.w.size();

        // ReLU kink: the subgradient at exactly 0 is taken as 0
        std::vector<double> local(delta);
        if (l.relu)
            for (int o = 0; o < l.out; ++o)
                if (out[o] <= 0.0) local[o] = 0.0;

        std::vector<double> next(l.in, 0.0);
        for (int o = 0; o < l.out; ++o) {
            const double d = local[o];
            if (d == 0.0) continue;
            double* gwr = gw + static_cast<std::size_t>(o) * l.in;
            const double* wr = l.w.data() + static_cast<std::size_t>(o) * l.in;
            gb[o] += d;
            for (int c = 0; c < l.in; ++c) {
                gwr[c] += d * in[c];
                next[c] += d * wr[c];
            }
        }
        delta = std::move(next);
    }
    std::copy(delta.begin(), delta.end(), delta_in.begin());
}

void DenseStack::copy_params(std::span<double> out) const {
    std::size_t k = 0;
    for (const DenseLayer& l : layers) {
        std::copy(l.w.begin(), l.w.end(), out.begin() + k);
        k += l.w.size();
        std::copy(l.b.begin(), l.b.end(), out.begin() + k);
        k += l.b.size();
    }
}

void DenseStack::set_params(std::span<const double> in) {
    std::size_t k = 0;
    for (DenseLayer& l : layers) {
        std::copy(in.begin() + k, in.begin() + k + l.w.size(), l.w.begin());
        k += l.w.size();
        std::copy(in.begin() + k, in.begin() + k + l.b.size(), l.b.begin());
        k += l.b.size();
    }
}

Mlp::Mlp(int input, std::span<const int> hidden, int output) {
    if (input <= 0 || output <= 0) throw TrainingDiverged("mlp needs positive widths");
    int prev = input;
    for (int h : hidden) {
        stack_.layers.emplace_back(prev, h, true);
        prev = h;
    }
    stack_.layers.emplace_back(prev, output, false);
    in_norm_ = Normalizer::identity(input);
    out_norm_ = Normalizer::identity(output);
}

double Mlp::loss_and_gradient(const RowMatrix& x, const RowMatrix& y_norm,
                              std::span<const int> rows, std::span<double> grad) {
    if (rows.empty()) throw TrainingDiverged("empty batch");
    const int t = output_width();
    const double scale = 1.0 / (static_cast<double>(rows.size()) * t);
    DenseStack::Cache cache;
    std::vector<double> xn(input_width()), delta(t), din(input_width());
    double loss_acc = 0.0;
    for (int r : rows) {
        in_norm_.apply(x.row(r), xn);
        stack_.forward(xn, cache);
        const std::vector<double>& pred = cache.act.back();
        for (int i = 0; i < t; ++i) {
            const double e = pred[i] - y_norm.at(r, i);
            loss_acc += std::abs(e);
            delta[i] = e > 0.0 ? scale : (e < 0.0 ? -scale : 0.0);
        }
        stack_.backward(cache, delta, grad, din);
    }
    return loss_acc * scale;
}

double Mlp::loss(const RowMatrix& x, const RowMatrix& y_norm, std::span<const int> rows) const {
    const int t = output_width();
    DenseStack::Cache cache;
    std::vector<double> xn(input_width());
    double loss_acc = 0.0;
    for (int r : rows) {
        in_norm_.apply(x.row(r), xn);
        stack_.forward(xn, cache);
        for (int i = 0; i < t; ++i) loss_acc += std::abs(cache.act.back()[i] - y_norm.at(r, i));
    }
    return loss_acc / (static_cast<double>(rows.size()) * t);
}

std::vector<double> Mlp::predict(std::span<const double> x) const {
    DenseStack::Cache cache;
    std::vector<double> xn(input_width());
    in_norm_.apply(x, xn);
    stack_.forward(xn, cache);
    std::vector<double> out(output_width());
    out_norm_.invert(cache.act.back(), out);
    return out;
}

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               double lr, double beta1, double beta2, double epsilon) {
    if (state.m.size() != params.size()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
        state.t = 0;
    }
    ++state.t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + epsilon);
    }
}

TrainResult train(TrainableModel& model, const RowMatrix& x, const RowMatrix& y,
                  std::span<const int> train_rows, std::span<const int> val_rows,
                  const TrainConfig& cfg) {
    if (train_rows.empty() || val_rows.empty())
        throw TrainingDiverged("training and validation splits must both be non-empty");
    if (!(cfg.learning_rate > 0.0) || cfg.max_epochs <= 0 || cfg.patience <= 0 ||
        cfg.patience >= cfg.max_epochs)
        throw TrainingDiverged("bad training config (need 0 < patience < max_epochs, lr > 0)");
    {
        std::set<int> seen(train_rows.begin(), train_rows.end());
        for (int r : val_rows)
            if (seen.count(r)) throw TrainingDiverged("train/val splits overlap");
    }

    model.input_norm().fit(x, train_rows);
    model.output_norm().fit(y, train_rows);

    RowMatrix y_norm(y.rows, y.cols);
    for (int r = 0; r < y.rows; ++r) model.output_norm().apply(y.row(r), y_norm.row(r));

    const std::size_t n_params = model.parameter_count();
    std::vector<double> params(n_params), grad(n_params), best_params(n_params);
    model.copy_parameters(params);
    best_params = params;
    AdamState adam(n_params);

    Rng rng(cfg.seed);
    std::vector<int> order(train_rows.begin(), train_rows.end());
    const int batch = cfg.batch_size <= 0 ? static_cast<int>(order.size())
                                          : std::min<int>(cfg.batch_size, order.size());

    TrainResult result;
    result.best_val_mae = std::numeric_limits<double>::infinity();

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.integer(i)]);

        double epoch_loss = 0.0;
        std::size_t samples = 0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t len = std::min<std::size_t>(batch, order.size() - start);
            std::span<const int> rows(order.data() + start, len);
            std::fill(grad.begin(), grad.end(), 0.0);
            const double batch_loss = model.loss_and_gradient(x, y_norm, rows, grad);
            epoch_loss += batch_loss * static_cast<double>(len);
            samples += len;
            adam_step(params, grad, adam, cfg.learning_rate);
            model.set_parameters(params);
        }
        const double train_mae = epoch_loss / static_cast<double>(samples);
        const double val_mae = model.loss(x, y_norm, val_rows);
        if (!std::isfinite(train_mae) || !std::isfinite(val_mae))
            throw TrainingDiverged("non-finite loss at epoch " + std::to_string(epoch) +
                                   " (train " + std::to_string(train_mae) + ", val " +
                                   std::to_string(val_mae) + ")");
        result.history.push_back(EpochStats{epoch, train_mae, val_mae});
        result.epochs_run = epoch;

        if (val_mae < result.best_val_mae) {
            result.best_val_mae = val_mae;
            result.best_epoch = epoch;
            best_params = params;
        } else if (epoch - result.best_epoch >= cfg.patience) {
            break;
        }
    }

    model.set_parameters(best_params);
    return result;
}

} // namespace portnet
