#include "portnet/cci.hpp"

#include <algorithm>
#include <cmath>

#include "portnet/errors.hpp"

namespace portnet {

CciModel::CciModel(int slots, int s_width, int xr_width, int n_targets, const CciConfig& cfg)
    : CciModel(std::vector<int>(slots, s_width), xr_width, n_targets, cfg) {}

CciModel::CciModel(std::vector<int> slot_widths, int xr_width, int n_targets,
                   const CciConfig& cfg)
    : slot_widths_(std::move(slot_widths)), xr_width_(xr_width), n_targets_(n_targets),
      cfg_(cfg) {
    if (xr_width < 0 || n_targets <= 0) throw TrainingDiverged("bad cci dimensions");
    for (int w : slot_widths_)
        if (w <= 0) throw TrainingDiverged("cci slot widths must be positive");
    if (slot_widths_.empty() && xr_width == 0)
        throw TrainingDiverged("cci needs at least one input feature");
    if (cfg.latent_width <= 0) throw TrainingDiverged("latent width must be positive");

    const int xr_in = cfg_.xr_to_chunks ? xr_width_ : 0;
    for (std::size_t i = 0; i < slot_widths_.size(); ++i) {
        DenseStack chunk;
        int prev = slot_widths_[i] + xr_in + (i > 0 ? cfg_.latent_width : 0);
        for (int h : cfg_.chunk_hidden) {
            chunk.layers.emplace_back(prev, h, true);
            prev = h;
        }
        chunk.layers.emplace_back(prev, cfg_.latent_width, true);
        chunks_.push_back(std::move(chunk));
    }
    const int head_in = (slots() > 0 ? cfg_.latent_width : 0) + xr_width_;
    head_.layers.emplace_back(head_in, n_targets_, false);  // single linear layer

    in_norm_ = Normalizer::identity(input_width());
    out_norm_ = Normalizer::identity(n_targets_);
}

int CciModel::input_width() const {
    int total = xr_width_;
    for (int w : slot_widths_) total += w;
    return total;
}

void CciModel::init_weights(Rng& rng) {
    for (DenseStack& c : chunks_) c.init_weights(rng);
    head_.init_weights(rng);
}

std::size_t CciModel::parameter_count() const {
    std::size_t n = head_.param_count();
    for (const DenseStack& c : chunks_) n += c.param_count();
    return n;
}

void CciModel::copy_parameters(std::span<double> out) const {
    std::size_t k = 0;
    for (const DenseStack& c : chunks_) {
        c.copy_params(out.subspan(k, c.param_count()));
        k += c.param_count();
    }
    head_.copy_params(out.subspan(k, head_.param_count()));
}

void CciModel::set_parameters(std::span<const double> p) {
    std::size_t k = 0;
    for (DenseStack& c : chunks_) {
        c.set_params(p.subspan(k, c.param_count()));
        k += c.param_count();
    }
    head_.set_params(p.subspan(k, head_.param_count()));
}

void CciModel::forward_normalized(std::span<const double> xn, Trace& trace) const {
    trace.chunk_caches.resize(chunks_.size());
    const std::span<const double> xr =
        xn.subspan(static_cast<std::size_t>(input_width() - xr_width_), xr_width_);
    std::vector<double> chunk_in;
    std::span<const double> latent;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        const std::span<const double> s = xn.subspan(offset, slot_widths_[i]);
        offset += slot_widths_[i];
        chunk_in.assign(s.begin(), s.end());
        if (cfg_.xr_to_chunks) chunk_in.insert(chunk_in.end(), xr.begin(), xr.end());
        if (i > 0) chunk_in.insert(chunk_in.end(), latent.begin(), latent.end());
        chunks_[i].forward(chunk_in, trace.chunk_caches[i]);
        latent = trace.chunk_caches[i].act.back();
    }
    std::vector<double> head_in(latent.begin(), latent.end());
    head_in.insert(head_in.end(), xr.begin(), xr.end());
    head_.forward(head_in, trace.head_cache);
    trace.out = trace.head_cache.act.back();
}

double CciModel::loss_and_gradient(const RowMatrix& x, const RowMatrix& y_norm,
                                   std::span<const int> rows, std::span<double> grad) {
    if (rows.empty()) throw TrainingDiverged("empty batch");
    const int t = n_targets_;
    const double scale = 1.0 / (static_cast<double>(rows.size()) * t);
    const int latent_w = cfg_.latent_width;

    std::vector<std::size_t> chunk_offset(chunks_.size());
    std::size_t off = 0;
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        chunk_offset[i] = off;
        off += chunks_[i].param_count();
    }
    const std::size_t head_offset = off;

    Trace trace;
    std::vector<double> xn(input_width()), delta(t);
    double loss_acc = 0.0;
    for (int r : rows) {
        in_norm_.apply(x.row(r), xn);
        forward_normalized(xn, trace);
        for (int i = 0; i < t; ++i) {
            const double e = trace.out[i] - y_norm.at(r, i);
            loss_acc += std::abs(e);
            delta[i] = e > 0.0 ? scale : (e < 0.0 ? -scale : 0.0);
        }
        std::vector<double> head_din(head_.input_width());
        head_.backward(trace.head_cache, delta, grad.subspan(head_offset, head_.param_count()),
                       head_din);
        std::vector<double> delta_latent(head_din.begin(),
                                         head_din.begin() + (slots() > 0 ? latent_w : 0));
        for (int i = slots() - 1; i >= 0; --i) {
            std::vector<double> din(chunks_[i].input_width());
            chunks_[i].backward(trace.chunk_caches[i], delta_latent,
                                grad.subspan(chunk_offset[i], chunks_[i].param_count()), din);
            if (i > 0)
                delta_latent.assign(din.end() - latent_w, din.end());
        }
    }
    return loss_acc * scale;
}

double CciModel::loss(const RowMatrix& x, const RowMatrix& y_norm,
                      std::span<const int> rows) const {
    Trace trace;
    std::vector<double> xn(input_width());
    double loss_acc = 0.0;
    for (int r : rows) {
        in_norm_.apply(x.row(r), xn);
        forward_normalized(xn, trace);
        for (int i = 0; i < n_targets_; ++i) loss_acc += std::abs(trace.out[i] - y_norm.at(r, i));
    }
    return loss_acc / (static_cast<double>(rows.size()) * n_targets_);
}

std::vector<double> CciModel::predict(std::span<const double> x) const {
    Trace trace;
    std::vector<double> xn(input_width());
    in_norm_.apply(x, xn);
    forward_normalized(xn, trace);
    std::vector<double> out(n_targets_);
    out_norm_.invert(trace.out, out);
    return out;
}

} // namespace portnet
