// Copyright 2026 The audioatk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "audioatk/common/errors.hpp"
#include "audioatk/common/rng.hpp"
#include "audioatk/nn/gemm.hpp"
#include "audioatk/nn/tensor.hpp"

namespace audioatk::nn {

enum class LayerKind : std::uint32_t {
  Conv2D = 0,
  Conv1D = 1,
  MaxPool2D = 2,
  MaxPool1D = 3,
  AvgPool1D = 4,
  Dense = 5,
  BatchNorm = 6,
  ReLU = 7,
  LeakyReLU = 8,
  Softmax = 9,
  Dropout = 10,
  Flatten = 11,
};

enum class Mode { Train, Eval };

// Activations are laid out channels-last: Conv2D works on [H, W, C] samples,
// Conv1D on [L, C]. This keeps im2col panels and the printed shape traces in
// the same order as the architecture tables.

template <class Real>
class LayerT {
public:
  virtual ~LayerT() = default;

  virtual LayerKind kind() const = 0;
  virtual std::string name() const = 0;

  /// Per-sample output shape; throws when shapes do not compose.
  virtual Shape output_shape(const Shape& in) const = 0;

  /// in/out carry a leading batch dimension. `rng` feeds stochastic layers
  /// (dropout) in Train mode only.
  virtual void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode mode, Rng& rng) = 0;

  /// Gradients from the caches of the last forward. `din` is overwritten;
  /// param grads accumulate (callers zero them per step). When `param_grads`
  /// is false only the input gradient is produced (attack path).
  virtual void backward(const TensorT<Real>& in, const TensorT<Real>& out,
                        const TensorT<Real>& dout, TensorT<Real>& din, bool param_grads) = 0;

  virtual std::vector<TensorT<Real>*> params() { return {}; }
  virtual std::vector<const TensorT<Real>*> params() const { return {}; }
  /// Non-trainable buffers (batch-norm running stats).
  virtual std::vector<TensorT<Real>*> state() { return {}; }

  virtual std::vector<int> int_hyper() const { return {}; }
  virtual std::vector<float> float_hyper() const { return {}; }

  /// True when the layer is a fixed per-sample map in every mode; such
  /// layers may sit in a cached frozen prefix during training.
  virtual bool mode_invariant() const { return true; }

  virtual void init_params(Rng&) {}

  bool trainable = true;
};

namespace detail {

template <class Real>
void he_uniform_init(TensorT<Real>& w, std::size_t fan_in, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  for (Real& v : w.data) v = static_cast<Real>(rng.uniform(-bound, bound));
}

inline int conv_out_len(int in, int k, int s, const std::string& who) {
  require(in >= k, who + ": input extent " + std::to_string(in) +
                       " shorter than kernel " + std::to_string(k));
  return (in - k) / s + 1;
}

}  // namespace detail

// ---------------------------------------------------------------------------

template <class Real>
class Conv2DT final : public LayerT<Real> {
public:
  Conv2DT(int in_ch, int out_ch, int kh, int kw, int sh = 1, int sw = 1)
      : in_ch_(in_ch), out_ch_(out_ch), kh_(kh), kw_(kw), sh_(sh), sw_(sw) {
    require(in_ch > 0 && out_ch > 0 && kh > 0 && kw > 0 && sh > 0 && sw > 0,
            "Conv2D: hyper-parameters must be positive");
    weight_.resize({kh * kw * in_ch, out_ch});
    bias_.resize({out_ch});
  }

  LayerKind kind() const override { return LayerKind::Conv2D; }
  std::string name() const override {
    return "conv2d " + std::to_string(out_ch_) + "x(" + std::to_string(kh_) + "," +
           std::to_string(kw_) + ")/s" + std::to_string(sh_);
  }

  Shape output_shape(const Shape& in) const override {
    require(in.size() == 3, "Conv2D expects a (H, W, C) input, got " + shape_str(in));
    require(in[2] == in_ch_, "Conv2D built for " + std::to_string(in_ch_) +
                                 " channels, input has " + std::to_string(in[2]));
    return {detail::conv_out_len(in[0], kh_, sh_, "Conv2D"),
            detail::conv_out_len(in[1], kw_, sw_, "Conv2D"), out_ch_};
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    const Shape os = output_shape(sample_shape(in.shape));
    out.resize(batched_shape(in.batch(), os));
    const int oh = os[0], ow = os[1];
    const std::size_t cells = static_cast<std::size_t>(oh) * ow;
    const int ckk = kh_ * kw_ * in_ch_;
    const std::size_t strip = strip_cells(ckk);
    col_.resize(strip * static_cast<std::size_t>(ckk));
    const int ih = in.shape[1], iw = in.shape[2];

    for (int n = 0; n < in.batch(); ++n) {
      const Real* src = in.sample(n);
      Real* dst = out.sample(n);
      for (std::size_t c0 = 0; c0 < cells; c0 += strip) {
        const std::size_t nc = std::min(strip, cells - c0);
        im2col(src, ih, iw, c0, nc, ow);
        nn::detail::gemm_nn(static_cast<int>(nc), out_ch_, ckk, col_.data(), ckk,
                            weight_.data.data(), out_ch_,
                            dst + c0 * static_cast<std::size_t>(out_ch_), out_ch_, false);
      }
      for (std::size_t c = 0; c < cells; ++c)
        for (int f = 0; f < out_ch_; ++f) dst[c * out_ch_ + f] += bias_.data[static_cast<std::size_t>(f)];
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>& out, const TensorT<Real>& dout,
                TensorT<Real>& din, bool param_grads) override {
    din.resize(in.shape);
    if (param_grads) {
      weight_.ensure_grad();
      bias_.ensure_grad();
    }
    const Shape os = sample_shape(out.shape);
    const int oh = os[0], ow = os[1];
    const std::size_t cells = static_cast<std::size_t>(oh) * ow;
    const int ckk = kh_ * kw_ * in_ch_;
    const std::size_t strip = strip_cells(ckk);
    col_.resize(strip * static_cast<std::size_t>(ckk));
    dcol_.resize(strip * static_cast<std::size_t>(ckk));
    wt_.resize(static_cast<std::size_t>(ckk) * out_ch_);
    for (int r = 0; r < ckk; ++r)  // W^T kept alongside for the gemm_nn path
      for (int f = 0; f < out_ch_; ++f)
        wt_[static_cast<std::size_t>(f) * ckk + r] = weight_.data[static_cast<std::size_t>(r) * out_ch_ + f];
    const int ih = in.shape[1], iw = in.shape[2];

    for (int n = 0; n < in.batch(); ++n) {
      const Real* src = in.sample(n);
      const Real* dy = dout.sample(n);
      Real* dx = din.sample(n);
      std::fill(dx, dx + din.sample_size(), Real(0));
      for (std::size_t c0 = 0; c0 < cells; c0 += strip) {
        const std::size_t nc = std::min(strip, cells - c0);
        const Real* dy_strip = dy + c0 * static_cast<std::size_t>(out_ch_);
        if (param_grads) {
          im2col(src, ih, iw, c0, nc, ow);
          nn::detail::gemm_tn(ckk, out_ch_, static_cast<int>(nc), col_.data(), ckk, dy_strip,
                              out_ch_, weight_.grad.data(), out_ch_, true);
        }
        nn::detail::gemm_nn(static_cast<int>(nc), ckk, out_ch_, dy_strip, out_ch_, wt_.data(),
                            ckk, dcol_.data(), ckk, false);
        col2im_add(dx, ih, iw, c0, nc, ow);
      }
      if (param_grads)
        for (std::size_t c = 0; c < cells; ++c)
          for (int f = 0; f < out_ch_; ++f) bias_.grad[static_cast<std::size_t>(f)] += dy[c * out_ch_ + f];
    }
  }

  std::vector<TensorT<Real>*> params() override { return {&weight_, &bias_}; }
  std::vector<const TensorT<Real>*> params() const override { return {&weight_, &bias_}; }
  std::vector<int> int_hyper() const override { return {in_ch_, out_ch_, kh_, kw_, sh_, sw_}; }

  void init_params(Rng& rng) override {
    detail::he_uniform_init(weight_, static_cast<std::size_t>(kh_) * kw_ * in_ch_, rng);
    std::fill(bias_.data.begin(), bias_.data.end(), Real(0));
  }

  TensorT<Real>& weight() { return weight_; }
  TensorT<Real>& bias() { return bias_; }

private:
  static std::size_t strip_cells(int ckk) {
    const std::size_t budget = (2u << 20) / sizeof(Real);
    return std::max<std::size_t>(64, budget / static_cast<std::size_t>(ckk));
  }

  // col panel rows are output cells [c0, c0+nc), columns ordered (ky, kx, c)
  void im2col(const Real* src, int ih, int iw, std::size_t c0, std::size_t nc, int ow) {
    (void)ih;
    const int ckk = kh_ * kw_ * in_ch_;
    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t cell = c0 + c;
      const int oy = static_cast<int>(cell) / ow;
      const int ox = static_cast<int>(cell) % ow;
      Real* row = col_.data() + c * static_cast<std::size_t>(ckk);
      for (int ky = 0; ky < kh_; ++ky) {
        const Real* in_row =
            src + (static_cast<std::size_t>(oy) * sh_ + ky) * (static_cast<std::size_t>(iw) * in_ch_) +
            static_cast<std::size_t>(ox) * sw_ * in_ch_;
        std::copy(in_row, in_row + static_cast<std::size_t>(kw_) * in_ch_,
                  row + static_cast<std::size_t>(ky) * kw_ * in_ch_);
      }
    }
  }

  void col2im_add(Real* dst, int ih, int iw, std::size_t c0, std::size_t nc, int ow) {
    (void)ih;
    const int ckk = kh_ * kw_ * in_ch_;
    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t cell = c0 + c;
      const int oy = static_cast<int>(cell) / ow;
      const int ox = static_cast<int>(cell) % ow;
      const Real* row = dcol_.data() + c * static_cast<std::size_t>(ckk);
      for (int ky = 0; ky < kh_; ++ky) {
        Real* out_row =
            dst + (static_cast<std::size_t>(oy) * sh_ + ky) * (static_cast<std::size_t>(iw) * in_ch_) +
            static_cast<std::size_t>(ox) * sw_ * in_ch_;
        const Real* src_row = row + static_cast<std::size_t>(ky) * kw_ * in_ch_;
        for (int j = 0; j < kw_ * in_ch_; ++j) out_row[j] += src_row[j];
      }
    }
  }

  int in_ch_, out_ch_, kh_, kw_, sh_, sw_;
  TensorT<Real> weight_;  // [kh*kw*in_ch, out_ch]
  TensorT<Real> bias_;    // [out_ch]
  std::vector<Real> col_, dcol_, wt_;
};

// ---------------------------------------------------------------------------

template <class Real>
class Conv1DT final : public LayerT<Real> {
public:
  Conv1DT(int in_ch, int out_ch, int k, int s = 1)
      : in_ch_(in_ch), out_ch_(out_ch), k_(k), s_(s) {
    require(in_ch > 0 && out_ch > 0 && k > 0 && s > 0, "Conv1D: hyper-parameters must be positive");
    weight_.resize({k * in_ch, out_ch});
    bias_.resize({out_ch});
  }

  LayerKind kind() const override { return LayerKind::Conv1D; }
  std::string name() const override {
    return "conv1d " + std::to_string(out_ch_) + "xk" + std::to_string(k_) + "/s" +
           std::to_string(s_);
  }

  Shape output_shape(const Shape& in) const override {
    require(in.size() == 2, "Conv1D expects a (L, C) input, got " + shape_str(in));
    require(in[1] == in_ch_, "Conv1D built for " + std::to_string(in_ch_) +
                                 " channels, input has " + std::to_string(in[1]));
    return {detail::conv_out_len(in[0], k_, s_, "Conv1D"), out_ch_};
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    const Shape os = output_shape(sample_shape(in.shape));
    out.resize(batched_shape(in.batch(), os));
    const std::size_t cells = static_cast<std::size_t>(os[0]);
    const int ck = k_ * in_ch_;
    const std::size_t strip = strip_cells(ck);
    col_.resize(strip * static_cast<std::size_t>(ck));

    for (int n = 0; n < in.batch(); ++n) {
      const Real* src = in.sample(n);
      Real* dst = out.sample(n);
      for (std::size_t c0 = 0; c0 < cells; c0 += strip) {
        const std::size_t nc = std::min(strip, cells - c0);
        im2col(src, c0, nc);
        nn::detail::gemm_nn(static_cast<int>(nc), out_ch_, ck, col_.data(), ck,
                            weight_.data.data(), out_ch_,
                            dst + c0 * static_cast<std::size_t>(out_ch_), out_ch_, false);
      }
      for (std::size_t c = 0; c < cells; ++c)
        for (int f = 0; f < out_ch_; ++f) dst[c * out_ch_ + f] += bias_.data[static_cast<std::size_t>(f)];
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>& out, const TensorT<Real>& dout,
                TensorT<Real>& din, bool param_grads) override {
    din.resize(in.shape);
    if (param_grads) {
      weight_.ensure_grad();
      bias_.ensure_grad();
    }
    const std::size_t cells = static_cast<std::size_t>(out.shape[1]);
    const int ck = k_ * in_ch_;
    const std::size_t strip = strip_cells(ck);
    col_.resize(strip * static_cast<std::size_t>(ck));
    dcol_.resize(strip * static_cast<std::size_t>(ck));
    wt_.resize(static_cast<std::size_t>(ck) * out_ch_);
    for (int r = 0; r < ck; ++r)
      for (int f = 0; f < out_ch_; ++f)
        wt_[static_cast<std::size_t>(f) * ck + r] = weight_.data[static_cast<std::size_t>(r) * out_ch_ + f];

    for (int n = 0; n < in.batch(); ++n) {
      const Real* src = in.sample(n);
      const Real* dy = dout.sample(n);
      Real* dx = din.sample(n);
      std::fill(dx, dx + din.sample_size(), Real(0));
      for (std::size_t c0 = 0; c0 < cells; c0 += strip) {
        const std::size_t nc = std::min(strip, cells - c0);
        const Real* dy_strip = dy + c0 * static_cast<std::size_t>(out_ch_);
        if (param_grads) {
          im2col(src, c0, nc);
          nn::detail::gemm_tn(ck, out_ch_, static_cast<int>(nc), col_.data(), ck, dy_strip,
                              out_ch_, weight_.grad.data(), out_ch_, true);
        }
        nn::detail::gemm_nn(static_cast<int>(nc), ck, out_ch_, dy_strip, out_ch_, wt_.data(), ck,
                            dcol_.data(), ck, false);
        for (std::size_t c = 0; c < nc; ++c) {
          Real* out_pos = dx + (c0 + c) * s_ * in_ch_;
          const Real* src_row = dcol_.data() + c * static_cast<std::size_t>(ck);
          for (int j = 0; j < ck; ++j) out_pos[j] += src_row[j];
        }
      }
      if (param_grads)
        for (std::size_t c = 0; c < cells; ++c)
          for (int f = 0; f < out_ch_; ++f) bias_.grad[static_cast<std::size_t>(f)] += dy[c * out_ch_ + f];
    }
  }

  std::vector<TensorT<Real>*> params() override { return {&weight_, &bias_}; }
  std::vector<const TensorT<Real>*> params() const override { return {&weight_, &bias_}; }
  std::vector<int> int_hyper() const override { return {in_ch_, out_ch_, k_, s_}; }

  void init_params(Rng& rng) override {
    detail::he_uniform_init(weight_, static_cast<std::size_t>(k_) * in_ch_, rng);
    std::fill(bias_.data.begin(), bias_.data.end(), Real(0));
  }

  TensorT<Real>& weight() { return weight_; }
  TensorT<Real>& bias() { return bias_; }

private:
  static std::size_t strip_cells(int ck) {
    const std::size_t budget = (2u << 20) / sizeof(Real);
    return std::max<std::size_t>(64, budget / static_cast<std::size_t>(ck));
  }

  void im2col(const Real* src, std::size_t c0, std::size_t nc) {
    const int ck = k_ * in_ch_;
    for (std::size_t c = 0; c < nc; ++c) {
      const Real* in_pos = src + (c0 + c) * s_ * in_ch_;
      std::copy(in_pos, in_pos + ck, col_.data() + c * static_cast<std::size_t>(ck));
    }
  }

  int in_ch_, out_ch_, k_, s_;
  TensorT<Real> weight_;  // [k*in_ch, out_ch]
  TensorT<Real> bias_;
  std::vector<Real> col_, dcol_, wt_;
};

// ---------------------------------------------------------------------------

template <class Real>
class MaxPool2DT final : public LayerT<Real> {
public:
  explicit MaxPool2DT(int window = 2, int stride = 2) : w_(window), s_(stride) {
    require(window > 0 && stride > 0, "MaxPool2D: window and stride must be positive");
  }

  LayerKind kind() const override { return LayerKind::MaxPool2D; }
  std::string name() const override { return "maxpool2d " + std::to_string(w_) + "/s" + std::to_string(s_); }

  Shape output_shape(const Shape& in) const override {
    require(in.size() == 3, "MaxPool2D expects a (H, W, C) input, got " + shape_str(in));
    return {detail::conv_out_len(in[0], w_, s_, "MaxPool2D"),
            detail::conv_out_len(in[1], w_, s_, "MaxPool2D"), in[2]};
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    const Shape os = output_shape(sample_shape(in.shape));
    out.resize(batched_shape(in.batch(), os));
    const int ih = in.shape[1], iw = in.shape[2], ch = in.shape[3];
    const int oh = os[0], ow = os[1];
    argmax_.assign(out.size(), 0);
    for (int n = 0; n < in.batch(); ++n) {
      const Real* src = in.sample(n);
      Real* dst = out.sample(n);
      std::size_t o = 0;
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox)
          for (int c = 0; c < ch; ++c, ++o) {
            Real best = -std::numeric_limits<Real>::infinity();
            int best_idx = 0;
            for (int wy = 0; wy < w_; ++wy)
              for (int wx = 0; wx < w_; ++wx) {
                const std::size_t idx =
                    (static_cast<std::size_t>(oy) * s_ + wy) * (static_cast<std::size_t>(iw) * ch) +
                    (static_cast<std::size_t>(ox) * s_ + wx) * ch + c;
                if (src[idx] > best) {
                  best = src[idx];
                  best_idx = static_cast<int>(idx);
                }
              }
            dst[o] = best;
            argmax_[out.sample_size() * n + o] = best_idx;
          }
      (void)ih;
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>& out, const TensorT<Real>& dout,
                TensorT<Real>& din, bool) override {
    din.resize(in.shape);
    std::fill(din.data.begin(), din.data.end(), Real(0));
    for (int n = 0; n < out.batch(); ++n) {
      const Real* dy = dout.sample(n);
      Real* dx = din.sample(n);
      const std::size_t base = out.sample_size() * n;
      for (std::size_t o = 0; o < out.sample_size(); ++o)
        dx[argmax_[base + o]] += dy[o];
    }
  }

  std::vector<int> int_hyper() const override { return {w_, s_}; }

private:
  int w_, s_;
  std::vector<int> argmax_;
};

// ---------------------------------------------------------------------------

template <class Real>
class MaxPool1DT final : public LayerT<Real> {
public:
  explicit MaxPool1DT(int window = 2, int stride = 2) : w_(window), s_(stride) {
    require(window > 0 && stride > 0, "MaxPool1D: window and stride must be positive");
  }

  LayerKind kind() const override { return LayerKind::MaxPool1D; }
  std::string name() const override { return "maxpool1d " + std::to_string(w_) + "/s" + std::to_string(s_); }

  Shape output_shape(const Shape& in) const override {
    require(in.size() == 2, "MaxPool1D expects a (L, C) input, got " + shape_str(in));
    return {detail::conv_out_len(in[0], w_, s_, "MaxPool1D"), in[1]};
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    const Shape os = output_shape(sample_shape(in.shape));
    out.resize(batched_shape(in.batch(), os));
    const int ch = in.shape[2];
    argmax_.assign(out.size(), 0);
    for (int n = 0; n < in.batch(); ++n) {
      const Real* src = in.sample(n);
      Real* dst = out.sample(n);
      std::size_t o = 0;
      for (int ol = 0; ol < os[0]; ++ol)
        for (int c = 0; c < ch; ++c, ++o) {
          Real best = -std::numeric_limits<Real>::infinity();
          int best_idx = 0;
          for (int wk = 0; wk < w_; ++wk) {
            const std::size_t idx = (static_cast<std::size_t>(ol) * s_ + wk) * ch + c;
            if (src[idx] > best) {
              best = src[idx];
              best_idx = static_cast<int>(idx);
            }
          }
          dst[o] = best;
          argmax_[out.sample_size() * n + o] = best_idx;
        }
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>& out, const TensorT<Real>& dout,
                TensorT<Real>& din, bool) override {
    din.resize(in.shape);
    std::fill(din.data.begin(), din.data.end(), Real(0));
    for (int n = 0; n < out.batch(); ++n) {
      const Real* dy = dout.sample(n);
      Real* dx = din.sample(n);
      const std::size_t base = out.sample_size() * n;
      for (std::size_t o = 0; o < out.sample_size(); ++o)
        dx[argmax_[base + o]] += dy[o];
    }
  }

  std::vector<int> int_hyper() const override { return {w_, s_}; }

private:
  int w_, s_;
  std::vector<int> argmax_;
};

// ---------------------------------------------------------------------------

template <class Real>
class AvgPool1DT final : public LayerT<Real> {
public:
  explicit AvgPool1DT(int window, int stride = -1) : w_(window), s_(stride < 0 ? window : stride) {
    require(w_ > 0 && s_ > 0, "AvgPool1D: window and stride must be positive");
  }

  LayerKind kind() const override { return LayerKind::AvgPool1D; }
  std::string name() const override { return "avgpool1d " + std::to_string(w_) + "/s" + std::to_string(s_); }

  Shape output_shape(const Shape& in) const override {
    require(in.size() == 2, "AvgPool1D expects a (L, C) input, got " + shape_str(in));
    return {detail::conv_out_len(in[0], w_, s_, "AvgPool1D"), in[1]};
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    const Shape os = output_shape(sample_shape(in.shape));
    out.resize(batched_shape(in.batch(), os));
    const int ch = in.shape[2];
    const Real inv = Real(1) / static_cast<Real>(w_);
    for (int n = 0; n < in.batch(); ++n) {
      const Real* src = in.sample(n);
      Real* dst = out.sample(n);
      std::size_t o = 0;
      for (int ol = 0; ol < os[0]; ++ol)
        for (int c = 0; c < ch; ++c, ++o) {
          Real acc = Real(0);
          for (int wk = 0; wk < w_; ++wk)
            acc += src[(static_cast<std::size_t>(ol) * s_ + wk) * ch + c];
          dst[o] = acc * inv;
        }
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>& out, const TensorT<Real>& dout,
                TensorT<Real>& din, bool) override {
    din.resize(in.shape);
    std::fill(din.data.begin(), din.data.end(), Real(0));
    const int ch = in.shape[2];
    const Real inv = Real(1) / static_cast<Real>(w_);
    const Shape os = sample_shape(out.shape);
    for (int n = 0; n < out.batch(); ++n) {
      const Real* dy = dout.sample(n);
      Real* dx = din.sample(n);
      std::size_t o = 0;
      for (int ol = 0; ol < os[0]; ++ol)
        for (int c = 0; c < ch; ++c, ++o) {
          const Real g = dy[o] * inv;
          for (int wk = 0; wk < w_; ++wk)
            dx[(static_cast<std::size_t>(ol) * s_ + wk) * ch + c] += g;
        }
    }
  }

  std::vector<int> int_hyper() const override { return {w_, s_}; }

private:
  int w_, s_;
};

// ---------------------------------------------------------------------------

template <class Real>
class DenseT final : public LayerT<Real> {
public:
  DenseT(int in_dim, int out_dim) : in_(in_dim), out_(out_dim) {
    require(in_dim > 0 && out_dim > 0, "Dense: dimensions must be positive");
    weight_.resize({in_dim, out_dim});
    bias_.resize({out_dim});
  }

  LayerKind kind() const override { return LayerKind::Dense; }
  std::string name() const override { return "dense " + std::to_string(out_); }

  Shape output_shape(const Shape& in) const override {
    require(in.size() == 1, "Dense expects a flat input, got " + shape_str(in));
    require(in[0] == in_, "Dense built for width " + std::to_string(in_) + ", input has " +
                              std::to_string(in[0]));
    return {out_};
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    output_shape(sample_shape(in.shape));
    out.resize(batched_shape(in.batch(), {out_}));
    nn::detail::gemm_nn(in.batch(), out_, in_, in.data.data(), in_, weight_.data.data(), out_,
                        out.data.data(), out_, false);
    for (int n = 0; n < in.batch(); ++n) {
      Real* row = out.sample(n);
      for (int j = 0; j < out_; ++j) row[j] += bias_.data[static_cast<std::size_t>(j)];
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>&, const TensorT<Real>& dout,
                TensorT<Real>& din, bool param_grads) override {
    din.resize(in.shape);
    if (param_grads) {
      weight_.ensure_grad();
      bias_.ensure_grad();
      nn::detail::gemm_tn(in_, out_, in.batch(), in.data.data(), in_, dout.data.data(), out_,
                          weight_.grad.data(), out_, true);
      for (int n = 0; n < in.batch(); ++n) {
        const Real* row = dout.sample(n);
        for (int j = 0; j < out_; ++j) bias_.grad[static_cast<std::size_t>(j)] += row[j];
      }
    }
    nn::detail::gemm_nt(in.batch(), in_, out_, dout.data.data(), out_, weight_.data.data(), out_,
                        din.data.data(), in_, false);
  }

  std::vector<TensorT<Real>*> params() override { return {&weight_, &bias_}; }
  std::vector<const TensorT<Real>*> params() const override { return {&weight_, &bias_}; }
  std::vector<int> int_hyper() const override { return {in_, out_}; }

  void init_params(Rng& rng) override {
    detail::he_uniform_init(weight_, static_cast<std::size_t>(in_), rng);
    std::fill(bias_.data.begin(), bias_.data.end(), Real(0));
  }

  TensorT<Real>& weight() { return weight_; }
  TensorT<Real>& bias() { return bias_; }

private:
  int in_, out_;
  TensorT<Real> weight_;  // [in, out]
  TensorT<Real> bias_;
};

// ---------------------------------------------------------------------------

template <class Real>
class BatchNormT final : public LayerT<Real> {
public:
  explicit BatchNormT(int channels, float momentum = 0.9f, float eps = 1e-5f)
      : ch_(channels), momentum_(momentum), eps_(eps) {
    require(channels > 0, "BatchNorm: channel count must be positive");
    gamma_.resize({channels});
    beta_.resize({channels});
    running_mean_.resize({channels});
    running_var_.resize({channels});
    std::fill(gamma_.data.begin(), gamma_.data.end(), Real(1));
    std::fill(running_var_.data.begin(), running_var_.data.end(), Real(1));
  }

  LayerKind kind() const override { return LayerKind::BatchNorm; }
  std::string name() const override { return "batchnorm " + std::to_string(ch_); }
  bool mode_invariant() const override { return false; }

  Shape output_shape(const Shape& in) const override {
    require(!in.empty() && in.back() == ch_,
            "BatchNorm built for " + std::to_string(ch_) + " channels, input shape is " + shape_str(in));
    return in;
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode mode, Rng&) override {
    output_shape(sample_shape(in.shape));
    out.resize(in.shape);
    const std::size_t rows = in.size() / static_cast<std::size_t>(ch_);
    last_mode_ = mode;
    if (mode == Mode::Eval) {
      std::vector<Real> scale(static_cast<std::size_t>(ch_)), shift(static_cast<std::size_t>(ch_));
      eval_inv_.resize(static_cast<std::size_t>(ch_));
      for (int c = 0; c < ch_; ++c) {
        const Real inv = Real(1) / static_cast<Real>(std::sqrt(
                                       static_cast<double>(running_var_.data[static_cast<std::size_t>(c)]) + eps_));
        eval_inv_[static_cast<std::size_t>(c)] = inv;
        scale[static_cast<std::size_t>(c)] = gamma_.data[static_cast<std::size_t>(c)] * inv;
        shift[static_cast<std::size_t>(c)] =
            beta_.data[static_cast<std::size_t>(c)] -
            running_mean_.data[static_cast<std::size_t>(c)] * scale[static_cast<std::size_t>(c)];
      }
      eval_scale_ = scale;
      for (std::size_t r = 0; r < rows; ++r) {
        const Real* x = in.data.data() + r * ch_;
        Real* y = out.data.data() + r * ch_;
        for (int c = 0; c < ch_; ++c)
          y[c] = x[c] * scale[static_cast<std::size_t>(c)] + shift[static_cast<std::size_t>(c)];
      }
      return;
    }

    // Train mode: biased batch statistics per channel.
    mean_.assign(static_cast<std::size_t>(ch_), 0.0);
    var_.assign(static_cast<std::size_t>(ch_), 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const Real* x = in.data.data() + r * ch_;
      for (int c = 0; c < ch_; ++c) mean_[static_cast<std::size_t>(c)] += static_cast<double>(x[c]);
    }
    for (int c = 0; c < ch_; ++c) mean_[static_cast<std::size_t>(c)] /= static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const Real* x = in.data.data() + r * ch_;
      for (int c = 0; c < ch_; ++c) {
        const double d = static_cast<double>(x[c]) - mean_[static_cast<std::size_t>(c)];
        var_[static_cast<std::size_t>(c)] += d * d;
      }
    }
    for (int c = 0; c < ch_; ++c) var_[static_cast<std::size_t>(c)] /= static_cast<double>(rows);

    inv_std_.resize(static_cast<std::size_t>(ch_));
    for (int c = 0; c < ch_; ++c)
      inv_std_[static_cast<std::size_t>(c)] =
          static_cast<Real>(1.0 / std::sqrt(var_[static_cast<std::size_t>(c)] + eps_));

    xhat_.resize(in.size());
    for (std::size_t r = 0; r < rows; ++r) {
      const Real* x = in.data.data() + r * ch_;
      Real* y = out.data.data() + r * ch_;
      Real* xh = xhat_.data() + r * ch_;
      for (int c = 0; c < ch_; ++c) {
        xh[c] = (x[c] - static_cast<Real>(mean_[static_cast<std::size_t>(c)])) * inv_std_[static_cast<std::size_t>(c)];
        y[c] = gamma_.data[static_cast<std::size_t>(c)] * xh[c] + beta_.data[static_cast<std::size_t>(c)];
      }
    }
    for (int c = 0; c < ch_; ++c) {
      running_mean_.data[static_cast<std::size_t>(c)] =
          static_cast<Real>(momentum_ * static_cast<double>(running_mean_.data[static_cast<std::size_t>(c)]) +
                            (1.0 - momentum_) * mean_[static_cast<std::size_t>(c)]);
      running_var_.data[static_cast<std::size_t>(c)] =
          static_cast<Real>(momentum_ * static_cast<double>(running_var_.data[static_cast<std::size_t>(c)]) +
                            (1.0 - momentum_) * var_[static_cast<std::size_t>(c)]);
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>&, const TensorT<Real>& dout,
                TensorT<Real>& din, bool param_grads) override {
    din.resize(in.shape);
    const std::size_t rows = in.size() / static_cast<std::size_t>(ch_);
    if (param_grads) {
      gamma_.ensure_grad();
      beta_.ensure_grad();
    }
    if (last_mode_ == Mode::Eval) {
      // Deterministic affine map in eval.
      for (std::size_t r = 0; r < rows; ++r) {
        const Real* dy = dout.data.data() + r * ch_;
        Real* dx = din.data.data() + r * ch_;
        for (int c = 0; c < ch_; ++c) dx[c] = dy[c] * eval_scale_[static_cast<std::size_t>(c)];
      }
      if (param_grads) {
        // dgamma in eval uses xhat from running stats.
        for (std::size_t r = 0; r < rows; ++r) {
          const Real* x = in.data.data() + r * ch_;
          const Real* dy = dout.data.data() + r * ch_;
          for (int c = 0; c < ch_; ++c) {
            const Real xh = (x[c] - running_mean_.data[static_cast<std::size_t>(c)]) *
                            eval_inv_[static_cast<std::size_t>(c)];
            gamma_.grad[static_cast<std::size_t>(c)] += dy[c] * xh;
            beta_.grad[static_cast<std::size_t>(c)] += dy[c];
          }
        }
      }
      return;
    }

    // Train mode gradient through the batch statistics.
    std::vector<double> sum_dy(static_cast<std::size_t>(ch_), 0.0);
    std::vector<double> sum_dy_xhat(static_cast<std::size_t>(ch_), 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const Real* dy = dout.data.data() + r * ch_;
      const Real* xh = xhat_.data() + r * ch_;
      for (int c = 0; c < ch_; ++c) {
        sum_dy[static_cast<std::size_t>(c)] += static_cast<double>(dy[c]);
        sum_dy_xhat[static_cast<std::size_t>(c)] += static_cast<double>(dy[c]) * xh[c];
      }
    }
    if (param_grads) {
      for (int c = 0; c < ch_; ++c) {
        gamma_.grad[static_cast<std::size_t>(c)] += static_cast<Real>(sum_dy_xhat[static_cast<std::size_t>(c)]);
        beta_.grad[static_cast<std::size_t>(c)] += static_cast<Real>(sum_dy[static_cast<std::size_t>(c)]);
      }
    }
    const double m = static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const Real* dy = dout.data.data() + r * ch_;
      const Real* xh = xhat_.data() + r * ch_;
      Real* dx = din.data.data() + r * ch_;
      for (int c = 0; c < ch_; ++c) {
        const double g = static_cast<double>(gamma_.data[static_cast<std::size_t>(c)]);
        const double t = m * static_cast<double>(dy[c]) - sum_dy[static_cast<std::size_t>(c)] -
                         static_cast<double>(xh[c]) * sum_dy_xhat[static_cast<std::size_t>(c)];
        dx[c] = static_cast<Real>(g * static_cast<double>(inv_std_[static_cast<std::size_t>(c)]) * t / m);
      }
    }
  }

  std::vector<TensorT<Real>*> params() override { return {&gamma_, &beta_}; }
  std::vector<const TensorT<Real>*> params() const override { return {&gamma_, &beta_}; }
  std::vector<TensorT<Real>*> state() override { return {&running_mean_, &running_var_}; }
  std::vector<int> int_hyper() const override { return {ch_}; }
  std::vector<float> float_hyper() const override { return {momentum_, eps_}; }

private:
  int ch_;
  float momentum_, eps_;
  TensorT<Real> gamma_, beta_, running_mean_, running_var_;
  std::vector<double> mean_, var_;
  std::vector<Real> inv_std_, xhat_, eval_scale_, eval_inv_;
  Mode last_mode_ = Mode::Train;
};

// ---------------------------------------------------------------------------

template <class Real>
class ReLUT final : public LayerT<Real> {
public:
  LayerKind kind() const override { return LayerKind::ReLU; }
  std::string name() const override { return "relu"; }
  Shape output_shape(const Shape& in) const override { return in; }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    out.resize(in.shape);
    for (std::size_t i = 0; i < in.size(); ++i)
      out.data[i] = in.data[i] > Real(0) ? in.data[i] : Real(0);
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>& out, const TensorT<Real>& dout,
                TensorT<Real>& din, bool) override {
    din.resize(in.shape);
    for (std::size_t i = 0; i < out.size(); ++i)
      din.data[i] = out.data[i] > Real(0) ? dout.data[i] : Real(0);
  }
};

template <class Real>
class LeakyReLUT final : public LayerT<Real> {
public:
  explicit LeakyReLUT(float slope = 0.01f) : slope_(slope) {}

  LayerKind kind() const override { return LayerKind::LeakyReLU; }
  std::string name() const override { return "leaky_relu"; }
  Shape output_shape(const Shape& in) const override { return in; }
  std::vector<float> float_hyper() const override { return {slope_}; }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    out.resize(in.shape);
    const Real s = static_cast<Real>(slope_);
    for (std::size_t i = 0; i < in.size(); ++i)
      out.data[i] = in.data[i] > Real(0) ? in.data[i] : s * in.data[i];
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>& out, const TensorT<Real>& dout,
                TensorT<Real>& din, bool) override {
    din.resize(in.shape);
    const Real s = static_cast<Real>(slope_);
    for (std::size_t i = 0; i < out.size(); ++i)
      din.data[i] = out.data[i] > Real(0) ? dout.data[i] : s * dout.data[i];
  }

private:
  float slope_;
};

// ---------------------------------------------------------------------------

template <class Real>
class SoftmaxT final : public LayerT<Real> {
public:
  LayerKind kind() const override { return LayerKind::Softmax; }
  std::string name() const override { return "softmax"; }

  Shape output_shape(const Shape& in) const override {
    require(in.size() == 1, "Softmax expects a flat input, got " + shape_str(in));
    return in;
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    out.resize(in.shape);
    const int width = in.shape.back();
    for (int n = 0; n < in.batch(); ++n) {
      const Real* x = in.sample(n);
      Real* y = out.sample(n);
      Real mx = x[0];
      for (int j = 1; j < width; ++j) mx = std::max(mx, x[j]);
      double sum = 0.0;
      for (int j = 0; j < width; ++j) {
        const double e = std::exp(static_cast<double>(x[j] - mx));
        y[j] = static_cast<Real>(e);
        sum += e;
      }
      const Real inv = static_cast<Real>(1.0 / sum);
      for (int j = 0; j < width; ++j) y[j] *= inv;
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>& out, const TensorT<Real>& dout,
                TensorT<Real>& din, bool) override {
    din.resize(in.shape);
    const int width = in.shape.back();
    for (int n = 0; n < in.batch(); ++n) {
      const Real* p = out.sample(n);
      const Real* dy = dout.sample(n);
      Real* dx = din.sample(n);
      double dot = 0.0;
      for (int j = 0; j < width; ++j) dot += static_cast<double>(dy[j]) * p[j];
      for (int j = 0; j < width; ++j)
        dx[j] = p[j] * (dy[j] - static_cast<Real>(dot));
    }
  }
};

// ---------------------------------------------------------------------------

template <class Real>
class DropoutT final : public LayerT<Real> {
public:
  explicit DropoutT(float rate = 0.4f) : rate_(rate) {
    require(rate >= 0.0f && rate < 1.0f, "Dropout: rate must be in [0, 1)");
  }

  LayerKind kind() const override { return LayerKind::Dropout; }
  std::string name() const override { return "dropout"; }
  Shape output_shape(const Shape& in) const override { return in; }
  std::vector<float> float_hyper() const override { return {rate_}; }
  bool mode_invariant() const override { return false; }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode mode, Rng& rng) override {
    out.resize(in.shape);
    if (mode == Mode::Eval || rate_ == 0.0f) {
      out.data = in.data;
      mask_.clear();
      return;
    }
    const Real keep = Real(1) - static_cast<Real>(rate_);
    const Real scale = Real(1) / keep;
    mask_.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
      mask_[i] = rng.uniform() < static_cast<double>(rate_) ? Real(0) : scale;
      out.data[i] = in.data[i] * mask_[i];
    }
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>&, const TensorT<Real>& dout,
                TensorT<Real>& din, bool) override {
    din.resize(in.shape);
    if (mask_.empty()) {
      din.data = dout.data;
      return;
    }
    for (std::size_t i = 0; i < dout.size(); ++i) din.data[i] = dout.data[i] * mask_[i];
  }

private:
  float rate_;
  std::vector<Real> mask_;
};

// ---------------------------------------------------------------------------

template <class Real>
class FlattenT final : public LayerT<Real> {
public:
  LayerKind kind() const override { return LayerKind::Flatten; }
  std::string name() const override { return "flatten"; }

  Shape output_shape(const Shape& in) const override {
    require(!in.empty(), "Flatten expects a non-empty shape");
    return {static_cast<int>(numel(in))};
  }

  void forward(const TensorT<Real>& in, TensorT<Real>& out, Mode, Rng&) override {
    out.resize(batched_shape(in.batch(), output_shape(sample_shape(in.shape))));
    out.data = in.data;
  }

  void backward(const TensorT<Real>& in, const TensorT<Real>&, const TensorT<Real>& dout,
                TensorT<Real>& din, bool) override {
    din.resize(in.shape);
    din.data = dout.data;
  }
};

}  // namespace audioatk::nn
