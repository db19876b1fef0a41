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

#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

#include "audioatk/common/binio.hpp"
#include "audioatk/common/errors.hpp"
#include "audioatk/nn/network.hpp"

namespace audioatk::nn {

// Checkpoint container ("NNCK"):
//   magic "NNCK", u32 version (1), u32 layer count,
//   u32 input rank + u32 dims,
//   then per layer: u32 kind tag, u32 int-hyper count + values,
//   u32 float-hyper count + f32 values, u8 trainable,
//   u32 param count + blocks, u32 state count + blocks.
// A block is u32 rank, u32 dims, then raw little-endian float32 data.

namespace detail {

inline void write_block(std::ostream& os, const Tensor& t) {
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.shape.size()));
  for (int d : t.shape) write_le<std::uint32_t>(os, static_cast<std::uint32_t>(d));
  write_bytes(os, t.data.data(), t.data.size() * sizeof(float));
}

inline void read_block(std::istream& is, Tensor& t, const std::string& origin) {
  std::uint32_t rank = 0;
  if (!read_le(is, rank) || rank > 8) throw DataError(origin + ": bad tensor block rank");
  Shape shape(rank);
  for (auto& d : shape) {
    std::uint32_t v = 0;
    if (!read_le(is, v)) throw DataError(origin + ": truncated tensor dims");
    d = static_cast<int>(v);
  }
  if (t.shape != shape)
    throw DataError(origin + ": checkpoint tensor shape " + shape_str(shape) +
                    " does not match layer expectation " + shape_str(t.shape));
  if (!read_bytes(is, t.data.data(), t.data.size() * sizeof(float)))
    throw DataError(origin + ": truncated tensor data");
}

inline std::unique_ptr<LayerT<float>> make_layer(LayerKind kind, const std::vector<int>& ih,
                                                 const std::vector<float>& fh,
                                                 const std::string& origin) {
  auto need = [&](std::size_t ints, std::size_t floats) {
    if (ih.size() != ints || fh.size() != floats)
      throw DataError(origin + ": unexpected hyper block for layer kind " +
                      std::to_string(static_cast<int>(kind)));
  };
  switch (kind) {
    case LayerKind::Conv2D:
      need(6, 0);
      return std::make_unique<Conv2DT<float>>(ih[0], ih[1], ih[2], ih[3], ih[4], ih[5]);
    case LayerKind::Conv1D:
      need(4, 0);
      return std::make_unique<Conv1DT<float>>(ih[0], ih[1], ih[2], ih[3]);
    case LayerKind::MaxPool2D:
      need(2, 0);
      return std::make_unique<MaxPool2DT<float>>(ih[0], ih[1]);
    case LayerKind::MaxPool1D:
      need(2, 0);
      return std::make_unique<MaxPool1DT<float>>(ih[0], ih[1]);
    case LayerKind::AvgPool1D:
      need(2, 0);
      return std::make_unique<AvgPool1DT<float>>(ih[0], ih[1]);
    case LayerKind::Dense:
      need(2, 0);
      return std::make_unique<DenseT<float>>(ih[0], ih[1]);
    case LayerKind::BatchNorm:
      need(1, 2);
      return std::make_unique<BatchNormT<float>>(ih[0], fh[0], fh[1]);
    case LayerKind::ReLU:
      need(0, 0);
      return std::make_unique<ReLUT<float>>();
    case LayerKind::LeakyReLU:
      need(0, 1);
      return std::make_unique<LeakyReLUT<float>>(fh[0]);
    case LayerKind::Softmax:
      need(0, 0);
      return std::make_unique<SoftmaxT<float>>();
    case LayerKind::Dropout:
      need(0, 1);
      return std::make_unique<DropoutT<float>>(fh[0]);
    case LayerKind::Flatten:
      need(0, 0);
      return std::make_unique<FlattenT<float>>();
  }
  throw DataError(origin + ": unknown layer kind tag " + std::to_string(static_cast<int>(kind)));
}

}  // namespace detail

inline void save_network(std::ostream& os, Network& net) {
  write_bytes(os, "NNCK", 4);
  write_le<std::uint32_t>(os, 1u);
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(net.num_layers()));
  const Shape& in = net.input_shape();
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(in.size()));
  for (int d : in) write_le<std::uint32_t>(os, static_cast<std::uint32_t>(d));
  for (int i = 0; i < net.num_layers(); ++i) {
    auto& l = net.layer(i);
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(l.kind()));
    const auto ih = l.int_hyper();
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(ih.size()));
    for (int v : ih) write_le<std::uint32_t>(os, static_cast<std::uint32_t>(v));
    const auto fh = l.float_hyper();
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(fh.size()));
    for (float v : fh) write_le<float>(os, v);
    write_le<std::uint8_t>(os, l.trainable ? 1 : 0);
    auto params = l.params();
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(params.size()));
    for (auto* p : params) detail::write_block(os, *p);
    auto state = l.state();
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(state.size()));
    for (auto* s : state) detail::write_block(os, *s);
  }
}

inline void save_network(const std::filesystem::path& path, Network& net) {
  atomic_write(path, [&](std::ostream& os) { save_network(os, net); });
}

inline Network load_network(std::istream& is, const std::string& origin = "<stream>") {
  char magic[4];
  if (!read_bytes(is, magic, 4) || std::memcmp(magic, "NNCK", 4) != 0)
    throw DataError(origin + ": not a checkpoint (bad magic)");
  std::uint32_t version = 0, n_layers = 0, rank = 0;
  if (!read_le(is, version) || version != 1) throw DataError(origin + ": unsupported checkpoint version");
  if (!read_le(is, n_layers) || n_layers == 0 || n_layers > 1024)
    throw DataError(origin + ": implausible layer count");
  if (!read_le(is, rank) || rank == 0 || rank > 8) throw DataError(origin + ": bad input rank");
  Shape input(rank);
  for (auto& d : input) {
    std::uint32_t v = 0;
    if (!read_le(is, v)) throw DataError(origin + ": truncated input shape");
    d = static_cast<int>(v);
  }

  std::vector<std::unique_ptr<LayerT<float>>> layers;
  std::vector<std::uint8_t> trainables;
  layers.reserve(n_layers);
  for (std::uint32_t li = 0; li < n_layers; ++li) {
    std::uint32_t kind = 0, n_ih = 0, n_fh = 0;
    if (!read_le(is, kind)) throw DataError(origin + ": truncated layer header");
    if (!read_le(is, n_ih) || n_ih > 16) throw DataError(origin + ": bad hyper count");
    std::vector<int> ih(n_ih);
    for (auto& v : ih) {
      std::uint32_t u = 0;
      if (!read_le(is, u)) throw DataError(origin + ": truncated int hypers");
      v = static_cast<int>(u);
    }
    if (!read_le(is, n_fh) || n_fh > 16) throw DataError(origin + ": bad float hyper count");
    std::vector<float> fh(n_fh);
    for (auto& v : fh)
      if (!read_le(is, v)) throw DataError(origin + ": truncated float hypers");
    std::uint8_t trainable = 1;
    if (!read_le(is, trainable)) throw DataError(origin + ": truncated trainable flag");

    auto layer = detail::make_layer(static_cast<LayerKind>(kind), ih, fh, origin);
    std::uint32_t n_params = 0;
    if (!read_le(is, n_params)) throw DataError(origin + ": truncated param count");
    auto params = layer->params();
    if (n_params != params.size()) throw DataError(origin + ": parameter count mismatch");
    for (auto* p : params) detail::read_block(is, *p, origin);
    std::uint32_t n_state = 0;
    if (!read_le(is, n_state)) throw DataError(origin + ": truncated state count");
    auto state = layer->state();
    if (n_state != state.size()) throw DataError(origin + ": state count mismatch");
    for (auto* s : state) detail::read_block(is, *s, origin);
    layer->trainable = trainable != 0;
    layers.push_back(std::move(layer));
  }
  return Network(std::move(input), std::move(layers));
}

inline Network load_network(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint: " + path.string());
  return load_network(is, path.string());
}

}  // namespace audioatk::nn
