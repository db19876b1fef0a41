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

#include "audioatk/models/builders.hpp"

#include <memory>
#include <vector>

#include "audioatk/common/errors.hpp"

namespace audioatk::models {

using nn::AvgPool1DT;
using nn::BatchNormT;
using nn::Conv1DT;
using nn::Conv2DT;
using nn::DenseT;
using nn::DropoutT;
using nn::FlattenT;
using nn::LayerT;
using nn::LeakyReLUT;
using nn::MaxPool1DT;
using nn::MaxPool2DT;
using nn::Network;
using nn::ReLUT;
using nn::Shape;
using nn::SoftmaxT;

nn::Network build_2d_cnn(int input_bins, int n_classes, int frames, std::uint64_t seed) {
  require(input_bins == 257 || input_bins == 64,
          "build_2d_cnn: input_bins must be 257 (STFT) or 64 (Mel), got " +
              std::to_string(input_bins));
  require(frames > 16 && n_classes > 1, "build_2d_cnn: bad frames or class count");

  std::vector<std::unique_ptr<LayerT<float>>> layers;
  auto conv_block = [&](int in_ch, int out_ch) {
    layers.push_back(std::make_unique<Conv2DT<float>>(in_ch, out_ch, 3, 3, 1, 1));
    layers.push_back(std::make_unique<ReLUT<float>>());
    layers.push_back(std::make_unique<BatchNormT<float>>(out_ch));
  };
  conv_block(1, 32);
  conv_block(32, 32);
  layers.push_back(std::make_unique<MaxPool2DT<float>>(2, 2));
  conv_block(32, 64);
  conv_block(64, 64);
  layers.push_back(std::make_unique<MaxPool2DT<float>>(2, 2));
  layers.push_back(std::make_unique<FlattenT<float>>());

  // Flattened width follows from the conv arithmetic above.
  const int h = (((input_bins - 2) - 2) / 2 - 2 - 2) / 2;
  const int w = (((frames - 2) - 2) / 2 - 2 - 2) / 2;
  layers.push_back(std::make_unique<DenseT<float>>(h * w * 64, 1024));
  layers.push_back(std::make_unique<ReLUT<float>>());
  layers.push_back(std::make_unique<DropoutT<float>>(0.4f));
  layers.push_back(std::make_unique<DenseT<float>>(1024, n_classes));
  layers.push_back(std::make_unique<SoftmaxT<float>>());

  Network net(Shape{input_bins, frames, 1}, std::move(layers));
  net.init_params(seed);
  return net;
}

double gammatone_default_f_lo() { return 50.0; }
double gammatone_default_f_hi(int sample_rate) { return 0.95 * (sample_rate / 2.0); }

nn::Network build_1d_cnn(int n_classes, int input_len, int sample_rate, std::uint64_t seed) {
  require(input_len >= 4096 && n_classes > 1, "build_1d_cnn: bad input length or class count");

  // Batch norm follows each trainable conv's activation; the frozen
  // gammatone front end stays bare so it remains a fixed per-sample map.
  std::vector<std::unique_ptr<LayerT<float>>> layers;
  auto gt_conv = std::make_unique<Conv1DT<float>>(1, 32, 512, 1);
  gt_conv->trainable = false;
  layers.push_back(std::move(gt_conv));
  layers.push_back(std::make_unique<LeakyReLUT<float>>(0.01f));
  layers.push_back(std::make_unique<AvgPool1DT<float>>(8));
  layers.push_back(std::make_unique<Conv1DT<float>>(32, 16, 256, 2));
  layers.push_back(std::make_unique<LeakyReLUT<float>>(0.01f));
  layers.push_back(std::make_unique<BatchNormT<float>>(16));
  layers.push_back(std::make_unique<AvgPool1DT<float>>(8));
  layers.push_back(std::make_unique<Conv1DT<float>>(16, 32, 64, 2));
  layers.push_back(std::make_unique<LeakyReLUT<float>>(0.01f));
  layers.push_back(std::make_unique<BatchNormT<float>>(32));
  layers.push_back(std::make_unique<Conv1DT<float>>(32, 64, 32, 2));
  layers.push_back(std::make_unique<LeakyReLUT<float>>(0.01f));
  layers.push_back(std::make_unique<BatchNormT<float>>(64));
  layers.push_back(std::make_unique<Conv1DT<float>>(64, 128, 16, 2));
  layers.push_back(std::make_unique<LeakyReLUT<float>>(0.01f));
  layers.push_back(std::make_unique<BatchNormT<float>>(128));
  layers.push_back(std::make_unique<MaxPool1DT<float>>(2, 2));
  layers.push_back(std::make_unique<FlattenT<float>>());

  int len = input_len - 512 + 1;  // gammatone conv
  len = len / 8;                  // avg pool
  len = (len - 256) / 2 + 1;      // conv k256 s2
  len = len / 8;                  // avg pool
  len = (len - 64) / 2 + 1;       // conv k64 s2
  len = (len - 32) / 2 + 1;       // conv k32 s2
  len = (len - 16) / 2 + 1;       // conv k16 s2
  len = len / 2;                  // max pool
  layers.push_back(std::make_unique<DenseT<float>>(len * 128, 256));
  layers.push_back(std::make_unique<LeakyReLUT<float>>(0.01f));
  layers.push_back(std::make_unique<DropoutT<float>>(0.4f));
  layers.push_back(std::make_unique<DenseT<float>>(256, n_classes));
  layers.push_back(std::make_unique<SoftmaxT<float>>());

  Network net(Shape{input_len, 1}, std::move(layers));
  net.init_params(seed);

  // The first conv is the fixed auditory front end: one gammatone impulse
  // response per output channel, bias zero, excluded from every update.
  GammatoneBank bank = gammatone_bank(32, 512, sample_rate, gammatone_default_f_lo(),
                                      gammatone_default_f_hi(sample_rate));
  auto& conv0 = dynamic_cast<nn::Conv1DT<float>&>(net.layer(0));
  nn::Tensor& w = conv0.weight();  // [k * in_ch, out_ch] = [512, 32]
  for (int k = 0; k < 512; ++k)
    for (int f = 0; f < 32; ++f)
      w.data[static_cast<std::size_t>(k) * 32 + f] = bank.row(f)[k];
  std::fill(conv0.bias().data.begin(), conv0.bias().data.end(), 0.0f);
  ensure(!net.layer(0).trainable, "build_1d_cnn: gammatone layer must stay frozen");
  return net;
}

}  // namespace audioatk::models
