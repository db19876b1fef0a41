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

#include "audioatk/attacks/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "audioatk/common/errors.hpp"
#include "audioatk/nn/loss.hpp"

namespace audioatk::attacks {

AttackMethod parse_attack_method(const std::string& name) {
  if (name == "fgsm") return AttackMethod::Fgsm;
  if (name == "bim") return AttackMethod::Bim;
  throw std::invalid_argument("unknown attack method '" + name + "' (expected fgsm or bim)");
}

std::string attack_method_name(AttackMethod m) {
  return m == AttackMethod::Fgsm ? "fgsm" : "bim";
}

void AttackConfig::validate() const {
  require(epsilon >= 0.0f, "attack: epsilon must be non-negative");
  require(steps >= 1, "attack: steps must be >= 1");
  require(epsilon == 0.0f || effective_step() > 0.0f, "attack: step size must be positive");
  require(clip_lo < clip_hi, "attack: empty clip range");
}

namespace {

struct Prediction {
  int label;
  float confidence;
};

Prediction predict_one(nn::Network& net, const nn::Tensor& x) {
  nn::Tensor probs = net.forward(x);
  const auto arg = nn::argmax_rows(probs);
  return {arg[0], probs.sample(0)[arg[0]]};
}

// Shared iterate: steps of size alpha along sign(grad J), each projected
// onto the epsilon ball around x0 and into [clip_lo, clip_hi]. Where the
// gradient is exactly zero, sign contributes zero.
AdversarialExample signed_ascent(nn::Network& net, const nn::Tensor& x, int label,
                                 const AttackConfig& cfg, int steps, float alpha) {
  cfg.validate();
  require(net.mode() == nn::Mode::Eval, "attack: network must be in Eval mode");
  require(x.shape == nn::batched_shape(1, nn::sample_shape(x.shape)),
          "attack: expected a single-example batch");
  const int n_classes = net.output_shape().back();
  require(label >= 0 && label < n_classes,
          "attack: label " + std::to_string(label) + " outside [0, " + std::to_string(n_classes) + ")");
  for (float v : x.data)
    require(v >= cfg.clip_lo - 1e-6f && v <= cfg.clip_hi + 1e-6f,
            "attack: input outside the clip domain");

  AdversarialExample ex;
  ex.original = x;
  ex.true_label = label;
  const Prediction before = predict_one(net, x);
  ex.pred_before = before.label;
  ex.conf_before = before.confidence;

  nn::Tensor cur = x;
  const std::vector<int> labels{label};
  for (int s = 0; s < steps; ++s) {
    nn::Tensor probs = net.forward(cur);
    auto ce = nn::cross_entropy(probs, labels);
    net.zero_grads();
    net.backward_from_logits(ce.logit_grad, /*param_grads=*/false);
    const nn::Tensor& g = net.input_grad();
    for (std::size_t i = 0; i < cur.size(); ++i) {
      float step = 0.0f;
      if (g.data[i] > 0.0f)
        step = alpha;
      else if (g.data[i] < 0.0f)
        step = -alpha;
      float v = cur.data[i] + step;
      // project into the epsilon ball around the original, then the domain
      v = std::min(v, x.data[i] + cfg.epsilon);
      v = std::max(v, x.data[i] - cfg.epsilon);
      v = std::clamp(v, cfg.clip_lo, cfg.clip_hi);
      cur.data[i] = v;
    }
    ex.step_losses.push_back(ce.loss);
  }

  ex.perturbed = std::move(cur);
  const Prediction after = predict_one(net, ex.perturbed);
  ex.pred_after = after.label;
  ex.conf_after = after.confidence;
  float linf = 0.0f;
  for (std::size_t i = 0; i < ex.perturbed.size(); ++i)
    linf = std::max(linf, std::abs(ex.perturbed.data[i] - ex.original.data[i]));
  ex.linf = linf;
  ensure(linf <= cfg.epsilon + 1e-6f, "attack: perturbation escaped the epsilon ball");
  for (float v : ex.perturbed.data)
    ensure(v >= cfg.clip_lo && v <= cfg.clip_hi, "attack: perturbed input escaped the clip domain");
  return ex;
}

}  // namespace

AdversarialExample fgsm(nn::Network& net, const nn::Tensor& x, int label, const AttackConfig& cfg) {
  return signed_ascent(net, x, label, cfg, 1, cfg.epsilon);
}

AdversarialExample bim(nn::Network& net, const nn::Tensor& x, int label, const AttackConfig& cfg) {
  return signed_ascent(net, x, label, cfg, cfg.steps, cfg.effective_step());
}

AdversarialExample attack(nn::Network& net, const nn::Tensor& x, int label, const AttackConfig& cfg) {
  return cfg.method == AttackMethod::Fgsm ? fgsm(net, x, label, cfg) : bim(net, x, label, cfg);
}

}  // namespace audioatk::attacks
