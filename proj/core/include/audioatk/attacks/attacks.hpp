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

#include <string>
#include <vector>

#include "audioatk/nn/network.hpp"

namespace audioatk::attacks {

enum class AttackMethod { Fgsm, Bim };

AttackMethod parse_attack_method(const std::string& name);
std::string attack_method_name(AttackMethod m);

/// Perturbation budget and domain for the signed-gradient attacks. Inputs
/// are attacked in the normalized-unit spectrogram domain, so the defaults
/// are fractions of [0, 1].
struct AttackConfig {
  AttackMethod method = AttackMethod::Bim;
  float epsilon = 0.02f;   // l-inf budget
  int steps = 10;          // 1 for FGSM
  float step_size = 0.0f;  // 0 -> epsilon / steps
  float clip_lo = 0.0f;
  float clip_hi = 1.0f;

  float effective_step() const { return step_size > 0.0f ? step_size : epsilon / static_cast<float>(steps); }
  void validate() const;
};

struct AdversarialExample {
  nn::Tensor original;
  nn::Tensor perturbed;
  int true_label = 0;
  int pred_before = 0;
  int pred_after = 0;
  float conf_before = 0.0f;
  float conf_after = 0.0f;
  float linf = 0.0f;                  // max abs perturbation actually applied
  std::vector<double> step_losses;    // loss after each iterate (BIM)
};

/// Single signed-gradient step: x' = clip(x + eps * sign(grad J)).
AdversarialExample fgsm(nn::Network& net, const nn::Tensor& x, int label, const AttackConfig& cfg);

/// Iterated FGSM with per-step projection onto the epsilon ball and the
/// input domain. steps = 1 with step_size = epsilon reproduces fgsm bit for
/// bit.
AdversarialExample bim(nn::Network& net, const nn::Tensor& x, int label, const AttackConfig& cfg);

/// Dispatch on cfg.method.
AdversarialExample attack(nn::Network& net, const nn::Tensor& x, int label, const AttackConfig& cfg);

}  // namespace audioatk::attacks
