// src/losses/losses.cc

// Copyright 2026  The HiFi++ Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "hifipp/losses/losses.h"

#include <string>

#include "hifipp/errors.h"

namespace hifipp {

void LossWeights::Validate() const {
  if (lambda_fm < 0.0) throw ConfigError("loss.lambda_fm must be >= 0");
  if (lambda_mel < 0.0) throw ConfigError("loss.lambda_mel must be >= 0");
}

torch::Tensor lsgan_d_loss(const torch::Tensor& d_real, const torch::Tensor& d_fake) {
  return (d_real - 1).square().mean() + d_fake.square().mean();
}

torch::Tensor lsgan_g_loss(const std::vector<torch::Tensor>& d_fake) {
  if (d_fake.empty()) throw ParameterError("generator loss needs at least one discriminator");
  torch::Tensor total;
  for (const auto& f : d_fake) {
    auto l = (f - 1).square().mean();
    total = total.defined() ? total + l : l;
  }
  return total;
}

torch::Tensor feature_matching_loss(const FeatureLists& real, const FeatureLists& fake) {
  if (real.size() != fake.size() || real.empty())
    throw ShapeError("feature matching needs equally many non-zero discriminators");
  torch::Tensor total;
  for (std::size_t i = 0; i < real.size(); ++i) {
    if (real[i].size() != fake[i].size())
      throw ShapeError("discriminator " + std::to_string(i) + " has mismatched layer counts");
    for (std::size_t j = 0; j < real[i].size(); ++j) {
      if (real[i][j].sizes() != fake[i][j].sizes())
        throw ShapeError("feature shape mismatch at discriminator " + std::to_string(i) +
                         ", layer " + std::to_string(j));
      auto l = (real[i][j] - fake[i][j]).abs().mean();
      total = total.defined() ? total + l : l;
    }
  }
  return total;
}

torch::Tensor mel_loss(const torch::Tensor& y, const torch::Tensor& y_hat, const LogMel& log_mel) {
  if (y.sizes() != y_hat.sizes()) throw ShapeError("mel loss operands differ in shape");
  return (log_mel(y) - log_mel(y_hat)).abs().mean();
}

double mel_loss(const Waveform& y, const Waveform& y_hat, const MelFilterbank& fb,
                const StftConfig& cfg) {
  if (y.size() != y_hat.size()) throw LengthError("mel loss operands differ in length");
  if (y.sample_rate != fb.config().sample_rate || y_hat.sample_rate != y.sample_rate)
    throw ParameterError("mel loss sample rate does not match the filterbank");
  LogMel lm(fb, cfg, torch::kDouble);
  torch::NoGradGuard no_grad;
  return mel_loss(y.ToTensor().to(torch::kDouble), y_hat.ToTensor().to(torch::kDouble), lm)
      .item<double>();
}

torch::Tensor generator_total_loss(const GeneratorLossParts& p, const LossWeights& w) {
  return p.gan + w.lambda_fm * p.fm + w.lambda_mel * p.mel;
}

std::vector<torch::Tensor> Scores(const std::vector<DiscriminatorOutput>& outs) {
  std::vector<torch::Tensor> s;
  for (const auto& o : outs) s.push_back(o.score);
  return s;
}

FeatureLists Features(const std::vector<DiscriminatorOutput>& outs) {
  FeatureLists f;
  for (const auto& o : outs) f.push_back(o.features);
  return f;
}

}  // namespace hifipp
