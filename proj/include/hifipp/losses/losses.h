// include/hifipp/losses/losses.h

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

#ifndef HIFIPP_LOSSES_LOSSES_H_
#define HIFIPP_LOSSES_LOSSES_H_

#include <vector>

#include <torch/torch.h>

#include "hifipp/audio/mel.h"
#include "hifipp/audio/waveform.h"
#include "hifipp/disc/discriminators.h"

namespace hifipp {

struct LossWeights {
  double lambda_fm = 2.0;
  double lambda_mel = 45.0;

  // Throws ConfigError on a negative weight.
  void Validate() const;
};

// Least-squares discriminator loss of one discriminator:
// mean((real - 1)^2) + mean(fake^2).
torch::Tensor lsgan_d_loss(const torch::Tensor& d_real, const torch::Tensor& d_fake);

// Least-squares generator loss summed over discriminators:
// sum_i mean((fake_i - 1)^2).
torch::Tensor lsgan_g_loss(const std::vector<torch::Tensor>& d_fake);

// L1 feature matching, each layer normalised by its element count and
// summed over layers and discriminators. Throws ShapeError when the lists or
// the tensors do not line up.
using FeatureLists = std::vector<std::vector<torch::Tensor>>;
torch::Tensor feature_matching_loss(const FeatureLists& real, const FeatureLists& fake);

// Mean absolute difference of log-mel spectrograms of (..., T) signals.
torch::Tensor mel_loss(const torch::Tensor& y, const torch::Tensor& y_hat, const LogMel& log_mel);
double mel_loss(const Waveform& y, const Waveform& y_hat, const MelFilterbank& fb,
                const StftConfig& cfg);

struct GeneratorLossParts {
  torch::Tensor gan, fm, mel;
};

// gan + lambda_fm * fm + lambda_mel * mel.
torch::Tensor generator_total_loss(const GeneratorLossParts& parts, const LossWeights& w);

std::vector<torch::Tensor> Scores(const std::vector<DiscriminatorOutput>& outs);
FeatureLists Features(const std::vector<DiscriminatorOutput>& outs);

}  // namespace hifipp

#endif  // HIFIPP_LOSSES_LOSSES_H_
