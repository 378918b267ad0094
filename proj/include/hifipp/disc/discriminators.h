// include/hifipp/disc/discriminators.h

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

#ifndef HIFIPP_DISC_DISCRIMINATORS_H_
#define HIFIPP_DISC_DISCRIMINATORS_H_

#include <memory>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "hifipp/nn/layers.h"

namespace hifipp {

enum class DiscriminatorKind {
  kSsd,     // k identical single-resolution discriminators
  kMsd,     // 3 scale discriminators on x1, x2, x4 average-pooled audio
  kMpd,     // 5 period discriminators, periods {2, 3, 5, 7, 11}
  kMsdMpd,  // both reference ensembles together
};

// Conv schedule of a scale (MSD/SSD) discriminator.
enum class ScaleLayout {
  kHifiGan,  // 128-128-256-512-1024-1024-1024, strides 1,2,2,4,4,1,1
  kMelGan,   // 16-64-256-1024-1024-1024, strides 1,4,4,4,4,1
};

std::string KindName(DiscriminatorKind k);
DiscriminatorKind ParseKind(const std::string& name);
std::string LayoutName(ScaleLayout l);
ScaleLayout ParseLayout(const std::string& name);

struct DiscriminatorConfig {
  DiscriminatorKind kind = DiscriminatorKind::kSsd;
  int k = 3;                // SSD member count
  int channel_divisor = 4;  // hidden widths of scale discriminators are divided by this
  bool spectral_norm = false;  // MSD: first member uses spectral norm
  ScaleLayout layout = ScaleLayout::kHifiGan;

  int NumMembers() const;
  void Validate() const;
};

// Presets: "ssd" (k=3, divisor 4), "ssd5", "msd", "msd_spectral",
// "mpd", "msd_mpd" (the original HiFi-GAN pair, spectral norm on).
DiscriminatorConfig DiscriminatorPreset(const std::string& name);

struct DiscriminatorOutput {
  torch::Tensor score;                 // (B, N) patch logits
  std::vector<torch::Tensor> features;  // activations of every hidden conv layer
};

class SubDiscriminatorImpl : public torch::nn::Module {
 public:
  // (B, T) -> logits and features. Throws ParameterError on an empty batch.
  virtual DiscriminatorOutput forward(const torch::Tensor& x) = 0;
  virtual std::string Describe() const = 0;
};

struct ScaleLayer {
  int64_t in, out, kernel, stride, groups, padding;
  bool operator==(const ScaleLayer&) const = default;
};

// Hidden layers plus output projection of a scale discriminator.
std::vector<ScaleLayer> ScaleSchedule(ScaleLayout layout, int channel_divisor);

class ScaleDiscriminatorImpl : public SubDiscriminatorImpl {
 public:
  // `pool_steps` average-pooling stages (kernel 4, stride 2) precede the convs.
  ScaleDiscriminatorImpl(ScaleLayout layout, int channel_divisor, nn::NormType norm,
                         int pool_steps = 0);

  DiscriminatorOutput forward(const torch::Tensor& x) override;
  std::string Describe() const override;

  const std::vector<ScaleLayer>& schedule() const { return schedule_; }
  int pool_steps() const { return pool_steps_; }
  nn::NormType norm() const { return norm_; }
  // Length seen by the first conv for an input of `length` samples.
  static int64_t PooledLength(int64_t length, int pool_steps);
  // Score length for an input of `length` samples.
  int64_t ScoreLength(int64_t length) const;

 private:
  ScaleLayout layout_;
  std::vector<ScaleLayer> schedule_;
  nn::NormType norm_;
  int pool_steps_;
  double slope_;
  torch::nn::ModuleList convs_;
  nn::NormConv post_{nullptr};
};

class PeriodDiscriminatorImpl : public SubDiscriminatorImpl {
 public:
  PeriodDiscriminatorImpl(int64_t period, nn::NormType norm);

  // The signal is reflect-padded to a multiple of the period and folded to
  // (B, 1, T / period, period).
  DiscriminatorOutput forward(const torch::Tensor& x) override;
  std::string Describe() const override;
  int64_t period() const { return period_; }

 private:
  int64_t period_;
  torch::nn::ModuleList convs_;
  nn::NormConv post_{nullptr};
};

// The discriminators trained against one generator. Members are built in
// order from the global torch RNG, so identical seeds give identical members.
class DiscriminatorEnsembleImpl : public torch::nn::Module {
 public:
  explicit DiscriminatorEnsembleImpl(const DiscriminatorConfig& cfg);

  // One output per member, in member order.
  std::vector<DiscriminatorOutput> forward(const torch::Tensor& x);

  std::size_t size() const { return members_.size(); }
  std::shared_ptr<SubDiscriminatorImpl> member(std::size_t i) const { return members_.at(i); }
  const DiscriminatorConfig& config() const { return cfg_; }

 private:
  DiscriminatorConfig cfg_;
  std::vector<std::shared_ptr<SubDiscriminatorImpl>> members_;
};
TORCH_MODULE(DiscriminatorEnsemble);

}  // namespace hifipp

#endif  // HIFIPP_DISC_DISCRIMINATORS_H_
