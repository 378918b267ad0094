// include/hifipp/nn/layers.h

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

#ifndef HIFIPP_NN_LAYERS_H_
#define HIFIPP_NN_LAYERS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <torch/torch.h>

namespace hifipp::nn {

enum class NormType { kNone, kWeight, kSpectral };

enum class InitScheme {
  kNormal001,     // N(0, 0.01) weights, zero bias
  kTorchDefault,  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases
};

struct ConvSpec {
  int64_t in_channels = 1;
  int64_t out_channels = 1;
  std::vector<int64_t> kernel{1};
  std::vector<int64_t> stride{1};
  std::vector<int64_t> padding{0};
  std::vector<int64_t> dilation{1};
  int64_t groups = 1;
  bool bias = true;
  bool transposed = false;
  NormType norm = NormType::kWeight;
  InitScheme init = InitScheme::kNormal001;
};

// 1-D or 2-D (transposed) convolution with optional weight or spectral
// normalisation of its kernel. The dimensionality follows kernel.size().
//
// Weight norm stores a direction `weight_v` and per-output-slice magnitude
// `weight_g` (slice dim 0, as torch's weight_norm). Spectral norm keeps
// `weight_orig` and a power-iteration vector `u` buffer that advances one
// step per training-mode forward.
class NormConvImpl : public torch::nn::Module {
 public:
  explicit NormConvImpl(const ConvSpec& spec);

  torch::Tensor forward(const torch::Tensor& x);
  // Effective kernel after normalisation.
  torch::Tensor Weight();
  const ConvSpec& spec() const { return spec_; }

  torch::Tensor weight_v, weight_g, weight_orig, weight, bias, u;

 private:
  ConvSpec spec_;
  int dims_;
};
TORCH_MODULE(NormConv);

ConvSpec Conv1dSpec(int64_t in, int64_t out, int64_t kernel, int64_t stride = 1,
                    int64_t dilation = 1, int64_t groups = 1, int64_t padding = -1);
ConvSpec ConvTranspose1dSpec(int64_t in, int64_t out, int64_t kernel, int64_t stride,
                             int64_t padding);
ConvSpec Conv2dSpec(int64_t in, int64_t out, std::vector<int64_t> kernel,
                    std::vector<int64_t> stride = {1, 1}, std::vector<int64_t> padding = {});
ConvSpec ConvTranspose2dSpec(int64_t in, int64_t out, std::vector<int64_t> kernel,
                             std::vector<int64_t> stride);

// "Same" padding for an odd kernel with dilation.
inline int64_t SamePadding(int64_t kernel, int64_t dilation = 1) {
  return (kernel * dilation - dilation) / 2;
}

int64_t CountParameters(const torch::nn::Module& m);

// Slope patterns of successive leaky-ReLU calls. In kRecord mode each call
// appends its pattern; in kReplay mode calls reuse the recorded patterns in
// order, which freezes the network into the linear piece it was recorded in.
struct ActivationPattern {
  enum class Mode { kRecord, kReplay };
  Mode mode = Mode::kRecord;
  std::vector<torch::Tensor> slopes;
  std::size_t next = 0;
};

// Activation used to build test harnesses. When disabled every leaky-ReLU in
// the generator acts as identity; with a pattern attached it records or
// replays slope patterns. Copies share the pattern.
struct ActivationSwitch {
  bool enabled = true;
  double slope = 0.1;
  std::shared_ptr<ActivationPattern> pattern;
  torch::Tensor operator()(const torch::Tensor& x) const;
};

}  // namespace hifipp::nn

#endif  // HIFIPP_NN_LAYERS_H_
