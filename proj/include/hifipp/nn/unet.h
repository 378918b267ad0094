// include/hifipp/nn/unet.h

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

#ifndef HIFIPP_NN_UNET_H_
#define HIFIPP_NN_UNET_H_

#include <cstdint>
#include <vector>

#include <torch/torch.h>

#include "hifipp/nn/layers.h"

namespace hifipp::nn {

struct UNetConfig {
  int dims = 1;                       // 1: (B, C, T); 2: (B, C, H, W)
  std::vector<int64_t> widths{10, 20, 40, 80};
  int depth = 4;                      // residual convolutions per stack
  int64_t kernel = 5;                 // odd
  int64_t scale = 4;                  // per down block, along every spatial dim
  int64_t in_channels = 1;
  int64_t out_channels = 1;
  NormType norm = NormType::kWeight;

  // Each spatial extent must be a multiple of this.
  int64_t RequiredMultiple() const;
  void Validate() const;
};

// Residual stack: x <- x + conv(act(x)), `depth` times, channel preserving.
class ResStackImpl : public torch::nn::Module {
 public:
  ResStackImpl(int dims, int64_t channels, int depth, int64_t kernel, NormType norm,
               const ActivationSwitch* act);
  torch::Tensor forward(torch::Tensor x);

 private:
  torch::nn::ModuleList convs_;
  const ActivationSwitch* act_;
};
TORCH_MODULE(ResStack);

// Fully convolutional encoder-decoder with additive skip connections.
//
// Encoder: input conv to widths[0], then for each level a residual stack
// followed by a strided down conv (kernel = stride = scale) to the next width;
// the last down conv keeps widths.back(). Decoder mirrors it with transposed
// convs, adds the matching encoder activation, and refines with a residual
// stack on every level except the deepest. An output conv maps widths[0] to
// out_channels.
class UNetImpl : public torch::nn::Module {
 public:
  explicit UNetImpl(const UNetConfig& cfg);

  // Throws ShapeError if a spatial extent is not a RequiredMultiple().
  torch::Tensor forward(const torch::Tensor& x);

  const UNetConfig& config() const { return cfg_; }
  NormConv& output_conv() { return out_conv_; }
  void SetActivation(const ActivationSwitch& act) { act_ = act; }

 private:
  UNetConfig cfg_;
  ActivationSwitch act_;
  NormConv in_conv_{nullptr}, out_conv_{nullptr};
  torch::nn::ModuleList down_stacks_, down_convs_, up_convs_, up_stacks_;
};
TORCH_MODULE(UNet);

}  // namespace hifipp::nn

#endif  // HIFIPP_NN_UNET_H_
