// include/hifipp/generator/generator.h

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

#ifndef HIFIPP_GENERATOR_GENERATOR_H_
#define HIFIPP_GENERATOR_GENERATOR_H_

#include <optional>
#include <vector>

#include <torch/torch.h>

#include "hifipp/audio/mel.h"
#include "hifipp/audio/waveform.h"
#include "hifipp/generator/config.h"
#include "hifipp/nn/layers.h"
#include "hifipp/nn/unet.h"

namespace hifipp {

// 2-D U-Net over the log-mel image with a global residual: the network
// predicts a correction added to its input. Mel and frame axes are padded
// (edge replicate) to the U-Net multiple and cropped back.
class SpectralUNetImpl : public torch::nn::Module {
 public:
  SpectralUNetImpl(const std::vector<int64_t>& widths, int depth, nn::NormType norm);

  // (B, n_mels, frames) -> same shape.
  torch::Tensor forward(const torch::Tensor& mel);
  nn::UNet& unet() { return unet_; }

 private:
  nn::UNet unet_{nullptr};
};
TORCH_MODULE(SpectralUNet);

// Multi-receptive-field residual block: for each dilation,
// x <- x + conv(act(conv_dilated(act(x)))).
class MrfBlockImpl : public torch::nn::Module {
 public:
  MrfBlockImpl(int64_t channels, int64_t kernel, const std::vector<int64_t>& dilations,
               nn::NormType norm, const nn::ActivationSwitch* act);
  torch::Tensor forward(torch::Tensor x);

 private:
  torch::nn::ModuleList convs1_, convs2_;
  const nn::ActivationSwitch* act_;
};
TORCH_MODULE(MrfBlock);

class UpsamplerImpl : public torch::nn::Module {
 public:
  UpsamplerImpl(int64_t in_channels, const UpsamplerConfig& cfg, nn::NormType norm);

  // (B, n_mels, frames) -> (B, out_channels, frames * TotalRate()).
  torch::Tensor forward(const torch::Tensor& features);
  void SetActivation(const nn::ActivationSwitch& act) { act_ = act; }

 private:
  UpsamplerConfig cfg_;
  nn::ActivationSwitch act_;
  nn::NormConv conv_pre_{nullptr}, conv_post_{nullptr};
  torch::nn::ModuleList ups_, mrfs_;
};
TORCH_MODULE(Upsampler);

// Intermediate tensors of the spectral masking stage.
struct MaskTrace {
  torch::Tensor input_spec;   // (B, m, bins, frames) complex
  torch::Tensor mask;         // (B, m, bins, frames) positive
  torch::Tensor masked_spec;  // input_spec * mask
  torch::Tensor pre_merge;    // (B, m, T)
  torch::Tensor output;       // (B, T)
};

// Per-channel STFT, a 2-D U-Net mapping log-amplitudes to softplus factors,
// amplitude-only masking, per-channel iSTFT and a channel merge.
class SpectralMaskNetImpl : public torch::nn::Module {
 public:
  SpectralMaskNetImpl(int64_t channels, const std::vector<int64_t>& widths, int depth,
                      const StftConfig& stft, MergeRule merge, nn::NormType norm);

  // (B, m, T) -> (B, T). T must be a multiple of the STFT hop and >= n_fft.
  torch::Tensor forward(const torch::Tensor& streams);
  // When mask_override is set it replaces the predicted factors; it must
  // broadcast against (B, m, bins, frames).
  MaskTrace Trace(const torch::Tensor& streams,
                  const std::optional<torch::Tensor>& mask_override = std::nullopt);

  torch::Tensor Merge(const torch::Tensor& pre_merge);
  nn::UNet& unet() { return unet_; }

 private:
  int64_t channels_;
  Stft stft_;
  MergeRule merge_;
  nn::UNet unet_{nullptr};
  nn::NormConv merge_conv_{nullptr};
};
TORCH_MODULE(SpectralMaskNet);

// The full generator: log-mel of the input -> SpectralUNet -> Upsampler ->
// concat input waveform -> WaveUNet -> SpectralMaskNet. Submodules disabled
// in the config are skipped.
class GeneratorImpl : public torch::nn::Module {
 public:
  explicit GeneratorImpl(const GeneratorConfig& cfg);

  // (B, T) or (T) -> same shape. Lengths that are not a LengthMultiple() are
  // zero-padded at the end and cropped back.
  torch::Tensor forward(const torch::Tensor& x);

  torch::Tensor LogMelOf(const torch::Tensor& x) const;
  torch::Tensor SpectralUNetForward(const torch::Tensor& mel);
  torch::Tensor UpsamplerForward(const torch::Tensor& features);
  torch::Tensor WaveUNetForward(const torch::Tensor& streams);
  torch::Tensor MaskNetForward(const torch::Tensor& streams);

  const GeneratorConfig& config() const { return cfg_; }
  SpectralUNet& spectral_unet() { return spectral_unet_; }
  Upsampler& upsampler() { return upsampler_; }
  nn::UNet& wave_unet() { return wave_unet_; }
  SpectralMaskNet& masknet() { return masknet_; }

  // Replaces every leaky-ReLU by `act` (identity when act.enabled is false).
  void SetActivation(const nn::ActivationSwitch& act);

 private:
  torch::Tensor ForwardAligned(const torch::Tensor& x);

  GeneratorConfig cfg_;
  MelFilterbank fb_;
  LogMel log_mel_;
  SpectralUNet spectral_unet_{nullptr};
  Upsampler upsampler_{nullptr};
  nn::UNet wave_unet_{nullptr};
  SpectralMaskNet masknet_{nullptr};
};
TORCH_MODULE(Generator);

// Convenience: run the generator on a single waveform without gradients.
Waveform RunGenerator(Generator& g, const Waveform& x);

}  // namespace hifipp

#endif  // HIFIPP_GENERATOR_GENERATOR_H_
