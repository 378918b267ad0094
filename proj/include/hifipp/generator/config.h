// include/hifipp/generator/config.h

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

#ifndef HIFIPP_GENERATOR_CONFIG_H_
#define HIFIPP_GENERATOR_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "hifipp/audio/stft.h"
#include "hifipp/nn/layers.h"

namespace hifipp {

// HiFi-GAN style mel-to-waveform upsampler: transposed convs interleaved
// with multi-receptive-field residual blocks.
struct UpsamplerConfig {
  int64_t initial_channels = 128;
  std::vector<int64_t> rates{8, 8, 2, 2};
  std::vector<int64_t> kernels{16, 16, 4, 4};
  std::vector<int64_t> resblock_kernels{3, 7, 11};
  std::vector<std::vector<int64_t>> resblock_dilations{{1, 3, 5}, {1, 3, 5}, {1, 3, 5}};
  int64_t out_channels = 8;
  // Squash the output with tanh (only for the vanilla waveform head).
  bool tanh_output = false;

  int64_t StageChannels(std::size_t stage) const { return initial_channels >> (stage + 1); }
  int64_t TotalRate() const;
};

enum class MergeRule { kSum, kLearned };

struct GeneratorConfig {
  int sample_rate = 16000;
  int n_mels = 80;
  StftConfig mel_stft;  // hop doubles as the upsampling factor

  bool use_spectral_unet = true;
  std::vector<int64_t> spectral_unet_widths{8, 16, 32, 64};
  int spectral_unet_depth = 4;

  UpsamplerConfig upsampler;

  bool use_wave_unet = true;
  std::vector<int64_t> wave_unet_widths{10, 20, 40, 80};
  int wave_unet_depth = 4;
  int64_t wave_unet_out_channels = 4;

  bool use_spectral_masknet = true;
  std::vector<int64_t> masknet_widths{8, 12, 24, 32};
  int masknet_depth = 4;
  StftConfig masknet_stft;
  MergeRule merge = MergeRule::kSum;

  nn::NormType norm = nn::NormType::kWeight;

  int hop() const { return mel_stft.hop; }
  // Channels entering the spectral mask stage (or the final merge).
  int64_t StreamChannels() const;
  // Input lengths must be a multiple of this; the generator pads otherwise.
  int64_t LengthMultiple() const;
  // Throws ConfigError on inconsistent settings.
  void Validate() const;
};

std::string MergeRuleName(MergeRule m);
MergeRule ParseMergeRule(const std::string& name);

// Named configurations. "default" is the full model; "tiny" halves every
// width; "ablation.no_spectralunet", "ablation.no_waveunet" and
// "ablation.no_masknet" drop one module and grow the upsampler until the
// parameter count matches the default; "vanilla" is the plain mel-to-wave
// upsampler with 256 initial channels.
GeneratorConfig GeneratorPreset(const std::string& name, int sample_rate = 16000);
std::vector<std::string> GeneratorPresetNames();

// Upsampler initial channel count that brings `cfg`'s parameter count
// closest to `target_params`.
int64_t MatchUpsamplerChannels(GeneratorConfig cfg, int64_t target_params);

}  // namespace hifipp

#endif  // HIFIPP_GENERATOR_CONFIG_H_
