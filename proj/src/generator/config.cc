// src/generator/config.cc

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

#include "hifipp/generator/config.h"

#include <numeric>

#include "hifipp/errors.h"
#include "hifipp/generator/generator.h"

namespace hifipp {

int64_t UpsamplerConfig::TotalRate() const {
  return std::accumulate(rates.begin(), rates.end(), int64_t{1}, std::multiplies<>());
}

std::string MergeRuleName(MergeRule m) { return m == MergeRule::kSum ? "sum" : "learned"; }

MergeRule ParseMergeRule(const std::string& name) {
  if (name == "sum") return MergeRule::kSum;
  if (name == "learned") return MergeRule::kLearned;
  throw ConfigError("unknown merge rule '" + name + "'");
}

int64_t GeneratorConfig::StreamChannels() const {
  return use_wave_unet ? wave_unet_out_channels : upsampler.out_channels;
}

int64_t GeneratorConfig::LengthMultiple() const {
  int64_t m = hop();
  if (use_wave_unet) {
    int64_t w = 1;
    for (std::size_t i = 0; i < wave_unet_widths.size(); ++i) w *= 4;
    m = std::lcm(m, w);
  }
  if (use_spectral_masknet) m = std::lcm(m, static_cast<int64_t>(masknet_stft.hop));
  return m;
}

namespace {
void CheckIncreasing(const std::vector<int64_t>& w, const std::string& name) {
  if (w.empty()) throw ConfigError(name + " must not be empty");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 1) throw ConfigError(name + " entries must be positive");
    if (i > 0 && w[i] <= w[i - 1]) throw ConfigError(name + " must be strictly increasing");
  }
}
}  // namespace

void GeneratorConfig::Validate() const {
  if (sample_rate <= 0) throw ConfigError("generator.sample_rate must be positive");
  if (n_mels <= 0) throw ConfigError("generator.n_mels must be positive");
  mel_stft.Validate();
  const auto& up = upsampler;
  if (up.rates.empty() || up.rates.size() != up.kernels.size())
    throw ConfigError("upsampler rates and kernels must be non-empty and equally long");
  if (up.TotalRate() != hop())
    throw ConfigError("product of upsample rates (" + std::to_string(up.TotalRate()) +
                      ") must equal the hop (" + std::to_string(hop()) + ")");
  for (std::size_t i = 0; i < up.rates.size(); ++i) {
    if ((up.kernels[i] - up.rates[i]) % 2 != 0 || up.kernels[i] < up.rates[i])
      throw ConfigError("upsample kernel - rate must be even and non-negative");
    if (up.StageChannels(i) < 1)
      throw ConfigError("upsampler initial_channels too small for the number of stages");
  }
  if (up.resblock_kernels.size() != up.resblock_dilations.size())
    throw ConfigError("resblock kernels and dilations must be equally long");
  if (up.out_channels < 1) throw ConfigError("upsampler out_channels must be >= 1");
  if (use_spectral_unet) CheckIncreasing(spectral_unet_widths, "spectral_unet_widths");
  if (use_wave_unet) {
    CheckIncreasing(wave_unet_widths, "wave_unet_widths");
    if (wave_unet_out_channels < 1) throw ConfigError("wave_unet_out_channels must be >= 1");
  }
  if (use_spectral_masknet) {
    CheckIncreasing(masknet_widths, "masknet_widths");
    masknet_stft.Validate();
  }
  if (!use_wave_unet && !use_spectral_masknet && up.out_channels != 1)
    throw ConfigError("without WaveUNet and SpectralMaskNet the upsampler must emit one channel");
  if (use_wave_unet && !use_spectral_masknet && wave_unet_out_channels != 1 &&
      merge == MergeRule::kLearned)
    throw ConfigError("a learned merge requires the SpectralMaskNet");
}

int64_t MatchUpsamplerChannels(GeneratorConfig cfg, int64_t target_params) {
  auto count = [&](int64_t c) {
    cfg.upsampler.initial_channels = c;
    Generator g(cfg);
    return nn::CountParameters(*g);
  };
  const int64_t min_c = int64_t{1} << cfg.upsampler.rates.size();
  int64_t lo = min_c, hi = 4096;
  while (hi - lo > 1) {
    const int64_t mid = (lo + hi) / 2;
    (count(mid) <= target_params ? lo : hi) = mid;
  }
  return std::llabs(count(lo) - target_params) <= std::llabs(count(hi) - target_params) ? lo : hi;
}

GeneratorConfig GeneratorPreset(const std::string& name, int sample_rate) {
  GeneratorConfig cfg;
  cfg.sample_rate = sample_rate;
  if (name == "default") return cfg;
  if (name == "tiny") {
    cfg.spectral_unet_widths = {4, 8, 16, 32};
    cfg.wave_unet_widths = {5, 10, 20, 40};
    cfg.masknet_widths = {4, 6, 12, 16};
    cfg.upsampler.initial_channels = 64;
    return cfg;
  }
  if (name == "vanilla") {
    cfg.use_spectral_unet = cfg.use_wave_unet = cfg.use_spectral_masknet = false;
    cfg.upsampler.initial_channels = 256;
    cfg.upsampler.out_channels = 1;
    cfg.upsampler.tanh_output = true;
    return cfg;
  }
  const int64_t baseline = [&] {
    Generator g(cfg);
    return nn::CountParameters(*g);
  }();
  if (name == "ablation.no_spectralunet") {
    cfg.use_spectral_unet = false;
  } else if (name == "ablation.no_waveunet") {
    cfg.use_wave_unet = false;
    cfg.upsampler.out_channels = cfg.wave_unet_out_channels;
  } else if (name == "ablation.no_masknet") {
    cfg.use_spectral_masknet = false;
    cfg.wave_unet_out_channels = 1;
  } else {
    throw ConfigError("unknown generator preset '" + name + "'");
  }
  cfg.upsampler.initial_channels = MatchUpsamplerChannels(cfg, baseline);
  return cfg;
}

std::vector<std::string> GeneratorPresetNames() {
  return {"default", "tiny", "vanilla", "ablation.no_spectralunet", "ablation.no_waveunet",
          "ablation.no_masknet"};
}

}  // namespace hifipp
