// src/audio/mel.cc

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

#include "hifipp/audio/mel.h"

#include <cmath>
#include <string>
#include <vector>

#include "hifipp/errors.h"

namespace hifipp {

namespace {
constexpr double kLinearStep = 200.0 / 3.0;
constexpr double kBreakHz = 1000.0;
constexpr double kBreakMel = kBreakHz / kLinearStep;
const double kLogStep = std::log(6.4) / 27.0;
}  // namespace

double HzToMel(double hz) {
  if (hz < kBreakHz) return hz / kLinearStep;
  return kBreakMel + std::log(hz / kBreakHz) / kLogStep;
}

double MelToHz(double mel) {
  if (mel < kBreakMel) return mel * kLinearStep;
  return kBreakHz * std::exp(kLogStep * (mel - kBreakMel));
}

MelFilterbank MelFilterbank::Build(const MelConfig& cfg) {
  const double f_max = cfg.effective_f_max();
  if (cfg.sample_rate <= 0 || cfg.n_fft <= 0 || cfg.n_mels <= 0)
    throw ConfigError("mel filterbank needs positive sample_rate, n_fft and n_mels");
  if (!(cfg.f_min >= 0.0 && cfg.f_min < f_max && f_max <= cfg.sample_rate / 2.0))
    throw ConfigError("mel filterbank needs 0 <= f_min < f_max <= sample_rate/2");
  if (!(cfg.floor > 0.0)) throw ConfigError("mel floor must be positive");

  const int bins = cfg.n_fft / 2 + 1;
  const double mel_lo = HzToMel(cfg.f_min);
  const double mel_hi = HzToMel(f_max);
  std::vector<double> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));

  std::vector<double> w(static_cast<std::size_t>(cfg.n_mels) * bins, 0.0);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    const double norm = 2.0 / (hi - lo);
    double row_sum = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / cfg.n_fft;
      const double up = (f - lo) / (mid - lo);
      const double down = (hi - f) / (hi - mid);
      const double v = std::max(0.0, std::min(up, down)) * norm;
      w[static_cast<std::size_t>(m) * bins + k] = v;
      row_sum += v;
    }
    if (row_sum <= 0.0)
      throw ConfigError("mel filter " + std::to_string(m) +
                        " covers no FFT bin; lower n_mels or raise n_fft");
  }
  MelFilterbank fb;
  fb.cfg_ = cfg;
  fb.weights_ = torch::tensor(w, torch::kDouble).view({cfg.n_mels, bins}).to(torch::kFloat);
  return fb;
}

LogMel::LogMel(const MelFilterbank& fb, const StftConfig& cfg, torch::Dtype dtype)
    : stft_(cfg, dtype), weights_(fb.weights().to(dtype)), floor_(fb.config().floor) {
  if (fb.num_bins() != cfg.num_bins())
    throw ShapeError("mel filterbank has " + std::to_string(fb.num_bins()) +
                     " bins but the STFT produces " + std::to_string(cfg.num_bins()));
}

torch::Tensor LogMel::Linear(const torch::Tensor& x) const {
  auto mag = torch::abs(stft_.Forward(x));
  return torch::matmul(weights_.to(mag.scalar_type()), mag);
}

torch::Tensor LogMel::operator()(const torch::Tensor& x) const {
  return torch::log(torch::clamp_min(Linear(x), floor_));
}

MelSpectrogram mel_spectrogram(const Waveform& w, const MelFilterbank& fb, const StftConfig& cfg) {
  if (fb.num_bins() != cfg.num_bins())
    throw ShapeError("mel filterbank/STFT size mismatch: " + std::to_string(fb.num_bins()) +
                     " vs " + std::to_string(cfg.num_bins()) + " bins");
  if (fb.config().sample_rate != w.sample_rate)
    throw ParameterError("mel filterbank built for " + std::to_string(fb.config().sample_rate) +
                         " Hz applied to " + std::to_string(w.sample_rate) + " Hz audio");
  LogMel front_end(fb, cfg);
  torch::NoGradGuard no_grad;
  return MelSpectrogram{front_end(w.ToTensor())};
}

}  // namespace hifipp
