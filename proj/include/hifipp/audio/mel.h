// include/hifipp/audio/mel.h

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

#ifndef HIFIPP_AUDIO_MEL_H_
#define HIFIPP_AUDIO_MEL_H_

#include <torch/torch.h>

#include "hifipp/audio/stft.h"
#include "hifipp/audio/waveform.h"

namespace hifipp {

struct MelConfig {
  int sample_rate = 16000;
  int n_fft = 1024;
  int n_mels = 80;
  double f_min = 0.0;
  double f_max = 0.0;  // <= 0 means sample_rate / 2
  double floor = 1e-5;

  double effective_f_max() const { return f_max > 0.0 ? f_max : sample_rate / 2.0; }
};

// Slaney-style mel scale (linear below 1 kHz, logarithmic above).
double HzToMel(double hz);
double MelToHz(double mel);

// Triangular, area-normalised filters, (n_mels, n_fft/2+1), non-negative.
class MelFilterbank {
 public:
  // Throws ConfigError when the band limits are invalid or a filter ends up
  // with no FFT bin under it.
  static MelFilterbank Build(const MelConfig& cfg);

  const MelConfig& config() const { return cfg_; }
  int n_mels() const { return cfg_.n_mels; }
  int num_bins() const { return cfg_.n_fft / 2 + 1; }
  const torch::Tensor& weights() const { return weights_; }

 private:
  MelConfig cfg_;
  torch::Tensor weights_;  // float32
};

struct MelSpectrogram {
  torch::Tensor values;  // (n_mels, frames), natural-log amplitude

  int64_t n_mels() const { return values.size(0); }
  int64_t num_frames() const { return values.size(1); }
};

// Differentiable log-mel front end over (..., T) signals; returns
// (..., n_mels, T/hop).
class LogMel {
 public:
  LogMel(const MelFilterbank& fb, const StftConfig& cfg, torch::Dtype dtype = torch::kFloat);

  torch::Tensor operator()(const torch::Tensor& x) const;
  // Linear-amplitude mel energies before the floor clamp and log.
  torch::Tensor Linear(const torch::Tensor& x) const;

  const Stft& stft() const { return stft_; }
  double floor() const { return floor_; }

 private:
  Stft stft_;
  torch::Tensor weights_;
  double floor_;
};

// Throws ShapeError if the filterbank was built for another n_fft and
// ParameterError if it was built for another sample rate.
MelSpectrogram mel_spectrogram(const Waveform& w, const MelFilterbank& fb, const StftConfig& cfg);

}  // namespace hifipp

#endif  // HIFIPP_AUDIO_MEL_H_
