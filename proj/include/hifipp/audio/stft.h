// include/hifipp/audio/stft.h

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

#ifndef HIFIPP_AUDIO_STFT_H_
#define HIFIPP_AUDIO_STFT_H_

#include <cstdint>
#include <string>

#include <torch/torch.h>

#include "hifipp/audio/waveform.h"

namespace hifipp {

enum class WindowType { kHann, kHamming };

std::string WindowName(WindowType w);
WindowType ParseWindow(const std::string& name);

struct StftConfig {
  int n_fft = 1024;
  int hop = 256;
  int win_length = 1024;
  WindowType window = WindowType::kHann;

  int num_bins() const { return n_fft / 2 + 1; }
  // Reflect padding applied on the left/right before framing. Together they
  // equal n_fft - hop, so a hop-multiple input of length L yields L / hop frames.
  int pad_left() const { return (n_fft - hop) / 2; }
  int pad_right() const { return n_fft - hop - pad_left(); }

  // Checks hop <= win_length <= n_fft and the constant-overlap-add property
  // of the window at this hop. Throws ConfigError.
  void Validate() const;

  bool operator==(const StftConfig&) const = default;
};

// Periodic window of win_length, zero-padded symmetrically to n_fft.
torch::Tensor MakeWindow(const StftConfig& cfg, torch::Dtype dtype = torch::kFloat);

// Differentiable STFT/iSTFT pair over the last tensor dimension.
//
// Forward maps (..., T) real to (..., n_fft/2+1, T/hop) complex. Inverse uses
// windowed overlap-add normalised by the squared-window envelope, so
// Inverse(Forward(x)) == x over the whole signal for hop-multiple lengths.
class Stft {
 public:
  explicit Stft(const StftConfig& cfg, torch::Dtype dtype = torch::kFloat);

  const StftConfig& config() const { return cfg_; }
  int64_t NumFrames(int64_t length) const;

  torch::Tensor Forward(const torch::Tensor& x) const;
  // Output length is frames * hop.
  torch::Tensor Inverse(const torch::Tensor& spec) const;

 private:
  StftConfig cfg_;
  torch::Dtype dtype_;
  torch::Tensor window_;
};

struct ComplexSpectrogram {
  torch::Tensor bins;  // complex, (n_fft/2+1, frames)
  StftConfig config;

  int64_t num_bins() const { return bins.size(0); }
  int64_t num_frames() const { return bins.size(1); }
};

// Throws LengthError when the waveform is shorter than n_fft.
ComplexSpectrogram stft(const Waveform& w, const StftConfig& cfg);
Waveform istft(const ComplexSpectrogram& s, int sample_rate);

}  // namespace hifipp

#endif  // HIFIPP_AUDIO_STFT_H_
