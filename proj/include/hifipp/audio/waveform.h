// include/hifipp/audio/waveform.h

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

#ifndef HIFIPP_AUDIO_WAVEFORM_H_
#define HIFIPP_AUDIO_WAVEFORM_H_

#include <cstddef>
#include <span>
#include <vector>

#include <torch/torch.h>

namespace hifipp {

// Mono audio with its sample rate. Samples are nominally in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 0;

  Waveform() = default;
  Waveform(std::vector<float> s, int rate) : samples(std::move(s)), sample_rate(rate) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::span<const float> view() const { return samples; }

  // Throws if sample_rate <= 0 or any sample is NaN/Inf.
  void Validate() const;

  // 1-D float32 tensor sharing no storage with this waveform.
  torch::Tensor ToTensor() const;
  static Waveform FromTensor(const torch::Tensor& t, int sample_rate);
};

double Energy(std::span<const float> x);
double Rms(std::span<const float> x);

}  // namespace hifipp

#endif  // HIFIPP_AUDIO_WAVEFORM_H_
