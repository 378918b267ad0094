// include/hifipp/audio/resample.h

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

#ifndef HIFIPP_AUDIO_RESAMPLE_H_
#define HIFIPP_AUDIO_RESAMPLE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "hifipp/audio/waveform.h"

namespace hifipp {

struct ResampleOptions {
  int taps_per_phase = 64;
  // Kaiser beta; 7.857 corresponds to an 80 dB design target.
  double kaiser_beta = 7.857;
};

// Zero-phase Kaiser-windowed sinc low-pass for rational conversion up/down,
// cutoff at 1 / max(up, down) of the upsampled Nyquist, gain `up`.
std::vector<double> DesignPolyphaseFilter(int up, int down, const ResampleOptions& opts = {});

// Rational-rate polyphase resampling. Output length is
// round(x.size() * up / down); the filter delay is compensated so the output
// stays time-aligned with the input.
std::vector<float> ResamplePoly(std::span<const float> x, int up, int down,
                                const ResampleOptions& opts = {});

// Throws ParameterError when target_rate <= 0. Returns the input unchanged
// when the rates already match.
Waveform resample(const Waveform& w, int target_rate, const ResampleOptions& opts = {});

}  // namespace hifipp

#endif  // HIFIPP_AUDIO_RESAMPLE_H_
