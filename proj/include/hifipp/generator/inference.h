// include/hifipp/generator/inference.h

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

#ifndef HIFIPP_GENERATOR_INFERENCE_H_
#define HIFIPP_GENERATOR_INFERENCE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hifipp/audio/waveform.h"
#include "hifipp/generator/generator.h"

namespace hifipp {

struct ChunkOptions {
  int64_t window = int64_t{1} << 18;
  int64_t overlap = 4096;
};

using SignalFn = std::function<std::vector<float>(std::span<const float>)>;

// Applies a length-preserving `fn` to windows of x and crossfades the
// overlaps linearly. Inputs no longer than one window go through `fn` in one
// call. Throws ParameterError unless 0 <= overlap < window.
std::vector<float> ChunkedApply(std::span<const float> x, const SignalFn& fn,
                                const ChunkOptions& opts = {});

// Runs the generator without gradients, chunked for long inputs. The output
// has exactly as many samples as x.
Waveform enhance_waveform(Generator& g, const Waveform& x, const ChunkOptions& opts = {});

}  // namespace hifipp

#endif  // HIFIPP_GENERATOR_INFERENCE_H_
