// include/hifipp/metrics/evaluate.h

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

#ifndef HIFIPP_METRICS_EVALUATE_H_
#define HIFIPP_METRICS_EVALUATE_H_

#include <filesystem>
#include <functional>
#include <vector>

#include "hifipp/degrade/degrade.h"
#include "hifipp/generator/inference.h"
#include "hifipp/metrics/metrics.h"
#include "hifipp/train/data.h"

namespace hifipp {

struct EvalOptions {
  bool si_sdr = true;
  bool lsd = true;
  std::vector<ExternalMetric> external;
  StftConfig lsd_stft;
  ChunkOptions chunk;
};

// Maps a network input to an estimate of the target.
using EnhanceFn = std::function<Waveform(const Waveform& input)>;

// Runs `model` on the input of every manifest entry (FullInput with `spec`),
// crops or zero-pads the estimate to the target length and scores it. A
// metric that cannot be computed for a row (silent reference, failing
// external command) leaves that cell empty instead of failing.
EvalReport evaluate(const EnhanceFn& model, const Manifest& manifest,
                    const DegradationSpec& spec, const EvalOptions& opts);

// Same with the generator stored in `checkpoint`; BWE inputs use the
// checkpoint's degradation settings.
EvalReport evaluate(const std::filesystem::path& checkpoint, const Manifest& manifest,
                    const EvalOptions& opts);

}  // namespace hifipp

#endif  // HIFIPP_METRICS_EVALUATE_H_
