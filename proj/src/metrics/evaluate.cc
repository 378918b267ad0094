// src/metrics/evaluate.cc

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

#include "hifipp/metrics/evaluate.h"

#include "hifipp/errors.h"
#include "hifipp/train/trainer.h"
#include "hifipp/util/runtime.h"

namespace hifipp {

EvalReport evaluate(const EnhanceFn& model, const Manifest& manifest,
                    const DegradationSpec& spec, const EvalOptions& opts) {
  EvalReport report;
  report.has_si_sdr = opts.si_sdr;
  report.has_lsd = opts.lsd;
  for (const auto& e : opts.external) report.external_names.push_back(e.name);
  for (const auto& entry : manifest.entries) {
    const auto clip = LoadClip(entry, manifest.sample_rate);
    auto est = model(FullInput(clip, spec));
    est.samples.resize(clip.target.size(), 0.0f);
    EvalRow row;
    row.id = entry.id;
    if (opts.si_sdr) {
      try {
        row.si_sdr = si_sdr(est, clip.target);
      } catch (const DegenerateInputError& e) {
        LogWarning(entry.id + ": " + e.what());
      }
    }
    if (opts.lsd) {
      try {
        row.lsd = lsd(est, clip.target, opts.lsd_stft);
      } catch (const LengthError& e) {
        LogWarning(entry.id + ": " + e.what());
      }
    }
    for (const auto& ext : opts.external) row.external.push_back(ext.Evaluate(est, clip.target));
    report.rows.push_back(std::move(row));
  }
  return report;
}

EvalReport evaluate(const std::filesystem::path& checkpoint, const Manifest& manifest,
                    const EvalOptions& opts) {
  auto model = LoadModel(checkpoint);
  if (manifest.sample_rate != model.config.sample_rate)
    throw ConfigError("manifest is at " + std::to_string(manifest.sample_rate) +
                      " Hz but the checkpoint expects " +
                      std::to_string(model.config.sample_rate) + " Hz");
  auto fn = [&](const Waveform& x) { return enhance_waveform(model.generator, x, opts.chunk); };
  return evaluate(fn, manifest, model.config.degrade, opts);
}

}  // namespace hifipp
