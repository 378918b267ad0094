// src/degrade/degrade.cc

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

#include "hifipp/degrade/degrade.h"

#include <algorithm>
#include <cmath>

#include <torch/torch.h>

#include "hifipp/audio/resample.h"
#include "hifipp/errors.h"

namespace hifipp {

std::string TaskName(Task t) { return t == Task::kBwe ? "bwe" : "se"; }

Task ParseTask(const std::string& name) {
  if (name == "bwe") return Task::kBwe;
  if (name == "se") return Task::kSe;
  throw ConfigError("unknown task '" + name + "' (expected bwe or se)");
}

void DegradationSpec::Validate() const {
  if (task == Task::kBwe) {
    if (source_rate <= 0 || target_rate <= 0)
      throw ParameterError("BWE rates must be positive");
    if (source_rate >= target_rate)
      throw ParameterError("BWE source rate " + std::to_string(source_rate) +
                           " must be below target rate " + std::to_string(target_rate));
    if (filter_families.empty()) throw ParameterError("BWE needs at least one filter family");
    if (min_order < 1 || max_order > 10 || min_order > max_order)
      throw ParameterError("filter order range [" + std::to_string(min_order) + ", " +
                           std::to_string(max_order) + "] must lie within [1, 10]");
  } else if (!std::isfinite(snr_db)) {
    throw ParameterError("SE snr_db must be finite");
  }
}

BweDraw DrawFilter(const DegradationSpec& spec, std::mt19937_64& rng) {
  // Modulo draws keep the sequence identical across standard libraries.
  BweDraw d;
  d.family = spec.filter_families[rng() % spec.filter_families.size()];
  d.order = spec.min_order + static_cast<int>(rng() % (spec.max_order - spec.min_order + 1));
  return d;
}

int EstimateLag(std::span<const float> reference, std::span<const float> delayed, int max_lag) {
  const int64_t n = static_cast<int64_t>(std::max(reference.size(), delayed.size()));
  if (n == 0) return 0;
  int64_t fft_len = 1;
  while (fft_len < 2 * n) fft_len <<= 1;
  auto to_tensor = [&](std::span<const float> x) {
    auto t = torch::zeros({fft_len}, torch::kDouble);
    auto acc = t.accessor<double, 1>();
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] = x[i];
    return t;
  };
  auto r = torch::fft::rfft(to_tensor(reference));
  auto d = torch::fft::rfft(to_tensor(delayed));
  auto corr = torch::fft::irfft(torch::conj(r) * d, fft_len);
  auto acc = corr.accessor<double, 1>();
  int best = 0;
  double best_v = -1e300;
  const int limit = static_cast<int>(std::min<int64_t>(max_lag, n - 1));
  // Ties resolve toward the smallest |lag|.
  for (int mag = 0; mag <= limit; ++mag) {
    for (int lag : {mag, -mag}) {
      const double v = acc[lag >= 0 ? lag : fft_len + lag];
      if (v > best_v) {
        best_v = v;
        best = lag;
      }
      if (mag == 0) break;
    }
  }
  return best;
}

std::vector<float> ShiftSignal(std::span<const float> x, int lag) {
  const int64_t n = static_cast<int64_t>(x.size());
  std::vector<float> out(x.size(), 0.0f);
  for (int64_t i = 0; i < n; ++i) {
    const int64_t src = i + lag;
    if (src >= 0 && src < n) out[i] = x[src];
  }
  return out;
}

DegradeResult degrade_bwe_with(const Waveform& y, const DegradationSpec& spec,
                               const BweDraw& draw) {
  spec.Validate();
  if (spec.task != Task::kBwe) throw ParameterError("degrade_bwe needs a BWE spec");
  if (y.sample_rate != spec.target_rate)
    throw ParameterError("degrade_bwe input at " + std::to_string(y.sample_rate) +
                         " Hz, spec expects " + std::to_string(spec.target_rate) + " Hz");

  const auto filter =
      design_lowpass(draw.family, draw.order, spec.cutoff_hz(), spec.target_rate, spec.ripple);
  const Waveform filtered = apply_filter(y, filter);
  const Waveform low = resample(filtered, spec.source_rate);
  Waveform back = resample(low, spec.target_rate);
  back.samples.resize(y.size(), 0.0f);

  DegradeResult result;
  result.draw = draw;
  if (spec.align) {
    result.lag = EstimateLag(y.view(), back.view(), spec.max_align_lag);
    back.samples = ShiftSignal(back.view(), result.lag);
  }
  result.output = std::move(back);
  return result;
}

DegradeResult degrade_bwe_detailed(const Waveform& y, const DegradationSpec& spec,
                                   std::mt19937_64& rng) {
  spec.Validate();
  return degrade_bwe_with(y, spec, DrawFilter(spec, rng));
}

Waveform degrade_bwe(const Waveform& y, const DegradationSpec& spec, std::mt19937_64& rng) {
  return degrade_bwe_detailed(y, spec, rng).output;
}

double NoiseGainForSnr(std::span<const float> y, std::span<const float> n, double snr_db) {
  if (!std::isfinite(snr_db)) throw ParameterError("snr_db must be finite");
  const double ey = Energy(y);
  const double en = Energy(n);
  if (ey <= 0.0) throw DegenerateInputError("mix_at_snr: clean signal is silent");
  if (en <= 0.0) throw DegenerateInputError("mix_at_snr: noise signal is silent");
  return std::sqrt(ey) / (std::sqrt(en) * std::pow(10.0, snr_db / 20.0));
}

Waveform mix_at_snr(const Waveform& y, const Waveform& n, double snr_db) {
  if (y.size() != n.size())
    throw LengthError("mix_at_snr: signal has " + std::to_string(y.size()) +
                      " samples, noise has " + std::to_string(n.size()));
  if (y.sample_rate != n.sample_rate)
    throw ParameterError("mix_at_snr: sample rates differ");
  const double g = NoiseGainForSnr(y.view(), n.view(), snr_db);
  std::vector<float> out(y.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<float>(y.samples[i] + g * n.samples[i]);
  return Waveform(std::move(out), y.sample_rate);
}

}  // namespace hifipp
