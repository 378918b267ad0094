// include/hifipp/degrade/degrade.h

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

#ifndef HIFIPP_DEGRADE_DEGRADE_H_
#define HIFIPP_DEGRADE_DEGRADE_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hifipp/audio/waveform.h"
#include "hifipp/degrade/filter_design.h"

namespace hifipp {

enum class Task { kBwe, kSe };

std::string TaskName(Task t);
Task ParseTask(const std::string& name);

// Parameters of the transform x = f(y).
//
// BWE: low-pass at source_rate/2 with a randomly drawn family and order,
// downsample to source_rate, upsample back to target_rate.
// SE: additive noise at snr_db.
struct DegradationSpec {
  Task task = Task::kBwe;
  int source_rate = 2000;
  int target_rate = 16000;
  std::vector<FilterFamily> filter_families{std::begin(kAllFilterFamilies),
                                            std::end(kAllFilterFamilies)};
  int min_order = 2;
  int max_order = 10;
  RippleSpec ripple;
  double snr_db = 10.0;
  uint64_t seed = 0;
  // Integer-lag alignment of the degraded signal against the target.
  bool align = true;
  int max_align_lag = 1024;

  double cutoff_hz() const { return source_rate / 2.0; }
  // Throws ParameterError on inconsistent fields.
  void Validate() const;
};

struct BweDraw {
  FilterFamily family = FilterFamily::kButterworth;
  int order = 0;
};

// Uniform draw over spec.filter_families and [min_order, max_order].
BweDraw DrawFilter(const DegradationSpec& spec, std::mt19937_64& rng);

struct DegradeResult {
  Waveform output;
  BweDraw draw;
  int lag = 0;  // samples the output was advanced by during alignment
};

// Lag in [-max_lag, max_lag] maximising sum_n reference[n] * delayed[n + lag].
int EstimateLag(std::span<const float> reference, std::span<const float> delayed, int max_lag);

// Shifts `x` left by `lag` samples (right when negative), zero filling.
std::vector<float> ShiftSignal(std::span<const float> x, int lag);

// Band-limits y per the spec. Output has len(y) samples at y.sample_rate.
DegradeResult degrade_bwe_detailed(const Waveform& y, const DegradationSpec& spec,
                                   std::mt19937_64& rng);
Waveform degrade_bwe(const Waveform& y, const DegradationSpec& spec, std::mt19937_64& rng);

// Same transform with a fixed filter instead of a random draw.
DegradeResult degrade_bwe_with(const Waveform& y, const DegradationSpec& spec, const BweDraw& draw);

// y + g n with g = ||y|| / (||n|| 10^(snr_db/20)).
// Throws DegenerateInputError if y or n is silent, LengthError/ParameterError
// on length or rate mismatch.
Waveform mix_at_snr(const Waveform& y, const Waveform& n, double snr_db);
double NoiseGainForSnr(std::span<const float> y, std::span<const float> n, double snr_db);

}  // namespace hifipp

#endif  // HIFIPP_DEGRADE_DEGRADE_H_
