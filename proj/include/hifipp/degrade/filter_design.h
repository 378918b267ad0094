// include/hifipp/degrade/filter_design.h

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

#ifndef HIFIPP_DEGRADE_FILTER_DESIGN_H_
#define HIFIPP_DEGRADE_FILTER_DESIGN_H_

#include <complex>
#include <string>
#include <vector>

#include "hifipp/audio/waveform.h"

namespace hifipp {

enum class FilterFamily { kButterworth, kChebyshev1, kBessel, kElliptic };

inline constexpr FilterFamily kAllFilterFamilies[] = {
    FilterFamily::kButterworth, FilterFamily::kChebyshev1, FilterFamily::kBessel,
    FilterFamily::kElliptic};

std::string FamilyName(FilterFamily f);
FilterFamily ParseFamily(const std::string& name);

struct RippleSpec {
  double passband_db = 1.0;  // Chebyshev I and elliptic
  double stopband_db = 60.0;  // elliptic
};

// b0 + b1 z^-1 + b2 z^-2 over 1 + a1 z^-1 + a2 z^-2.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Zeros, poles and gain of a continuous- or discrete-time filter.
struct Zpk {
  std::vector<std::complex<double>> zeros;
  std::vector<std::complex<double>> poles;
  double gain = 1.0;
};

// Analog low-pass prototypes with a 1 rad/s cutoff. The Bessel prototype is
// normalised so its magnitude is -3 dB at the cutoff.
Zpk ButterworthPrototype(int order);
Zpk Chebyshev1Prototype(int order, double ripple_db);
Zpk BesselPrototype(int order);
Zpk EllipticPrototype(int order, double ripple_db, double stopband_db);

struct FilterDesign {
  FilterFamily family = FilterFamily::kButterworth;
  int order = 0;
  double cutoff_hz = 0.0;
  int sample_rate = 0;
  std::vector<Biquad> sections;

  std::complex<double> Response(double hz) const;
  double MagnitudeDb(double hz) const;
  // Every section's poles lie strictly inside the unit circle.
  bool IsStable() const;
};

// Digital low-pass by bilinear transform with a pre-warped cutoff.
// Throws ParameterError unless 0 < cutoff_hz < rate/2 and order is in [1, 10].
FilterDesign design_lowpass(FilterFamily family, int order, double cutoff_hz, int rate,
                            const RippleSpec& ripple = {});

// Causal cascade filtering (transposed direct form II, double accumulators).
// Throws ParameterError when the design targets another sample rate.
Waveform apply_filter(const Waveform& w, const FilterDesign& f);

}  // namespace hifipp

#endif  // HIFIPP_DEGRADE_FILTER_DESIGN_H_
