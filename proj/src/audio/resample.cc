// src/audio/resample.cc

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

#include "hifipp/audio/resample.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "hifipp/errors.h"

namespace hifipp {

namespace {
int64_t CeilDiv(int64_t a, int64_t b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }
}  // namespace

std::vector<double> DesignPolyphaseFilter(int up, int down, const ResampleOptions& opts) {
  if (up <= 0 || down <= 0) throw ParameterError("resampling factors must be positive");
  const int max_rate = std::max(up, down);
  const int half_len = opts.taps_per_phase / 2 * max_rate;
  const int length = 2 * half_len + 1;
  const double cutoff = 1.0 / max_rate;  // fraction of the upsampled Nyquist
  const double i0_beta = boost::math::cyl_bessel_i(0, opts.kaiser_beta);

  std::vector<double> h(length);
  for (int n = 0; n < length; ++n) {
    const double t = n - half_len;
    const double x = std::numbers::pi * cutoff * t;
    const double sinc = t == 0 ? 1.0 : std::sin(x) / x;
    const double r = t / half_len;
    const double kaiser =
        boost::math::cyl_bessel_i(0, opts.kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
        i0_beta;
    h[n] = cutoff * sinc * kaiser;
  }
  // Unit DC gain per phase after zero stuffing.
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (auto& v : h) v *= up / sum;
  return h;
}

std::vector<float> ResamplePoly(std::span<const float> x, int up, int down,
                                const ResampleOptions& opts) {
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return std::vector<float>(x.begin(), x.end());

  const auto h = DesignPolyphaseFilter(up, down, opts);
  const int64_t half_len = static_cast<int64_t>(h.size() / 2);
  const int64_t n_in = static_cast<int64_t>(x.size());
  const int64_t n_out = std::llround(static_cast<double>(n_in) * up / down);

  std::vector<float> y(static_cast<std::size_t>(n_out));
  for (int64_t n = 0; n < n_out; ++n) {
    // Position of output sample n on the zero-stuffed (upsampled) grid.
    const int64_t t = n * down;
    // Taps k with (t + half_len - k) divisible by `up` hit real input samples.
    const int64_t hi = t + half_len;
    const int64_t i_min = CeilDiv(hi - static_cast<int64_t>(h.size()) + 1, up);
    const int64_t i_max = hi / up;
    double acc = 0.0;
    for (int64_t i = std::max<int64_t>(i_min, 0); i <= std::min(i_max, n_in - 1); ++i) {
      const int64_t k = hi - i * up;
      acc += h[k] * x[i];
    }
    y[n] = static_cast<float>(acc);
  }
  return y;
}

Waveform resample(const Waveform& w, int target_rate, const ResampleOptions& opts) {
  if (target_rate <= 0)
    throw ParameterError("target sample rate must be positive, got " + std::to_string(target_rate));
  if (w.sample_rate <= 0) throw ParameterError("source sample rate must be positive");
  if (target_rate == w.sample_rate) return w;
  return Waveform(ResamplePoly(w.view(), target_rate, w.sample_rate, opts), target_rate);
}

}  // namespace hifipp
