// src/generator/inference.cc

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

#include "hifipp/generator/inference.h"

#include <algorithm>
#include <string>

#include "hifipp/errors.h"

namespace hifipp {

std::vector<float> ChunkedApply(std::span<const float> x, const SignalFn& fn,
                                const ChunkOptions& opts) {
  if (opts.window <= 0 || opts.overlap < 0 || opts.overlap >= opts.window)
    throw ParameterError("chunking needs 0 <= overlap < window");
  const auto n = static_cast<int64_t>(x.size());
  auto run = [&](int64_t start, int64_t len) {
    auto y = fn(x.subspan(start, len));
    if (static_cast<int64_t>(y.size()) != len)
      throw LengthError("chunk function changed the length from " + std::to_string(len) + " to " +
                        std::to_string(y.size()));
    return y;
  };
  if (n <= opts.window) return run(0, n);

  std::vector<double> acc(n, 0.0), weight(n, 0.0);
  const int64_t step = opts.window - opts.overlap;
  for (int64_t start = 0; start < n; start += step) {
    const int64_t len = std::min(opts.window, n - start);
    const auto y = run(start, len);
    const bool first = start == 0, last = start + len >= n;
    for (int64_t i = 0; i < len; ++i) {
      double w = 1.0;
      if (!first && i < opts.overlap) w = std::min(w, (i + 0.5) / opts.overlap);
      if (!last && i >= len - opts.overlap) w = std::min(w, (len - i - 0.5) / opts.overlap);
      acc[start + i] += w * y[i];
      weight[start + i] += w;
    }
    if (last) break;
  }
  std::vector<float> out(n);
  for (int64_t i = 0; i < n; ++i) out[i] = static_cast<float>(acc[i] / weight[i]);
  return out;
}

Waveform enhance_waveform(Generator& g, const Waveform& x, const ChunkOptions& opts) {
  if (x.sample_rate != g->config().sample_rate)
    throw ParameterError("input is at " + std::to_string(x.sample_rate) +
                         " Hz but the generator expects " +
                         std::to_string(g->config().sample_rate) + " Hz");
  if (x.empty()) return Waveform({}, x.sample_rate);
  g->eval();
  auto fn = [&](std::span<const float> chunk) {
    Waveform w(std::vector<float>(chunk.begin(), chunk.end()), x.sample_rate);
    return RunGenerator(g, w).samples;
  };
  return Waveform(ChunkedApply(x.view(), fn, opts), x.sample_rate);
}

}  // namespace hifipp
