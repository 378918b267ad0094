// src/audio/waveform.cc

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

#include "hifipp/audio/waveform.h"

#include <cmath>
#include <string>

#include "hifipp/errors.h"

namespace hifipp {

void Waveform::Validate() const {
  if (sample_rate <= 0)
    throw ParameterError("waveform sample_rate must be positive, got " +
                         std::to_string(sample_rate));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i]))
      throw NumericError("waveform sample " + std::to_string(i) + " is not finite");
  }
}

torch::Tensor Waveform::ToTensor() const {
  return torch::from_blob(const_cast<float*>(samples.data()),
                          {static_cast<int64_t>(samples.size())}, torch::kFloat)
      .clone();
}

Waveform Waveform::FromTensor(const torch::Tensor& t, int sample_rate) {
  auto flat = t.detach().to(torch::kCPU, torch::kFloat).contiguous().reshape({-1});
  const float* p = flat.data_ptr<float>();
  return Waveform(std::vector<float>(p, p + flat.numel()), sample_rate);
}

double Energy(std::span<const float> x) {
  double e = 0.0;
  for (float v : x) e += static_cast<double>(v) * v;
  return e;
}

double Rms(std::span<const float> x) {
  if (x.empty()) return 0.0;
  return std::sqrt(Energy(x) / static_cast<double>(x.size()));
}

}  // namespace hifipp
