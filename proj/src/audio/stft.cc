// src/audio/stft.cc

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

#include "hifipp/audio/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hifipp/errors.h"

namespace hifipp {

namespace F = torch::nn::functional;

std::string WindowName(WindowType w) {
  switch (w) {
    case WindowType::kHann:
      return "hann";
    case WindowType::kHamming:
      return "hamming";
  }
  return "unknown";
}

WindowType ParseWindow(const std::string& name) {
  if (name == "hann") return WindowType::kHann;
  if (name == "hamming") return WindowType::kHamming;
  throw ConfigError("unknown window '" + name + "'");
}

namespace {

std::vector<double> WindowValues(const StftConfig& cfg) {
  std::vector<double> w(cfg.n_fft, 0.0);
  const int offset = (cfg.n_fft - cfg.win_length) / 2;
  for (int n = 0; n < cfg.win_length; ++n) {
    const double phase = 2.0 * std::numbers::pi * n / cfg.win_length;
    double v = 0.0;
    switch (cfg.window) {
      case WindowType::kHann:
        v = 0.5 - 0.5 * std::cos(phase);
        break;
      case WindowType::kHamming:
        v = 0.54 - 0.46 * std::cos(phase);
        break;
    }
    w[offset + n] = v;
  }
  return w;
}

}  // namespace

void StftConfig::Validate() const {
  if (n_fft <= 0 || hop <= 0 || win_length <= 0)
    throw ConfigError("STFT sizes must be positive");
  if (hop > win_length || win_length > n_fft)
    throw ConfigError("STFT requires hop <= win_length <= n_fft (hop=" +
                      std::to_string(hop) + ", win_length=" + std::to_string(win_length) +
                      ", n_fft=" + std::to_string(n_fft) + ")");
  // Overlap-add of the analysis window over one hop period in steady state.
  const auto w = WindowValues(*this);
  std::vector<double> ola(hop, 0.0);
  for (int n = 0; n < n_fft; ++n) ola[n % hop] += w[n];
  const auto [lo, hi] = std::minmax_element(ola.begin(), ola.end());
  if (*lo <= 0.0 || (*hi - *lo) > 1e-9 * *hi)
    throw ConfigError("window '" + WindowName(window) + "' with win_length=" +
                      std::to_string(win_length) + " and hop=" + std::to_string(hop) +
                      " violates constant overlap-add");
}

torch::Tensor MakeWindow(const StftConfig& cfg, torch::Dtype dtype) {
  const auto w = WindowValues(cfg);
  return torch::tensor(w, torch::kDouble).to(dtype);
}

Stft::Stft(const StftConfig& cfg, torch::Dtype dtype) : cfg_(cfg), dtype_(dtype) {
  cfg_.Validate();
  window_ = MakeWindow(cfg_, dtype_);
}

int64_t Stft::NumFrames(int64_t length) const { return length / cfg_.hop; }

torch::Tensor Stft::Forward(const torch::Tensor& x) const {
  const int64_t length = x.size(-1);
  if (length < cfg_.n_fft)
    throw LengthError("STFT input of " + std::to_string(length) +
                      " samples is shorter than one window (" + std::to_string(cfg_.n_fft) + ")");
  auto lead = x.sizes().vec();
  lead.pop_back();
  auto flat = x.reshape({-1, 1, length});
  auto padded = F::pad(flat, F::PadFuncOptions({cfg_.pad_left(), cfg_.pad_right()})
                                 .mode(torch::kReflect))
                    .squeeze(1);
  auto window = window_.to(x.scalar_type());
  auto spec = torch::stft(padded, cfg_.n_fft, cfg_.hop, cfg_.n_fft, window,
                          /*normalized=*/false, /*onesided=*/true, /*return_complex=*/true);
  lead.push_back(spec.size(1));
  lead.push_back(spec.size(2));
  return spec.reshape(lead);
}

torch::Tensor Stft::Inverse(const torch::Tensor& spec) const {
  if (spec.dim() < 2 || spec.size(-2) != cfg_.num_bins())
    throw ShapeError("iSTFT expects (..., " + std::to_string(cfg_.num_bins()) +
                     ", frames) input");
  auto lead = spec.sizes().vec();
  lead.pop_back();
  lead.pop_back();
  const int64_t frames = spec.size(-1);
  auto flat = spec.reshape({-1, cfg_.num_bins(), frames});
  auto real_t = torch::real(flat).scalar_type();
  auto window = window_.to(real_t);

  // (B, n_fft, frames) windowed frames, overlap-added by fold.
  auto time_frames = torch::fft::irfft(flat, cfg_.n_fft, /*dim=*/1) * window.view({1, -1, 1});
  const int64_t padded_len = (frames - 1) * cfg_.hop + cfg_.n_fft;
  auto fold_opts = F::FoldFuncOptions({1, padded_len}, {1, cfg_.n_fft}).stride({1, cfg_.hop});
  auto signal = F::fold(time_frames, fold_opts).reshape({flat.size(0), padded_len});

  auto win_sq = (window * window).view({1, -1, 1}).expand({1, cfg_.n_fft, frames}).contiguous();
  auto envelope = F::fold(win_sq, fold_opts).reshape({1, padded_len});

  auto out = (signal / envelope.clamp_min(1e-11))
                 .narrow(1, cfg_.pad_left(), frames * cfg_.hop);
  lead.push_back(frames * cfg_.hop);
  return out.reshape(lead);
}

ComplexSpectrogram stft(const Waveform& w, const StftConfig& cfg) {
  Stft transform(cfg);
  return ComplexSpectrogram{transform.Forward(w.ToTensor()), cfg};
}

Waveform istft(const ComplexSpectrogram& s, int sample_rate) {
  Stft transform(s.config);
  return Waveform::FromTensor(transform.Inverse(s.bins), sample_rate);
}

}  // namespace hifipp
