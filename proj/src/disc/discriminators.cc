// src/disc/discriminators.cc

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

#include "hifipp/disc/discriminators.h"

#include <numeric>

#include "hifipp/errors.h"

namespace hifipp {

namespace F = torch::nn::functional;

namespace {

constexpr int64_t kPeriods[] = {2, 3, 5, 7, 11};

void CheckBatch(const torch::Tensor& x) {
  if (x.dim() != 2 || x.size(0) == 0 || x.size(1) == 0)
    throw ParameterError("discriminator expects a non-empty (B, T) batch");
}

nn::NormConv MakeConv(const ScaleLayer& l, nn::NormType norm) {
  auto s = nn::Conv1dSpec(l.in, l.out, l.kernel, l.stride, 1, l.groups, l.padding);
  s.norm = norm;
  s.init = nn::InitScheme::kTorchDefault;
  return nn::NormConv(s);
}

torch::Tensor Leaky(const torch::Tensor& x, double slope) {
  return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(slope));
}

}  // namespace

std::string KindName(DiscriminatorKind k) {
  switch (k) {
    case DiscriminatorKind::kSsd: return "ssd";
    case DiscriminatorKind::kMsd: return "msd";
    case DiscriminatorKind::kMpd: return "mpd";
    case DiscriminatorKind::kMsdMpd: return "msd_mpd";
  }
  return "?";
}

DiscriminatorKind ParseKind(const std::string& name) {
  for (auto k : {DiscriminatorKind::kSsd, DiscriminatorKind::kMsd, DiscriminatorKind::kMpd,
                 DiscriminatorKind::kMsdMpd})
    if (KindName(k) == name) return k;
  throw ConfigError("unknown discriminator kind '" + name + "'");
}

std::string LayoutName(ScaleLayout l) { return l == ScaleLayout::kHifiGan ? "hifigan" : "melgan"; }

ScaleLayout ParseLayout(const std::string& name) {
  if (name == "hifigan") return ScaleLayout::kHifiGan;
  if (name == "melgan") return ScaleLayout::kMelGan;
  throw ConfigError("unknown discriminator layout '" + name + "'");
}

int DiscriminatorConfig::NumMembers() const {
  switch (kind) {
    case DiscriminatorKind::kSsd: return k;
    case DiscriminatorKind::kMsd: return 3;
    case DiscriminatorKind::kMpd: return 5;
    case DiscriminatorKind::kMsdMpd: return 8;
  }
  return 0;
}

void DiscriminatorConfig::Validate() const {
  if (kind == DiscriminatorKind::kSsd && k < 1)
    throw ConfigError("discriminator.k must be >= 1");
  if (channel_divisor < 1) throw ConfigError("discriminator.channel_divisor must be >= 1");
  ScaleSchedule(layout, channel_divisor);  // throws on widths that do not divide
}

DiscriminatorConfig DiscriminatorPreset(const std::string& name) {
  DiscriminatorConfig c;
  if (name == "ssd") return c;
  if (name == "ssd5") {
    c.k = 5;
    return c;
  }
  c.channel_divisor = 1;
  if (name == "msd") {
    c.kind = DiscriminatorKind::kMsd;
  } else if (name == "msd_spectral") {
    c.kind = DiscriminatorKind::kMsd;
    c.spectral_norm = true;
  } else if (name == "mpd") {
    c.kind = DiscriminatorKind::kMpd;
  } else if (name == "msd_mpd") {
    c.kind = DiscriminatorKind::kMsdMpd;
    c.spectral_norm = true;
  } else {
    throw ConfigError("unknown discriminator preset '" + name + "'");
  }
  return c;
}

std::vector<ScaleLayer> ScaleSchedule(ScaleLayout layout, int d) {
  if (d < 1) throw ConfigError("channel divisor must be >= 1");
  std::vector<ScaleLayer> base;
  if (layout == ScaleLayout::kHifiGan) {
    base = {{1, 128, 15, 1, 1, 7},       {128, 128, 41, 2, 4, 20},  {128, 256, 41, 2, 16, 20},
            {256, 512, 41, 4, 16, 20},   {512, 1024, 41, 4, 16, 20}, {1024, 1024, 41, 1, 16, 20},
            {1024, 1024, 5, 1, 1, 2},    {1024, 1, 3, 1, 1, 1}};
  } else {
    base = {{1, 16, 15, 1, 1, 7},       {16, 64, 41, 4, 4, 20},      {64, 256, 41, 4, 16, 20},
            {256, 1024, 41, 4, 64, 20}, {1024, 1024, 41, 4, 256, 20}, {1024, 1024, 5, 1, 1, 2},
            {1024, 1, 3, 1, 1, 1}};
  }
  const std::size_t last = base.size() - 1;
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto& l = base[i];
    if (i > 0) {
      if (l.in % d) throw ConfigError("channel divisor does not divide the layer widths");
      l.in /= d;
    }
    if (i < last) {
      if (l.out % d) throw ConfigError("channel divisor does not divide the layer widths");
      l.out /= d;
    }
    l.groups = std::gcd(l.groups, std::gcd(l.in, l.out));
  }
  return base;
}

// Scale discriminator ---------------------------------------------------------

ScaleDiscriminatorImpl::ScaleDiscriminatorImpl(ScaleLayout layout, int channel_divisor,
                                               nn::NormType norm, int pool_steps)
    : layout_(layout),
      schedule_(ScaleSchedule(layout, channel_divisor)),
      norm_(norm),
      pool_steps_(pool_steps),
      slope_(layout == ScaleLayout::kHifiGan ? 0.1 : 0.2) {
  if (pool_steps < 0) throw ConfigError("pool_steps must be non-negative");
  for (std::size_t i = 0; i + 1 < schedule_.size(); ++i) {
    auto l = schedule_[i];
    // MelGAN reflect-pads the input layer itself.
    if (i == 0 && layout_ == ScaleLayout::kMelGan) l.padding = 0;
    convs_->push_back(MakeConv(l, norm));
  }
  register_module("convs", convs_);
  post_ = register_module("post", MakeConv(schedule_.back(), norm));
}

int64_t ScaleDiscriminatorImpl::PooledLength(int64_t length, int pool_steps) {
  for (int i = 0; i < pool_steps; ++i) length = (length + 2 - 4) / 2 + 1;
  return length;
}

int64_t ScaleDiscriminatorImpl::ScoreLength(int64_t length) const {
  int64_t n = PooledLength(length, pool_steps_);
  for (const auto& l : schedule_) n = (n + 2 * l.padding - l.kernel) / l.stride + 1;
  return n;
}

DiscriminatorOutput ScaleDiscriminatorImpl::forward(const torch::Tensor& x) {
  CheckBatch(x);
  auto h = x.unsqueeze(1);
  for (int i = 0; i < pool_steps_; ++i)
    h = F::avg_pool1d(h, F::AvgPool1dFuncOptions(4).stride(2).padding(1).count_include_pad(false));
  DiscriminatorOutput out;
  for (std::size_t i = 0; i < convs_->size(); ++i) {
    if (i == 0 && layout_ == ScaleLayout::kMelGan)
      h = F::pad(h, F::PadFuncOptions({7, 7}).mode(torch::kReflect));
    h = Leaky(convs_[i]->as<nn::NormConvImpl>()->forward(h), slope_);
    out.features.push_back(h);
  }
  out.score = post_->forward(h).flatten(1);
  return out;
}

std::string ScaleDiscriminatorImpl::Describe() const {
  return "scale(" + LayoutName(layout_) + ", pool x" + std::to_string(1 << pool_steps_) + ")";
}

// Period discriminator --------------------------------------------------------

PeriodDiscriminatorImpl::PeriodDiscriminatorImpl(int64_t period, nn::NormType norm)
    : period_(period) {
  if (period < 1) throw ConfigError("period must be >= 1");
  const int64_t widths[] = {1, 32, 128, 512, 1024};
  auto spec = [&](int64_t in, int64_t out, int64_t k, int64_t stride, int64_t pad) {
    auto s = nn::Conv2dSpec(in, out, {k, 1}, {stride, 1}, {pad, 0});
    s.norm = norm;
    s.init = nn::InitScheme::kTorchDefault;
    return nn::NormConv(s);
  };
  for (int i = 0; i < 4; ++i) convs_->push_back(spec(widths[i], widths[i + 1], 5, 3, 2));
  convs_->push_back(spec(1024, 1024, 5, 1, 2));
  register_module("convs", convs_);
  post_ = register_module("post", spec(1024, 1, 3, 1, 1));
}

DiscriminatorOutput PeriodDiscriminatorImpl::forward(const torch::Tensor& x) {
  CheckBatch(x);
  auto h = x.unsqueeze(1);
  const int64_t t = h.size(2);
  if (t % period_ != 0) {
    const int64_t pad = period_ - t % period_;
    auto opts = F::PadFuncOptions({0, pad});
    if (t > pad) opts.mode(torch::kReflect);
    else opts.mode(torch::kReplicate);
    h = F::pad(h, opts);
  }
  h = h.view({h.size(0), 1, h.size(2) / period_, period_});
  DiscriminatorOutput out;
  for (const auto& m : *convs_) {
    h = Leaky(m->as<nn::NormConvImpl>()->forward(h), 0.1);
    out.features.push_back(h);
  }
  out.score = post_->forward(h).flatten(1);
  return out;
}

std::string PeriodDiscriminatorImpl::Describe() const {
  return "period(" + std::to_string(period_) + ")";
}

// Ensemble -------------------------------------------------------------------

DiscriminatorEnsembleImpl::DiscriminatorEnsembleImpl(const DiscriminatorConfig& cfg) : cfg_(cfg) {
  cfg_.Validate();
  auto add_msd = [&] {
    for (int i = 0; i < 3; ++i) {
      const auto norm =
          i == 0 && cfg_.spectral_norm ? nn::NormType::kSpectral : nn::NormType::kWeight;
      members_.push_back(std::make_shared<ScaleDiscriminatorImpl>(cfg_.layout,
                                                                  cfg_.channel_divisor, norm, i));
    }
  };
  auto add_mpd = [&] {
    for (auto p : kPeriods)
      members_.push_back(std::make_shared<PeriodDiscriminatorImpl>(p, nn::NormType::kWeight));
  };
  switch (cfg_.kind) {
    case DiscriminatorKind::kSsd:
      for (int i = 0; i < cfg_.k; ++i)
        members_.push_back(std::make_shared<ScaleDiscriminatorImpl>(
            cfg_.layout, cfg_.channel_divisor, nn::NormType::kWeight, 0));
      break;
    case DiscriminatorKind::kMsd: add_msd(); break;
    case DiscriminatorKind::kMpd: add_mpd(); break;
    case DiscriminatorKind::kMsdMpd:
      add_msd();
      add_mpd();
      break;
  }
  for (std::size_t i = 0; i < members_.size(); ++i)
    register_module(std::to_string(i), members_[i]);
}

std::vector<DiscriminatorOutput> DiscriminatorEnsembleImpl::forward(const torch::Tensor& x) {
  CheckBatch(x);
  std::vector<DiscriminatorOutput> outs;
  outs.reserve(members_.size());
  for (auto& m : members_) outs.push_back(m->forward(x));
  return outs;
}

}  // namespace hifipp
