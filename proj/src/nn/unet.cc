// src/nn/unet.cc

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

#include "hifipp/nn/unet.h"

#include <string>

#include "hifipp/errors.h"

namespace hifipp::nn {

namespace {

ConvSpec SpatialConv(int dims, int64_t in, int64_t out, int64_t kernel, int64_t stride,
                     int64_t padding, bool transposed, NormType norm) {
  ConvSpec s;
  s.in_channels = in;
  s.out_channels = out;
  s.kernel = std::vector<int64_t>(dims, kernel);
  s.stride = std::vector<int64_t>(dims, stride);
  s.padding = std::vector<int64_t>(dims, padding);
  s.transposed = transposed;
  s.norm = norm;
  return s;
}

}  // namespace

int64_t UNetConfig::RequiredMultiple() const {
  int64_t m = 1;
  for (std::size_t i = 0; i < widths.size(); ++i) m *= scale;
  return m;
}

void UNetConfig::Validate() const {
  if (dims != 1 && dims != 2) throw ConfigError("UNet dims must be 1 or 2");
  if (widths.empty()) throw ConfigError("UNet needs at least one width");
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i] < 1) throw ConfigError("UNet widths must be positive");
    if (i > 0 && widths[i] <= widths[i - 1])
      throw ConfigError("UNet widths must be strictly increasing");
  }
  if (depth < 0) throw ConfigError("UNet depth must be non-negative");
  if (kernel < 1 || kernel % 2 == 0) throw ConfigError("UNet kernel must be odd");
  if (scale < 2) throw ConfigError("UNet scale must be at least 2");
  if (in_channels < 1 || out_channels < 1) throw ConfigError("UNet channel counts must be positive");
}

ResStackImpl::ResStackImpl(int dims, int64_t channels, int depth, int64_t kernel, NormType norm,
                           const ActivationSwitch* act)
    : act_(act) {
  for (int i = 0; i < depth; ++i)
    convs_->push_back(
        NormConv(SpatialConv(dims, channels, channels, kernel, 1, kernel / 2, false, norm)));
  register_module("convs", convs_);
}

torch::Tensor ResStackImpl::forward(torch::Tensor x) {
  for (const auto& m : *convs_) x = x + m->as<NormConvImpl>()->forward((*act_)(x));
  return x;
}

UNetImpl::UNetImpl(const UNetConfig& cfg) : cfg_(cfg) {
  cfg_.Validate();
  const int d = cfg_.dims;
  const auto& w = cfg_.widths;
  const std::size_t levels = w.size();

  in_conv_ = register_module(
      "in_conv", NormConv(SpatialConv(d, cfg_.in_channels, w[0], cfg_.kernel, 1, cfg_.kernel / 2,
                                      false, cfg_.norm)));
  for (std::size_t i = 0; i < levels; ++i) {
    const int64_t next = i + 1 < levels ? w[i + 1] : w[i];
    down_stacks_->push_back(ResStack(d, w[i], cfg_.depth, cfg_.kernel, cfg_.norm, &act_));
    down_convs_->push_back(
        NormConv(SpatialConv(d, w[i], next, cfg_.scale, cfg_.scale, 0, false, cfg_.norm)));
  }
  for (std::size_t j = 0; j < levels; ++j) {
    const std::size_t i = levels - 1 - j;  // decoder level, deepest first
    const int64_t from = i + 1 < levels ? w[i + 1] : w[i];
    up_convs_->push_back(
        NormConv(SpatialConv(d, from, w[i], cfg_.scale, cfg_.scale, 0, true, cfg_.norm)));
    if (j > 0) up_stacks_->push_back(ResStack(d, w[i], cfg_.depth, cfg_.kernel, cfg_.norm, &act_));
  }
  register_module("down_stacks", down_stacks_);
  register_module("down_convs", down_convs_);
  register_module("up_convs", up_convs_);
  register_module("up_stacks", up_stacks_);
  out_conv_ = register_module(
      "out_conv", NormConv(SpatialConv(d, w[0], cfg_.out_channels, cfg_.kernel, 1,
                                       cfg_.kernel / 2, false, cfg_.norm)));
}

torch::Tensor UNetImpl::forward(const torch::Tensor& input) {
  const int64_t mult = cfg_.RequiredMultiple();
  if (input.dim() != cfg_.dims + 2)
    throw ShapeError("UNet expects a " + std::to_string(cfg_.dims + 2) + "-d input");
  if (input.size(1) != cfg_.in_channels)
    throw ShapeError("UNet expects " + std::to_string(cfg_.in_channels) + " input channels, got " +
                     std::to_string(input.size(1)));
  for (int k = 0; k < cfg_.dims; ++k) {
    const int64_t extent = input.size(2 + k);
    if (extent <= 0 || extent % mult != 0)
      throw ShapeError("UNet spatial extent " + std::to_string(extent) +
                       " is not a positive multiple of " + std::to_string(mult));
  }

  const std::size_t levels = cfg_.widths.size();
  std::vector<torch::Tensor> skips;
  auto x = in_conv_->forward(input);
  for (std::size_t i = 0; i < levels; ++i) {
    x = down_stacks_[i]->as<ResStackImpl>()->forward(x);
    skips.push_back(x);
    x = down_convs_[i]->as<NormConvImpl>()->forward(act_(x));
  }
  for (std::size_t j = 0; j < levels; ++j) {
    const std::size_t i = levels - 1 - j;
    x = up_convs_[j]->as<NormConvImpl>()->forward(act_(x)) + skips[i];
    if (j > 0) x = up_stacks_[j - 1]->as<ResStackImpl>()->forward(x);
  }
  return out_conv_->forward(act_(x));
}

}  // namespace hifipp::nn
