// src/nn/layers.cc

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

#include "hifipp/nn/layers.h"

#include <cmath>

#include "hifipp/errors.h"

namespace hifipp::nn {

namespace F = torch::nn::functional;

namespace {

std::vector<int64_t> WeightShape(const ConvSpec& s) {
  std::vector<int64_t> shape;
  if (s.transposed) {
    shape = {s.in_channels, s.out_channels / s.groups};
  } else {
    shape = {s.out_channels, s.in_channels / s.groups};
  }
  shape.insert(shape.end(), s.kernel.begin(), s.kernel.end());
  return shape;
}

int64_t FanIn(const ConvSpec& s) {
  int64_t fan = s.transposed ? s.out_channels / s.groups : s.in_channels / s.groups;
  for (auto k : s.kernel) fan *= k;
  return fan;
}

std::vector<int64_t> Broadcast(const std::vector<int64_t>& v, int dims, int64_t fill) {
  if (v.empty()) return std::vector<int64_t>(dims, fill);
  if (static_cast<int>(v.size()) == dims) return v;
  if (v.size() == 1) return std::vector<int64_t>(dims, v[0]);
  throw ConfigError("convolution option rank does not match kernel rank");
}

torch::Tensor SliceNorm(const torch::Tensor& v) {
  std::vector<int64_t> dims;
  for (int64_t d = 1; d < v.dim(); ++d) dims.push_back(d);
  return v.norm(2, dims, /*keepdim=*/true);
}

}  // namespace

NormConvImpl::NormConvImpl(const ConvSpec& spec) : spec_(spec) {
  dims_ = static_cast<int>(spec_.kernel.size());
  if (dims_ != 1 && dims_ != 2) throw ConfigError("only 1-D and 2-D convolutions are supported");
  if (spec_.in_channels % spec_.groups || spec_.out_channels % spec_.groups)
    throw ConfigError("convolution channels must be divisible by groups");
  spec_.stride = Broadcast(spec_.stride, dims_, 1);
  spec_.padding = Broadcast(spec_.padding, dims_, 0);
  spec_.dilation = Broadcast(spec_.dilation, dims_, 1);

  auto w = torch::empty(WeightShape(spec_));
  torch::Tensor b;
  {
    torch::NoGradGuard no_grad;
    const double bound = 1.0 / std::sqrt(static_cast<double>(FanIn(spec_)));
    if (spec_.init == InitScheme::kNormal001) {
      w.normal_(0.0, 0.01);
      b = torch::zeros({spec_.out_channels});
    } else {
      w.uniform_(-bound, bound);
      b = torch::empty({spec_.out_channels}).uniform_(-bound, bound);
    }
  }

  switch (spec_.norm) {
    case NormType::kNone:
      weight = register_parameter("weight", w);
      break;
    case NormType::kWeight:
      weight_g = register_parameter("weight_g", SliceNorm(w).detach().clone());
      weight_v = register_parameter("weight_v", w);
      break;
    case NormType::kSpectral: {
      weight_orig = register_parameter("weight_orig", w);
      auto u0 = torch::randn({w.size(0)});
      u = register_buffer("u", u0 / u0.norm().clamp_min(1e-12));
      break;
    }
  }
  if (spec_.bias) bias = register_parameter("bias", b);
}

torch::Tensor NormConvImpl::Weight() {
  switch (spec_.norm) {
    case NormType::kNone:
      return weight;
    case NormType::kWeight:
      return weight_v * (weight_g / SliceNorm(weight_v));
    case NormType::kSpectral: {
      auto mat = weight_orig.reshape({weight_orig.size(0), -1});
      torch::Tensor v_vec;
      {
        torch::NoGradGuard no_grad;
        v_vec = F::normalize(torch::mv(mat.t(), u), F::NormalizeFuncOptions().dim(0).eps(1e-12));
        if (is_training()) {
          u.copy_(F::normalize(torch::mv(mat, v_vec), F::NormalizeFuncOptions().dim(0).eps(1e-12)));
          v_vec = F::normalize(torch::mv(mat.t(), u), F::NormalizeFuncOptions().dim(0).eps(1e-12));
        }
      }
      auto sigma = torch::dot(u, torch::mv(mat, v_vec));
      return weight_orig / sigma;
    }
  }
  return weight;
}

torch::Tensor NormConvImpl::forward(const torch::Tensor& x) {
  auto w = Weight().to(x.scalar_type());
  auto b = spec_.bias ? bias.to(x.scalar_type()) : torch::Tensor();
  if (dims_ == 1) {
    if (spec_.transposed)
      return F::conv_transpose1d(x, w, F::ConvTranspose1dFuncOptions()
                                           .bias(b)
                                           .stride(spec_.stride)
                                           .padding(spec_.padding)
                                           .dilation(spec_.dilation)
                                           .groups(spec_.groups));
    return F::conv1d(x, w, F::Conv1dFuncOptions()
                               .bias(b)
                               .stride(spec_.stride)
                               .padding(spec_.padding)
                               .dilation(spec_.dilation)
                               .groups(spec_.groups));
  }
  if (spec_.transposed)
    return F::conv_transpose2d(x, w, F::ConvTranspose2dFuncOptions()
                                         .bias(b)
                                         .stride(spec_.stride)
                                         .padding(spec_.padding)
                                         .dilation(spec_.dilation)
                                         .groups(spec_.groups));
  return F::conv2d(x, w, F::Conv2dFuncOptions()
                             .bias(b)
                             .stride(spec_.stride)
                             .padding(spec_.padding)
                             .dilation(spec_.dilation)
                             .groups(spec_.groups));
}

ConvSpec Conv1dSpec(int64_t in, int64_t out, int64_t kernel, int64_t stride, int64_t dilation,
                    int64_t groups, int64_t padding) {
  ConvSpec s;
  s.in_channels = in;
  s.out_channels = out;
  s.kernel = {kernel};
  s.stride = {stride};
  s.dilation = {dilation};
  s.groups = groups;
  s.padding = {padding >= 0 ? padding : SamePadding(kernel, dilation)};
  return s;
}

ConvSpec ConvTranspose1dSpec(int64_t in, int64_t out, int64_t kernel, int64_t stride,
                             int64_t padding) {
  ConvSpec s;
  s.in_channels = in;
  s.out_channels = out;
  s.kernel = {kernel};
  s.stride = {stride};
  s.padding = {padding};
  s.transposed = true;
  return s;
}

ConvSpec Conv2dSpec(int64_t in, int64_t out, std::vector<int64_t> kernel,
                    std::vector<int64_t> stride, std::vector<int64_t> padding) {
  ConvSpec s;
  s.in_channels = in;
  s.out_channels = out;
  if (padding.empty())
    for (auto k : kernel) padding.push_back(SamePadding(k));
  s.kernel = std::move(kernel);
  s.stride = std::move(stride);
  s.padding = std::move(padding);
  return s;
}

ConvSpec ConvTranspose2dSpec(int64_t in, int64_t out, std::vector<int64_t> kernel,
                             std::vector<int64_t> stride) {
  ConvSpec s;
  s.in_channels = in;
  s.out_channels = out;
  s.kernel = std::move(kernel);
  s.stride = std::move(stride);
  s.padding = {0, 0};
  s.transposed = true;
  return s;
}

int64_t CountParameters(const torch::nn::Module& m) {
  int64_t n = 0;
  for (const auto& p : m.parameters()) n += p.numel();
  return n;
}

torch::Tensor ActivationSwitch::operator()(const torch::Tensor& x) const {
  if (!enabled) return x;
  if (pattern) {
    if (pattern->mode == ActivationPattern::Mode::kRecord) {
      auto slopes = torch::where(x > 0, torch::ones_like(x), torch::full_like(x, slope)).detach();
      pattern->slopes.push_back(slopes);
      return x * slopes;
    }
    if (pattern->next >= pattern->slopes.size())
      throw ShapeError("activation pattern replayed past its recording");
    const auto& slopes = pattern->slopes[pattern->next++];
    if (!slopes.sizes().equals(x.sizes()))
      throw ShapeError("activation pattern does not match the replayed input");
    return x * slopes;
  }
  return F::leaky_relu(x, F::LeakyReLUFuncOptions().negative_slope(slope));
}

}  // namespace hifipp::nn
