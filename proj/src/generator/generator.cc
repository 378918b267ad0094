// src/generator/generator.cc

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

#include "hifipp/generator/generator.h"

#include <string>

#include "hifipp/errors.h"

namespace hifipp {

namespace F = torch::nn::functional;

namespace {

int64_t RoundUp(int64_t n, int64_t m) { return (n + m - 1) / m * m; }

// Edge-replicate the last two dims of (B, C, H, W) up to multiples of `mult`.
torch::Tensor PadImage(const torch::Tensor& x, int64_t mult) {
  const int64_t ph = RoundUp(x.size(2), mult) - x.size(2);
  const int64_t pw = RoundUp(x.size(3), mult) - x.size(3);
  if (ph == 0 && pw == 0) return x;
  return F::pad(x, F::PadFuncOptions({0, pw, 0, ph}).mode(torch::kReplicate));
}

}  // namespace

// SpectralUNet ---------------------------------------------------------------

SpectralUNetImpl::SpectralUNetImpl(const std::vector<int64_t>& widths, int depth,
                                   nn::NormType norm) {
  nn::UNetConfig cfg;
  cfg.dims = 2;
  cfg.widths = widths;
  cfg.depth = depth;
  cfg.kernel = 3;
  cfg.scale = 2;
  cfg.in_channels = 1;
  cfg.out_channels = 1;
  cfg.norm = norm;
  unet_ = register_module("unet", nn::UNet(cfg));
}

torch::Tensor SpectralUNetImpl::forward(const torch::Tensor& mel) {
  if (mel.dim() != 3 || mel.size(1) <= 0 || mel.size(2) <= 0)
    throw ShapeError("SpectralUNet expects a non-empty (B, n_mels, frames) tensor");
  auto x = mel.unsqueeze(1);
  auto y = unet_->forward(PadImage(x, unet_->config().RequiredMultiple()));
  y = y.narrow(2, 0, mel.size(1)).narrow(3, 0, mel.size(2));
  return (y + x).squeeze(1);
}

// Upsampler ------------------------------------------------------------------

MrfBlockImpl::MrfBlockImpl(int64_t channels, int64_t kernel,
                           const std::vector<int64_t>& dilations, nn::NormType norm,
                           const nn::ActivationSwitch* act)
    : act_(act) {
  for (auto d : dilations) {
    auto s1 = nn::Conv1dSpec(channels, channels, kernel, 1, d);
    auto s2 = nn::Conv1dSpec(channels, channels, kernel, 1, 1);
    s1.norm = s2.norm = norm;
    convs1_->push_back(nn::NormConv(s1));
    convs2_->push_back(nn::NormConv(s2));
  }
  register_module("convs1", convs1_);
  register_module("convs2", convs2_);
}

torch::Tensor MrfBlockImpl::forward(torch::Tensor x) {
  for (std::size_t i = 0; i < convs1_->size(); ++i) {
    auto t = convs1_[i]->as<nn::NormConvImpl>()->forward((*act_)(x));
    t = convs2_[i]->as<nn::NormConvImpl>()->forward((*act_)(t));
    x = x + t;
  }
  return x;
}

UpsamplerImpl::UpsamplerImpl(int64_t in_channels, const UpsamplerConfig& cfg, nn::NormType norm)
    : cfg_(cfg) {
  auto pre = nn::Conv1dSpec(in_channels, cfg_.initial_channels, 7);
  pre.norm = norm;
  conv_pre_ = register_module("conv_pre", nn::NormConv(pre));
  int64_t ch = cfg_.initial_channels;
  for (std::size_t i = 0; i < cfg_.rates.size(); ++i) {
    const int64_t next = cfg_.StageChannels(i);
    auto up = nn::ConvTranspose1dSpec(ch, next, cfg_.kernels[i], cfg_.rates[i],
                                      (cfg_.kernels[i] - cfg_.rates[i]) / 2);
    up.norm = norm;
    ups_->push_back(nn::NormConv(up));
    for (std::size_t j = 0; j < cfg_.resblock_kernels.size(); ++j)
      mrfs_->push_back(
          MrfBlock(next, cfg_.resblock_kernels[j], cfg_.resblock_dilations[j], norm, &act_));
    ch = next;
  }
  register_module("ups", ups_);
  register_module("mrfs", mrfs_);
  auto post = nn::Conv1dSpec(ch, cfg_.out_channels, 7);
  post.norm = norm;
  conv_post_ = register_module("conv_post", nn::NormConv(post));
}

torch::Tensor UpsamplerImpl::forward(const torch::Tensor& features) {
  if (features.dim() != 3) throw ShapeError("Upsampler expects (B, C, frames)");
  auto x = conv_pre_->forward(features);
  const std::size_t nk = cfg_.resblock_kernels.size();
  for (std::size_t i = 0; i < cfg_.rates.size(); ++i) {
    x = ups_[i]->as<nn::NormConvImpl>()->forward(act_(x));
    torch::Tensor acc;
    for (std::size_t j = 0; j < nk; ++j) {
      auto y = mrfs_[i * nk + j]->as<MrfBlockImpl>()->forward(x);
      acc = acc.defined() ? acc + y : y;
    }
    x = acc / static_cast<double>(nk);
  }
  x = conv_post_->forward(act_(x));
  return cfg_.tanh_output ? torch::tanh(x) : x;
}

// SpectralMaskNet ------------------------------------------------------------

SpectralMaskNetImpl::SpectralMaskNetImpl(int64_t channels, const std::vector<int64_t>& widths,
                                         int depth, const StftConfig& stft, MergeRule merge,
                                         nn::NormType norm)
    : channels_(channels), stft_(stft), merge_(merge) {
  nn::UNetConfig cfg;
  cfg.dims = 2;
  cfg.widths = widths;
  cfg.depth = depth;
  cfg.kernel = 3;
  cfg.scale = 2;
  cfg.in_channels = channels;
  cfg.out_channels = channels;
  cfg.norm = norm;
  unet_ = register_module("unet", nn::UNet(cfg));
  if (merge_ == MergeRule::kLearned) {
    auto s = nn::Conv1dSpec(channels, 1, 1);
    s.bias = false;
    s.norm = nn::NormType::kNone;
    merge_conv_ = register_module("merge", nn::NormConv(s));
    torch::NoGradGuard no_grad;
    merge_conv_->weight.fill_(1.0);
  }
}

torch::Tensor SpectralMaskNetImpl::Merge(const torch::Tensor& pre_merge) {
  if (merge_ == MergeRule::kLearned) return merge_conv_->forward(pre_merge).squeeze(1);
  return pre_merge.sum(1);
}

MaskTrace SpectralMaskNetImpl::Trace(const torch::Tensor& streams,
                                     const std::optional<torch::Tensor>& mask_override) {
  if (streams.dim() != 3 || streams.size(1) != channels_)
    throw ShapeError("SpectralMaskNet expects (B, " + std::to_string(channels_) + ", T)");
  const int64_t length = streams.size(2);
  if (length % stft_.config().hop != 0)
    throw ShapeError("SpectralMaskNet input length " + std::to_string(length) +
                     " is not a multiple of the STFT hop " + std::to_string(stft_.config().hop));
  MaskTrace t;
  t.input_spec = stft_.Forward(streams);  // (B, m, bins, frames)
  if (mask_override) {
    t.mask = mask_override->to(torch::real(t.input_spec).scalar_type()).expand_as(
        torch::real(t.input_spec));
  } else {
    auto log_amp = torch::log(torch::clamp_min(torch::abs(t.input_spec), 1e-5));
    const int64_t bins = log_amp.size(2), frames = log_amp.size(3);
    auto out = unet_->forward(PadImage(log_amp, unet_->config().RequiredMultiple()));
    t.mask = F::softplus(out.narrow(2, 0, bins).narrow(3, 0, frames));
  }
  t.masked_spec = t.input_spec * t.mask;
  t.pre_merge = stft_.Inverse(t.masked_spec);
  t.output = Merge(t.pre_merge);
  return t;
}

torch::Tensor SpectralMaskNetImpl::forward(const torch::Tensor& streams) {
  return Trace(streams).output;
}

// Generator ------------------------------------------------------------------

GeneratorImpl::GeneratorImpl(const GeneratorConfig& cfg)
    : cfg_((cfg.Validate(), cfg)),
      fb_(MelFilterbank::Build(MelConfig{cfg.sample_rate, cfg.mel_stft.n_fft, cfg.n_mels})),
      log_mel_(fb_, cfg.mel_stft) {
  if (cfg_.use_spectral_unet)
    spectral_unet_ = register_module(
        "spectral_unet",
        SpectralUNet(cfg_.spectral_unet_widths, cfg_.spectral_unet_depth, cfg_.norm));
  upsampler_ = register_module("upsampler", Upsampler(cfg_.n_mels, cfg_.upsampler, cfg_.norm));
  if (cfg_.use_wave_unet) {
    nn::UNetConfig w;
    w.dims = 1;
    w.widths = cfg_.wave_unet_widths;
    w.depth = cfg_.wave_unet_depth;
    w.kernel = 5;
    w.scale = 4;
    w.in_channels = cfg_.upsampler.out_channels + 1;
    w.out_channels = cfg_.wave_unet_out_channels;
    w.norm = cfg_.norm;
    wave_unet_ = register_module("wave_unet", nn::UNet(w));
  }
  if (cfg_.use_spectral_masknet)
    masknet_ = register_module(
        "masknet", SpectralMaskNet(cfg_.StreamChannels(), cfg_.masknet_widths, cfg_.masknet_depth,
                                   cfg_.masknet_stft, cfg_.merge, cfg_.norm));
}

void GeneratorImpl::SetActivation(const nn::ActivationSwitch& act) {
  if (spectral_unet_) spectral_unet_->unet()->SetActivation(act);
  upsampler_->SetActivation(act);
  if (wave_unet_) wave_unet_->SetActivation(act);
  if (masknet_) masknet_->unet()->SetActivation(act);
}

torch::Tensor GeneratorImpl::LogMelOf(const torch::Tensor& x) const { return log_mel_(x); }

torch::Tensor GeneratorImpl::SpectralUNetForward(const torch::Tensor& mel) {
  if (!spectral_unet_) return mel;
  return spectral_unet_->forward(mel);
}

torch::Tensor GeneratorImpl::UpsamplerForward(const torch::Tensor& features) {
  return upsampler_->forward(features);
}

torch::Tensor GeneratorImpl::WaveUNetForward(const torch::Tensor& streams) {
  if (!wave_unet_) return streams;
  return wave_unet_->forward(streams);
}

torch::Tensor GeneratorImpl::MaskNetForward(const torch::Tensor& streams) {
  if (!masknet_) return streams.sum(1);
  return masknet_->forward(streams);
}

torch::Tensor GeneratorImpl::ForwardAligned(const torch::Tensor& x) {
  auto mel = log_mel_(x);                       // (B, n_mels, frames)
  auto features = SpectralUNetForward(mel);     // (B, n_mels, frames)
  auto streams = UpsamplerForward(features);    // (B, c_up, T)
  if (wave_unet_) streams = WaveUNetForward(torch::cat({streams, x.unsqueeze(1)}, 1));
  return MaskNetForward(streams);
}

torch::Tensor GeneratorImpl::forward(const torch::Tensor& x) {
  const bool batched = x.dim() == 2;
  if (!batched && x.dim() != 1) throw ShapeError("generator expects (B, T) or (T) input");
  auto input = batched ? x : x.unsqueeze(0);
  const int64_t length = input.size(1);
  const int64_t padded = std::max(RoundUp(length, cfg_.LengthMultiple()),
                                  RoundUp(cfg_.mel_stft.n_fft, cfg_.LengthMultiple()));
  if (padded != length) input = F::pad(input, F::PadFuncOptions({0, padded - length}));
  auto out = ForwardAligned(input).narrow(1, 0, length);
  return batched ? out : out.squeeze(0);
}

Waveform RunGenerator(Generator& g, const Waveform& x) {
  torch::NoGradGuard no_grad;
  auto out = g->forward(x.ToTensor().to(g->parameters().front().scalar_type()));
  return Waveform::FromTensor(out, x.sample_rate);
}

}  // namespace hifipp
