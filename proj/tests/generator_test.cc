// tests/generator_test.cc

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

#include "test_support.h"

#include <cmath>

#include "hifipp/errors.h"
#include "hifipp/generator/generator.h"
#include "hifipp/generator/inference.h"
#include "hifipp/nn/layers.h"
#include "oracles.h"

using namespace hifipp;
using namespace hifipp::testing;

namespace {

// Parameters of one weight-normalised convolution: kernel, bias and one
// magnitude per output slice of the weight tensor.
int64_t ConvParams(int64_t in, int64_t out, int64_t kernel, int dims, bool transposed) {
  int64_t k = 1;
  for (int d = 0; d < dims; ++d) k *= kernel;
  return in * out * k + out + (transposed ? in : out);
}

// Layer-by-layer enumeration of the U-Net: input conv, per level a residual
// stack and a strided down conv, per decoder level a transposed up conv and
// a residual stack (none after the bottleneck), then the output conv.
int64_t UNetParamsOracle(const std::vector<int64_t>& w, int depth, int64_t kernel, int64_t scale,
                         int64_t in, int64_t out, int dims) {
  int64_t n = ConvParams(in, w[0], kernel, dims, false);
  const std::size_t levels = w.size();
  for (std::size_t i = 0; i < levels; ++i) {
    const int64_t next = i + 1 < levels ? w[i + 1] : w[i];
    n += depth * ConvParams(w[i], w[i], kernel, dims, false);
    n += ConvParams(w[i], next, scale, dims, false);
    n += ConvParams(next, w[i], scale, dims, true);
    if (i + 1 < levels) n += depth * ConvParams(w[i], w[i], kernel, dims, false);
  }
  return n + ConvParams(w[0], out, kernel, dims, false);
}

void ZeroBiases(torch::nn::Module& m) {
  torch::NoGradGuard no_grad;
  for (auto& p : m.named_parameters())
    if (p.key().ends_with("bias")) p.value().zero_();
}

}  // namespace

TEST_SUITE("generator") {

TEST_CASE("spectral unet keeps the mel shape") {
  torch::manual_seed(0);
  SpectralUNet net(std::vector<int64_t>{8, 16, 32, 64}, 4, nn::NormType::kWeight);
  auto out = net->forward(torch::randn({2, 80, 64}));
  CHECK(out.sizes() == torch::IntArrayRef({2, 80, 64}));
  // Frame counts off the pooling grid are padded and cropped.
  CHECK(net->forward(torch::randn({1, 80, 37})).sizes() == torch::IntArrayRef({1, 80, 37}));
}

TEST_CASE("spectral unet parameter count matches the layer enumeration") {
  SpectralUNet net(std::vector<int64_t>{8, 16, 32, 64}, 4, nn::NormType::kWeight);
  const int64_t oracle = UNetParamsOracle({8, 16, 32, 64}, 4, 3, 2, 1, 1, 2);
  CHECK(nn::CountParameters(*net) == oracle);
  CHECK(oracle == 300714);  // golden
}

TEST_CASE("spectral unet with a silenced output layer is the residual path") {
  SpectralUNet net(std::vector<int64_t>{8, 16, 32, 64}, 4, nn::NormType::kWeight);
  {
    torch::NoGradGuard no_grad;
    auto& out = net->unet()->output_conv();
    out->weight_g.zero_();
    out->bias.zero_();
  }
  auto mel = torch::randn({1, 80, 64});
  CHECK(torch::equal(net->forward(mel), mel));
}

TEST_CASE("upsampler length arithmetic and zero fixed point") {
  UpsamplerConfig cfg;
  CHECK(cfg.TotalRate() == 256);
  Upsampler up(80, cfg, nn::NormType::kWeight);
  auto out = up->forward(torch::randn({1, 80, 32}));
  CHECK(out.sizes() == torch::IntArrayRef({1, cfg.out_channels, 8192}));
  ZeroBiases(*up);
  auto zero = up->forward(torch::zeros({1, 80, 32}));
  CHECK(torch::abs(zero).max().item<float>() == 0.0f);
}

TEST_CASE("wave unet shape and parameter count") {
  nn::UNetConfig c;
  c.in_channels = 9;
  c.out_channels = 4;
  nn::UNet net(c);
  CHECK(net->forward(torch::randn({1, 9, 8192})).sizes() == torch::IntArrayRef({1, 4, 8192}));
  const int64_t oracle = UNetParamsOracle({10, 20, 40, 80}, 4, 5, 4, 9, 4, 1);
  CHECK(nn::CountParameters(*net) == oracle);
  CHECK(oracle == 300048);  // golden
  CHECK_THROWS_AS(net->forward(torch::randn({1, 9, 1000})), ShapeError);
  CHECK_THROWS_AS(net->forward(torch::randn({1, 3, 8192})), ShapeError);
}

TEST_CASE("wave unet wiring is linear once activations and biases are removed") {
  nn::UNetConfig c;
  c.in_channels = 9;
  c.out_channels = 4;
  nn::UNet net(c);
  net->SetActivation(nn::ActivationSwitch{false});
  ZeroBiases(*net);
  auto x = torch::randn({1, 9, 1024});
  auto a = net->forward(x), b = net->forward(2.0 * x);
  CHECK(torch::allclose(b, 2.0 * a, 1e-5, 1e-6));
}

TEST_CASE("recorded activation pattern reproduces the leaky relu network") {
  nn::UNetConfig c;
  c.in_channels = 9;
  c.out_channels = 4;
  nn::UNet net(c);
  auto x = torch::randn({1, 9, 1024});
  const auto reference = net->forward(x);
  nn::ActivationSwitch frozen;
  frozen.pattern = std::make_shared<nn::ActivationPattern>();
  net->SetActivation(frozen);
  CHECK(torch::equal(net->forward(x), reference));
  frozen.pattern->mode = nn::ActivationPattern::Mode::kReplay;
  CHECK(torch::equal(net->forward(x), reference));
  // Replaying the same pattern makes the network linear in its input.
  frozen.pattern->next = 0;
  const auto at_zero = net->forward(torch::zeros_like(x));
  frozen.pattern->next = 0;
  const auto doubled = net->forward(2.0 * x);
  CHECK(torch::allclose(doubled - at_zero, 2.0 * (reference - at_zero), 1e-4, 1e-5));
  CHECK_THROWS_AS(net->forward(x), ShapeError);
}

TEST_CASE("mask net identity mask, phase and zero input") {
  GeneratorConfig g;
  SpectralMaskNet net(4, g.masknet_widths, g.masknet_depth, g.masknet_stft, MergeRule::kSum,
                      nn::NormType::kWeight);
  auto streams = torch::randn({1, 4, 8192});
  auto t = net->Trace(streams, torch::ones({1}));
  auto merged = streams.sum(1);
  CHECK((torch::norm(t.output - merged) / torch::norm(merged)).item<double>() < 1e-5);

  auto rt = net->Trace(streams, torch::rand({1, 4, 513, 32}) * 3.0);
  CHECK(rt.pre_merge.sizes() == torch::IntArrayRef({1, 4, 8192}));
  auto keep = torch::abs(rt.input_spec) > 1e-8;
  auto diff = torch::abs(torch::angle(rt.masked_spec) - torch::angle(rt.input_spec));
  diff = torch::minimum(diff, 2.0 * std::numbers::pi - diff);
  CHECK(diff.masked_select(keep).max().item<float>() < 1e-6);

  auto z = net->forward(torch::zeros({1, 4, 8192}));
  CHECK(torch::abs(z).max().item<float>() == 0.0f);
}

TEST_CASE("generator preserves length") {
  torch::manual_seed(1);
  Generator g(GeneratorConfig{});
  torch::NoGradGuard no_grad;
  for (int64_t n : {16384, 1000, 8193}) {
    CAPTURE(n);
    CHECK(g->forward(torch::randn({1, n})).size(1) == n);
  }
  CHECK(g->forward(torch::randn({16384})).dim() == 1);
}

TEST_CASE("generator parameter budget") {
  Generator g(GeneratorConfig{});
  const int64_t n = nn::CountParameters(*g);
  CHECK(n >= 1500000);
  CHECK(n <= 2000000);
}

TEST_CASE("same seed gives a bit-identical generator output") {
  auto x = torch::randn({1, 8192});
  auto run = [&] {
    torch::manual_seed(7);
    Generator g(GeneratorConfig{});
    torch::NoGradGuard no_grad;
    return g->forward(x);
  };
  CHECK(torch::equal(run(), run()));
}

TEST_CASE("ablation presets stay within three percent of the baseline") {
  const double base = nn::CountParameters(*Generator(GeneratorPreset("default")));
  for (const char* name : {"ablation.no_spectralunet", "ablation.no_waveunet",
                           "ablation.no_masknet"}) {
    CAPTURE(name);
    Generator g(GeneratorPreset(name));
    CHECK(std::abs(nn::CountParameters(*g) / base - 1.0) <= 0.03);
  }
}

TEST_CASE("generator config validation") {
  GeneratorConfig c;
  c.upsampler.rates = {8, 8, 2};
  c.upsampler.kernels = {16, 16, 4};
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = GeneratorConfig{};
  c.wave_unet_widths = {10, 10, 40, 80};
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = GeneratorConfig{};
  c.wave_unet_out_channels = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  CHECK_THROWS_AS(GeneratorPreset("bogus"), ConfigError);
}

TEST_CASE("chunked processing of an identity matches the input") {
  auto x = WhiteNoise(10000, 3);
  ChunkOptions opts{2048, 256};
  auto y = ChunkedApply(x, [](std::span<const float> s) {
    return std::vector<float>(s.begin(), s.end());
  }, opts);
  REQUIRE(y.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-6));
}

TEST_CASE("chunked processing crossfades between chunk outputs") {
  // A constant per-chunk output must blend monotonically in the overlap.
  std::vector<float> x(5000, 0.0f);
  int calls = 0;
  ChunkOptions opts{2048, 512};
  auto y = ChunkedApply(x, [&](std::span<const float> s) {
    return std::vector<float>(s.size(), static_cast<float>(calls++));
  }, opts);
  CHECK(calls >= 3);
  CHECK(y.front() == 0.0f);
  for (std::size_t i = 1; i < y.size(); ++i) CHECK(y[i] >= y[i - 1] - 1e-6f);
}

TEST_CASE("enhance rejects a sample rate mismatch") {
  Generator g(GeneratorPreset("tiny"));
  CHECK_THROWS_AS(enhance_waveform(g, Waveform(std::vector<float>(4096), 8000)), ParameterError);
  auto out = enhance_waveform(g, Waveform(WhiteNoise(5000, 1), 16000));
  CHECK(out.size() == 5000);
  CHECK(out.sample_rate == 16000);
}

}  // TEST_SUITE
