// tests/audio_test.cc

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
#include <numbers>

#include "hifipp/audio/mel.h"
#include "hifipp/audio/resample.h"
#include "hifipp/audio/stft.h"
#include "hifipp/audio/wav_io.h"
#include "hifipp/errors.h"
#include "hifipp/metrics/metrics.h"
#include "oracles.h"

using namespace hifipp;
using namespace hifipp::testing;

TEST_SUITE("audio") {

TEST_CASE("stft of silence is zero with the expected shape") {
  Waveform w(std::vector<float>(4096, 0.0f), 16000);
  auto s = stft(w, StftConfig{});
  CHECK(s.num_bins() == 513);
  CHECK(s.num_frames() == 16);
  CHECK(torch::abs(s.bins).max().item<float>() == 0.0f);
}

TEST_CASE("stft frames match a direct DFT of the padded signal") {
  StftConfig cfg{256, 64, 256};
  auto x = WhiteNoise(1024, 11);
  auto s = stft(Waveform(x, 16000), cfg);
  // Reflect padding by (n_fft - hop) / 2 on the left.
  const int pad = cfg.pad_left();
  auto sample = [&](int i) {
    int j = i - pad;
    if (j < 0) j = -j;
    const int n = static_cast<int>(x.size());
    if (j >= n) j = 2 * (n - 1) - j;
    return static_cast<double>(x[j]);
  };
  const auto win = PeriodicHann(cfg.n_fft);
  double worst = 0.0;
  for (int f : {0, 3, 15}) {
    std::vector<double> frame(cfg.n_fft);
    for (int t = 0; t < cfg.n_fft; ++t) frame[t] = win[t] * sample(f * cfg.hop + t);
    const auto ref = NaiveDft(frame);
    auto col = s.bins.select(1, f).to(torch::kComplexDouble);
    for (int k = 0; k < cfg.num_bins(); ++k) {
      const auto v = col[k].item<c10::complex<double>>();
      worst = std::max(worst, std::abs(std::complex<double>(v.real(), v.imag()) - ref[k]));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("tone energy peaks at the closed-form bin") {
  auto s = stft(Waveform(Tone(1000.0, 16000, 8192), 16000), StftConfig{});
  // Frames whose window overlaps the reflect padding see a phase flip.
  auto peak = torch::abs(s.bins).argmax(0).slice(0, 2, -2);
  CHECK(torch::all(peak == 64).item<bool>());
}

TEST_CASE("stft is linear in amplitude") {
  auto x = WhiteNoise(4096, 3);
  std::vector<float> x2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x2[i] = 2.0f * x[i];
  auto a = stft(Waveform(x, 16000), StftConfig{}).bins;
  auto b = stft(Waveform(x2, 16000), StftConfig{}).bins;
  CHECK(torch::abs(b - 2.0 * a).max().item<float>() < 1e-6);
}

TEST_CASE("istft inverts stft") {
  auto x = WhiteNoise(8192, 5);
  auto y = istft(stft(Waveform(x, 16000), StftConfig{}), 16000);
  REQUIRE(y.size() == x.size());
  CHECK(RelL2(y.samples, x) < 1e-5);
}

TEST_CASE("spectrogram energy matches waveform energy after window compensation") {
  // Periodic Hann at hop n_fft/4 overlaps its squares to 3/8 * n_fft / hop.
  const StftConfig cfg;
  auto x = WhiteNoise(160000, 6);
  auto mag2 = torch::abs(stft(Waveform(x, 16000), cfg).bins).to(torch::kDouble).pow(2);
  const int64_t last = cfg.n_fft / 2;
  const double one_sided = 2.0 * mag2.sum().item<double>() - mag2[0].sum().item<double>() -
                           mag2[last].sum().item<double>();
  const double overlap = 0.375 * cfg.n_fft / cfg.hop;
  const double expected = cfg.n_fft * overlap * Power(x);
  CHECK(std::abs(one_sided / expected - 1.0) < 0.01);
}

TEST_CASE("istft of a zero spectrogram is silent") {
  ComplexSpectrogram s{torch::zeros({513, 8}, torch::kComplexFloat), StftConfig{}};
  auto y = istft(s, 16000);
  CHECK(y.size() == 8 * 256);
  CHECK(Power(y.samples) == 0.0);
}

TEST_CASE("doubling bin magnitudes doubles the tone") {
  auto x = Tone(1000.0, 16000, 8192);
  auto s = stft(Waveform(x, 16000), StftConfig{});
  s.bins = torch::polar(2.0f * torch::abs(s.bins), torch::angle(s.bins));
  auto y = istft(s, 16000);
  std::vector<float> x2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x2[i] = 2.0f * x[i];
  CHECK(RelL2(y.samples, x2) < 1e-4);
}

TEST_CASE("stft config validation") {
  CHECK_THROWS_AS((StftConfig{1024, 2048, 1024}.Validate()), ConfigError);
  CHECK_THROWS_AS((StftConfig{1024, 256, 2048}.Validate()), ConfigError);
  CHECK_THROWS_AS((StftConfig{1024, 300, 1024}.Validate()), ConfigError);
  CHECK_NOTHROW((StftConfig{1024, 256, 1024}.Validate()));
  CHECK_THROWS_AS(stft(Waveform(std::vector<float>(100, 0.0f), 16000), StftConfig{}), LengthError);
}

TEST_CASE("mel filterbank rows are non-negative with positive mass") {
  auto fb = MelFilterbank::Build(MelConfig{});
  const auto& w = fb.weights();
  CHECK(w.size(0) == 80);
  CHECK(w.size(1) == 513);
  CHECK(w.min().item<float>() >= 0.0f);
  CHECK(w.sum(1).min().item<float>() > 0.0f);
  CHECK_THROWS_AS(MelFilterbank::Build(MelConfig{16000, 1024, 80, 9000.0, 0.0}), ConfigError);
}

TEST_CASE("mel scale round trip") {
  for (double hz : {0.0, 440.0, 1000.0, 3000.0, 8000.0})
    CHECK(MelToHz(HzToMel(hz)) == doctest::Approx(hz).epsilon(1e-12));
}

TEST_CASE("log mel of silence sits at the floor") {
  auto fb = MelFilterbank::Build(MelConfig{});
  auto m = mel_spectrogram(Waveform(std::vector<float>(4096, 0.0f), 16000), fb, StftConfig{});
  CHECK(torch::allclose(m.values, torch::full_like(m.values, std::log(1e-5))));
  CHECK(std::log(1e-5) == doctest::Approx(-11.5129).epsilon(1e-5));
}

TEST_CASE("log mel shape follows hop arithmetic") {
  auto fb = MelFilterbank::Build(MelConfig{});
  auto m = mel_spectrogram(Waveform(WhiteNoise(16384, 1), 16000), fb, StftConfig{});
  CHECK(m.n_mels() == 80);
  CHECK(m.num_frames() == 64);
}

TEST_CASE("log mel never decreases when the waveform is scaled up") {
  auto fb = MelFilterbank::Build(MelConfig{});
  auto x = WhiteNoise(8192, 9, 0.01);
  auto base = mel_spectrogram(Waveform(x, 16000), fb, StftConfig{}).values;
  for (float a : {1.5f, 3.0f, 40.0f}) {
    CAPTURE(a);
    auto y = x;
    for (auto& v : y) v *= a;
    auto scaled = mel_spectrogram(Waveform(y, 16000), fb, StftConfig{}).values;
    CHECK(torch::all(scaled >= base).item<bool>());
  }
}

TEST_CASE("low tone energy lands in the lowest mel bands") {
  auto fb = MelFilterbank::Build(MelConfig{});
  auto x = Waveform(Tone(100.0, 16000, 16384), 16000).ToTensor();
  auto mag = torch::abs(Stft(StftConfig{}).Forward(x));
  auto mel = torch::matmul(fb.weights(), mag * mag);  // linear energy per band
  const double low = mel.narrow(0, 0, 10).sum().item<double>();
  const double all = mel.sum().item<double>();
  CHECK(low / all >= 0.9);
}

TEST_CASE("resampling length ratio and identity") {
  Waveform w(WhiteNoise(1600, 2), 16000);
  CHECK(resample(w, 2000).size() == 200);
  CHECK(resample(w, 2000).sample_rate == 2000);
  auto same = resample(w, 16000);
  CHECK(same.samples == w.samples);
}

TEST_CASE("tone survives a down and up resampling round trip") {
  Waveform w(Tone(300.0, 16000, 16000), 16000);
  auto back = resample(resample(w, 2000), 16000);
  REQUIRE(back.size() == w.size());
  const std::size_t guard = 1000;
  std::span<const float> est(back.samples.data() + guard, w.size() - 2 * guard);
  std::span<const float> ref(w.samples.data() + guard, w.size() - 2 * guard);
  CHECK(si_sdr(est, ref) >= 30.0);
}

TEST_CASE("wav float32 round trip is bitwise") {
  TempDir dir("wav");
  Waveform w(WhiteNoise(3000, 9), 22050);
  write_wav(dir.path() / "a.wav", w);
  auto r = read_wav(dir.path() / "a.wav");
  CHECK(r.sample_rate == 22050);
  CHECK(r.samples == w.samples);
}

TEST_CASE("wav pcm16 quantisation bound") {
  TempDir dir("wav");
  write_wav(dir.path() / "a.wav", Waveform(std::vector<float>(100, 0.5f), 16000),
            WavEncoding::kPcm16);
  auto r = read_wav(dir.path() / "a.wav");
  for (float v : r.samples) CHECK(std::abs(v - 0.5f) <= 1.0f / 32768.0f);
}

TEST_CASE("stereo wav is downmixed to the channel mean") {
  TempDir dir("wav");
  auto l = WhiteNoise(500, 1);
  auto r = WhiteNoise(500, 2);
  write_wav_channels(dir.path() / "s.wav", {l, r}, 16000);
  auto m = read_wav(dir.path() / "s.wav");
  REQUIRE(m.size() == 500);
  for (std::size_t i = 0; i < 500; ++i)
    CHECK(m.samples[i] == doctest::Approx(0.5 * (l[i] + r[i])).epsilon(1e-6));
}

TEST_CASE("waveform validation rejects non-finite samples") {
  Waveform w(std::vector<float>{0.0f, std::nanf("")}, 16000);
  CHECK_THROWS(w.Validate());
  CHECK_THROWS(Waveform(std::vector<float>{0.0f}, 0).Validate());
  CHECK_THROWS_AS(read_wav("/nonexistent/file.wav"), Error);
}

}  // TEST_SUITE
