// tests/train_test.cc

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
#include <fstream>
#include <sstream>

#include "hifipp/audio/wav_io.h"
#include "hifipp/errors.h"
#include "hifipp/nn/layers.h"
#include "hifipp/train/config.h"
#include "hifipp/train/data.h"
#include "hifipp/train/trainer.h"
#include "oracles.h"

using namespace hifipp;
using namespace hifipp::testing;
namespace fs = std::filesystem;

namespace {

TrainConfig TinyConfig() {
  auto c = TrainPreset("tiny");
  c.batch_size = 1;
  c.seed = 3;
  c.Sync();
  return c;
}

Clip SyntheticClip(uint64_t seed, std::size_t n = 8192) {
  return Clip{"c" + std::to_string(seed), Waveform(),
              Waveform(Harmonic(120.0 + 15.0 * seed, 16000, n, seed), 16000)};
}

std::vector<torch::Tensor> Snapshot(const torch::nn::Module& m) {
  std::vector<torch::Tensor> out;
  for (const auto& p : m.parameters()) out.push_back(p.detach().clone());
  return out;
}

bool SameParameters(const torch::nn::Module& m, const std::vector<torch::Tensor>& snap) {
  const auto params = m.parameters();
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!torch::equal(params[i], snap[i])) return false;
  return true;
}

int64_t AdamSteps(torch::optim::Adam& opt, bool* consistent) {
  int64_t step = -1;
  *consistent = true;
  for (const auto& group : opt.param_groups()) {
    for (const auto& p : group.params()) {
      auto it = opt.state().find(p.unsafeGetTensorImpl());
      const int64_t s = it == opt.state().end()
                            ? 0
                            : static_cast<torch::optim::AdamParamState&>(*it->second).step();
      if (step >= 0 && s != step) *consistent = false;
      step = s;
    }
  }
  return step;
}

void WriteBweTree(const fs::path& root, int speakers, int utterances) {
  for (int s = 0; s < speakers; ++s) {
    const fs::path dir = root / ("p" + std::to_string(225 + s));
    fs::create_directories(dir);
    for (int u = 0; u < utterances; ++u) {
      char name[32];
      std::snprintf(name, sizeof(name), "u%03d.wav", u);
      write_wav(dir / name, Waveform(Harmonic(100.0 + 7 * u + 40 * s, 16000, 4096, u + 1), 16000),
                WavEncoding::kPcm16);
    }
  }
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("presets") {
  for (const auto& name : TrainPresetNames()) {
    CAPTURE(name);
    CHECK_NOTHROW(TrainPreset(name).Validate());
  }
  auto msd = TrainPreset("tuned_msd");
  CHECK(msd.weights.lambda_mel == 15.0);
  CHECK(msd.lr_d == 1e-5);
  CHECK(msd.discriminator.kind == DiscriminatorKind::kMsd);
  auto d = TrainPreset("bwe");
  CHECK(d.weights.lambda_fm == 2.0);
  CHECK(d.weights.lambda_mel == 45.0);
  CHECK(d.adam_beta1 == 0.8);
  CHECK(d.adam_beta2 == 0.99);
  CHECK(d.lr_decay == 0.999);
  CHECK(TrainPreset("se", Task::kSe).task == Task::kSe);
  CHECK_FALSE(TrainPreset("ablation.no_waveunet").generator.use_wave_unet);
  CHECK_THROWS_AS(TrainPreset("bogus"), ConfigError);
}

TEST_CASE("text round trip and overrides") {
  auto c = TrainPreset("tiny");
  ApplyOverrides(c, ParseKeyValues("# comment\n\nbatch_size = 4  # trailing\n"));
  CHECK(c.batch_size == 4);
  const auto text = ConfigToText(c);
  CHECK(ConfigToText(ConfigFromText(text)) == text);
  // Later keys win.
  auto kv = ParseKeyValues("lr_g=1e-3\nlr_g=5e-4\n");
  ApplyOverrides(c, kv);
  CHECK(c.lr_g == 5e-4);
  ApplyOverrides(c, {{"generator.wave_unet_out_channels", "2"}, {"discriminator.k", "5"}});
  CHECK(c.generator.wave_unet_out_channels == 2);
  CHECK(c.discriminator.k == 5);
}

TEST_CASE("unknown and malformed keys are errors") {
  auto c = TrainPreset("bwe");
  try {
    ApplyOverrides(c, {{"generator.bogus", "1"}});
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("generator.bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseKeyValues("no_equals_sign\n"), ConfigError);
  CHECK_THROWS_AS(ApplyOverrides(c, {{"batch_size", "many"}}), ConfigError);
}

TEST_CASE("segment length must be a hop multiple") {
  auto c = TrainPreset("bwe");
  c.segment_length = 8000;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
}

}  // TEST_SUITE

TEST_SUITE("data") {

TEST_CASE("empty corpus gives an empty manifest") {
  TempDir dir("data");
  CHECK(build_manifest(dir.path(), Task::kBwe, SplitSpec{}).empty());
}

TEST_CASE("speaker split counts") {
  TempDir dir("data");
  WriteBweTree(dir.path(), 2, 10);
  auto all = build_manifest(dir.path(), Task::kBwe, SplitSpec{});
  CHECK(all.size() == 20);
  auto train = build_manifest(dir.path(), Task::kBwe, SplitSpec{Subset::kTrain, 1, 0});
  CHECK(train.size() == 10);
  for (const auto& e : train.entries) CHECK(e.speaker == "p225");
  // Held-out utterances come off every speaker; evaluation keeps them for
  // held-out speakers only.
  auto train2 = build_manifest(dir.path(), Task::kBwe, SplitSpec{Subset::kTrain, 1, 3});
  CHECK(train2.size() == 7);
  auto eval2 = build_manifest(dir.path(), Task::kBwe, SplitSpec{Subset::kEval, 1, 3});
  CHECK(eval2.size() == 3);
  for (const auto& e : eval2.entries) CHECK(e.speaker == "p226");
  // Lexicographic order.
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all.entries[i - 1].id < all.entries[i].id);
}

TEST_CASE("orphans in a paired corpus are reported together") {
  TempDir dir("data");
  fs::create_directories(dir.path() / "noisy");
  fs::create_directories(dir.path() / "clean");
  Waveform w(WhiteNoise(1000, 1), 16000);
  write_wav(dir.path() / "noisy" / "a.wav", w);
  write_wav(dir.path() / "clean" / "a.wav", w);
  write_wav(dir.path() / "noisy" / "only_noisy.wav", w);
  write_wav(dir.path() / "clean" / "only_clean.wav", w);
  try {
    build_manifest(dir.path(), Task::kSe, SplitSpec{});
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("only_noisy") != std::string::npos);
    CHECK(msg.find("only_clean") != std::string::npos);
  }
}

TEST_CASE("undecodable files are reported") {
  TempDir dir("data");
  fs::create_directories(dir.path() / "p1");
  std::ofstream(dir.path() / "p1" / "bad.wav") << "not a wav file";
  CHECK_THROWS_AS(build_manifest(dir.path(), Task::kBwe, SplitSpec{}), DataError);
}

TEST_CASE("manifest file round trip") {
  TempDir dir("data");
  WriteBweTree(dir.path() / "corpus", 2, 3);
  auto m = build_manifest(dir.path() / "corpus", Task::kBwe, SplitSpec{});
  WriteManifest(dir.path() / "m.tsv", m);
  auto r = ReadManifest(dir.path() / "m.tsv");
  REQUIRE(r.size() == m.size());
  CHECK(r.task == m.task);
  CHECK(r.sample_rate == m.sample_rate);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(r.entries[i].id == m.entries[i].id);
    CHECK(r.entries[i].target == m.entries[i].target);
    CHECK(r.entries[i].speaker == m.entries[i].speaker);
  }
}

TEST_CASE("segments") {
  DegradationSpec spec;
  auto clip = SyntheticClip(1, 8192);
  std::mt19937_64 a(1), b(99);
  auto s1 = sample_segment(clip, 8192, a, spec);
  auto s2 = sample_segment(clip, 8192, b, spec);
  CHECK(s1.offset == 0);
  CHECK(s1.y == clip.target.samples);
  CHECK(s2.y == clip.target.samples);

  auto longer = SyntheticClip(2, 20000);
  std::mt19937_64 c(5), d(5);
  auto l1 = sample_segment(longer, 8192, c, spec);
  auto l2 = sample_segment(longer, 8192, d, spec);
  CHECK(l1.offset == l2.offset);
  CHECK(l1.x == l2.x);
  CHECK(l1.y == l2.y);
  CHECK(l1.x.size() == l1.y.size());
  CHECK(std::equal(l1.y.begin(), l1.y.end(), longer.target.samples.begin() + l1.offset));

  auto shorter = SyntheticClip(3, 3000);
  std::mt19937_64 e(1);
  auto p = sample_segment(shorter, 8192, e, spec);
  CHECK(p.y.size() == 8192);
  CHECK(p.y[3000] == shorter.target.samples[2998]);  // reflect padding
}

TEST_CASE("degraded crops are band limited") {
  DegradationSpec spec;
  auto clip = Clip{"n", Waveform(), Waveform(WhiteNoise(16000, 7), 16000)};
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3; ++i) {
    auto s = sample_segment(clip, 8192, rng, spec);
    REQUIRE(s.x.size() == s.y.size());
    const double ex = BandEnergyAbove(s.x, 16000, 1000.0);
    const double ey = BandEnergyAbove(s.y, 16000, 1000.0);
    CHECK(Db(ey / ex) >= 20.0);
  }
}

}  // TEST_SUITE

TEST_SUITE("trainer") {

TEST_CASE("zero learning rates leave every parameter bitwise unchanged") {
  auto c = TinyConfig();
  c.lr_g = 0.0;
  c.lr_d = 0.0;
  Trainer t(c);
  auto g0 = Snapshot(*t.generator());
  auto d0 = Snapshot(*t.discriminators());
  std::mt19937_64 rng(1);
  auto batch = MakeBatch({sample_segment(SyntheticClip(1), 8192, rng, c.degrade)});
  auto rec = t.train_step(batch);
  CHECK(SameParameters(*t.generator(), g0));
  CHECK(SameParameters(*t.discriminators(), d0));
  CHECK(rec.d_loss.size() == 3);
  CHECK(std::isfinite(rec.g_total));
}

TEST_CASE("the discriminator phase does not move the generator") {
  auto c = TinyConfig();
  c.lr_g = 0.0;
  Trainer t(c);
  auto g0 = Snapshot(*t.generator());
  auto d0 = Snapshot(*t.discriminators());
  std::mt19937_64 rng(1);
  t.train_step(MakeBatch({sample_segment(SyntheticClip(1), 8192, rng, c.degrade)}));
  CHECK(SameParameters(*t.generator(), g0));
  CHECK_FALSE(SameParameters(*t.discriminators(), d0));
}

TEST_CASE("every discriminator optimiser advances once per step") {
  auto c = TinyConfig();
  Trainer t(c);
  REQUIRE(t.num_discriminators() == 3);
  std::mt19937_64 rng(1);
  auto batch = MakeBatch({sample_segment(SyntheticClip(1), 8192, rng, c.degrade)});
  for (int step = 1; step <= 2; ++step) {
    t.train_step(batch);
    for (std::size_t i = 0; i < 3; ++i) {
      bool consistent = false;
      CHECK(AdamSteps(t.discriminator_optimizer(i), &consistent) == step);
      CHECK(consistent);
    }
    bool consistent = false;
    CHECK(AdamSteps(t.generator_optimizer(), &consistent) == step);
  }
}

TEST_CASE("non-finite losses abort with the step record") {
  Trainer t(TinyConfig());
  auto x = torch::zeros({1, 8192});
  x[0][10] = std::numeric_limits<float>::quiet_NaN();
  try {
    t.train_step(Batch{x, torch::zeros({1, 8192})});
    FAIL("expected a NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("g_mel") != std::string::npos);
  }
}

TEST_CASE("learning rate decays per epoch") {
  auto c = TinyConfig();
  Trainer t(c);
  t.SetEpochSize(2);
  std::vector<Clip> clips{SyntheticClip(1), SyntheticClip(2)};
  CHECK(t.CurrentLrG() == c.lr_g);
  t.train_step(t.NextBatch(clips));
  CHECK(t.CurrentLrG() == c.lr_g);
  t.train_step(t.NextBatch(clips));
  CHECK(t.CurrentLrG() == doctest::Approx(c.lr_g * c.lr_decay).epsilon(1e-15));
  CHECK(t.CurrentLrD() == doctest::Approx(c.lr_d * c.lr_decay).epsilon(1e-15));
}

TEST_CASE("checkpoint layout and resumed trajectory") {
  TempDir dir("ckpt");
  auto c = TinyConfig();
  std::vector<Clip> clips{SyntheticClip(1), SyntheticClip(2), SyntheticClip(3)};
  Trainer t(c);
  t.SetEpochSize(clips.size());
  for (int i = 0; i < 3; ++i) t.train_step(t.NextBatch(clips));
  const auto path = dir.path() / "ckpt.pt";
  t.Save(path);

  torch::serialize::InputArchive ar;
  ar.load_from(path.string());
  const auto keys = ar.keys();
  auto has = [&](const std::string& prefix) {
    return std::any_of(keys.begin(), keys.end(),
                       [&](const std::string& k) { return k.rfind(prefix, 0) == 0; });
  };
  for (const char* k : {"config", "step", "g.", "d.0.", "d.2.", "opt_g", "opt_d.0", "opt_d.2",
                        "rng"})
    CHECK_MESSAGE(has(k), k);

  std::vector<StepRecord> first, second;
  for (int i = 0; i < 10; ++i) first.push_back(t.train_step(t.NextBatch(clips)));
  auto r = Trainer::Load(path);
  CHECK(r->step() == 3);
  r->SetEpochSize(clips.size());
  for (int i = 0; i < 10; ++i) second.push_back(r->train_step(r->NextBatch(clips)));
  for (std::size_t i = 0; i < first.size(); ++i) {
    CAPTURE(i);
    CHECK(first[i].g_total == second[i].g_total);
    CHECK(first[i].d_loss == second[i].d_loss);
  }
  CHECK(SameParameters(*r->generator(), Snapshot(*t.generator())));
}

TEST_CASE("training run writes logs, checkpoints and resumes") {
  TempDir dir("train");
  WriteBweTree(dir.path() / "corpus", 2, 2);
  auto data = build_manifest(dir.path() / "corpus", Task::kBwe, SplitSpec{});
  auto c = TrainPreset("ablation.no_waveunet");
  c.batch_size = 1;
  c.segment_length = 4096;
  c.total_steps = 2;
  c.checkpoint_every = 1;
  c.validate_every = 2;
  c.validation_clips = 2;
  c.Sync();
  TrainOptions opts;
  opts.out_dir = dir.path() / "run";
  auto res = train(c, data, data, opts);
  CHECK(res.final_step == 2);
  CHECK(res.steps.size() == 2);
  REQUIRE(res.validations.size() == 1);
  CHECK(res.validations[0].clips == 2);
  CHECK(std::isfinite(res.validations[0].si_sdr));
  for (const char* f : {"config.txt", "train_log.csv", "validation.csv", "ckpt_1.pt", "ckpt_2.pt",
                        "last.pt"})
    CHECK_MESSAGE(fs::exists(opts.out_dir / f), f);
  const auto log = ReadFile(opts.out_dir / "train_log.csv");
  CHECK(log.rfind("step,g_gan,g_fm,g_mel,g_total,d_0,d_1,d_2,", 0) == 0);

  c.total_steps = 3;
  opts.resume = opts.out_dir / "last.pt";
  auto more = train(c, data, data, opts);
  CHECK(more.final_step == 3);
  CHECK(more.steps.size() == 1);
  auto loaded = LoadModel(opts.out_dir / "last.pt");
  CHECK_FALSE(loaded.config.generator.use_wave_unet);
  CHECK(nn::CountParameters(*loaded.generator) ==
        nn::CountParameters(*Generator(GeneratorPreset("ablation.no_waveunet"))));
}

}  // TEST_SUITE
