// tests/cli_test.cc

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

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <sys/wait.h>

#include "hifipp/audio/wav_io.h"
#include "oracles.h"

using namespace hifipp;
using namespace hifipp::testing;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult Run(const TempDir& dir, const std::string& args) {
  const auto out = dir.path() / "stdout.txt", err = dir.path() / "stderr.txt";
  const std::string cmd = std::string(HIFIPP_CLI_PATH) + " " + args + " >" + out.string() +
                          " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

std::string Q(const fs::path& p) { return "'" + p.string() + "'"; }

void WriteCorpus(const fs::path& root, int speakers, int utterances) {
  for (int s = 0; s < speakers; ++s) {
    fs::create_directories(root / ("spk" + std::to_string(s)));
    for (int u = 0; u < utterances; ++u)
      write_wav(root / ("spk" + std::to_string(s)) / ("u" + std::to_string(u) + ".wav"),
                Waveform(Harmonic(110.0 + 9.0 * u + 50.0 * s, 16000, 8192, 10 * s + u), 16000),
                WavEncoding::kPcm16);
  }
}

// A one-step tiny checkpoint shared by the inference tests.
const fs::path& SharedCheckpoint() {
  static TempDir dir("cli_ckpt");
  static fs::path ckpt;
  if (ckpt.empty()) {
    WriteCorpus(dir.path() / "corpus", 2, 2);
    auto r = Run(dir, "train --data " + Q(dir.path() / "corpus") + " --out " +
                          Q(dir.path() / "run") +
                          " --preset tiny --set total_steps=1 --set batch_size=1"
                          " --set data.held_out_speakers=0 --set data.held_out_utterances=0");
    REQUIRE_MESSAGE(r.code == 0, r.err);
    ckpt = dir.path() / "run" / "last.pt";
  }
  return ckpt;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("unknown config key exits 2 and names the key") {
  TempDir dir("cli");
  WriteCorpus(dir.path() / "corpus", 1, 1);
  auto r = Run(dir, "train --data " + Q(dir.path() / "corpus") + " --out " +
                        Q(dir.path() / "run") + " --set generator.bogus=1");
  CHECK(r.code == 2);
  CHECK(r.err.find("generator.bogus") != std::string::npos);
  std::ofstream(dir.path() / "bad.cfg") << "generator.bogus=1\n";
  r = Run(dir, "train --data " + Q(dir.path() / "corpus") + " --out " + Q(dir.path() / "run") +
                   " --config " + Q(dir.path() / "bad.cfg"));
  CHECK(r.code == 2);
  CHECK(r.err.find("generator.bogus") != std::string::npos);
  CHECK(Run(dir, "train --bogus-flag").code == 2);
}

TEST_CASE("degrade mirrors the tree with sidecars and is seeded") {
  TempDir dir("cli");
  const auto in = dir.path() / "in";
  fs::create_directories(in / "a");
  write_wav(in / "x.wav", Waveform(Tone(1500.0, 16000, 16000, 0.5), 16000));
  write_wav(in / "a" / "y.wav", Waveform(WhiteNoise(8000, 1), 16000));
  write_wav(in / "a" / "z.wav", Waveform(WhiteNoise(8000, 2), 16000));
  const std::string base = "degrade --in " + Q(in) + " --s 2000 --S 16000 --seed 7 --out ";
  auto r = Run(dir, base + Q(dir.path() / "o1"));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  int wavs = 0, sidecars = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir.path() / "o1")) {
    wavs += e.path().extension() == ".wav";
    sidecars += e.path().extension() == ".json";
  }
  CHECK(wavs == 3);
  CHECK(sidecars == 3);
  const auto side = Slurp(dir.path() / "o1" / "a" / "y.json");
  CHECK(side.find("\"family\"") != std::string::npos);
  CHECK(side.find("\"order\"") != std::string::npos);
  CHECK(side.find("\"seed\": 7") != std::string::npos);

  REQUIRE(Run(dir, base + Q(dir.path() / "o2")).code == 0);
  for (const char* f : {"x.wav", "a/y.wav", "a/z.wav"})
    CHECK(read_wav(dir.path() / "o1" / f).samples == read_wav(dir.path() / "o2" / f).samples);

  const auto x = read_wav(in / "x.wav"), y = read_wav(dir.path() / "o1" / "x.wav");
  CHECK(y.size() == x.size());
  CHECK(y.sample_rate == 16000);
  CHECK(Db(BandEnergyAbove(x.samples, 16000, 1000.0) / BandEnergyAbove(y.samples, 16000, 1000.0)) >=
        25.0);
}

TEST_CASE("degrade reports unreadable inputs") {
  TempDir dir("cli");
  fs::create_directories(dir.path() / "in");
  write_wav(dir.path() / "in" / "ok.wav", Waveform(WhiteNoise(4000, 1), 16000));
  std::ofstream(dir.path() / "in" / "broken.wav") << "garbage";
  auto r = Run(dir, "degrade --in " + Q(dir.path() / "in") + " --out " + Q(dir.path() / "o"));
  CHECK(r.code == 1);
  CHECK(r.err.find("broken.wav") != std::string::npos);
  CHECK(fs::exists(dir.path() / "o" / "ok.wav"));
}

TEST_CASE("train launches for both tasks and honours presets") {
  TempDir dir("cli");
  WriteCorpus(dir.path() / "bwe", 1, 1);
  fs::create_directories(dir.path() / "se" / "noisy");
  fs::create_directories(dir.path() / "se" / "clean");
  write_wav(dir.path() / "se" / "clean" / "a.wav", Waveform(Harmonic(150, 16000, 8192, 1), 16000));
  write_wav(dir.path() / "se" / "noisy" / "a.wav", Waveform(WhiteNoise(8192, 1), 16000));
  const std::string quick =
      " --set total_steps=1 --set batch_size=1 --set data.held_out_speakers=0"
      " --set data.held_out_utterances=0";
  auto bwe = Run(dir, "train --task bwe --data " + Q(dir.path() / "bwe") + " --out " +
                          Q(dir.path() / "r1") + quick);
  CHECK_MESSAGE(bwe.code == 0, bwe.err);
  auto se = Run(dir, "train --task se --data " + Q(dir.path() / "se") + " --out " +
                         Q(dir.path() / "r2") + quick);
  CHECK_MESSAGE(se.code == 0, se.err);
  CHECK(Slurp(dir.path() / "r2" / "config.txt").find("task=se") != std::string::npos);
  auto abl = Run(dir, "train --preset ablation.no_waveunet --data " + Q(dir.path() / "bwe") +
                          " --out " + Q(dir.path() / "r3") + quick);
  CHECK_MESSAGE(abl.code == 0, abl.err);
  CHECK(Slurp(dir.path() / "r3" / "config.txt").find("generator.use_wave_unet=false") !=
        std::string::npos);
  CHECK(fs::exists(dir.path() / "r3" / "train_log.csv"));
}

TEST_CASE("enhance keeps duration, resamples on request and is repeatable") {
  const auto& ckpt = SharedCheckpoint();
  TempDir dir("cli");
  write_wav(dir.path() / "in.wav", Waveform(Harmonic(130, 16000, 5001, 3), 16000));
  write_wav(dir.path() / "in8k.wav", Waveform(Harmonic(130, 8000, 4000, 3), 8000));
  const std::string base = "enhance --checkpoint " + Q(ckpt) + " --in ";
  REQUIRE(Run(dir, base + Q(dir.path() / "in.wav") + " --out " + Q(dir.path() / "a.wav")).code ==
          0);
  REQUIRE(Run(dir, base + Q(dir.path() / "in.wav") + " --out " + Q(dir.path() / "b.wav")).code ==
          0);
  const auto a = read_wav(dir.path() / "a.wav");
  CHECK(a.size() == 5001);
  CHECK(a.samples == read_wav(dir.path() / "b.wav").samples);

  CHECK(Run(dir, base + Q(dir.path() / "in8k.wav") + " --out " + Q(dir.path() / "c.wav")).code !=
        0);
  auto r = Run(dir, "extend --checkpoint " + Q(ckpt) + " --in " + Q(dir.path() / "in8k.wav") +
                        " --out " + Q(dir.path() / "c.wav") + " --resample");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto c = read_wav(dir.path() / "c.wav");
  CHECK(c.sample_rate == 16000);
  CHECK(c.size() == 8000);
}

TEST_CASE("evaluate report columns and aggregate line") {
  const auto& ckpt = SharedCheckpoint();
  TempDir dir("cli");
  WriteCorpus(dir.path() / "corpus", 1, 3);
  const std::string base = "evaluate --checkpoint " + Q(ckpt) + " --data " +
                           Q(dir.path() / "corpus") + " --task bwe --out ";
  auto r = Run(dir, base + Q(dir.path() / "full.csv"));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const std::regex line(R"(si_sdr=\S+±\S+ lsd=\S+±\S+\s*)");
  CHECK(std::regex_match(r.out, line));
  auto full = Slurp(dir.path() / "full.csv");
  CHECK(full.rfind("id,si_sdr,lsd\n", 0) == 0);
  CHECK(std::count(full.begin(), full.end(), '\n') == 4);

  REQUIRE(Run(dir, base + Q(dir.path() / "si.csv") + " --metrics si_sdr").code == 0);
  CHECK(Slurp(dir.path() / "si.csv").rfind("id,si_sdr\n", 0) == 0);

  r = Run(dir, base + Q(dir.path() / "ext.csv") + " --external-pesq \"sh -c 'echo 2.5' x\"");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto ext = Slurp(dir.path() / "ext.csv");
  CHECK(ext.rfind("id,si_sdr,lsd,pesq\n", 0) == 0);
  CHECK(ext.find(",2.5\n") != std::string::npos);
  CHECK(r.out.find("pesq=2.5±0") != std::string::npos);
}

}  // TEST_SUITE
