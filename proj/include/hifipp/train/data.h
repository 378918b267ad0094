// include/hifipp/train/data.h

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

#ifndef HIFIPP_TRAIN_DATA_H_
#define HIFIPP_TRAIN_DATA_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "hifipp/audio/waveform.h"
#include "hifipp/degrade/degrade.h"

namespace hifipp {

struct ManifestEntry {
  std::string id;                   // relative path without extension
  std::filesystem::path input;      // empty for BWE (synthesised on the fly)
  std::filesystem::path target;
  std::string speaker;              // BWE only
};

struct Manifest {
  Task task = Task::kBwe;
  int sample_rate = 16000;
  std::vector<ManifestEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

enum class Subset { kAll, kTrain, kEval };

std::string SubsetName(Subset s);
Subset ParseSubset(const std::string& name);

// BWE: speakers are sorted; the last held_out_speakers speakers are held out
// and within every speaker the last held_out_utterances utterances are held
// out. kTrain keeps the remaining speakers minus their held-out utterances,
// kEval keeps the held-out utterances of the held-out speakers. SE trees are
// not split.
struct SplitSpec {
  Subset subset = Subset::kAll;
  int held_out_speakers = 0;
  int held_out_utterances = 0;
};

// BWE layout: <root>/<speaker>/<utterance>.wav. SE layout:
// <root>/noisy/<id>.wav and <root>/clean/<id>.wav. Entries are sorted by id.
// Every file is decoded once; undecodable files and SE orphans are collected
// and reported together in one DataError. An empty tree gives an empty
// manifest and a warning.
Manifest build_manifest(const std::filesystem::path& root, Task task, const SplitSpec& split,
                        int sample_rate = 16000);

// Tab-separated "id input target" lines under a "#task=... sample_rate=..."
// header.
void WriteManifest(const std::filesystem::path& path, const Manifest& m);
Manifest ReadManifest(const std::filesystem::path& path);

// Decoded entry at the manifest rate. `input` is empty for BWE.
struct Clip {
  std::string id;
  Waveform input;
  Waveform target;
};

Clip LoadClip(const ManifestEntry& e, int sample_rate);
std::vector<Clip> LoadClips(const Manifest& m);

struct Segment {
  std::vector<float> x;  // degraded input
  std::vector<float> y;  // target
  int64_t offset = 0;
};

// Uniform aligned crop of segment_length samples; clips that are too short
// are reflect-padded at the end. A clip of exactly segment_length samples is
// returned whole without touching the RNG. For BWE the input is synthesised
// from the cropped target with degrade_bwe, drawing the filter from `rng`.
Segment sample_segment(const Clip& clip, int64_t segment_length, std::mt19937_64& rng,
                       const DegradationSpec& spec);

struct Batch {
  torch::Tensor x;  // (B, T) float
  torch::Tensor y;  // (B, T) float
};

Batch MakeBatch(const std::vector<Segment>& segments);

// Full-length network input for a clip: the stored noisy input for SE, and
// for BWE a degradation whose filter draw is seeded from spec.seed and the
// clip id, so validation and evaluation inputs are reproducible.
Waveform FullInput(const Clip& clip, const DegradationSpec& spec);

// Reflect-extends (or truncates) x to n samples.
std::vector<float> ReflectPad(const std::vector<float>& x, std::size_t n);

}  // namespace hifipp

#endif  // HIFIPP_TRAIN_DATA_H_
