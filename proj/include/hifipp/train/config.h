// include/hifipp/train/config.h

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

#ifndef HIFIPP_TRAIN_CONFIG_H_
#define HIFIPP_TRAIN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hifipp/degrade/degrade.h"
#include "hifipp/disc/discriminators.h"
#include "hifipp/generator/config.h"
#include "hifipp/losses/losses.h"

namespace hifipp {

struct TrainConfig {
  Task task = Task::kBwe;
  int sample_rate = 16000;
  uint64_t seed = 0;

  GeneratorConfig generator;
  DiscriminatorConfig discriminator;
  LossWeights weights;
  DegradationSpec degrade;  // BWE inputs are synthesised on the fly

  int64_t segment_length = 8192;
  int batch_size = 16;
  int64_t total_steps = 100000;
  double lr_g = 2e-4;
  double lr_d = 2e-4;
  double lr_decay = 0.999;  // per epoch
  double adam_beta1 = 0.8;
  double adam_beta2 = 0.99;

  int64_t checkpoint_every = 5000;
  int64_t validate_every = 1000;
  int validation_clips = 16;

  // BWE corpus split: the last `held_out_speakers` speakers (lexicographic)
  // form the evaluation set; the last `held_out_utterances` utterances of
  // every speaker are kept out of training.
  int held_out_speakers = 6;
  int held_out_utterances = 8;

  // Copies sample_rate and seed into the nested configs.
  void Sync();
  // Throws ConfigError on the first inconsistent field.
  void Validate() const;
};

// Named starting points: "bwe", "se", "tiny", "vanilla", "tuned_msd",
// "msd_mpd" and the generator ablations "ablation.no_spectralunet",
// "ablation.no_waveunet", "ablation.no_masknet".
TrainConfig TrainPreset(const std::string& name, Task task = Task::kBwe);
std::vector<std::string> TrainPresetNames();

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Flat "key=value" lines; '#' starts a comment. Throws ConfigError naming
// the line on malformed input.
KeyValues ParseKeyValues(const std::string& text);
KeyValues ReadKeyValues(const std::filesystem::path& path);

// Applies dotted-key overrides in order. Throws ConfigError naming the key
// on unknown keys or unparsable values.
void ApplyOverrides(TrainConfig& cfg, const KeyValues& kv);

// Every settable key with its current value; parsing the result with
// ConfigFromText reproduces `cfg`.
std::string ConfigToText(const TrainConfig& cfg);
std::vector<std::string> ConfigKeys();

// A "preset" key, if present, selects the base (default "bwe" or "se" per
// the "task" key); all other keys are applied on top in order.
TrainConfig ConfigFromKeyValues(const KeyValues& kv);
TrainConfig ConfigFromText(const std::string& text);

}  // namespace hifipp

#endif  // HIFIPP_TRAIN_CONFIG_H_
