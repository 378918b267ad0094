// include/hifipp/train/trainer.h

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

#ifndef HIFIPP_TRAIN_TRAINER_H_
#define HIFIPP_TRAIN_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "hifipp/audio/mel.h"
#include "hifipp/disc/discriminators.h"
#include "hifipp/generator/generator.h"
#include "hifipp/train/config.h"
#include "hifipp/train/data.h"

namespace hifipp {

// Losses of one optimisation step.
struct StepRecord {
  int64_t step = 0;  // 1-based index of the step just taken
  double g_gan = 0.0, g_fm = 0.0, g_mel = 0.0, g_total = 0.0;
  std::vector<double> d_loss;  // one per discriminator
  double lr_g = 0.0, lr_d = 0.0;
  double seconds = 0.0;

  static std::string CsvHeader(std::size_t num_discriminators);
  std::string ToCsv() const;
};

struct ValidationRecord {
  int64_t step = 0;
  double mel_loss = 0.0;
  double si_sdr = 0.0;  // mean over clips
  int clips = 0;
};

// Owns the generator, the discriminator ensemble, one Adam optimiser for the
// generator and one per discriminator, and the data RNG.
class Trainer {
 public:
  // Seeds torch from cfg.seed before building the networks.
  explicit Trainer(TrainConfig cfg);

  // One alternating update: every discriminator minimises its LS-GAN loss on
  // the detached generator output, then the generator minimises
  // gan + lambda_fm * fm + lambda_mel * mel. Throws NumericError if a loss
  // is not finite; the message carries the step record.
  StepRecord train_step(const Batch& batch);

  // Draws batch_size segments from `clips` following the epoch order.
  Batch NextBatch(const std::vector<Clip>& clips);

  ValidationRecord Validate(const std::vector<Clip>& clips);

  // Single archive with keys config, step, g.*, d.<i>.*, opt_g, opt_d.<i>,
  // rng. Written to a temporary file and renamed, so an interrupted save
  // leaves the previous file intact.
  void Save(const std::filesystem::path& path) const;
  // Restores a state written by Save; the config is taken from the archive.
  static std::unique_ptr<Trainer> Load(const std::filesystem::path& path);

  const TrainConfig& config() const { return cfg_; }
  Generator& generator() { return g_; }
  DiscriminatorEnsemble& discriminators() { return d_; }
  torch::optim::Adam& generator_optimizer() { return *opt_g_; }
  torch::optim::Adam& discriminator_optimizer(std::size_t i) { return *opt_d_.at(i); }
  std::size_t num_discriminators() const { return opt_d_.size(); }
  int64_t step() const { return step_; }
  std::mt19937_64& rng() { return rng_; }

  // Epochs are passes over `num_clips` clips in batches of batch_size.
  void SetEpochSize(std::size_t num_clips);
  // Learning rates for the current step: base * decay^epoch.
  double CurrentLrG() const;
  double CurrentLrD() const;

 private:
  void ApplyLearningRates();
  int64_t Epoch() const;

  TrainConfig cfg_;
  Generator g_{nullptr};
  DiscriminatorEnsemble d_{nullptr};
  std::unique_ptr<torch::optim::Adam> opt_g_;
  std::vector<std::unique_ptr<torch::optim::Adam>> opt_d_;
  LogMel log_mel_;
  std::mt19937_64 rng_;
  int64_t step_ = 0;
  int64_t steps_per_epoch_ = 1;
  std::vector<std::size_t> epoch_order_;
  int64_t order_epoch_ = -1;
};

struct TrainOptions {
  std::filesystem::path out_dir;
  // Resume from this checkpoint when set. Its config wins over the argument
  // except for total_steps, which always comes from the argument.
  std::filesystem::path resume;
  // Called after every step; returning false stops training early.
  std::function<bool(const StepRecord&)> on_step;
};

struct TrainResult {
  int64_t final_step = 0;
  std::vector<StepRecord> steps;
  std::vector<ValidationRecord> validations;
  std::filesystem::path last_checkpoint;
};

// Runs training to cfg.total_steps on `train` with periodic validation on up
// to validation_clips clips of `valid`. Writes config.txt, train_log.csv,
// validation.csv and checkpoints (ckpt_<step>.pt and last.pt) to out_dir.
TrainResult train(const TrainConfig& cfg, const Manifest& train_set, const Manifest& valid_set,
                  const TrainOptions& opts);

// Generator and config restored from a checkpoint, for inference.
struct LoadedModel {
  TrainConfig config;
  Generator generator{nullptr};
};

LoadedModel LoadModel(const std::filesystem::path& checkpoint);

}  // namespace hifipp

#endif  // HIFIPP_TRAIN_TRAINER_H_
