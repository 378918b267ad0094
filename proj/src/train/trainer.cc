// src/train/trainer.cc

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

#include "hifipp/train/trainer.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hifipp/errors.h"
#include "hifipp/losses/losses.h"
#include "hifipp/metrics/metrics.h"
#include "hifipp/util/runtime.h"

namespace hifipp {

namespace fs = std::filesystem;

namespace {

std::unique_ptr<torch::optim::Adam> MakeAdam(const std::vector<torch::Tensor>& params, double lr,
                                             const TrainConfig& cfg) {
  return std::make_unique<torch::optim::Adam>(
      params, torch::optim::AdamOptions(lr).betas({cfg.adam_beta1, cfg.adam_beta2}));
}

void SetLr(torch::optim::Adam& opt, double lr) {
  for (auto& group : opt.param_groups())
    static_cast<torch::optim::AdamOptions&>(group.options()).lr(lr);
}

std::string Fixed(double v) {
  std::ostringstream s;
  s.precision(9);
  s << v;
  return s.str();
}

void WriteModule(torch::serialize::OutputArchive& ar, const std::string& prefix,
                 const torch::nn::Module& m) {
  for (const auto& p : m.named_parameters()) ar.write(prefix + p.key(), p.value());
  for (const auto& b : m.named_buffers()) ar.write(prefix + b.key(), b.value(), true);
}

void ReadModule(torch::serialize::InputArchive& ar, const std::string& prefix,
                torch::nn::Module& m) {
  torch::NoGradGuard no_grad;
  for (auto& p : m.named_parameters()) {
    torch::Tensor t;
    ar.read(prefix + p.key(), t);
    if (t.sizes() != p.value().sizes())
      throw FormatError("checkpoint tensor " + prefix + p.key() + " has the wrong shape");
    p.value().copy_(t);
  }
  for (auto& b : m.named_buffers()) {
    torch::Tensor t;
    ar.read(prefix + b.key(), t, true);
    b.value().copy_(t);
  }
}

std::string ReadString(torch::serialize::InputArchive& ar, const std::string& key) {
  c10::IValue v;
  ar.read(key, v);
  return v.toStringRef();
}

}  // namespace

std::string StepRecord::CsvHeader(std::size_t num_discriminators) {
  std::string h = "step,g_gan,g_fm,g_mel,g_total";
  for (std::size_t i = 0; i < num_discriminators; ++i) h += ",d_" + std::to_string(i);
  return h + ",lr_g,lr_d,seconds";
}

std::string StepRecord::ToCsv() const {
  std::string s = std::to_string(step) + "," + Fixed(g_gan) + "," + Fixed(g_fm) + "," +
                  Fixed(g_mel) + "," + Fixed(g_total);
  for (double d : d_loss) s += "," + Fixed(d);
  return s + "," + Fixed(lr_g) + "," + Fixed(lr_d) + "," + Fixed(seconds);
}

Trainer::Trainer(TrainConfig cfg)
    : cfg_((cfg.Sync(), cfg.Validate(), std::move(cfg))),
      log_mel_(MelFilterbank::Build(MelConfig{cfg_.sample_rate, cfg_.generator.mel_stft.n_fft,
                                              cfg_.generator.n_mels}),
               cfg_.generator.mel_stft),
      rng_(cfg_.seed) {
  torch::manual_seed(cfg_.seed);
  g_ = Generator(cfg_.generator);
  d_ = DiscriminatorEnsemble(cfg_.discriminator);
  opt_g_ = MakeAdam(g_->parameters(), cfg_.lr_g, cfg_);
  for (std::size_t i = 0; i < d_->size(); ++i)
    opt_d_.push_back(MakeAdam(d_->member(i)->parameters(), cfg_.lr_d, cfg_));
}

void Trainer::SetEpochSize(std::size_t num_clips) {
  const auto n = static_cast<int64_t>(std::max<std::size_t>(num_clips, 1));
  steps_per_epoch_ = (n + cfg_.batch_size - 1) / cfg_.batch_size;
  order_epoch_ = -1;
}

int64_t Trainer::Epoch() const { return step_ / steps_per_epoch_; }

double Trainer::CurrentLrG() const {
  return cfg_.lr_g * std::pow(cfg_.lr_decay, static_cast<double>(Epoch()));
}

double Trainer::CurrentLrD() const {
  return cfg_.lr_d * std::pow(cfg_.lr_decay, static_cast<double>(Epoch()));
}

void Trainer::ApplyLearningRates() {
  SetLr(*opt_g_, CurrentLrG());
  for (auto& o : opt_d_) SetLr(*o, CurrentLrD());
}

Batch Trainer::NextBatch(const std::vector<Clip>& clips) {
  if (clips.empty()) throw DataError("no training clips");
  const int64_t epoch = Epoch();
  if (order_epoch_ != epoch || epoch_order_.size() != clips.size()) {
    // The order depends only on the seed and the epoch, so resuming mid-epoch
    // reproduces it.
    epoch_order_.resize(clips.size());
    for (std::size_t i = 0; i < clips.size(); ++i) epoch_order_[i] = i;
    std::mt19937_64 shuffle(cfg_.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(epoch + 1)));
    for (std::size_t i = clips.size(); i > 1; --i) std::swap(epoch_order_[i - 1], epoch_order_[shuffle() % i]);
    order_epoch_ = epoch;
  }
  const int64_t first = (step_ % steps_per_epoch_) * cfg_.batch_size;
  std::vector<Segment> segs;
  for (int b = 0; b < cfg_.batch_size; ++b) {
    const auto& clip = clips[epoch_order_[(first + b) % clips.size()]];
    segs.push_back(sample_segment(clip, cfg_.segment_length, rng_, cfg_.degrade));
  }
  return MakeBatch(segs);
}

StepRecord Trainer::train_step(const Batch& batch) {
  const auto start = std::chrono::steady_clock::now();
  if (batch.x.dim() != 2 || batch.x.sizes() != batch.y.sizes())
    throw ShapeError("batch x and y must both be (B, T)");
  g_->train();
  d_->train();
  ApplyLearningRates();
  StepRecord rec;
  rec.step = step_ + 1;
  rec.lr_g = CurrentLrG();
  rec.lr_d = CurrentLrD();

  const auto& x = batch.x;
  const auto& y = batch.y;
  auto y_hat = g_->forward(x);

  // Discriminator phase on the detached output.
  const auto y_fake = y_hat.detach();
  bool finite = true;
  for (std::size_t i = 0; i < d_->size(); ++i) {
    auto member = d_->member(i);
    opt_d_[i]->zero_grad();
    auto real = member->forward(y);
    auto fake = member->forward(y_fake);
    auto loss = lsgan_d_loss(real.score, fake.score);
    rec.d_loss.push_back(loss.item<double>());
    if (!std::isfinite(rec.d_loss.back())) {
      finite = false;
      break;
    }
    loss.backward();
    opt_d_[i]->step();
  }

  if (finite) {
    // Generator phase; discriminator weights are frozen so no gradient is
    // accumulated on them.
    for (auto& p : d_->parameters()) p.requires_grad_(false);
    opt_g_->zero_grad();
    std::vector<DiscriminatorOutput> real;
    {
      torch::NoGradGuard no_grad;
      real = d_->forward(y);
    }
    auto fake = d_->forward(y_hat);
    GeneratorLossParts parts;
    parts.gan = lsgan_g_loss(Scores(fake));
    parts.fm = feature_matching_loss(Features(real), Features(fake));
    parts.mel = mel_loss(y, y_hat, log_mel_);
    auto total = generator_total_loss(parts, cfg_.weights);
    rec.g_gan = parts.gan.item<double>();
    rec.g_fm = parts.fm.item<double>();
    rec.g_mel = parts.mel.item<double>();
    rec.g_total = total.item<double>();
    finite = std::isfinite(rec.g_total);
    if (finite) {
      total.backward();
      opt_g_->step();
    }
    for (auto& p : d_->parameters()) p.requires_grad_(true);
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!finite)
    throw NumericError("non-finite loss at step " + std::to_string(rec.step) + ": " +
                       StepRecord::CsvHeader(d_->size()) + " = " + rec.ToCsv());
  ++step_;
  return rec;
}

ValidationRecord Trainer::Validate(const std::vector<Clip>& clips) {
  ValidationRecord v;
  v.step = step_;
  g_->eval();
  double mel_sum = 0.0, sdr_sum = 0.0;
  int mel_n = 0;
  const auto n = std::min<std::size_t>(clips.size(), cfg_.validation_clips);
  for (std::size_t i = 0; i < n; ++i) {
    const auto input = FullInput(clips[i], cfg_.degrade);
    const auto out = RunGenerator(g_, input);
    const auto& ref = clips[i].target;
    if (static_cast<int64_t>(ref.size()) >= cfg_.generator.mel_stft.n_fft) {
      torch::NoGradGuard no_grad;
      mel_sum += mel_loss(ref.ToTensor(), out.ToTensor(), log_mel_).item<double>();
      ++mel_n;
    }
    try {
      sdr_sum += si_sdr(out, ref);
      ++v.clips;
    } catch (const DegenerateInputError&) {
      LogWarning("validation clip " + clips[i].id + " is silent; skipped");
    }
  }
  v.mel_loss = mel_n ? mel_sum / mel_n : 0.0;
  v.si_sdr = v.clips ? sdr_sum / v.clips : 0.0;
  g_->train();
  return v;
}

void Trainer::Save(const fs::path& path) const {
  torch::serialize::OutputArchive ar;
  ar.write("config", c10::IValue(ConfigToText(cfg_)));
  ar.write("step", torch::tensor(step_, torch::kLong));
  WriteModule(ar, "g.", *g_);
  for (std::size_t i = 0; i < d_->size(); ++i)
    WriteModule(ar, "d." + std::to_string(i) + ".", *d_->member(i));
  torch::serialize::OutputArchive og;
  opt_g_->save(og);
  ar.write("opt_g", og);
  for (std::size_t i = 0; i < opt_d_.size(); ++i) {
    torch::serialize::OutputArchive od;
    opt_d_[i]->save(od);
    ar.write("opt_d." + std::to_string(i), od);
  }
  std::ostringstream rng;
  rng << rng_;
  ar.write("rng", c10::IValue(rng.str()));
  const fs::path tmp = path.string() + ".tmp";
  ar.save_to(tmp.string());
  fs::rename(tmp, path);
}

std::unique_ptr<Trainer> Trainer::Load(const fs::path& path) {
  if (!fs::exists(path)) throw Error("checkpoint " + path.string() + " does not exist");
  torch::serialize::InputArchive ar;
  ar.load_from(path.string());
  auto t = std::make_unique<Trainer>(ConfigFromText(ReadString(ar, "config")));
  torch::Tensor step;
  ar.read("step", step);
  t->step_ = step.item<int64_t>();
  ReadModule(ar, "g.", *t->g_);
  for (std::size_t i = 0; i < t->d_->size(); ++i)
    ReadModule(ar, "d." + std::to_string(i) + ".", *t->d_->member(i));
  torch::serialize::InputArchive og;
  ar.read("opt_g", og);
  t->opt_g_->load(og);
  for (std::size_t i = 0; i < t->opt_d_.size(); ++i) {
    torch::serialize::InputArchive od;
    ar.read("opt_d." + std::to_string(i), od);
    t->opt_d_[i]->load(od);
  }
  std::istringstream rng(ReadString(ar, "rng"));
  rng >> t->rng_;
  return t;
}

TrainResult train(const TrainConfig& cfg, const Manifest& train_set, const Manifest& valid_set,
                  const TrainOptions& opts) {
  ConfigureRuntime();
  auto trainer = opts.resume.empty() ? std::make_unique<Trainer>(cfg) : Trainer::Load(opts.resume);
  const auto& c = trainer->config();
  const int64_t total_steps = cfg.total_steps;
  if (train_set.sample_rate != c.sample_rate)
    throw ConfigError("training manifest is at " + std::to_string(train_set.sample_rate) +
                      " Hz but the config expects " + std::to_string(c.sample_rate) + " Hz");
  const auto clips = LoadClips(train_set);
  if (clips.empty()) throw DataError("training manifest is empty");
  Manifest vsub = valid_set;
  if (vsub.entries.size() > static_cast<std::size_t>(c.validation_clips))
    vsub.entries.resize(c.validation_clips);
  const auto valid = LoadClips(vsub);
  trainer->SetEpochSize(clips.size());

  fs::create_directories(opts.out_dir);
  {
    std::ofstream echo(opts.out_dir / "config.txt");
    echo << ConfigToText(c);
  }
  const bool resuming = !opts.resume.empty();
  std::ofstream log(opts.out_dir / "train_log.csv", resuming ? std::ios::app : std::ios::trunc);
  std::ofstream vlog(opts.out_dir / "validation.csv", resuming ? std::ios::app : std::ios::trunc);
  if (!log || !vlog) throw Error("cannot write logs to " + opts.out_dir.string());
  if (!resuming) {
    log << StepRecord::CsvHeader(trainer->num_discriminators()) << '\n';
    vlog << "step,mel_loss,si_sdr,clips\n";
  }

  TrainResult result;
  LogInfo("training " + std::to_string(total_steps) + " steps from step " +
          std::to_string(trainer->step()) + " on " + std::to_string(clips.size()) + " clips");
  bool stop = false;
  while (trainer->step() < total_steps && !stop) {
    auto rec = trainer->train_step(trainer->NextBatch(clips));
    log << rec.ToCsv() << '\n';
    log.flush();
    result.steps.push_back(rec);
    const int64_t s = trainer->step();
    if (c.validate_every > 0 && s % c.validate_every == 0 && !valid.empty()) {
      auto v = trainer->Validate(valid);
      vlog << v.step << ',' << Fixed(v.mel_loss) << ',' << Fixed(v.si_sdr) << ',' << v.clips
           << '\n';
      vlog.flush();
      LogInfo("step " + std::to_string(s) + " validation mel " + Fixed(v.mel_loss) + " si_sdr " +
              Fixed(v.si_sdr));
      result.validations.push_back(v);
    }
    if (c.checkpoint_every > 0 && s % c.checkpoint_every == 0) {
      trainer->Save(opts.out_dir / ("ckpt_" + std::to_string(s) + ".pt"));
      trainer->Save(opts.out_dir / "last.pt");
    }
    if (opts.on_step && !opts.on_step(rec)) stop = true;
  }
  result.final_step = trainer->step();
  result.last_checkpoint = opts.out_dir / "last.pt";
  trainer->Save(result.last_checkpoint);
  return result;
}

LoadedModel LoadModel(const fs::path& checkpoint) {
  if (!fs::exists(checkpoint)) throw Error("checkpoint " + checkpoint.string() + " does not exist");
  torch::serialize::InputArchive ar;
  ar.load_from(checkpoint.string());
  LoadedModel m;
  m.config = ConfigFromText(ReadString(ar, "config"));
  m.generator = Generator(m.config.generator);
  ReadModule(ar, "g.", *m.generator);
  m.generator->eval();
  return m;
}

}  // namespace hifipp
