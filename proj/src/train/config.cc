// src/train/config.cc

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

#include "hifipp/train/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "hifipp/errors.h"

namespace hifipp {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("invalid value '" + v + "' for key " + key);
  return out;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("invalid boolean '" + v + "' for key " + key);
}

std::vector<int64_t> ParseIntList(const std::string& key, const std::string& v) {
  std::vector<int64_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseNumber<int64_t>(key, Trim(item)));
  if (out.empty()) throw ConfigError("empty list for key " + key);
  return out;
}

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string FormatBool(bool b) { return b ? "true" : "false"; }

std::string FormatList(const std::vector<int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct Field {
  std::string key;
  std::function<std::string(const TrainConfig&)> get;
  std::function<void(TrainConfig&, const std::string&)> set;
};

#define HIFIPP_INT_FIELD(KEY, MEMBER, TYPE)                                           \
  Field {                                                                             \
    KEY, [](const TrainConfig& c) { return std::to_string(c.MEMBER); },               \
        [](TrainConfig& c, const std::string& v) { c.MEMBER = ParseNumber<TYPE>(KEY, v); } \
  }
#define HIFIPP_DOUBLE_FIELD(KEY, MEMBER)                                              \
  Field {                                                                             \
    KEY, [](const TrainConfig& c) { return FormatDouble(c.MEMBER); },                 \
        [](TrainConfig& c, const std::string& v) { c.MEMBER = ParseNumber<double>(KEY, v); } \
  }
#define HIFIPP_BOOL_FIELD(KEY, MEMBER)                                                \
  Field {                                                                             \
    KEY, [](const TrainConfig& c) { return FormatBool(c.MEMBER); },                   \
        [](TrainConfig& c, const std::string& v) { c.MEMBER = ParseBool(KEY, v); }     \
  }
#define HIFIPP_LIST_FIELD(KEY, MEMBER)                                                \
  Field {                                                                             \
    KEY, [](const TrainConfig& c) { return FormatList(c.MEMBER); },                   \
        [](TrainConfig& c, const std::string& v) { c.MEMBER = ParseIntList(KEY, v); }  \
  }

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      {"task", [](const TrainConfig& c) { return TaskName(c.task); },
       [](TrainConfig& c, const std::string& v) { c.task = ParseTask(v); }},
      HIFIPP_INT_FIELD("sample_rate", sample_rate, int),
      HIFIPP_INT_FIELD("seed", seed, uint64_t),
      HIFIPP_INT_FIELD("segment_length", segment_length, int64_t),
      HIFIPP_INT_FIELD("batch_size", batch_size, int),
      HIFIPP_INT_FIELD("total_steps", total_steps, int64_t),
      HIFIPP_DOUBLE_FIELD("lr_g", lr_g),
      HIFIPP_DOUBLE_FIELD("lr_d", lr_d),
      HIFIPP_DOUBLE_FIELD("lr_decay", lr_decay),
      HIFIPP_DOUBLE_FIELD("adam_beta1", adam_beta1),
      HIFIPP_DOUBLE_FIELD("adam_beta2", adam_beta2),
      HIFIPP_INT_FIELD("checkpoint_every", checkpoint_every, int64_t),
      HIFIPP_INT_FIELD("validate_every", validate_every, int64_t),
      HIFIPP_INT_FIELD("validation_clips", validation_clips, int),
      HIFIPP_INT_FIELD("data.held_out_speakers", held_out_speakers, int),
      HIFIPP_INT_FIELD("data.held_out_utterances", held_out_utterances, int),

      HIFIPP_DOUBLE_FIELD("loss.lambda_fm", weights.lambda_fm),
      HIFIPP_DOUBLE_FIELD("loss.lambda_mel", weights.lambda_mel),

      HIFIPP_INT_FIELD("generator.n_mels", generator.n_mels, int),
      HIFIPP_BOOL_FIELD("generator.use_spectral_unet", generator.use_spectral_unet),
      HIFIPP_LIST_FIELD("generator.spectral_unet_widths", generator.spectral_unet_widths),
      HIFIPP_INT_FIELD("generator.spectral_unet_depth", generator.spectral_unet_depth, int),
      HIFIPP_INT_FIELD("generator.upsampler.initial_channels",
                       generator.upsampler.initial_channels, int64_t),
      HIFIPP_LIST_FIELD("generator.upsampler.rates", generator.upsampler.rates),
      HIFIPP_LIST_FIELD("generator.upsampler.kernels", generator.upsampler.kernels),
      HIFIPP_INT_FIELD("generator.upsampler.out_channels", generator.upsampler.out_channels,
                       int64_t),
      HIFIPP_BOOL_FIELD("generator.upsampler.tanh_output", generator.upsampler.tanh_output),
      HIFIPP_BOOL_FIELD("generator.use_wave_unet", generator.use_wave_unet),
      HIFIPP_LIST_FIELD("generator.wave_unet_widths", generator.wave_unet_widths),
      HIFIPP_INT_FIELD("generator.wave_unet_depth", generator.wave_unet_depth, int),
      HIFIPP_INT_FIELD("generator.wave_unet_out_channels", generator.wave_unet_out_channels,
                       int64_t),
      HIFIPP_BOOL_FIELD("generator.use_spectral_masknet", generator.use_spectral_masknet),
      HIFIPP_LIST_FIELD("generator.masknet_widths", generator.masknet_widths),
      HIFIPP_INT_FIELD("generator.masknet_depth", generator.masknet_depth, int),
      {"generator.merge", [](const TrainConfig& c) { return MergeRuleName(c.generator.merge); },
       [](TrainConfig& c, const std::string& v) { c.generator.merge = ParseMergeRule(v); }},

      {"discriminator.kind", [](const TrainConfig& c) { return KindName(c.discriminator.kind); },
       [](TrainConfig& c, const std::string& v) { c.discriminator.kind = ParseKind(v); }},
      HIFIPP_INT_FIELD("discriminator.k", discriminator.k, int),
      HIFIPP_INT_FIELD("discriminator.channel_divisor", discriminator.channel_divisor, int),
      HIFIPP_BOOL_FIELD("discriminator.spectral_norm", discriminator.spectral_norm),
      {"discriminator.layout",
       [](const TrainConfig& c) { return LayoutName(c.discriminator.layout); },
       [](TrainConfig& c, const std::string& v) { c.discriminator.layout = ParseLayout(v); }},

      HIFIPP_INT_FIELD("degrade.source_rate", degrade.source_rate, int),
      {"degrade.families",
       [](const TrainConfig& c) {
         std::string s;
         for (std::size_t i = 0; i < c.degrade.filter_families.size(); ++i)
           s += (i ? "," : "") + FamilyName(c.degrade.filter_families[i]);
         return s;
       },
       [](TrainConfig& c, const std::string& v) {
         std::vector<FilterFamily> fams;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) fams.push_back(ParseFamily(Trim(item)));
         if (fams.empty()) throw ConfigError("empty list for key degrade.families");
         c.degrade.filter_families = fams;
       }},
      HIFIPP_INT_FIELD("degrade.min_order", degrade.min_order, int),
      HIFIPP_INT_FIELD("degrade.max_order", degrade.max_order, int),
      HIFIPP_DOUBLE_FIELD("degrade.passband_ripple_db", degrade.ripple.passband_db),
      HIFIPP_DOUBLE_FIELD("degrade.stopband_db", degrade.ripple.stopband_db),
      HIFIPP_BOOL_FIELD("degrade.align", degrade.align),
      HIFIPP_INT_FIELD("degrade.max_align_lag", degrade.max_align_lag, int),
      HIFIPP_DOUBLE_FIELD("degrade.snr_db", degrade.snr_db),
  };
  return fields;
}

}  // namespace

void TrainConfig::Sync() {
  generator.sample_rate = sample_rate;
  degrade.target_rate = sample_rate;
  degrade.task = task;
  degrade.seed = seed;
}

void TrainConfig::Validate() const {
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  if (generator.sample_rate != sample_rate)
    throw ConfigError("generator sample rate differs from sample_rate");
  generator.Validate();
  discriminator.Validate();
  weights.Validate();
  if (task == Task::kBwe) {
    try {
      degrade.Validate();
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  }
  const int hop = generator.hop();
  if (segment_length <= 0 || segment_length % hop != 0)
    throw ConfigError("segment_length " + std::to_string(segment_length) +
                      " must be a positive multiple of " + std::to_string(hop));
  if (segment_length < generator.mel_stft.n_fft)
    throw ConfigError("segment_length must cover at least one STFT window");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (total_steps < 0) throw ConfigError("total_steps must be >= 0");
  if (!(lr_g >= 0.0) || !(lr_d >= 0.0)) throw ConfigError("learning rates must be >= 0");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("lr_decay must lie in (0, 1]");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
    throw ConfigError("adam betas must lie in [0, 1)");
  if (checkpoint_every < 0 || validate_every < 0)
    throw ConfigError("checkpoint_every and validate_every must be >= 0");
  if (validation_clips < 0) throw ConfigError("validation_clips must be >= 0");
  if (held_out_speakers < 0 || held_out_utterances < 0)
    throw ConfigError("held-out counts must be >= 0");
}

TrainConfig TrainPreset(const std::string& name, Task task) {
  TrainConfig c;
  c.task = task;
  if (name == "bwe" || name == "default") {
    c.task = Task::kBwe;
  } else if (name == "se") {
    c.task = Task::kSe;
  } else if (name == "tiny" || name == "vanilla" || name.rfind("ablation.", 0) == 0) {
    c.generator = GeneratorPreset(name, c.sample_rate);
  } else if (name == "tuned_msd") {
    c.discriminator = DiscriminatorPreset("msd");
    c.weights.lambda_mel = 15.0;
    c.lr_d = 1e-5;
  } else if (name == "msd_mpd") {
    c.discriminator = DiscriminatorPreset("msd_mpd");
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  c.Sync();
  return c;
}

std::vector<std::string> TrainPresetNames() {
  return {"bwe",       "se",      "tiny",
          "vanilla",   "tuned_msd", "msd_mpd",
          "ablation.no_spectralunet", "ablation.no_waveunet", "ablation.no_masknet"};
}

KeyValues ParseKeyValues(const std::string& text) {
  KeyValues kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got '" + line +
                        "'");
    kv.emplace_back(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues ReadKeyValues(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseKeyValues(ss.str());
}

void ApplyOverrides(TrainConfig& cfg, const KeyValues& kv) {
  const auto& fields = Fields();
  for (const auto& [key, value] : kv) {
    auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; });
    if (it == fields.end()) throw ConfigError("unknown config key " + key);
    it->set(cfg, value);
  }
  cfg.Sync();
}

std::string ConfigToText(const TrainConfig& cfg) {
  std::string out;
  for (const auto& f : Fields()) out += f.key + "=" + f.get(cfg) + "\n";
  return out;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& f : Fields()) keys.push_back(f.key);
  return keys;
}

TrainConfig ConfigFromKeyValues(const KeyValues& kv) {
  std::string preset;
  Task task = Task::kBwe;
  KeyValues rest;
  for (const auto& [k, v] : kv) {
    if (k == "preset") {
      preset = v;
    } else {
      if (k == "task") task = ParseTask(v);
      rest.emplace_back(k, v);
    }
  }
  if (preset.empty()) preset = TaskName(task);
  TrainConfig cfg = TrainPreset(preset, task);
  ApplyOverrides(cfg, rest);
  return cfg;
}

TrainConfig ConfigFromText(const std::string& text) {
  return ConfigFromKeyValues(ParseKeyValues(text));
}

}  // namespace hifipp
