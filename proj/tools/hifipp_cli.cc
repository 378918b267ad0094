// tools/hifipp_cli.cc

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

// Command-line front end: degrade, train, enhance, extend, evaluate.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hifipp/audio/resample.h"
#include "hifipp/audio/wav_io.h"
#include "hifipp/degrade/degrade.h"
#include "hifipp/errors.h"
#include "hifipp/generator/inference.h"
#include "hifipp/metrics/evaluate.h"
#include "hifipp/train/config.h"
#include "hifipp/train/data.h"
#include "hifipp/train/trainer.h"
#include "hifipp/util/runtime.h"

namespace fs = std::filesystem;
using namespace hifipp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::vector<fs::path> WavTree(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (e.is_regular_file() && ext == ".wav") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

int ReportFailures(const std::vector<std::string>& failures) {
  if (failures.empty()) return kExitOk;
  LogError(std::to_string(failures.size()) + " file(s) failed:");
  for (const auto& f : failures) std::cerr << "  " << f << '\n';
  return kExitFailure;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// degrade ---------------------------------------------------------------------

struct DegradeArgs {
  std::string in, out, task = "bwe", families, noise_dir;
  int s = 2000, S = 16000, min_order = 2, max_order = 10;
  uint64_t seed = 0;
  double snr = 10.0;
  bool no_align = false;
};

std::vector<float> LoopTo(const std::vector<float>& x, std::size_t n) {
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i % x.size()];
  return out;
}

int RunDegrade(const DegradeArgs& a) {
  DegradationSpec spec;
  spec.task = ParseTask(a.task);
  spec.source_rate = a.s;
  spec.target_rate = a.S;
  spec.min_order = a.min_order;
  spec.max_order = a.max_order;
  spec.seed = a.seed;
  spec.snr_db = a.snr;
  spec.align = !a.no_align;
  if (!a.families.empty()) {
    spec.filter_families.clear();
    for (const auto& f : SplitList(a.families)) spec.filter_families.push_back(ParseFamily(f));
  }
  try {
    spec.Validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (!fs::is_directory(a.in)) throw ConfigError("input directory " + a.in + " does not exist");
  std::vector<Waveform> noises;
  if (spec.task == Task::kSe) {
    if (a.noise_dir.empty()) throw ConfigError("--task se needs --noise-dir");
    for (const auto& p : WavTree(a.noise_dir)) noises.push_back(resample(read_wav(p), a.S));
    if (noises.empty()) throw ConfigError("no noise files under " + a.noise_dir);
  }

  std::vector<std::string> failures;
  int written = 0;
  for (const auto& path : WavTree(a.in)) {
    const auto rel = fs::relative(path, a.in);
    try {
      auto y = read_wav(path);
      if (y.sample_rate != a.S) y = resample(y, a.S);
      const uint64_t file_seed = a.seed ^ StableHash(rel.generic_string());
      std::mt19937_64 rng(file_seed);
      nlohmann::json side;
      side["source"] = path.string();
      side["task"] = TaskName(spec.task);
      side["seed"] = a.seed;
      side["file_seed"] = file_seed;
      Waveform x;
      if (spec.task == Task::kBwe) {
        auto r = degrade_bwe_detailed(y, spec, rng);
        x = std::move(r.output);
        side["family"] = FamilyName(r.draw.family);
        side["order"] = r.draw.order;
        side["source_rate"] = spec.source_rate;
        side["target_rate"] = spec.target_rate;
        side["lag"] = r.lag;
      } else {
        const auto& noise = noises[rng() % noises.size()];
        x = mix_at_snr(y, Waveform(LoopTo(noise.samples, y.size()), a.S), spec.snr_db);
        side["snr_db"] = spec.snr_db;
      }
      const auto out = fs::path(a.out) / rel;
      fs::create_directories(out.parent_path());
      write_wav(out, x);
      auto side_path = out;
      side_path.replace_extension(".json");
      std::ofstream(side_path) << side.dump(2) << '\n';
      ++written;
    } catch (const std::exception& e) {
      failures.push_back(path.string() + ": " + e.what());
    }
  }
  LogInfo("degraded " + std::to_string(written) + " file(s) into " + a.out);
  return ReportFailures(failures);
}

// train -----------------------------------------------------------------------

struct TrainArgs {
  std::string config, data, valid_data, out, task, preset, resume;
  std::vector<std::string> sets;
};

TrainConfig ResolveConfig(const TrainArgs& a, const std::vector<std::string>& extras) {
  KeyValues kv;
  if (!a.config.empty()) kv = ReadKeyValues(a.config);
  if (!a.task.empty()) kv.emplace_back("task", a.task);
  if (!a.preset.empty()) kv.emplace_back("preset", a.preset);
  std::vector<std::string> overrides = a.sets;
  overrides.insert(overrides.end(), extras.begin(), extras.end());
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    kv.emplace_back(o.substr(0, eq), o.substr(eq + 1));
  }
  return ConfigFromKeyValues(kv);
}

int RunTrain(const TrainArgs& a, const std::vector<std::string>& extras) {
  auto cfg = ResolveConfig(a, extras);
  cfg.Validate();
  if (!a.resume.empty()) {
    // The checkpoint's config wins; only an explicit total_steps is honoured.
    const auto requested = cfg.total_steps;
    cfg = Trainer::Load(a.resume)->config();
    std::vector<std::string> all = a.sets;
    all.insert(all.end(), extras.begin(), extras.end());
    for (const auto& o : all)
      if (o.rfind("total_steps=", 0) == 0) cfg.total_steps = requested;
  }
  SplitSpec train_split{Subset::kTrain, cfg.held_out_speakers, cfg.held_out_utterances};
  if (cfg.task == Task::kSe) train_split.subset = Subset::kAll;
  const auto train_set = build_manifest(a.data, cfg.task, train_split, cfg.sample_rate);
  Manifest valid_set;
  valid_set.task = cfg.task;
  valid_set.sample_rate = cfg.sample_rate;
  if (!a.valid_data.empty()) {
    valid_set = build_manifest(a.valid_data, cfg.task, {}, cfg.sample_rate);
  } else if (cfg.task == Task::kBwe) {
    valid_set = build_manifest(
        a.data, cfg.task, {Subset::kEval, cfg.held_out_speakers, cfg.held_out_utterances},
        cfg.sample_rate);
  }
  fs::create_directories(a.out);
  WriteManifest(fs::path(a.out) / "train_manifest.tsv", train_set);
  WriteManifest(fs::path(a.out) / "valid_manifest.tsv", valid_set);

  TrainOptions opts;
  opts.out_dir = a.out;
  opts.resume = a.resume;
  auto result = train(cfg, train_set, valid_set, opts);
  LogInfo("finished at step " + std::to_string(result.final_step) + "; checkpoint " +
          result.last_checkpoint.string());
  return kExitOk;
}

// enhance / extend ------------------------------------------------------------

struct EnhanceArgs {
  std::string checkpoint, in, out;
  bool resample = false;
};

int RunEnhance(const EnhanceArgs& a, const std::string& verb) {
  auto model = LoadModel(a.checkpoint);
  const int rate = model.config.sample_rate;
  if (verb == "extend" && model.config.task != Task::kBwe)
    LogWarning("extend with a checkpoint trained for " + TaskName(model.config.task));
  std::vector<std::pair<fs::path, fs::path>> jobs;
  if (fs::is_directory(a.in)) {
    for (const auto& p : WavTree(a.in)) jobs.emplace_back(p, fs::path(a.out) / fs::relative(p, a.in));
  } else {
    jobs.emplace_back(a.in, a.out);
  }
  std::vector<std::string> failures;
  for (const auto& [src, dst] : jobs) {
    try {
      auto x = read_wav(src);
      if (x.sample_rate != rate) {
        if (!a.resample)
          throw ParameterError("sample rate " + std::to_string(x.sample_rate) +
                               " Hz differs from the checkpoint's " + std::to_string(rate) +
                               " Hz (pass --resample)");
        x = resample(x, rate);
      }
      auto y = enhance_waveform(model.generator, x);
      if (dst.has_parent_path()) fs::create_directories(dst.parent_path());
      write_wav(dst, y);
    } catch (const std::exception& e) {
      failures.push_back(src.string() + ": " + e.what());
    }
  }
  LogInfo(verb + ": processed " + std::to_string(jobs.size() - failures.size()) + " file(s)");
  return ReportFailures(failures);
}

// evaluate --------------------------------------------------------------------

struct EvaluateArgs {
  std::string checkpoint, manifest, data, task = "bwe", subset = "all", inputs, out,
      metrics = "si_sdr,lsd", pesq, stoi;
  bool passthrough = false;
  int s = 2000;
  uint64_t seed = 0;
  int sample_rate = 16000;
};

int RunEvaluate(const EvaluateArgs& a) {
  if (a.checkpoint.empty() == !a.passthrough)
    throw ConfigError("evaluate needs exactly one of --checkpoint and --passthrough");
  int rate = a.sample_rate;
  std::unique_ptr<LoadedModel> model;
  if (!a.checkpoint.empty()) {
    model = std::make_unique<LoadedModel>(LoadModel(a.checkpoint));
    rate = model->config.sample_rate;
  }
  Manifest m;
  if (!a.manifest.empty()) {
    m = ReadManifest(a.manifest);
  } else if (!a.data.empty()) {
    m = build_manifest(a.data, ParseTask(a.task), {ParseSubset(a.subset), 0, 0}, rate);
  } else {
    throw ConfigError("evaluate needs --manifest or --data");
  }
  if (!a.inputs.empty())
    for (auto& e : m.entries) e.input = fs::path(a.inputs) / (e.id + ".wav");

  EvalOptions opts;
  opts.si_sdr = opts.lsd = false;
  for (const auto& name : SplitList(a.metrics)) {
    if (name == "si_sdr") opts.si_sdr = true;
    else if (name == "lsd") opts.lsd = true;
    else throw ConfigError("unknown metric '" + name + "' (expected si_sdr, lsd)");
  }
  if (!a.stoi.empty()) opts.external.push_back({"stoi", a.stoi});
  if (!a.pesq.empty()) opts.external.push_back({"pesq", a.pesq});

  EvalReport report;
  if (model) {
    report = evaluate(a.checkpoint, m, opts);
  } else {
    DegradationSpec spec;
    spec.task = m.task;
    spec.source_rate = a.s;
    spec.target_rate = m.sample_rate;
    spec.seed = a.seed;
    report = evaluate([](const Waveform& x) { return x; }, m, spec, opts);
  }
  if (a.out.empty()) {
    std::cout << report.ToCsv();
  } else {
    if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
    report.WriteCsv(a.out);
  }
  std::cout << report.AggregateLine() << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureRuntime();
  CLI::App app{"HiFi++ speech bandwidth extension and enhancement toolkit"};
  app.require_subcommand(1);

  DegradeArgs da;
  auto* degrade = app.add_subcommand("degrade", "write a degraded copy of a WAV tree");
  degrade->add_option("--in", da.in, "input directory")->required();
  degrade->add_option("--out", da.out, "output directory")->required();
  degrade->add_option("--task", da.task, "bwe or se");
  degrade->add_option("--s", da.s, "BWE source rate in Hz");
  degrade->add_option("--S", da.S, "target rate in Hz");
  degrade->add_option("--seed", da.seed, "seed");
  degrade->add_option("--families", da.families,
                      "comma separated subset of butterworth,chebyshev1,bessel,elliptic");
  degrade->add_option("--min-order", da.min_order);
  degrade->add_option("--max-order", da.max_order);
  degrade->add_flag("--no-align", da.no_align, "skip group-delay alignment");
  degrade->add_option("--noise-dir", da.noise_dir, "SE noise corpus");
  degrade->add_option("--snr", da.snr, "SE mixing SNR in dB");

  TrainArgs ta;
  auto* trn = app.add_subcommand("train", "train a generator");
  trn->add_option("--config", ta.config, "key=value config file");
  trn->add_option("--data", ta.data, "corpus root")->required();
  trn->add_option("--valid-data", ta.valid_data, "validation corpus root");
  trn->add_option("--out", ta.out, "output directory")->required();
  trn->add_option("--task", ta.task, "bwe or se");
  trn->add_option("--preset", ta.preset, "named base configuration");
  trn->add_option("--set", ta.sets, "key=value override (repeatable)");
  trn->add_option("--resume", ta.resume, "checkpoint to resume from");
  trn->allow_extras();

  EnhanceArgs ea;
  auto* enh = app.add_subcommand("enhance", "run a checkpoint on a WAV file or tree");
  auto* ext = app.add_subcommand("extend", "bandwidth-extend a WAV file or tree");
  for (auto* sc : {enh, ext}) {
    sc->add_option("--checkpoint", ea.checkpoint)->required();
    sc->add_option("--in", ea.in, "WAV file or directory")->required();
    sc->add_option("--out", ea.out, "WAV file or directory")->required();
    sc->add_flag("--resample", ea.resample, "resample inputs to the checkpoint rate");
  }

  EvaluateArgs va;
  auto* ev = app.add_subcommand("evaluate", "score a checkpoint on a corpus");
  ev->add_option("--checkpoint", va.checkpoint);
  ev->add_flag("--passthrough", va.passthrough, "score the unprocessed input instead");
  ev->add_option("--manifest", va.manifest, "manifest file");
  ev->add_option("--data", va.data, "corpus root (instead of --manifest)");
  ev->add_option("--task", va.task, "task of --data");
  ev->add_option("--subset", va.subset, "all, train or eval");
  ev->add_option("--inputs", va.inputs, "directory of pre-degraded inputs named <id>.wav");
  ev->add_option("--out", va.out, "CSV report path");
  ev->add_option("--metrics", va.metrics, "comma separated si_sdr,lsd");
  ev->add_option("--external-pesq", va.pesq, "command: <cmd> ref.wav est.wav -> score");
  ev->add_option("--external-stoi", va.stoi, "command: <cmd> ref.wav est.wav -> score");
  ev->add_option("--s", va.s, "BWE source rate for --passthrough");
  ev->add_option("--seed", va.seed, "degradation seed for --passthrough");
  ev->add_option("--sample-rate", va.sample_rate, "corpus rate for --passthrough");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*degrade) return RunDegrade(da);
    if (*trn) return RunTrain(ta, trn->remaining());
    if (*enh) return RunEnhance(ea, "enhance");
    if (*ext) return RunEnhance(ea, "extend");
    if (*ev) return RunEvaluate(va);
  } catch (const ConfigError& e) {
    LogError(e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    LogError(e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
