// src/train/data.cc

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

#include "hifipp/train/data.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hifipp/audio/resample.h"
#include "hifipp/audio/wav_io.h"
#include "hifipp/errors.h"
#include "hifipp/util/runtime.h"

namespace hifipp {

namespace fs = std::filesystem;

namespace {

bool IsWav(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext == ".wav";
}

std::vector<fs::path> WavFiles(const fs::path& dir, bool recursive) {
  std::vector<fs::path> out;
  if (recursive) {
    for (const auto& e : fs::recursive_directory_iterator(dir))
      if (e.is_regular_file() && IsWav(e.path())) out.push_back(e.path());
  } else {
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && IsWav(e.path())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string StemId(const fs::path& p, const fs::path& base) {
  return fs::relative(p, base).replace_extension().generic_string();
}

void CheckDecodes(const fs::path& p, std::vector<std::string>& problems) {
  try {
    read_wav(p);
  } catch (const Error& e) {
    problems.push_back(p.string() + ": " + e.what());
  }
}

void ThrowProblems(const std::vector<std::string>& problems) {
  if (problems.empty()) return;
  std::string msg = std::to_string(problems.size()) + " corpus problem(s):";
  for (const auto& p : problems) msg += "\n  " + p;
  throw DataError(msg);
}

Manifest BuildBwe(const fs::path& root, const SplitSpec& split, int rate) {
  Manifest m;
  m.task = Task::kBwe;
  m.sample_rate = rate;
  std::vector<fs::path> speakers;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) speakers.push_back(e.path());
  std::sort(speakers.begin(), speakers.end());
  const std::size_t held = std::min<std::size_t>(split.held_out_speakers, speakers.size());
  std::vector<std::string> problems;
  for (std::size_t s = 0; s < speakers.size(); ++s) {
    const bool held_speaker = s >= speakers.size() - held;
    auto files = WavFiles(speakers[s], /*recursive=*/false);
    const std::size_t held_utts = std::min<std::size_t>(split.held_out_utterances, files.size());
    for (std::size_t u = 0; u < files.size(); ++u) {
      const bool held_utt = u >= files.size() - held_utts;
      bool keep = true;
      if (split.subset == Subset::kTrain) keep = !held_speaker && !held_utt;
      if (split.subset == Subset::kEval) keep = held_speaker && held_utt;
      if (!keep) continue;
      CheckDecodes(files[u], problems);
      m.entries.push_back({StemId(files[u], root), {}, files[u],
                           speakers[s].filename().string()});
    }
  }
  ThrowProblems(problems);
  return m;
}

Manifest BuildSe(const fs::path& root, int rate) {
  Manifest m;
  m.task = Task::kSe;
  m.sample_rate = rate;
  const fs::path noisy = root / "noisy", clean = root / "clean";
  std::vector<std::string> problems;
  std::map<std::string, fs::path> noisy_files, clean_files;
  if (fs::is_directory(noisy))
    for (const auto& p : WavFiles(noisy, true)) noisy_files[StemId(p, noisy)] = p;
  if (fs::is_directory(clean))
    for (const auto& p : WavFiles(clean, true)) clean_files[StemId(p, clean)] = p;
  for (const auto& [id, p] : noisy_files)
    if (!clean_files.count(id)) problems.push_back(p.string() + ": no matching clean file");
  for (const auto& [id, p] : clean_files)
    if (!noisy_files.count(id)) problems.push_back(p.string() + ": no matching noisy file");
  for (const auto& [id, p] : noisy_files) {
    auto it = clean_files.find(id);
    if (it == clean_files.end()) continue;
    CheckDecodes(p, problems);
    CheckDecodes(it->second, problems);
    m.entries.push_back({id, p, it->second, ""});
  }
  ThrowProblems(problems);
  return m;
}

Waveform LoadAt(const fs::path& p, int rate) {
  auto w = read_wav(p);
  return w.sample_rate == rate ? w : resample(w, rate);
}

}  // namespace

std::string SubsetName(Subset s) {
  return s == Subset::kAll ? "all" : s == Subset::kTrain ? "train" : "eval";
}

Subset ParseSubset(const std::string& name) {
  if (name == "all") return Subset::kAll;
  if (name == "train") return Subset::kTrain;
  if (name == "eval") return Subset::kEval;
  throw ConfigError("unknown subset '" + name + "' (expected all, train or eval)");
}

Manifest build_manifest(const fs::path& root, Task task, const SplitSpec& split, int sample_rate) {
  if (!fs::is_directory(root)) throw DataError("corpus root " + root.string() + " is not a directory");
  Manifest m = task == Task::kBwe ? BuildBwe(root, split, sample_rate) : BuildSe(root, sample_rate);
  if (m.empty()) LogWarning("manifest for " + root.string() + " is empty");
  return m;
}

void WriteManifest(const fs::path& path, const Manifest& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << "#task=" << TaskName(m.task) << " sample_rate=" << m.sample_rate << '\n';
  for (const auto& e : m.entries)
    out << e.id << '\t' << e.input.string() << '\t' << e.target.string() << '\t' << e.speaker
        << '\n';
}

Manifest ReadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  Manifest m;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#task=", 0) != 0)
    throw FormatError("manifest " + path.string() + ": missing '#task=' header");
  {
    std::istringstream hs(line.substr(6));
    std::string task, rate;
    hs >> task >> rate;
    m.task = ParseTask(task);
    if (rate.rfind("sample_rate=", 0) != 0)
      throw FormatError("manifest " + path.string() + ": missing sample_rate in header");
    m.sample_rate = std::stoi(rate.substr(12));
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, '\t')) cols.push_back(c);
    if (cols.size() < 3)
      throw FormatError("manifest " + path.string() + " line " + std::to_string(lineno) +
                        ": expected id, input and target columns");
    m.entries.push_back({cols[0], cols[1], cols[2], cols.size() > 3 ? cols[3] : ""});
  }
  return m;
}

Clip LoadClip(const ManifestEntry& e, int sample_rate) {
  Clip c;
  c.id = e.id;
  c.target = LoadAt(e.target, sample_rate);
  if (!e.input.empty()) {
    c.input = LoadAt(e.input, sample_rate);
    if (c.input.size() != c.target.size())
      throw LengthError("clip " + e.id + ": input has " + std::to_string(c.input.size()) +
                        " samples, target " + std::to_string(c.target.size()));
  }
  return c;
}

std::vector<Clip> LoadClips(const Manifest& m) {
  std::vector<Clip> clips;
  clips.reserve(m.size());
  for (const auto& e : m.entries) clips.push_back(LoadClip(e, m.sample_rate));
  return clips;
}

std::vector<float> ReflectPad(const std::vector<float>& x, std::size_t n) {
  if (x.empty()) throw LengthError("cannot pad an empty signal");
  std::vector<float> out(n);
  const std::size_t len = x.size();
  if (len == 1) {
    std::fill(out.begin(), out.end(), x[0]);
    return out;
  }
  const std::size_t period = 2 * (len - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i % period;
    out[i] = x[k < len ? k : period - k];
  }
  return out;
}

Segment sample_segment(const Clip& clip, int64_t segment_length, std::mt19937_64& rng,
                       const DegradationSpec& spec) {
  if (segment_length <= 0) throw ParameterError("segment_length must be positive");
  const auto& y = clip.target.samples;
  const bool se = !clip.input.empty();
  const auto len = static_cast<int64_t>(y.size());
  Segment s;
  if (len > segment_length) {
    s.offset = static_cast<int64_t>(rng() % static_cast<uint64_t>(len - segment_length + 1));
    s.y.assign(y.begin() + s.offset, y.begin() + s.offset + segment_length);
    if (se)
      s.x.assign(clip.input.samples.begin() + s.offset,
                 clip.input.samples.begin() + s.offset + segment_length);
  } else {
    s.y = ReflectPad(y, segment_length);
    if (se) s.x = ReflectPad(clip.input.samples, segment_length);
  }
  if (!se) {
    Waveform target(s.y, clip.target.sample_rate);
    s.x = degrade_bwe(target, spec, rng).samples;
  }
  return s;
}

Batch MakeBatch(const std::vector<Segment>& segments) {
  if (segments.empty()) throw ParameterError("cannot batch zero segments");
  const auto n = static_cast<int64_t>(segments.size());
  const auto t = static_cast<int64_t>(segments[0].y.size());
  Batch b{torch::empty({n, t}), torch::empty({n, t})};
  for (int64_t i = 0; i < n; ++i) {
    const auto& s = segments[i];
    if (static_cast<int64_t>(s.x.size()) != t || static_cast<int64_t>(s.y.size()) != t)
      throw LengthError("segments in a batch must share one length");
    std::copy(s.x.begin(), s.x.end(), b.x[i].data_ptr<float>());
    std::copy(s.y.begin(), s.y.end(), b.y[i].data_ptr<float>());
  }
  return b;
}

Waveform FullInput(const Clip& clip, const DegradationSpec& spec) {
  if (!clip.input.empty()) return clip.input;
  std::mt19937_64 rng(spec.seed ^ StableHash(clip.id));
  return degrade_bwe(clip.target, spec, rng);
}

}  // namespace hifipp
