// src/metrics/metrics.cc

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

#include "hifipp/metrics/metrics.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <regex>
#include <sstream>

#include "hifipp/audio/wav_io.h"
#include "hifipp/errors.h"
#include "hifipp/util/runtime.h"

namespace hifipp {

double si_sdr(std::span<const float> est, std::span<const float> ref) {
  if (est.size() != ref.size())
    throw LengthError("si_sdr: estimate has " + std::to_string(est.size()) +
                      " samples, reference " + std::to_string(ref.size()));
  double dot = 0.0, ref_energy = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    dot += static_cast<double>(est[i]) * ref[i];
    ref_energy += static_cast<double>(ref[i]) * ref[i];
  }
  if (ref_energy <= 0.0) throw DegenerateInputError("si_sdr: reference is silent");
  const double alpha = dot / ref_energy;
  double target = 0.0, residual = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double t = alpha * ref[i];
    const double r = t - est[i];
    target += t * t;
    residual += r * r;
  }
  if (residual == 0.0) return kInfiniteSdr;
  if (target == 0.0) return -kInfiniteSdr;
  return 10.0 * std::log10(target / residual);
}

double si_sdr(const Waveform& est, const Waveform& ref) { return si_sdr(est.view(), ref.view()); }

double lsd(std::span<const float> est, std::span<const float> ref, const StftConfig& cfg) {
  if (est.size() != ref.size())
    throw LengthError("lsd: estimate has " + std::to_string(est.size()) + " samples, reference " +
                      std::to_string(ref.size()));
  Stft transform(cfg, torch::kDouble);
  auto to_tensor = [](std::span<const float> x) {
    return torch::from_blob(const_cast<float*>(x.data()), {static_cast<int64_t>(x.size())},
                            torch::kFloat)
        .to(torch::kDouble);
  };
  torch::NoGradGuard no_grad;
  auto le = torch::log10(torch::clamp_min(torch::abs(transform.Forward(to_tensor(est))), 1e-8));
  auto lr = torch::log10(torch::clamp_min(torch::abs(transform.Forward(to_tensor(ref))), 1e-8));
  // (bins, frames): RMS over bins, mean over frames.
  return (le - lr).square().mean(0).sqrt().mean().item<double>();
}

double lsd(const Waveform& est, const Waveform& ref, const StftConfig& cfg) {
  return lsd(est.view(), ref.view(), cfg);
}

std::optional<double> ExternalMetric::Evaluate(const Waveform& est, const Waveform& ref) const {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() /
                   ("hifipp_ext_" + std::to_string(StableHash(name + command)) + "_" +
                    std::to_string(reinterpret_cast<uintptr_t>(&est)));
  fs::create_directories(dir);
  const auto ref_path = dir / "ref.wav", est_path = dir / "est.wav";
  write_wav(ref_path, ref);
  write_wav(est_path, est);
  const std::string cmd = command + " '" + ref_path.string() + "' '" + est_path.string() + "'";
  std::string output;
  int status = -1;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    std::array<char, 256> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
    status = pclose(pipe);
  }
  fs::remove_all(dir);
  if (status != 0) {
    LogWarning(name + ": command exited with status " + std::to_string(status));
    return std::nullopt;
  }
  static const std::regex number(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?|[-+]?inf)");
  std::optional<double> last;
  for (auto it = std::sregex_iterator(output.begin(), output.end(), number);
       it != std::sregex_iterator(); ++it)
    last = std::stod(it->str());
  if (!last) LogWarning(name + ": command printed no number");
  return last;
}

MetricSummary Summarize(const std::vector<double>& values) {
  MetricSummary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / values.size();
  if (std::isinf(s.mean)) {
    s.stddev = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / values.size());
  return s;
}

std::string FormatMetric(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {

std::string Cell(const std::optional<double>& v) { return v ? FormatMetric(*v) : ""; }

MetricSummary Column(const std::vector<EvalRow>& rows,
                     const std::function<std::optional<double>(const EvalRow&)>& get) {
  std::vector<double> vals;
  for (const auto& r : rows)
    if (auto v = get(r)) vals.push_back(*v);
  return Summarize(vals);
}

}  // namespace

std::string EvalReport::ToCsv() const {
  std::ostringstream out;
  out << "id";
  if (has_si_sdr) out << ",si_sdr";
  if (has_lsd) out << ",lsd";
  for (const auto& n : external_names) out << ',' << n;
  out << '\n';
  for (const auto& r : rows) {
    out << r.id;
    if (has_si_sdr) out << ',' << Cell(r.si_sdr);
    if (has_lsd) out << ',' << Cell(r.lsd);
    for (std::size_t i = 0; i < external_names.size(); ++i)
      out << ',' << (i < r.external.size() ? Cell(r.external[i]) : "");
    out << '\n';
  }
  return out.str();
}

void EvalReport::WriteCsv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error("cannot write report " + path);
  f << ToCsv();
}

MetricSummary EvalReport::SiSdrSummary() const {
  return Column(rows, [](const EvalRow& r) { return r.si_sdr; });
}

MetricSummary EvalReport::LsdSummary() const {
  return Column(rows, [](const EvalRow& r) { return r.lsd; });
}

MetricSummary EvalReport::ExternalSummary(std::size_t i) const {
  return Column(rows, [i](const EvalRow& r) {
    return i < r.external.size() ? r.external[i] : std::nullopt;
  });
}

std::string EvalReport::AggregateLine() const {
  std::string line;
  auto add = [&](const std::string& name, const MetricSummary& s) {
    if (!line.empty()) line += ' ';
    line += name + "=" + FormatMetric(s.mean) + "±" + FormatMetric(s.stddev);
  };
  if (has_si_sdr) add("si_sdr", SiSdrSummary());
  if (has_lsd) add("lsd", LsdSummary());
  for (std::size_t i = 0; i < external_names.size(); ++i)
    add(external_names[i], ExternalSummary(i));
  return line;
}

}  // namespace hifipp
