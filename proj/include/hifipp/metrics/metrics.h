// include/hifipp/metrics/metrics.h

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

#ifndef HIFIPP_METRICS_METRICS_H_
#define HIFIPP_METRICS_METRICS_H_

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hifipp/audio/stft.h"
#include "hifipp/audio/waveform.h"

namespace hifipp {

inline constexpr double kInfiniteSdr = std::numeric_limits<double>::infinity();

// Scale-invariant SDR in dB, accumulated in double. Returns +inf when the
// projection residual is exactly zero. Throws LengthError on unequal lengths
// and DegenerateInputError on a silent reference.
double si_sdr(std::span<const float> est, std::span<const float> ref);
double si_sdr(const Waveform& est, const Waveform& ref);

// Log-spectral distance: mean over frames of the RMS over bins of
// log10(max(|E|, 1e-8)) - log10(max(|R|, 1e-8)). Throws LengthError on
// unequal lengths.
double lsd(std::span<const float> est, std::span<const float> ref, const StftConfig& cfg = {});
double lsd(const Waveform& est, const Waveform& ref, const StftConfig& cfg = {});

// Metrics computed by external programs invoked as `<command> <ref.wav>
// <est.wav>`; the last number printed on stdout is the score.
struct ExternalMetric {
  std::string name;
  std::string command;

  // nullopt (with a warning) when the command fails or prints no number.
  std::optional<double> Evaluate(const Waveform& est, const Waveform& ref) const;
};

struct EvalRow {
  std::string id;
  std::optional<double> si_sdr;
  std::optional<double> lsd;
  std::vector<std::optional<double>> external;  // parallel to EvalReport::external_names
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  int count = 0;
};

struct EvalReport {
  bool has_si_sdr = true;
  bool has_lsd = true;
  std::vector<std::string> external_names;
  std::vector<EvalRow> rows;

  // Header `id,si_sdr,lsd[,<external>...]`, +inf written as `inf`,
  // unavailable values left blank.
  std::string ToCsv() const;
  void WriteCsv(const std::string& path) const;
  // Aggregate over the rows that have the column. Infinite values are kept,
  // so a column with an infinite entry has an infinite mean.
  MetricSummary SiSdrSummary() const;
  MetricSummary LsdSummary() const;
  MetricSummary ExternalSummary(std::size_t i) const;
  // `si_sdr=<mean>±<std> lsd=<mean>±<std>` for the selected columns.
  std::string AggregateLine() const;
};

MetricSummary Summarize(const std::vector<double>& values);
std::string FormatMetric(double v);

}  // namespace hifipp

#endif  // HIFIPP_METRICS_METRICS_H_
