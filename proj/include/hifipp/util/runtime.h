// include/hifipp/util/runtime.h

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

#ifndef HIFIPP_UTIL_RUNTIME_H_
#define HIFIPP_UTIL_RUNTIME_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace hifipp {

// Name of the environment variable that turns on deterministic mode.
inline constexpr const char* kDeterministicEnv = "HIFIPP_DETERMINISTIC";

// True when HIFIPP_DETERMINISTIC is set to anything but "" or "0".
bool DeterministicMode();

// Single intra-op thread and deterministic kernels when DeterministicMode();
// otherwise leaves torch's threading alone.
void ConfigureRuntime();

enum class LogLevel { kInfo, kWarning, kError };

// Timestamped line on stderr.
void Log(LogLevel level, const std::string& message);
inline void LogInfo(const std::string& m) { Log(LogLevel::kInfo, m); }
inline void LogWarning(const std::string& m) { Log(LogLevel::kWarning, m); }
inline void LogError(const std::string& m) { Log(LogLevel::kError, m); }

// 64-bit FNV-1a; stable across platforms, used to derive per-file seeds.
uint64_t StableHash(std::string_view s);

}  // namespace hifipp

#endif  // HIFIPP_UTIL_RUNTIME_H_
