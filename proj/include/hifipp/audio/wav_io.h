// include/hifipp/audio/wav_io.h

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

#ifndef HIFIPP_AUDIO_WAV_IO_H_
#define HIFIPP_AUDIO_WAV_IO_H_

#include <filesystem>

#include "hifipp/audio/waveform.h"

namespace hifipp {

enum class WavEncoding { kPcm16, kFloat32 };

// Reads RIFF/WAVE PCM16 or IEEE float32. Multichannel data is downmixed to
// mono by averaging channels. Throws FormatError naming the offending field.
Waveform read_wav(const std::filesystem::path& path);

// Writes mono RIFF/WAVE. PCM16 clips to [-1, 1 - 2^-15] and rounds to nearest.
void write_wav(const std::filesystem::path& path, const Waveform& w,
               WavEncoding encoding = WavEncoding::kFloat32);

// Writes raw interleaved frames; used to build multichannel fixtures.
void write_wav_channels(const std::filesystem::path& path,
                        const std::vector<std::vector<float>>& channels, int sample_rate,
                        WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace hifipp

#endif  // HIFIPP_AUDIO_WAV_IO_H_
