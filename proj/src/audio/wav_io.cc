// src/audio/wav_io.cc

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

#include "hifipp/audio/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "hifipp/errors.h"

namespace hifipp {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }
uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back(v >> 8);
}
void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}
void PutTag(std::vector<uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open WAV file " + path.string());
  const std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0)
    throw FormatError(where + "missing RIFF chunk id");
  if (std::memcmp(data.data() + 8, "WAVE", 4) != 0)
    throw FormatError(where + "RIFF form type is not WAVE");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  const uint8_t* payload = nullptr;
  std::size_t payload_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const uint8_t* chunk = data.data() + pos;
    const uint32_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > data.size())
        throw FormatError(where + "fmt chunk truncated");
      format = ReadU16(data.data() + body);
      channels = ReadU16(data.data() + body + 2);
      rate = ReadU32(data.data() + body + 4);
      bits = ReadU16(data.data() + body + 14);
      if (format == kFormatExtensible) {
        if (size < 26) throw FormatError(where + "extensible fmt chunk truncated");
        format = ReadU16(data.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      payload = data.data() + body;
      payload_size = std::min<std::size_t>(size, data.size() - body);
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw FormatError(where + "no fmt chunk");
  if (payload == nullptr) throw FormatError(where + "no data chunk");
  if (channels == 0) throw FormatError(where + "channel count is zero");
  if (rate == 0) throw FormatError(where + "sample rate is zero");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32)
    throw FormatError(where + "unsupported encoding (audio format " + std::to_string(format) +
                      ", bits per sample " + std::to_string(bits) + ")");

  const std::size_t bytes = bits / 8;
  const std::size_t frames = payload_size / (bytes * channels);
  std::vector<float> samples(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const uint8_t* p = payload + (f * channels + c) * bytes;
      if (pcm16) {
        acc += static_cast<int16_t>(ReadU16(p)) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, p, sizeof(float));
        acc += v;
      }
    }
    samples[f] = channels == 1 ? static_cast<float>(acc) : static_cast<float>(acc / channels);
  }
  return Waveform(std::move(samples), static_cast<int>(rate));
}

void write_wav_channels(const std::filesystem::path& path,
                        const std::vector<std::vector<float>>& channels, int sample_rate,
                        WavEncoding encoding) {
  if (channels.empty()) throw ParameterError("write_wav needs at least one channel");
  if (sample_rate <= 0) throw ParameterError("write_wav needs a positive sample rate");
  const std::size_t frames = channels.front().size();
  for (const auto& c : channels)
    if (c.size() != frames) throw LengthError("write_wav channels differ in length");

  const uint16_t n_ch = static_cast<uint16_t>(channels.size());
  const uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const uint16_t block = n_ch * bits / 8;
  const uint32_t data_bytes = static_cast<uint32_t>(frames * block);

  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, n_ch);
  PutU32(out, static_cast<uint32_t>(sample_rate));
  PutU32(out, static_cast<uint32_t>(sample_rate) * block);
  PutU16(out, block);
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (std::size_t f = 0; f < frames; ++f) {
    for (const auto& c : channels) {
      if (encoding == WavEncoding::kPcm16) {
        const double scaled = std::nearbyint(std::clamp<double>(c[f], -1.0, 1.0) * 32768.0);
        PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0))));
      } else {
        uint32_t bitsv;
        std::memcpy(&bitsv, &c[f], sizeof(float));
        PutU32(out, bitsv);
      }
    }
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw FormatError("short write to " + path.string());
}

void write_wav(const std::filesystem::path& path, const Waveform& w, WavEncoding encoding) {
  write_wav_channels(path, {w.samples}, w.sample_rate, encoding);
}

}  // namespace hifipp
