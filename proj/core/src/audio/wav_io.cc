// Copyright (c) 2026 The DeepTalk Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deeptalk/audio/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "deeptalk/common/require.h"

namespace deeptalk {

namespace {

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<uint8_t>* out, uint32_t v) {
  out->push_back(static_cast<uint8_t>(v & 0xff));
  out->push_back(static_cast<uint8_t>((v >> 8) & 0xff));
  out->push_back(static_cast<uint8_t>((v >> 16) & 0xff));
  out->push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

void PutU16(std::vector<uint8_t>* out, uint16_t v) {
  out->push_back(static_cast<uint8_t>(v & 0xff));
  out->push_back(static_cast<uint8_t>((v >> 8) & 0xff));
}

}  // namespace

Waveform LoadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), "cannot open wav file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  Require(bytes.size() >= 44, path + ": truncated wav header");
  Require(std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
              std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
          path + ": not a RIFF/WAVE file");

  // Walk chunks; fmt must precede data.
  size_t pos = 12;
  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t* data = nullptr;
  uint32_t data_len = 0;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t len = ReadU32(bytes.data() + pos + 4);
    Require(pos + 8 + len <= bytes.size(), path + ": truncated chunk");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      Require(len >= 16, path + ": fmt chunk too short");
      const uint8_t* f = bytes.data() + pos + 8;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = ReadU32(f + 4);
      bits = ReadU16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + pos + 8;
      data_len = len;
    }
    pos += 8 + len + (len & 1);  // chunks are word-aligned
  }
  Require(have_fmt, path + ": missing fmt chunk");
  Require(data != nullptr, path + ": missing data chunk");
  Require(format == 1, path + ": unsupported encoding (expected PCM)");
  Require(channels == 1, path + ": unsupported channel count " +
                             std::to_string(channels) + " (expected mono)");
  Require(rate == static_cast<uint32_t>(kSampleRate),
          path + ": unsupported sample rate " + std::to_string(rate) +
              " (expected 8000)");
  Require(bits == 16, path + ": unsupported bit depth " +
                          std::to_string(bits) + " (expected 16)");
  Require(data_len % 2 == 0, path + ": odd data chunk length");
  Require(data_len > 0, path + ": empty data chunk");

  Waveform w;
  w.source_id = path;
  w.samples.resize(data_len / 2);
  for (size_t i = 0; i < w.samples.size(); ++i) {
    const int16_t s =
        static_cast<int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
    w.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return w;
}

void SaveWav(const std::string& path, const Waveform& w) {
  Require(w.sample_rate == kSampleRate, "waveform sample rate must be 8000");
  Require(!w.samples.empty(), "refusing to write empty waveform");
  const uint32_t data_len = static_cast<uint32_t>(w.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_len);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(&out, 36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, kSampleRate);
  PutU32(&out, kSampleRate * 2);  // byte rate
  PutU16(&out, 2);                // block align
  PutU16(&out, 16);               // bits
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(&out, data_len);
  for (double s : w.samples) {
    const double clipped = std::clamp(s, -1.0, 1.0);
    const int32_t q = static_cast<int32_t>(std::lrint(clipped * 32767.0));
    const int16_t v = static_cast<int16_t>(std::clamp(q, -32768, 32767));
    PutU16(&out, static_cast<uint16_t>(v));
  }
  std::ofstream f(path, std::ios::binary);
  Require(f.good(), "cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  f.flush();
  Require(f.good(), "write failed: " + path);
}

}  // namespace deeptalk
