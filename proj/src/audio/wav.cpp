// Copyright 2026 The adress-baseline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adress/audio/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace adress::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  }
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

// Decodes one sample starting at p into [-1, 1].
double decode_sample(const unsigned char* p, std::uint16_t format,
                     std::uint16_t bits) {
  if (format == kFormatFloat) {
    float f;
    std::uint32_t raw = read_u32(p);
    std::memcpy(&f, &raw, sizeof(f));
    return static_cast<double>(f);
  }
  switch (bits) {
    case 8:
      return (static_cast<double>(p[0]) - 128.0) / 128.0;
    case 16:
      return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) |
                                                 (p[2] << 16));
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
    default:
      return 0.0;
  }
}

}  // namespace

const char* to_string(AudioErrorKind kind) {
  switch (kind) {
    case AudioErrorKind::kMissingFile:
      return "missing file";
    case AudioErrorKind::kUnsupportedCodec:
      return "unsupported codec";
    case AudioErrorKind::kZeroLengthStream:
      return "zero-length stream";
    case AudioErrorKind::kMalformed:
      return "malformed wav";
    case AudioErrorKind::kUnsupportedSampleRate:
      return "unsupported sample rate";
  }
  return "audio error";
}

Recording load_audio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw AudioError(AudioErrorKind::kMissingFile, path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw AudioError(AudioErrorKind::kUnsupportedCodec,
                     where + " is not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  bool have_data = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) {
        throw AudioError(AudioErrorKind::kMalformed, where + ": short fmt chunk");
      }
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      sample_rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) {
          throw AudioError(AudioErrorKind::kMalformed,
                           where + ": short extensible fmt chunk");
        }
        // First two bytes of the SubFormat GUID carry the real format tag.
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data_offset = body;
      // Tolerate truncated files and streaming writers that leave size unset.
      data_size = std::min<std::size_t>(size, bytes.size() - body);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt || !have_data) {
    throw AudioError(AudioErrorKind::kMalformed,
                     where + ": missing fmt or data chunk");
  }
  const bool int_ok = format == kFormatPcm &&
                      (bits == 8 || bits == 16 || bits == 24 || bits == 32);
  const bool float_ok = format == kFormatFloat && bits == 32;
  if (!int_ok && !float_ok) {
    throw AudioError(AudioErrorKind::kUnsupportedCodec,
                     where + ": format " + std::to_string(format) + " with " +
                         std::to_string(bits) + " bits");
  }
  if (channels == 0) {
    throw AudioError(AudioErrorKind::kMalformed, where + ": zero channels");
  }
  if (sample_rate < static_cast<std::uint32_t>(kMinSampleRate)) {
    throw AudioError(AudioErrorKind::kUnsupportedSampleRate,
                     where + ": " + std::to_string(sample_rate) +
                         " Hz is below " + std::to_string(kMinSampleRate));
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t block = bytes_per_sample * channels;
  const std::size_t frame_count = data_size / block;
  if (frame_count == 0) {
    throw AudioError(AudioErrorKind::kZeroLengthStream, where);
  }

  Recording rec;
  rec.id = path.stem().string();
  rec.sample_rate = static_cast<int>(sample_rate);
  rec.samples.resize(frame_count);
  const unsigned char* data = bytes.data() + data_offset;
  for (std::size_t i = 0; i < frame_count; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      acc += decode_sample(data + i * block + c * bytes_per_sample, format, bits);
    }
    rec.samples[i] = acc / channels;
  }
  return rec;
}

void write_wav(const std::filesystem::path& path, const Recording& rec,
               WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(rec.samples.size() * (bits / 8));

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, pcm ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(rec.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(rec.sample_rate) * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : rec.samples) {
    if (pcm) {
      const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      const float f = static_cast<float>(s);
      std::uint32_t raw;
      std::memcpy(&raw, &f, sizeof(raw));
      put_u32(out, raw);
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  os.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!os) {
    throw DataError("short write to " + path.string());
  }
}

}  // namespace adress::audio
