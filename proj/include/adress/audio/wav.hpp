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

#ifndef ADRESS_AUDIO_WAV_HPP_
#define ADRESS_AUDIO_WAV_HPP_

#include <filesystem>
#include <string>

#include "adress/audio/recording.hpp"
#include "adress/common/error.hpp"

namespace adress::audio {

// Lowest sample rate admitted to the pipeline. Formant and MFCC band layouts
// assume at least 8 kHz of bandwidth.
inline constexpr int kMinSampleRate = 16000;

enum class AudioErrorKind {
  kMissingFile,
  kUnsupportedCodec,
  kZeroLengthStream,
  kMalformed,
  kUnsupportedSampleRate,
};

const char* to_string(AudioErrorKind kind);

class AudioError : public DataError {
 public:
  AudioError(AudioErrorKind kind, const std::string& message)
      : DataError(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  AudioErrorKind kind() const noexcept { return kind_; }

 private:
  AudioErrorKind kind_;
};

// Reads a RIFF/WAVE file holding 8/16/24/32-bit integer PCM or 32-bit float.
// Channels are averaged to mono and integer samples scaled by 2^(bits-1).
// The recording id is the file stem. Rates below kMinSampleRate are rejected.
Recording load_audio(const std::filesystem::path& path);

enum class WavEncoding { kPcm16, kFloat32 };

// Writes a mono WAV. kPcm16 rounds and saturates to the int16 range.
void write_wav(const std::filesystem::path& path, const Recording& rec,
               WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace adress::audio

#endif  // ADRESS_AUDIO_WAV_HPP_
