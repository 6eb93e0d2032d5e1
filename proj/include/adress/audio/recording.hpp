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

#ifndef ADRESS_AUDIO_RECORDING_HPP_
#define ADRESS_AUDIO_RECORDING_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace adress::audio {

// Mono signal with samples nominally in [-1, 1].
struct Recording {
  std::string id;
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Exactly one second of a recording; frame k starts at sample k * sample_rate.
struct FrameSlice {
  std::string recording_id;
  std::size_t index = 0;
  int sample_rate = 0;
  std::vector<double> samples;
};

}  // namespace adress::audio

#endif  // ADRESS_AUDIO_RECORDING_HPP_
