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

#ifndef ADRESS_AUDIO_FRAMING_HPP_
#define ADRESS_AUDIO_FRAMING_HPP_

#include <vector>

#include "adress/audio/recording.hpp"

namespace adress::audio {

struct FrameSequence {
  std::vector<FrameSlice> frames;
  // Set when the recording is shorter than one second and yields no frames.
  bool short_recording = false;
};

// Cuts the recording into non-overlapping one-second frames. The trailing
// partial second is dropped, never padded.
FrameSequence frame_1s(const Recording& rec);

}  // namespace adress::audio

#endif  // ADRESS_AUDIO_FRAMING_HPP_
