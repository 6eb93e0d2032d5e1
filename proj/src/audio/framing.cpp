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

#include "adress/audio/framing.hpp"

#include <cstddef>

#include "adress/common/error.hpp"

namespace adress::audio {

FrameSequence frame_1s(const Recording& rec) {
  if (rec.sample_rate <= 0) {
    throw DataError(rec.id + ": invalid sample rate");
  }
  const auto length = static_cast<std::size_t>(rec.sample_rate);
  const std::size_t count = rec.samples.size() / length;

  FrameSequence seq;
  seq.short_recording = count == 0;
  seq.frames.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    FrameSlice frame;
    frame.recording_id = rec.id;
    frame.index = k;
    frame.sample_rate = rec.sample_rate;
    const auto first = rec.samples.begin() + static_cast<std::ptrdiff_t>(k * length);
    frame.samples.assign(first, first + static_cast<std::ptrdiff_t>(length));
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

}  // namespace adress::audio
