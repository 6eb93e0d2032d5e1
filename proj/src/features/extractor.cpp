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

#include "adress/features/extractor.hpp"

#include "adress/audio/framing.hpp"

namespace adress::features {

FrameFeatureMatrix extract_frame_features(const audio::Recording& rec,
                                          const LldConfig& config) {
  const audio::FrameSequence frames = audio::frame_1s(rec);
  FrameFeatureMatrix matrix;
  matrix.recording_id = rec.id;
  matrix.short_recording = frames.short_recording;
  matrix.rows.reserve(frames.frames.size());
  for (const audio::FrameSlice& frame : frames.frames) {
    FrameFeatureVector row = apply_functionals(extract_llds(frame, config));
    row.frame_index = frame.index;
    matrix.rows.push_back(row);
  }
  return matrix;
}

}  // namespace adress::features
