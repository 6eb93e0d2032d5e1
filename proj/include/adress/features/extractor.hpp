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

#ifndef ADRESS_FEATURES_EXTRACTOR_HPP_
#define ADRESS_FEATURES_EXTRACTOR_HPP_

#include <string>
#include <vector>

#include "adress/audio/recording.hpp"
#include "adress/features/functionals.hpp"
#include "adress/features/lld.hpp"

namespace adress::features {

struct FrameFeatureMatrix {
  std::string recording_id;
  std::vector<FrameFeatureVector> rows;
  // The source was shorter than one second; rows is empty.
  bool short_recording = false;
};

// frame_1s -> extract_llds -> apply_functionals, rows in frame order.
FrameFeatureMatrix extract_frame_features(const audio::Recording& rec,
                                          const LldConfig& config = {});

}  // namespace adress::features

#endif  // ADRESS_FEATURES_EXTRACTOR_HPP_
