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

#ifndef ADRESS_FEATURES_FEATURE_TABLE_HPP_
#define ADRESS_FEATURES_FEATURE_TABLE_HPP_

#include <array>
#include <cstddef>
#include <string_view>

namespace adress::features {

inline constexpr std::size_t kFeatureCount = 88;

// Bumped whenever a name, position, or definition in the table changes.
// Model and cache files record it and refuse to load on mismatch.
inline constexpr std::string_view kFeatureTableVersion = "egemaps-style-v1";

// Column order of every FrameFeatureVector. See docs/features.md for the
// descriptor and functional definitions behind each name.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "F0semitoneFrom27.5Hz_amean",
    "F0semitoneFrom27.5Hz_stddevNorm",
    "F0semitoneFrom27.5Hz_percentile20.0",
    "F0semitoneFrom27.5Hz_percentile50.0",
    "F0semitoneFrom27.5Hz_percentile80.0",
    "F0semitoneFrom27.5Hz_pctlrange0-2",
    "F0semitoneFrom27.5Hz_meanRisingSlope",
    "F0semitoneFrom27.5Hz_stddevRisingSlope",
    "F0semitoneFrom27.5Hz_meanFallingSlope",
    "F0semitoneFrom27.5Hz_stddevFallingSlope",
    "loudness_amean",
    "loudness_stddevNorm",
    "loudness_percentile20.0",
    "loudness_percentile50.0",
    "loudness_percentile80.0",
    "loudness_pctlrange0-2",
    "loudness_meanRisingSlope",
    "loudness_stddevRisingSlope",
    "loudness_meanFallingSlope",
    "loudness_stddevFallingSlope",
    "spectralFlux_amean",
    "spectralFlux_stddevNorm",
    "mfcc1_amean",
    "mfcc1_stddevNorm",
    "mfcc2_amean",
    "mfcc2_stddevNorm",
    "mfcc3_amean",
    "mfcc3_stddevNorm",
    "mfcc4_amean",
    "mfcc4_stddevNorm",
    "jitterLocal_amean",
    "jitterLocal_stddevNorm",
    "shimmerLocaldB_amean",
    "shimmerLocaldB_stddevNorm",
    "HNRdBACF_amean",
    "HNRdBACF_stddevNorm",
    "logRelF0-H1-H2_amean",
    "logRelF0-H1-H2_stddevNorm",
    "logRelF0-H1-A3_amean",
    "logRelF0-H1-A3_stddevNorm",
    "F1frequency_amean",
    "F1frequency_stddevNorm",
    "F1bandwidth_amean",
    "F1bandwidth_stddevNorm",
    "F1amplitudeLogRelF0_amean",
    "F1amplitudeLogRelF0_stddevNorm",
    "F2frequency_amean",
    "F2frequency_stddevNorm",
    "F2bandwidth_amean",
    "F2bandwidth_stddevNorm",
    "F2amplitudeLogRelF0_amean",
    "F2amplitudeLogRelF0_stddevNorm",
    "F3frequency_amean",
    "F3frequency_stddevNorm",
    "F3bandwidth_amean",
    "F3bandwidth_stddevNorm",
    "F3amplitudeLogRelF0_amean",
    "F3amplitudeLogRelF0_stddevNorm",
    "alphaRatioV_amean",
    "alphaRatioV_stddevNorm",
    "hammarbergIndexV_amean",
    "hammarbergIndexV_stddevNorm",
    "slopeV0-500_amean",
    "slopeV0-500_stddevNorm",
    "slopeV500-1500_amean",
    "slopeV500-1500_stddevNorm",
    "spectralFluxV_amean",
    "spectralFluxV_stddevNorm",
    "mfcc1V_amean",
    "mfcc1V_stddevNorm",
    "mfcc2V_amean",
    "mfcc2V_stddevNorm",
    "mfcc3V_amean",
    "mfcc3V_stddevNorm",
    "mfcc4V_amean",
    "mfcc4V_stddevNorm",
    "alphaRatioUV_amean",
    "hammarbergIndexUV_amean",
    "slopeUV0-500_amean",
    "slopeUV500-1500_amean",
    "spectralFluxUV_amean",
    "loudnessPeaksPerSec",
    "VoicedSegmentsPerSec",
    "MeanVoicedSegmentLengthSec",
    "StddevVoicedSegmentLengthSec",
    "MeanUnvoicedSegmentLength",
    "StddevUnvoicedSegmentLength",
    "equivalentSoundLevel_dBp",
};

// Column indices the tests and diagnostics refer to by role.
namespace column {
inline constexpr std::size_t kF0Mean = 0;
inline constexpr std::size_t kF0Percentile50 = 3;
inline constexpr std::size_t kLoudnessMean = 10;
inline constexpr std::size_t kJitterMean = 30;
inline constexpr std::size_t kShimmerMean = 32;
inline constexpr std::size_t kEquivalentSoundLevel = 87;
}  // namespace column

}  // namespace adress::features

#endif  // ADRESS_FEATURES_FEATURE_TABLE_HPP_
