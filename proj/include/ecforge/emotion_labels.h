// Copyright 2026 The ecforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ECFORGE_EMOTION_LABELS_H_
#define ECFORGE_EMOTION_LABELS_H_

#include <array>
#include <optional>
#include <string_view>

namespace ecforge {

// The seven emotion categories, in canonical order. Canonical order is the
// tie-break for equal similarity scores.
enum class EmotionLabel {
  kFear,
  kDisgust,
  kSadness,
  kHappiness,
  kSurprise,
  kAnger,
  kNeutral,
};

inline constexpr size_t kNumEmotionLabels = 7;

inline constexpr std::array<EmotionLabel, kNumEmotionLabels> kEmotionLabels = {
    EmotionLabel::kFear,     EmotionLabel::kDisgust,  EmotionLabel::kSadness,
    EmotionLabel::kHappiness, EmotionLabel::kSurprise, EmotionLabel::kAnger,
    EmotionLabel::kNeutral,
};

inline constexpr std::string_view LabelName(EmotionLabel label) {
  constexpr std::array<std::string_view, kNumEmotionLabels> kNames = {
      "fear", "disgust", "sadness", "happiness", "surprise", "anger",
      "neutral"};
  return kNames[static_cast<size_t>(label)];
}

inline std::optional<EmotionLabel> LabelFromName(std::string_view name) {
  for (EmotionLabel label : kEmotionLabels) {
    if (LabelName(label) == name) return label;
  }
  return std::nullopt;
}

}  // namespace ecforge

#endif  // ECFORGE_EMOTION_LABELS_H_
