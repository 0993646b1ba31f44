/*
 * Copyright 2026 The promptedit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "promptedit/emotions.hpp"

#include <map>

#include "promptedit/strings.hpp"

namespace promptedit {

std::string_view ValenceName(Valence v) {
  return v == Valence::kPositive ? "POSITIVE" : "NEGATIVE";
}

namespace {

const std::map<std::string, Valence, std::less<>>& ValenceTable() {
  static const std::map<std::string, Valence, std::less<>> table = [] {
    std::map<std::string, Valence, std::less<>> t;
    for (const char* e : {"joyful", "excited", "proud", "surprised", "trusting", "joy", "love",
                          "surprise"}) {
      t[e] = Valence::kPositive;
    }
    for (const char* e : {"sad", "angry", "afraid", "lonely", "anxious", "sadness", "anger",
                          "fear", "disgust"}) {
      t[e] = Valence::kNegative;
    }
    return t;
  }();
  return table;
}

}  // namespace

std::optional<Valence> ValenceOf(std::string_view emotion) {
  const auto& t = ValenceTable();
  if (auto it = t.find(ToLower(Trim(emotion))); it != t.end()) return it->second;
  return std::nullopt;
}

const std::set<std::string>& DefaultEmotionSet() {
  static const std::set<std::string> labels = [] {
    std::set<std::string> s = {
        "afraid",      "angry",     "annoyed",      "anticipating", "anxious",   "apprehensive",
        "ashamed",     "caring",    "confident",    "content",      "devastated", "disappointed",
        "disgusted",   "embarrassed", "excited",    "faithful",     "furious",   "grateful",
        "guilty",      "hopeful",   "impressed",    "jealous",      "joyful",    "lonely",
        "nostalgic",   "prepared",  "proud",        "sad",          "sentimental", "surprised",
        "terrified",   "trusting"};
    for (const auto& [label, v] : ValenceTable()) s.insert(label);
    return s;
  }();
  return labels;
}

}  // namespace promptedit
