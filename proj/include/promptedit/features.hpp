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

#ifndef PROMPTEDIT_FEATURES_HPP_
#define PROMPTEDIT_FEATURES_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "promptedit/text_analysis.hpp"

namespace promptedit {

// Schema of the word-level feature vector: count_<BUCKET> for the ten
// buckets followed by conc_<BUCKET> in the same order. Bump the version on
// any change; serialized models and feature tables carry it.
inline constexpr std::string_view kFeatureSchemaVersion = "pos10-count-conc-v1";
inline constexpr std::size_t kNumFeatures = 2 * kNumBuckets;

const std::array<std::string, kNumFeatures>& FeatureNames();

// Accepts canonical names and the rubric aliases (#nouns, #adjs, #verbs,
// conc_noun, conc_adj, conc_verb).
std::optional<std::size_t> FeatureIndex(std::string_view name);
std::size_t RequireFeatureIndex(std::string_view name);

constexpr std::size_t CountIndex(PosBucket b) { return static_cast<std::size_t>(b); }
constexpr std::size_t ConcIndex(PosBucket b) {
  return kNumBuckets + static_cast<std::size_t>(b);
}
constexpr bool IsCountFeature(std::size_t index) { return index < kNumBuckets; }
constexpr PosBucket FeatureBucket(std::size_t index) {
  return kAllBuckets[index % kNumBuckets];
}

class FeatureVector {
 public:
  FeatureVector() { values_.fill(0.0); }
  explicit FeatureVector(const std::array<double, kNumFeatures>& values)
      : values_(values) {}

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double get(std::string_view name) const { return values_[RequireFeatureIndex(name)]; }
  void set(std::string_view name, double v) { values_[RequireFeatureIndex(name)] = v; }

  std::span<const double, kNumFeatures> values() const { return values_; }
  static constexpr std::size_t size() { return kNumFeatures; }

  bool operator==(const FeatureVector&) const = default;

 private:
  std::array<double, kNumFeatures> values_;
};

// Counts per bucket and mean concreteness over rated tokens per bucket; a
// bucket without rated tokens has conc 0. Never fails.
FeatureVector Extract(const TaggedText& tagged);
FeatureVector ExtractTokens(std::span<const Token> tokens);

struct PromptRecord {
  std::string id;
  std::string text;
  std::string emotion;
};

struct FeatureTable {
  std::vector<std::string> ids;
  std::vector<FeatureVector> rows;
};

// One row per prompt in input order. Throws DuplicateId. Prompts with no
// taggable words yield an all-zero row.
FeatureTable ExtractBatch(const std::vector<PromptRecord>& prompts,
                          const ConcretenessLexicon& lexicon, const Tagger& tagger);

std::string FormatFeatureCsv(const FeatureTable& table);
FeatureTable ParseFeatureCsv(std::string_view text, std::string_view source = "features");

// JSON-lines prompt input, one {id, emotion, text} object per line.
std::vector<PromptRecord> ParsePromptsJsonl(std::string_view text,
                                            std::string_view source = "prompts");

}  // namespace promptedit

#endif  // PROMPTEDIT_FEATURES_HPP_
