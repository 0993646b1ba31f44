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

#ifndef PROMPTEDIT_EVALUATION_HPP_
#define PROMPTEDIT_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promptedit/embedding.hpp"
#include "promptedit/emotions.hpp"

namespace promptedit {

// Prompt conditions under comparison. kManualEdited is reserved for
// human-edited prompts; nothing in this library produces it.
enum class PromptCondition { kOriginal, kLabelAppended, kReprompt, kManualEdited };

std::string_view PromptConditionName(PromptCondition c);
PromptCondition ParsePromptCondition(std::string_view name);

struct ScoringInput {
  std::string prompt_id;
  PromptCondition condition = PromptCondition::kOriginal;
  std::string emotion;
  std::string text;
  std::string image;  // encoded image bytes
  std::string image_path;
};

struct ConditionRecord {
  std::string prompt_id;
  PromptCondition condition = PromptCondition::kOriginal;
  std::string emotion;
  Valence valence = Valence::kPositive;
  double iea = 0.0;
  double ita = 0.0;
  std::size_t images = 1;  // images averaged into this record
};

struct ScoreOptions {
  // Several images for one (prompt, condition): false keeps the last one
  // with a warning, true averages all of them.
  bool aggregate_images = false;
};

struct ScoreResult {
  std::vector<ConditionRecord> records;  // first-appearance order
  std::vector<std::string> warnings;
};

// iea = cos(image, emotion); ita = cos(image, ORIGINAL text of the prompt).
// Throws MissingOriginal, UnknownEmotion, and embedding errors.
ScoreResult ScoreConditions(const std::vector<ScoringInput>& inputs, const Embedder& embedder,
                            const ScoreOptions& options = {});

// CSV "prompt_id,condition,emotion,text,image_path"; image paths resolve
// against the manifest's directory and are read eagerly.
std::vector<ScoringInput> ReadManifest(const std::filesystem::path& path);

std::string FormatRecordsCsv(const std::vector<ConditionRecord>& records);

// --- Statistics ----------------------------------------------------------------

struct WilcoxonResult {
  std::size_t n = 0;  // pairs with a non-zero difference
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p = 1.0;  // two-sided
  bool exact = true;
};

inline constexpr std::size_t kWilcoxonExactMax = 50;

// Signed-rank test of b - a. Zero differences are dropped, tied |d| share
// midranks. Exact null distribution up to kWilcoxonExactMax pairs, normal
// approximation with tie correction above.
WilcoxonResult WilcoxonSignedRank(const std::vector<double>& a, const std::vector<double>& b);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Percentile bootstrap of the mean.
Interval BootstrapMeanCi(const std::vector<double>& values, std::size_t resamples,
                         std::uint64_t seed, double level = 0.95);

struct CorrelationRow {
  std::string emotion;
  double r = 0.0;
  std::size_t n = 0;
  double lower95 = 0.0;
  double upper95 = 0.0;
  double p = 1.0;
};

// Pearson r with a Fisher-z 95% interval and a two-sided t-test p-value.
CorrelationRow Pearson(const std::vector<double>& x, const std::vector<double>& y);

enum class Metric { kIea, kIta };

std::string_view MetricName(Metric m);

struct ConditionSummary {
  PromptCondition condition = PromptCondition::kOriginal;
  std::size_t n = 0;
  double mean = 0.0;
  Interval ci;
};

struct PairwiseComparison {
  PromptCondition a = PromptCondition::kOriginal;
  PromptCondition b = PromptCondition::kOriginal;
  std::size_t pairs = 0;
  double mean_difference = 0.0;  // b - a
  Interval difference_ci;
  WilcoxonResult test;
  bool significant = false;           // p < .001
  bool marginally_significant = false;  // .001 <= p < .005
};

struct ComparisonBlock {
  std::vector<ConditionSummary> conditions;
  std::vector<PairwiseComparison> pairs;  // only pairs with >= kMinPairs
};

struct ComparisonReport {
  Metric metric = Metric::kIea;
  std::string method;
  ComparisonBlock overall;
  std::optional<ComparisonBlock> positive;
  std::optional<ComparisonBlock> negative;
};

struct CompareOptions {
  std::size_t resamples = 10000;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinPairs = 5;
inline constexpr double kSignificantP = 0.001;
inline constexpr double kMarginalP = 0.005;

// Throws InsufficientPairs unless some two conditions share kMinPairs prompts.
ComparisonReport Compare(const std::vector<ConditionRecord>& records, Metric metric,
                         const CompareOptions& options = {});

std::string ComparisonToJson(const ComparisonReport& report);
std::string FormatComparison(const ComparisonReport& report);

struct CorrelationReport {
  std::vector<CorrelationRow> rows;
};

struct EmotionImage {
  std::string image;  // encoded bytes
  std::string image_path;
  std::vector<double> probabilities;  // aligned with the emotion list
};

// Per emotion, Pearson r between cos(image, emotion) and the dataset
// probability of that emotion. Throws ShapeMismatch, TooFewRows.
CorrelationReport EmotionCorrelation(const std::vector<EmotionImage>& images,
                                     const std::vector<std::string>& emotions,
                                     const Embedder& embedder);

// CSV "image_path,p_<emotion>,..."; returns the images (bytes loaded relative
// to the file's directory) and the emotion names from the p_ columns.
std::pair<std::vector<EmotionImage>, std::vector<std::string>> ReadEmotionProbabilities(
    const std::filesystem::path& path);

std::string CorrelationToJson(const CorrelationReport& report);
std::string FormatCorrelation(const CorrelationReport& report);

}  // namespace promptedit

#endif  // PROMPTEDIT_EVALUATION_HPP_
