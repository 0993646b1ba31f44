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

#ifndef PROMPTEDIT_EXPLAIN_HPP_
#define PROMPTEDIT_EXPLAIN_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promptedit/features.hpp"
#include "promptedit/proxy_model.hpp"

namespace promptedit {

// All attributions explain the predicted probability, not the raw margin.
struct ShapExplanation {
  std::string instance_id;
  double baseline = 0.0;  // mean prediction over the background
  double output = 0.0;    // mean prediction with every player taken from x
  std::array<double, kNumFeatures> attributions{};
  std::vector<std::size_t> players;
};

inline constexpr std::size_t kMaxExactPlayers = 15;

// Interventional Shapley values by exhaustive coalition enumeration.
// v(S) = mean over background rows z of f(x_S, z_rest). `players` defaults to
// the features the model splits on, for which output == f(x). Throws
// TooManyFeatures, EmptyBackground.
ShapExplanation ShapleyExact(const TreeEnsemble& model, const FeatureVector& x,
                             const std::vector<FeatureVector>& background,
                             std::optional<std::vector<std::size_t>> players = std::nullopt,
                             std::string instance_id = "");

// Antithetic permutation sampling; `samples` permutations (>= 100), background
// rows taken in turn. The residual against the exact total output - baseline is
// spread over the players in proportion to |estimate|, so efficiency holds
// exactly.
ShapExplanation ShapleySampled(const TreeEnsemble& model, const FeatureVector& x,
                               const std::vector<FeatureVector>& background, std::size_t samples,
                               std::uint64_t seed,
                               std::optional<std::vector<std::size_t>> players = std::nullopt,
                               std::string instance_id = "");

struct ImportanceEntry {
  std::string feature;
  double mean_abs = 0.0;
};

struct GlobalImportanceResult {
  std::vector<ImportanceEntry> ranking;  // descending, ties by name
};

// Mean |attribution| per feature over `sample`. Exact when the model uses at
// most kMaxExactPlayers features, otherwise sampled with `samples` and `seed`.
// Throws EmptySample, EmptyBackground.
GlobalImportanceResult GlobalImportance(const TreeEnsemble& model,
                                        const std::vector<FeatureVector>& sample,
                                        const std::vector<FeatureVector>& background,
                                        std::size_t samples = 2000, std::uint64_t seed = 0);

// Up to `max_rows` rows drawn without replacement, kept in input order.
std::vector<FeatureVector> SampleBackground(const std::vector<FeatureVector>& rows,
                                            std::size_t max_rows = 200, std::uint64_t seed = 0);

enum class GridKind {
  kAuto,      // counts: 0..max observed; concreteness: `points` evenly spaced
  kObserved,  // the distinct observed values
  kExplicit,  // `values` as given (sorted, deduplicated)
};

struct GridSpec {
  GridKind kind = GridKind::kAuto;
  std::size_t points = 50;
  std::vector<double> values;
};

std::vector<double> MakeGrid(std::size_t feature, const std::vector<FeatureVector>& background,
                             const GridSpec& spec);

struct PdpCurve {
  std::string feature;
  std::vector<double> grid;
  std::vector<double> means;
  double baseline = 0.0;
};

// Throws UnknownFeature, EmptyBackground, InvalidArgument (< 2 grid points).
PdpCurve Pdp(const TreeEnsemble& model, std::string_view feature,
             const std::vector<FeatureVector>& background, const GridSpec& spec = {});

// A maximal run of grid points whose mean prediction is strictly above the
// baseline: [lo, hi] in grid values. `below`/`above` are the neighbouring grid
// values outside the run, absent at the grid ends, so the run reads
// (below, hi] when it reaches the top of the grid.
struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<double> below;
  std::optional<double> above;
};

std::vector<ValueRange> DeriveRubricRanges(const PdpCurve& curve);

std::string FormatRange(const ValueRange& range);

// --- Rubric ----------------------------------------------------------------

enum class CompareOp { kGt, kGe, kLt, kLe };

std::string_view CompareOpSymbol(CompareOp op);
CompareOp ParseCompareOp(std::string_view symbol);

struct Condition {
  std::size_t feature = 0;
  CompareOp op = CompareOp::kGt;
  double threshold = 0.0;

  bool Holds(const FeatureVector& x) const;
};

enum class ActionKind { kReduceTo, kAddAdjectives, kAppendLabel };

std::string_view ActionKindName(ActionKind kind);

struct Action {
  ActionKind kind = ActionKind::kAppendLabel;
  PosBucket bucket = PosBucket::kNoun;  // kReduceTo
  int target = 0;                       // kReduceTo
  int count = 0;                        // kAddAdjectives
  double min_concreteness = 0.0;        // kAddAdjectives, strict lower bound
};

enum class Provenance { kDerived, kCurated };

struct Rule {
  std::string id;
  // Fires when any condition holds. Empty for the unconditional label rule.
  std::vector<Condition> any_of;
  Action action;
  Provenance provenance = Provenance::kDerived;

  bool Fires(const FeatureVector& x) const;
};

struct Rubric {
  std::string version;
  std::vector<Rule> rules;
  // Findings without an editing action, kept for the report.
  std::vector<std::string> advisories;

  // Throws InvalidArgument unless exactly one label rule exists and is last,
  // every other rule has a trigger, and thresholds are finite.
  void Validate() const;
};

// The curated three-rule rubric plus the label rule:
//   R1  #nouns > 3                  reduce nouns to 3 by saliency
//   R2  #adjs < 2 or conc_adj < 2   add 3 adjectives with concreteness > 2
//   R3  #verbs > 2                  reduce verbs to 2 by saliency
//   R4  append the emotion label
Rubric CuratedRubric();

std::string SerializeRubric(const Rubric& rubric);
Rubric ParseRubric(std::string_view json);

struct CandidateRule {
  Rule rule;
  std::string rationale;
};

struct Candidates {
  std::vector<CandidateRule> rules;
  std::vector<std::string> advisories;
};

// Turns PDP ranges into proposed rules. Noun and verb counts favoured only up
// to some n become REDUCE_TO n; adjective count or concreteness favoured above
// a bound becomes one ADD_ADJECTIVES rule triggered by either shortfall.
// Everything else is advisory.
Candidates CandidateRules(const std::vector<PdpCurve>& curves, int add_count = 3);

// Rubric from the accepted candidate ids (plus the label rule, always last).
Rubric AcceptCandidates(const Candidates& candidates, const std::vector<std::string>& accepted);

std::string SerializeExplanation(const ShapExplanation& e);
std::string FormatPdpCsv(const std::vector<PdpCurve>& curves);

}  // namespace promptedit

#endif  // PROMPTEDIT_EXPLAIN_HPP_
