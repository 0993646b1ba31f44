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

#ifndef PROMPTEDIT_PROXY_MODEL_HPP_
#define PROMPTEDIT_PROXY_MODEL_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "promptedit/features.hpp"

namespace promptedit {

enum class Target { kIea, kIta };

std::string_view TargetName(Target target);
Target ParseTarget(std::string_view name);

struct BinarizedScores {
  std::vector<int> labels;
  double mean = 0.0;
};

// label_i = 1 iff score_i > mean (strict). Throws TooFewScores below two.
BinarizedScores Binarize(const std::vector<double>& scores);

struct ProxyRow {
  FeatureVector x;
  double raw_score = 0.0;
  int label = 0;
};

struct ProxyDataset {
  std::vector<ProxyRow> rows;
  Target target = Target::kIea;
  double score_mean = 0.0;
};

ProxyDataset MakeDataset(const std::vector<FeatureVector>& features,
                         const std::vector<double>& scores, Target target);

// One row of a score file "id,emotion,text,iea,ita".
struct ScoreRecord {
  std::string id;
  std::string emotion;
  std::string text;
  double iea = 0.0;
  double ita = 0.0;
};

std::vector<ScoreRecord> ParseScoreCsv(std::string_view text, std::string_view source = "scores");
std::string FormatScoreCsv(const std::vector<ScoreRecord>& records);

// Pairs feature rows with scores by id. Every feature id needs a score.
ProxyDataset JoinScores(const FeatureTable& features, const std::vector<ScoreRecord>& scores,
                        Target target);

struct TreeNode {
  // Internal nodes: go left when x[feature] <= threshold. Leaves have
  // feature == -1 and carry `value`.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double Eval(const double* x) const;
};

class TreeEnsemble {
 public:
  static constexpr std::string_view kSchemaVersion = "promptedit-gbdt-v1";

  TreeEnsemble();

  std::vector<Tree> trees;
  double learning_rate = 0.1;
  double base_score = 0.0;
  std::vector<std::string> feature_schema;

  // Throws SchemaMismatch when feature_schema is not the current one.
  void CheckSchema() const;

  // base_score + learning_rate * sum of trees. No schema check.
  double RawUnchecked(const double* x) const;

  // Sorted indices of features used by at least one split.
  std::vector<std::size_t> UsedFeatures() const;
};

double Logistic(double z);

double PredictRaw(const TreeEnsemble& model, const FeatureVector& x);
// Probability of the positive class, in (0, 1).
double Predict(const TreeEnsemble& model, const FeatureVector& x);

struct TrainParams {
  int num_trees = 100;
  int max_depth = 4;
  double learning_rate = 0.1;
  int min_leaf = 20;
  std::uint64_t seed = 0;
  // Fraction of rows drawn (without replacement) per tree; 1 uses all rows.
  double subsample = 1.0;
  // L2 penalty on leaf values.
  double lambda = 1.0;
};

void ValidateParams(const TrainParams& params);

// Gradient boosting on logistic loss with Newton leaf values. Training is
// invariant to row order: rows are put into a canonical order first.
// Throws TooFewRows, SingleClass, InvalidParams.
TreeEnsemble Train(const ProxyDataset& dataset, const TrainParams& params);

// Training logistic loss after each round (entry 0 is the constant model).
std::vector<double> TrainingLossCurve(const TreeEnsemble& model, const ProxyDataset& dataset);

// Rank (Mann-Whitney) AUC; ties count one half. Throws SingleClass.
double Auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct CvReport {
  int folds = 0;
  std::vector<double> auc_per_fold;
  double auc_mean = 0.0;
};

// Stratified k-fold. Throws TooFewRows when a class has fewer than k rows.
CvReport CrossValidate(const ProxyDataset& dataset, const TrainParams& params, int k = 5);

// JSON with every number written as a shortest round-trip decimal string.
std::string SerializeModel(const TreeEnsemble& model);
TreeEnsemble DeserializeModel(std::string_view json);

}  // namespace promptedit

#endif  // PROMPTEDIT_PROXY_MODEL_HPP_
