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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"
#include "promptedit/error.hpp"
#include "promptedit/proxy_model.hpp"
#include "promptedit/synthetic.hpp"
#include "test_util.hpp"

namespace promptedit {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;  // sentinel: nothing thrown
}

ProxyDataset Planted(std::uint64_t seed, std::size_t rows = 600) {
  return GeneratePlanted({rows, 0.05, seed}).dataset;
}

// ROC by sweeping every distinct threshold from high to low, area by
// trapezoids. Independent of the rank formula under test.
double SweepAuc(const std::vector<double>& s, const std::vector<int>& y) {
  std::vector<double> thresholds(s);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  const double pos = std::count(y.begin(), y.end(), 1);
  const double neg = static_cast<double>(y.size()) - pos;
  double area = 0, prev_tpr = 0, prev_fpr = 0;
  for (double t : thresholds) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) (y[i] ? tp : fp) += 1;
    }
    const double tpr = tp / pos, fpr = fp / neg;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2;
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  return area;
}

TEST(BinarizeTest, StrictlyAboveTheMean) {
  const auto b = Binarize({0.2, 0.3, 0.25, 0.25});
  EXPECT_DOUBLE_EQ(b.mean, 0.25);
  EXPECT_EQ(b.labels, (std::vector<int>{0, 1, 0, 0}));
  EXPECT_EQ(CodeOf([] { Binarize({1.0}); }), ErrorCode::kTooFewScores);
}

TEST(AucTest, MatchesThresholdSweep) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(8));  // many ties
      y[i] = rng.bernoulli(0.4) ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(Auc(s, y), SweepAuc(s, y), 1e-12);
  }
}

TEST(AucTest, EdgeCases) {
  EXPECT_DOUBLE_EQ(Auc({0.1, 0.9}, {0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(Auc({0.9, 0.1}, {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(Auc({0.5, 0.5}, {0, 1}), 0.5);
  EXPECT_EQ(CodeOf([] { Auc({0.1, 0.2}, {1, 1}); }), ErrorCode::kSingleClass);
  EXPECT_EQ(CodeOf([] { Auc({0.1}, {1, 0}); }), ErrorCode::kShapeMismatch);
}

TEST(TrainTest, LossNeverIncreases) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = Planted(seed);
    TrainParams p;
    p.num_trees = 60;
    p.learning_rate = 0.5;
    p.min_leaf = 5;
    p.seed = seed;
    p.subsample = seed % 2 ? 0.7 : 1.0;
    const auto model = Train(data, p);
    const auto curve = TrainingLossCurve(model, data);
    ASSERT_EQ(curve.size(), 61u);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      EXPECT_LE(curve[i], curve[i - 1] + 1e-12) << "seed " << seed << " round " << i;
    }
    EXPECT_LT(curve.back(), curve.front());
  }
}

TEST(TrainTest, BaseScoreIsTheLogOddsOfTheBaseRate) {
  const auto data = Planted(4);
  TrainParams p;
  p.num_trees = 1;
  const auto model = Train(data, p);
  double pos = 0;
  for (const auto& r : data.rows) pos += r.label;
  const double rate = pos / static_cast<double>(data.rows.size());
  EXPECT_NEAR(model.base_score, std::log(rate / (1 - rate)), 1e-12);
}

TEST(TrainTest, InvariantToRowOrder) {
  auto data = Planted(9);
  TrainParams p;
  p.num_trees = 30;
  p.subsample = 0.8;
  p.seed = 3;
  const auto a = SerializeModel(Train(data, p));
  Rng rng(1);
  rng.shuffle(std::span<ProxyRow>(data.rows));
  EXPECT_EQ(SerializeModel(Train(data, p)), a);
}

TEST(TrainTest, LearnsThePlantedRule) {
  const auto train = Planted(1, 2000);
  const auto test = Planted(2, 1000);
  const auto model = Train(train, {});
  std::vector<double> s;
  std::vector<int> y;
  for (const auto& r : test.rows) {
    s.push_back(Predict(model, r.x));
    y.push_back(PlantedRule(r.x) ? 1 : 0);
  }
  EXPECT_GT(Auc(s, y), 0.97);
  for (double v : s) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(TrainTest, RejectsBadInputs) {
  ProxyDataset one_class;
  for (int i = 0; i < 10; ++i) one_class.rows.push_back({FeatureVector{}, 1.0, 1});
  EXPECT_EQ(CodeOf([&] { Train(one_class, {}); }), ErrorCode::kSingleClass);
  EXPECT_EQ(CodeOf([] { Train(ProxyDataset{}, {}); }), ErrorCode::kTooFewRows);
  const auto data = Planted(0, 100);
  for (auto mutate : std::vector<std::function<void(TrainParams&)>>{
           [](TrainParams& p) { p.num_trees = -1; }, [](TrainParams& p) { p.max_depth = 0; },
           [](TrainParams& p) { p.learning_rate = 0; }, [](TrainParams& p) { p.min_leaf = 0; },
           [](TrainParams& p) { p.subsample = 1.5; }, [](TrainParams& p) { p.lambda = -1; }}) {
    TrainParams p;
    mutate(p);
    EXPECT_EQ(CodeOf([&] { Train(data, p); }), ErrorCode::kInvalidParams);
  }
}

TEST(TrainTest, ZeroTreesPredictsTheBaseRate) {
  const auto data = Planted(3, 300);
  TrainParams p;
  p.num_trees = 0;
  const auto model = Train(data, p);
  EXPECT_TRUE(model.trees.empty());
  double pos = 0;
  for (const auto& r : data.rows) pos += r.label;
  EXPECT_NEAR(Predict(model, data.rows[0].x), pos / 300.0, 1e-12);
}

TEST(TrainTest, RespectsDepthAndLeafSize) {
  const auto data = Planted(5, 800);
  TrainParams p;
  p.num_trees = 20;
  p.max_depth = 2;
  p.min_leaf = 40;
  const auto model = Train(data, p);
  for (const auto& tree : model.trees) {
    EXPECT_LE(tree.nodes.size(), 7u);
    // Count training rows reaching each leaf.
    std::vector<int> reach(tree.nodes.size(), 0);
    for (const auto& r : data.rows) {
      int n = 0;
      while (!tree.nodes[n].is_leaf()) {
        const auto& node = tree.nodes[n];
        n = r.x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
      }
      ++reach[n];
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      if (tree.nodes[i].is_leaf()) EXPECT_GE(reach[i], 40);
    }
  }
}

TEST(ModelJsonTest, RoundTripsBitExactly) {
  const auto data = Planted(6);
  TrainParams p;
  p.num_trees = 25;
  const auto model = Train(data, p);
  const auto text = SerializeModel(model);
  const auto back = DeserializeModel(text);
  EXPECT_EQ(SerializeModel(back), text);
  for (const auto& r : data.rows) EXPECT_EQ(PredictRaw(back, r.x), PredictRaw(model, r.x));
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["schema_version"], TreeEnsemble::kSchemaVersion);
}

TEST(ModelJsonTest, RejectsForeignSchemas) {
  const auto model = Train(Planted(6), {});
  auto j = nlohmann::ordered_json::parse(SerializeModel(model));
  auto wrong_version = j;
  wrong_version["schema_version"] = "other-v9";
  EXPECT_EQ(CodeOf([&] { DeserializeModel(wrong_version.dump()); }), ErrorCode::kSchemaMismatch);

  TreeEnsemble renamed = model;
  renamed.feature_schema[0] = "count_NOUNS";
  EXPECT_EQ(CodeOf([&] { Predict(renamed, FeatureVector{}); }), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(CodeOf([] { DeserializeModel("{"); }), ErrorCode::kParse);
}

TEST(CrossValidateTest, StratifiedFoldsAndErrors) {
  const auto data = Planted(8, 1000);
  TrainParams p;
  p.num_trees = 30;
  const auto cv = CrossValidate(data, p, 5);
  EXPECT_EQ(cv.folds, 5);
  ASSERT_EQ(cv.auc_per_fold.size(), 5u);
  EXPECT_NEAR(cv.auc_mean, std::accumulate(cv.auc_per_fold.begin(), cv.auc_per_fold.end(), 0.0) / 5,
              1e-12);
  EXPECT_GT(cv.auc_mean, 0.85);
  EXPECT_EQ(SerializeModel(Train(data, p)), SerializeModel(Train(data, p)));
  EXPECT_EQ(CrossValidate(data, p, 5).auc_per_fold, cv.auc_per_fold);

  ProxyDataset tiny;
  for (int i = 0; i < 20; ++i) tiny.rows.push_back({FeatureVector{}, 0, i < 3 ? 1 : 0});
  EXPECT_EQ(CodeOf([&] { CrossValidate(tiny, p, 5); }), ErrorCode::kTooFewRows);
}

TEST(ScoreCsvTest, ParsesJoinsAndRejects) {
  const std::string csv =
      "id,emotion,text,iea,ita\n"
      "a,sad,\"rain, again\",0.25,0.31\n"
      "b,joyful,sun,0.20,0.30\n"
      "c,joyful,sea,0.30,0.29\n";
  const auto recs = ParseScoreCsv(csv);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].text, "rain, again");
  EXPECT_EQ(ParseScoreCsv(FormatScoreCsv(recs))[0].iea, 0.25);

  FeatureTable ft{{"c", "a", "b"}, {FeatureVector{}, FeatureVector{}, FeatureVector{}}};
  const auto ds = JoinScores(ft, recs, Target::kIta);
  EXPECT_DOUBLE_EQ(ds.score_mean, 0.3);
  EXPECT_EQ(ds.rows[0].label, 0);  // c: 0.29
  EXPECT_EQ(ds.rows[1].label, 1);  // a: 0.31
  ft.ids.push_back("zzz");
  ft.rows.emplace_back();
  EXPECT_EQ(CodeOf([&] { JoinScores(ft, recs, Target::kIea); }), ErrorCode::kMalformedRow);
  EXPECT_EQ(CodeOf([&] { ParseScoreCsv(csv + "a,sad,x,1,1\n"); }), ErrorCode::kDuplicateId);
  EXPECT_EQ(CodeOf([&] { ParseScoreCsv("id,emotion,text,iea,ita\nq,sad,x,one,1\n"); }),
            ErrorCode::kMalformedRow);
  EXPECT_EQ(ParseTarget("ITA"), Target::kIta);
  EXPECT_THROW(ParseTarget("both"), Error);
}

TEST(SyntheticTest, LabelsFollowThePlantedRuleUpToNoise) {
  const auto data = GeneratePlanted({5000, 0.05, 12});
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < data.dataset.rows.size(); ++i) {
    const auto& r = data.dataset.rows[i];
    EXPECT_EQ(data.clean_labels[i], PlantedRule(r.x) ? 1 : 0);
    flipped += r.label != data.clean_labels[i];
    EXPECT_EQ(r.raw_score, r.label);
  }
  EXPECT_NEAR(static_cast<double>(flipped) / 5000.0, 0.05, 0.015);
  EXPECT_EQ(GeneratePlanted({50, 0.05, 3}).dataset.rows[7].x,
            GeneratePlanted({50, 0.05, 3}).dataset.rows[7].x);
}

}  // namespace
}  // namespace promptedit
