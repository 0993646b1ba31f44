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

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "promptedit/error.hpp"
#include "promptedit/explain.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace promptedit {
namespace {

using testing::RandomFeatureSubset;
using testing::RandomModel;
using testing::RandomRows;
using testing::BrutePdp;
using testing::BruteShapley;

double F(const TreeEnsemble& m, const FeatureVector& x) { return testing::Probability(m, x); }

TEST(ShapleyExactTest, MatchesBruteForceOracle) {
  Rng rng(100);
  for (int trial = 0; trial < 30; ++trial) {
    const auto features = RandomFeatureSubset(rng, 1 + rng.below(7));
    const auto model = RandomModel(rng, features, 1 + static_cast<int>(rng.below(6)), 3);
    const auto bg = RandomRows(rng, 1 + rng.below(12));
    const auto x = testing::RandomRow(rng);
    const auto players = model.UsedFeatures();
    const auto e = ShapleyExact(model, x, bg);
    EXPECT_EQ(e.players, players);
    const auto oracle = BruteShapley(model, x, bg, players);
    for (std::size_t f = 0; f < kNumFeatures; ++f) EXPECT_NEAR(e.attributions[f], oracle[f], 1e-12);
  }
}

TEST(ShapleyExactTest, EfficiencyAndUnusedFeatures) {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const auto model = RandomModel(rng, RandomFeatureSubset(rng, 1 + rng.below(10)), 8, 4);
    const auto bg = RandomRows(rng, 30);
    const auto x = testing::RandomRow(rng);
    const auto e = ShapleyExact(model, x, bg, std::nullopt, "row");
    double sum = 0;
    for (double a : e.attributions) sum += a;
    EXPECT_NEAR(e.baseline + sum, F(model, x), 1e-9);
    EXPECT_NEAR(e.output, F(model, x), 1e-12);
    EXPECT_EQ(e.instance_id, "row");
    const auto used = model.UsedFeatures();
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      if (!std::binary_search(used.begin(), used.end(), f)) EXPECT_EQ(e.attributions[f], 0.0);
    }
  }
}

TEST(ShapleyExactTest, ExplicitPlayersAndSymmetry) {
  // f depends on count_NOUN + count_VERB only through a symmetric tree pair.
  TreeEnsemble m;
  m.learning_rate = 1;
  Tree a, b;
  a.nodes = {{0, 0.5, 1, 2, 0}, {-1, 0, -1, -1, -1.0}, {-1, 0, -1, -1, 1.0}};
  b.nodes = {{1, 0.5, 1, 2, 0}, {-1, 0, -1, -1, -1.0}, {-1, 0, -1, -1, 1.0}};
  m.trees = {a, b};
  FeatureVector x, z;
  x[0] = x[1] = 1;
  const auto e = ShapleyExact(m, x, {z});
  EXPECT_NEAR(e.attributions[0], e.attributions[1], 1e-15);
  EXPECT_GT(e.attributions[0], 0);
  // A player the model ignores gets nothing even when requested.
  const auto e2 = ShapleyExact(m, x, {z}, std::vector<std::size_t>{0, 1, 5});
  EXPECT_EQ(e2.attributions[5], 0.0);
  EXPECT_NEAR(e2.attributions[0], e.attributions[0], 1e-15);
}

TEST(ShapleyExactTest, Errors) {
  Rng rng(5);
  const auto model = RandomModel(rng, {0, 1}, 2, 2);
  EXPECT_THROW(ShapleyExact(model, FeatureVector{}, {}), Error);
  std::vector<std::size_t> many(16);
  for (std::size_t i = 0; i < 16; ++i) many[i] = i;
  try {
    ShapleyExact(model, FeatureVector{}, {FeatureVector{}}, many);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyFeatures);
  }
}

TEST(ShapleySampledTest, ConvergesToExactAndKeepsEfficiency) {
  Rng rng(202);
  for (int trial = 0; trial < 5; ++trial) {
    const auto model = RandomModel(rng, RandomFeatureSubset(rng, 6), 10, 3);
    const auto bg = RandomRows(rng, 20);
    const auto x = testing::RandomRow(rng);
    const auto exact = ShapleyExact(model, x, bg);
    const auto approx = ShapleySampled(model, x, bg, 8000, 7);
    double sum = 0, err = 0;
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      sum += approx.attributions[f];
      err = std::max(err, std::abs(approx.attributions[f] - exact.attributions[f]));
    }
    EXPECT_NEAR(approx.baseline + sum, F(model, x), 1e-9);
    EXPECT_LT(err, 0.03);
    const auto again = ShapleySampled(model, x, bg, 8000, 7);
    EXPECT_EQ(again.attributions, approx.attributions);
  }
  EXPECT_THROW(ShapleySampled(RandomModel(rng, {0}, 1, 1), FeatureVector{}, {FeatureVector{}}, 99, 0),
               Error);
}

TEST(GlobalImportanceTest, RanksByMeanAbsoluteAttribution) {
  Rng rng(9);
  const auto model = RandomModel(rng, {0, 2, 12}, 10, 3);
  const auto bg = RandomRows(rng, 25);
  const auto sample = RandomRows(rng, 15);
  const auto gi = GlobalImportance(model, sample, bg);
  ASSERT_EQ(gi.ranking.size(), kNumFeatures);
  std::array<double, kNumFeatures> oracle{};
  for (const auto& x : sample) {
    const auto phi = BruteShapley(model, x, bg, model.UsedFeatures());
    for (std::size_t f = 0; f < kNumFeatures; ++f) oracle[f] += std::abs(phi[f]) / 15.0;
  }
  for (std::size_t i = 0; i < gi.ranking.size(); ++i) {
    const auto f = *FeatureIndex(gi.ranking[i].feature);
    EXPECT_NEAR(gi.ranking[i].mean_abs, oracle[f], 1e-12);
    if (i > 0) {
      const auto& prev = gi.ranking[i - 1];
      EXPECT_TRUE(prev.mean_abs > gi.ranking[i].mean_abs ||
                  (prev.mean_abs == gi.ranking[i].mean_abs && prev.feature < gi.ranking[i].feature));
    }
  }
  EXPECT_THROW(GlobalImportance(model, {}, bg), Error);
}

TEST(SampleBackgroundTest, KeepsInputOrderAndIsSeeded) {
  Rng rng(4);
  const auto rows = RandomRows(rng, 500);
  const auto a = SampleBackground(rows, 200, 1);
  EXPECT_EQ(a.size(), 200u);
  EXPECT_EQ(a, SampleBackground(rows, 200, 1));
  EXPECT_NE(a, SampleBackground(rows, 200, 2));
  std::size_t j = 0;
  for (const auto& r : a) {
    while (j < rows.size() && !(rows[j] == r)) ++j;
    ASSERT_LT(j, rows.size());
    ++j;
  }
  EXPECT_EQ(SampleBackground(a, 500, 0), a);
}

TEST(PdpTest, EqualsForceAndAverage) {
  Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = RandomModel(rng, RandomFeatureSubset(rng, 5), 15, 4);
    const auto bg = RandomRows(rng, 40);
    for (const auto* name : {"count_ADJ", "conc_ADJ", "count_NOUN", "conc_VERB"}) {
      const auto curve = Pdp(model, name, bg);
      const auto want = BrutePdp(model, *FeatureIndex(name), bg, curve.grid);
      ASSERT_EQ(curve.means.size(), want.size());
      for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(curve.means[i], want[i], 1e-12);
      double base = 0;
      for (const auto& z : bg) base += F(model, z) / 40.0;
      EXPECT_NEAR(curve.baseline, base, 1e-12);
    }
  }
}

TEST(PdpTest, GridKinds) {
  std::vector<FeatureVector> bg(3);
  bg[0][2] = 3;
  bg[1][2] = 1;
  bg[0][12] = 1.5;
  bg[1][12] = 4.5;
  EXPECT_EQ(MakeGrid(2, bg, {}), (std::vector<double>{0, 1, 2, 3}));
  const auto conc = MakeGrid(12, bg, {GridKind::kAuto, 4, {}});
  EXPECT_EQ(conc, (std::vector<double>{0, 1.5, 3.0, 4.5}));
  EXPECT_EQ(MakeGrid(2, bg, {GridKind::kObserved, 50, {}}), (std::vector<double>{0, 1, 3}));
  EXPECT_EQ(MakeGrid(2, bg, {GridKind::kExplicit, 0, {2, 1, 2}}), (std::vector<double>{1, 2}));
  EXPECT_THROW(MakeGrid(2, bg, {GridKind::kExplicit, 0, {1}}), Error);
  Rng rng(1);
  try {
    Pdp(RandomModel(rng, {0}, 1, 1), "count_FOO", bg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFeature);
  }
}

PdpCurve Curve(std::vector<double> grid, std::vector<double> means, double baseline) {
  return {"count_ADJ", std::move(grid), std::move(means), baseline};
}

TEST(RangesTest, MaximalRunsStrictlyAboveBaseline) {
  const auto r = DeriveRubricRanges(Curve({0, 1, 2, 3, 4, 5}, {.1, .5, .6, .5, .2, .6}, .5));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].lo, 2);
  EXPECT_EQ(r[0].hi, 2);
  EXPECT_EQ(*r[0].below, 1);
  EXPECT_EQ(*r[0].above, 3);
  EXPECT_EQ(r[1].lo, 5);
  EXPECT_FALSE(r[1].above.has_value());
  EXPECT_EQ(FormatRange(r[1]), "(4, 5]");
  EXPECT_TRUE(DeriveRubricRanges(Curve({0, 1}, {.5, .5}, .5)).empty());
  const auto all = DeriveRubricRanges(Curve({0, 1}, {.6, .7}, .5));
  ASSERT_EQ(all.size(), 1u);
  EXPECT_FALSE(all[0].below.has_value());
}

TEST(RubricTest, CuratedRulesAndTriggers) {
  const auto r = CuratedRubric();
  r.Validate();
  ASSERT_EQ(r.rules.size(), 4u);
  EXPECT_EQ(r.version, "curated-v1");
  FeatureVector x;
  x.set("count_NOUN", 4);
  x.set("count_ADJ", 2);
  x.set("conc_ADJ", 2.5);
  x.set("count_VERB", 2);
  EXPECT_TRUE(r.rules[0].Fires(x));
  EXPECT_FALSE(r.rules[1].Fires(x));
  EXPECT_FALSE(r.rules[2].Fires(x));
  EXPECT_TRUE(r.rules[3].Fires(x));
  x.set("conc_ADJ", 1.9);
  EXPECT_TRUE(r.rules[1].Fires(x));
  x.set("count_NOUN", 3);
  EXPECT_FALSE(r.rules[0].Fires(x));
  EXPECT_EQ(r.rules[1].action.count, 3);
  EXPECT_EQ(r.rules[1].action.min_concreteness, 2.0);
  EXPECT_EQ(r.rules[3].action.kind, ActionKind::kAppendLabel);
}

TEST(RubricTest, JsonRoundTripAndValidation) {
  const auto r = CuratedRubric();
  const auto text = SerializeRubric(r);
  EXPECT_EQ(SerializeRubric(ParseRubric(text)), text);
  auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["rules"][1]["provenance"], "curated");
  EXPECT_TRUE(j["rules"][3]["trigger"].is_null());

  Rubric bad = r;
  std::swap(bad.rules[2], bad.rules[3]);
  EXPECT_THROW(bad.Validate(), Error);
  bad = r;
  bad.rules[0].any_of.clear();
  EXPECT_THROW(bad.Validate(), Error);
  bad = r;
  bad.rules[0].any_of[0].threshold = NAN;
  EXPECT_THROW(bad.Validate(), Error);
  bad = r;
  bad.rules.pop_back();
  EXPECT_THROW(bad.Validate(), Error);
  j["rules"][0]["feature"] = "count_XYZ";
  EXPECT_THROW(ParseRubric(j.dump()), Error);
}

TEST(CandidateRulesTest, PlantedShapesBecomeRules) {
  std::vector<PdpCurve> curves = {
      {"count_NOUN", {0, 1, 2, 3, 4, 5}, {.6, .6, .6, .6, .4, .3}, .5},
      {"count_ADJ", {0, 1, 2, 3}, {.2, .3, .7, .7}, .5},
      {"conc_ADJ", {0, 1, 2, 3, 4}, {.2, .3, .4, .7, .7}, .5},
      {"count_VERB", {0, 1, 2, 3}, {.6, .6, .4, .4}, .5},
      {"conc_NOUN", {0, 1, 2}, {.4, .6, .4}, .5},
  };
  const auto c = CandidateRules(curves, 3);
  ASSERT_EQ(c.rules.size(), 3u);
  EXPECT_EQ(c.rules[0].rule.id, "C1");
  EXPECT_EQ(c.rules[0].rule.action.kind, ActionKind::kReduceTo);
  EXPECT_EQ(c.rules[0].rule.action.target, 3);
  EXPECT_EQ(c.rules[1].rule.action.kind, ActionKind::kAddAdjectives);
  ASSERT_EQ(c.rules[1].rule.any_of.size(), 2u);
  EXPECT_EQ(c.rules[1].rule.any_of[0].threshold, 1);
  EXPECT_EQ(c.rules[1].rule.action.min_concreteness, 2);
  EXPECT_EQ(c.rules[2].rule.action.bucket, PosBucket::kVerb);
  EXPECT_EQ(c.rules[2].rule.action.target, 1);
  ASSERT_EQ(c.advisories.size(), 1u);

  const auto rubric = AcceptCandidates(c, {"C2", "C1"});
  rubric.Validate();
  ASSERT_EQ(rubric.rules.size(), 3u);
  EXPECT_EQ(rubric.version, "derived-v1");
  EXPECT_EQ(rubric.rules.back().action.kind, ActionKind::kAppendLabel);
  EXPECT_EQ(rubric.rules[0].provenance, Provenance::kDerived);
  EXPECT_THROW(AcceptCandidates(c, {"C9"}), Error);
}

TEST(ExplanationJsonTest, CarriesEveryField) {
  ShapExplanation e;
  e.instance_id = "p1";
  e.baseline = 0.25;
  e.output = 0.5;
  e.attributions[2] = 0.25;
  e.players = {2};
  const auto j = nlohmann::json::parse(SerializeExplanation(e));
  EXPECT_EQ(j["instance_id"], "p1");
  EXPECT_EQ(j["attributions"]["count_ADJ"], 0.25);
  EXPECT_EQ(FormatPdpCsv({Curve({0, 1}, {.25, .5}, .375)}),
            "feature,grid_value,mean_prediction,baseline\ncount_ADJ,0,0.25,0.375\ncount_ADJ,1,0.5,0.375\n");
}

}  // namespace
}  // namespace promptedit
