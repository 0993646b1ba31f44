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
#include <fstream>
#include <string>
#include <vector>

#include "promptedit/embedding.hpp"
#include "promptedit/error.hpp"
#include "promptedit/evaluation.hpp"
#include "promptedit/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace promptedit {
namespace {

TEST(WilcoxonTest, MatchesExhaustiveEnumerationUpToEightPairs) {
  Rng rng(8);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.below(5));  // ties and zero differences
      b[i] = static_cast<double>(rng.below(5));
    }
    const auto w = WilcoxonSignedRank(a, b);
    if (w.n == 0) {
      EXPECT_EQ(w.p, 1.0);
      continue;
    }
    EXPECT_TRUE(w.exact);
    EXPECT_NEAR(w.p, testing::EnumeratedWilcoxonP(a, b), 1e-12);
    EXPECT_DOUBLE_EQ(w.w_plus + w.w_minus, static_cast<double>(w.n * (w.n + 1)) / 2.0);
  }
}

TEST(WilcoxonTest, KnownSmallSample) {
  // Differences 0.1 0.4 -0.2 0.3 0.3 0.5 -0.05 have ranks 1 2 3 4.5 4.5 6 7
  // by |d|, W- = 1 + 3 = 4; six of the 128 sign patterns give W- <= 4.
  const std::vector<double> a(7, 0.0);
  const auto w = WilcoxonSignedRank(a, {0.1, 0.4, -0.2, 0.3, 0.3, 0.5, -0.05});
  EXPECT_EQ(w.w_minus, 4.0);
  EXPECT_NEAR(w.p, 12.0 / 128.0, 1e-15);
}

TEST(WilcoxonTest, NormalApproximationAboveFiftyPairs) {
  Rng rng(1);
  std::vector<double> a, b;
  for (int i = 0; i < 80; ++i) {
    a.push_back(rng.uniform());
    b.push_back(a.back() + rng.normal() * 0.1);
  }
  const auto w = WilcoxonSignedRank(a, b);
  EXPECT_FALSE(w.exact);
  EXPECT_GT(w.p, 0.0);
  EXPECT_LE(w.p, 1.0);
  EXPECT_THROW(WilcoxonSignedRank({1}, {1, 2}), Error);
}

TEST(WilcoxonTest, SwappingSidesSwapsTails) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(20), b(20);
    for (int i = 0; i < 20; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    const auto ab = WilcoxonSignedRank(a, b), ba = WilcoxonSignedRank(b, a);
    EXPECT_EQ(ab.w_plus, ba.w_minus);
    EXPECT_NEAR(ab.p, ba.p, 1e-15);
  }
}

TEST(PearsonTest, HandComputedFivePointExamples) {
  // x = 1..5, y = 2 4 5 4 5: sxy = 6, sxx = 10, syy = 6, r = sqrt(0.6).
  const auto a = Pearson({1, 2, 3, 4, 5}, {2, 4, 5, 4, 5});
  EXPECT_NEAR(a.r, 0.7745966692414834, 1e-9);
  EXPECT_NEAR(a.lower95, -0.34008203518751046, 1e-9);
  EXPECT_NEAR(a.upper95, 0.9842357551507267, 1e-9);
  EXPECT_NEAR(a.p, 0.1240270626575546, 1e-9);
  EXPECT_EQ(a.n, 5u);
  // y = 5 3 4 1 2: sxy = -8, syy = 10, r = -0.8.
  const auto b = Pearson({1, 2, 3, 4, 5}, {5, 3, 4, 1, 2});
  EXPECT_NEAR(b.r, -0.8, 1e-9);
  EXPECT_NEAR(b.lower95, -0.9861961933012714, 1e-9);
  EXPECT_NEAR(b.upper95, 0.2796400419693548, 1e-9);
  EXPECT_NEAR(b.p, 0.10408803866182799, 1e-9);
}

TEST(PearsonTest, DegenerateInputs) {
  const auto perfect = Pearson({1, 2, 3, 4}, {2, 4, 6, 8});
  EXPECT_EQ(perfect.r, 1.0);
  EXPECT_EQ(perfect.p, 0.0);
  const auto three = Pearson({1, 2, 3}, {1, 3, 2});
  EXPECT_EQ(three.lower95, -1.0);
  EXPECT_EQ(three.upper95, 1.0);
  EXPECT_THROW(Pearson({1, 1, 1}, {1, 2, 3}), Error);
  EXPECT_THROW(Pearson({1, 2}, {1, 2}), Error);
}

TEST(BootstrapTest, SeededAndBracketsTheMean) {
  Rng rng(3);
  std::vector<double> v;
  for (int i = 0; i < 100; ++i) v.push_back(rng.normal());
  const auto ci = BootstrapMeanCi(v, 2000, 9);
  const auto again = BootstrapMeanCi(v, 2000, 9);
  EXPECT_EQ(ci.lower, again.lower);
  EXPECT_EQ(ci.upper, again.upper);
  double mean = 0;
  for (double x : v) mean += x / 100;
  EXPECT_LT(ci.lower, mean);
  EXPECT_GT(ci.upper, mean);
  // Roughly mean +- 1.96 sd / sqrt(n).
  EXPECT_NEAR(ci.upper - ci.lower, 2 * 1.96 * 0.1, 0.08);
  std::reverse(v.begin(), v.end());
  EXPECT_EQ(BootstrapMeanCi(v, 2000, 9).lower, ci.lower);
  const auto constant = BootstrapMeanCi({2, 2, 2}, 100, 1);
  EXPECT_EQ(constant.lower, 2);
  EXPECT_EQ(constant.upper, 2);
}

std::vector<ConditionRecord> Shifted(std::size_t n, double shift, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ConditionRecord> recs;
  for (std::size_t i = 0; i < n; ++i) {
    const double base = rng.uniform(0.15, 0.3);
    const std::string id = "p" + std::to_string(i);
    const auto emotion = i % 2 ? "sad" : "joyful";
    const auto valence = i % 2 ? Valence::kNegative : Valence::kPositive;
    recs.push_back({id, PromptCondition::kOriginal, emotion, valence, base, 0.3, 1});
    recs.push_back({id, PromptCondition::kReprompt, emotion, valence, base + shift, 0.29, 1});
  }
  return recs;
}

TEST(CompareTest, SmallConsistentShiftIsSignificant) {
  const auto report = Compare(Shifted(50, 0.05, 4), Metric::kIea, {2000, 1});
  ASSERT_EQ(report.overall.pairs.size(), 1u);
  const auto& pair = report.overall.pairs[0];
  EXPECT_EQ(pair.a, PromptCondition::kOriginal);
  EXPECT_EQ(pair.b, PromptCondition::kReprompt);
  EXPECT_EQ(pair.pairs, 50u);
  EXPECT_LT(pair.test.p, 0.001);
  EXPECT_TRUE(pair.significant);
  EXPECT_NEAR(pair.mean_difference, 0.05, 1e-12);
  ASSERT_TRUE(report.positive.has_value());
  ASSERT_TRUE(report.negative.has_value());
  EXPECT_EQ(report.positive->pairs[0].pairs, 25u);
  EXPECT_NE(report.method.find("Wilcoxon"), std::string::npos);
}

TEST(CompareTest, InvariantToRecordOrderAndIdRelabeling) {
  auto recs = Shifted(30, 0.01, 5);
  Rng noise(6);
  for (auto& r : recs) r.iea += noise.normal() * 0.02;
  const auto base = ComparisonToJson(Compare(recs, Metric::kIea, {500, 3}));
  auto shuffled = recs;
  Rng rng(7);
  rng.shuffle(std::span<ConditionRecord>(shuffled));
  EXPECT_EQ(ComparisonToJson(Compare(shuffled, Metric::kIea, {500, 3})), base);
  for (auto& r : shuffled) r.prompt_id = "renamed-" + r.prompt_id + "-x";
  EXPECT_EQ(ComparisonToJson(Compare(shuffled, Metric::kIea, {500, 3})), base);
}

TEST(CompareTest, NeedsEnoughSharedPrompts) {
  try {
    Compare(Shifted(4, 0.05, 1), Metric::kIea);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientPairs);
  }
}

TEST(ScoreConditionsTest, ItaUsesTheOriginalText) {
  const FixtureEmbedder f("fx", 2,
                          {{"sad", {1, 0}}, {"a wet dog", {0, 1}}, {"dog, rain, sad", {1, 1}}},
                          {{"IMG-A", {0.6, 0.8}}, {"IMG-B", {0.8, 0.6}}});
  const std::vector<ScoringInput> inputs = {
      {"1", PromptCondition::kReprompt, "sad", "dog, rain, sad", "IMG-B", "b.png"},
      {"1", PromptCondition::kOriginal, "sad", "a wet dog", "IMG-A", "a.png"},
  };
  const auto res = ScoreConditions(inputs, f);
  ASSERT_EQ(res.records.size(), 2u);
  EXPECT_EQ(res.records[0].condition, PromptCondition::kReprompt);
  EXPECT_NEAR(res.records[0].iea, 0.8, 1e-12);
  EXPECT_NEAR(res.records[0].ita, 0.6, 1e-12);
  EXPECT_EQ(res.records[0].valence, Valence::kNegative);
  EXPECT_NEAR(res.records[1].ita, 0.8, 1e-12);
}

TEST(ScoreConditionsTest, DuplicatesAndErrors) {
  const MockEmbedder m(16);
  std::vector<ScoringInput> inputs = {
      {"1", PromptCondition::kOriginal, "joyful", "sun", "I1", ""},
      {"1", PromptCondition::kOriginal, "joyful", "sun", "I2", ""},
  };
  const auto last = ScoreConditions(inputs, m);
  ASSERT_EQ(last.records.size(), 1u);
  EXPECT_EQ(last.warnings.size(), 1u);
  EXPECT_NEAR(last.records[0].iea, Iea(m, "I2", "joyful").value, 1e-12);
  const auto mean = ScoreConditions(inputs, m, {true});
  EXPECT_EQ(mean.records[0].images, 2u);
  EXPECT_NEAR(mean.records[0].iea, (Iea(m, "I1", "joyful").value + Iea(m, "I2", "joyful").value) / 2, 1e-12);

  inputs[0].condition = inputs[1].condition = PromptCondition::kReprompt;
  EXPECT_THROW(ScoreConditions(inputs, m), Error);
  inputs = {{"1", PromptCondition::kOriginal, "hungry", "sun", "I1", ""}};
  try {
    ScoreConditions(inputs, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownEmotion);
  }
}

TEST(ManifestTest, ReadsImagesRelativeToTheManifest) {
  const auto dir = testing::MakeTempDir("manifest");
  std::filesystem::create_directories(dir / "img");
  std::ofstream(dir / "img" / "a.png", std::ios::binary) << "AAA";
  std::ofstream(dir / "m.csv") << "prompt_id,condition,emotion,text,image_path\n"
                               << "7,ORIGINAL,sad,\"rain, again\",img/a.png\n";
  const auto inputs = ReadManifest(dir / "m.csv");
  ASSERT_EQ(inputs.size(), 1u);
  EXPECT_EQ(inputs[0].image, "AAA");
  EXPECT_EQ(inputs[0].text, "rain, again");
  std::ofstream(dir / "bad.csv") << "prompt_id,condition,emotion,text,image_path\n"
                                 << "7,SOMETHING,sad,x,img/a.png\n";
  EXPECT_THROW(ReadManifest(dir / "bad.csv"), Error);
  std::ofstream(dir / "missing.csv") << "prompt_id,condition,emotion,text,image_path\n"
                                     << "7,ORIGINAL,sad,x,img/none.png\n";
  EXPECT_THROW(ReadManifest(dir / "missing.csv"), Error);
}

TEST(EmotionCorrelationTest, CorrelatesScoresWithProbabilities) {
  // Image i sits at angle t_i; cos with "sad" = (1,0) grows with p_sad.
  std::unordered_map<std::string, std::vector<double>> images;
  std::vector<EmotionImage> rows;
  for (int i = 0; i < 6; ++i) {
    const double t = 0.2 * i;
    const std::string key = "IMG" + std::to_string(i);
    images[key] = {std::cos(t), std::sin(t)};
    rows.push_back({key, key + ".png", {1.0 - 0.1 * i, 0.1 * i}});
  }
  const FixtureEmbedder f("fx", 2, {{"sadness", {1, 0}}, {"joy", {0, 1}}}, images);
  const auto report = EmotionCorrelation(rows, {"sadness", "joy"}, f);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_GT(report.rows[0].r, 0.9);
  EXPECT_GT(report.rows[1].r, 0.9);
  EXPECT_EQ(report.rows[0].n, 6u);
  rows[0].probabilities.pop_back();
  EXPECT_THROW(EmotionCorrelation(rows, {"sadness", "joy"}, f), Error);
}

}  // namespace
}  // namespace promptedit
