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

#include <string>
#include <vector>

#include "promptedit/error.hpp"
#include "promptedit/features.hpp"
#include "promptedit/random.hpp"
#include "test_util.hpp"

namespace promptedit {
namespace {

const ConcretenessLexicon& SampleLexicon() {
  static const auto lexicon = ConcretenessLexicon::Load(DataDir() / "concreteness_sample.tsv");
  return lexicon;
}

TEST(FeatureNamesTest, CountsThenConcretenessInBucketOrder) {
  const auto& names = FeatureNames();
  EXPECT_EQ(names[0], "count_NOUN");
  EXPECT_EQ(names[2], "count_ADJ");
  EXPECT_EQ(names[9], "count_OTHER");
  EXPECT_EQ(names[10], "conc_NOUN");
  EXPECT_EQ(names[19], "conc_OTHER");
  EXPECT_EQ(FeatureIndex("#nouns"), 0u);
  EXPECT_EQ(FeatureIndex("#verbs"), 1u);
  EXPECT_EQ(FeatureIndex("#adjs"), 2u);
  EXPECT_EQ(FeatureIndex("conc_adj"), 12u);
  EXPECT_FALSE(FeatureIndex("count_FOO").has_value());
  EXPECT_THROW(RequireFeatureIndex("nope"), Error);
}

TEST(ExtractTest, RunningExampleByHand) {
  const auto x = Extract(
      Tag("My best friend will be going to school in another country for 4 years.", SampleLexicon()));
  EXPECT_EQ(x.get("count_NOUN"), 4);
  EXPECT_EQ(x.get("count_VERB"), 1);
  EXPECT_EQ(x.get("count_ADJ"), 1);
  EXPECT_EQ(x.get("count_OTHER"), 3);  // will, be, 4
  EXPECT_DOUBLE_EQ(x.get("conc_NOUN"), (4.1 + 4.6 + 3.9 + 2.9) / 4.0);
  EXPECT_DOUBLE_EQ(x.get("conc_ADJ"), 2.1);
  EXPECT_EQ(x.get("conc_PRON"), 0.0);
}

// Oracle: per-bucket count and mean over rated tokens, recomputed directly.
TEST(ExtractTest, MatchesDirectComputationOnRandomTokens) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Token> tokens(rng.below(30));
    double count[kNumBuckets] = {};
    double sum[kNumBuckets] = {};
    double rated[kNumBuckets] = {};
    for (auto& t : tokens) {
      t.pos = kAllBuckets[rng.below(kNumBuckets)];
      if (rng.bernoulli(0.6)) t.concreteness = rng.uniform(1.0, 5.0);
      const auto b = static_cast<std::size_t>(t.pos);
      count[b] += 1;
      if (t.concreteness) {
        sum[b] += *t.concreteness;
        rated[b] += 1;
      }
    }
    const auto x = ExtractTokens(tokens);
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      EXPECT_EQ(x[CountIndex(kAllBuckets[b])], count[b]);
      EXPECT_NEAR(x[ConcIndex(kAllBuckets[b])], rated[b] > 0 ? sum[b] / rated[b] : 0.0, 1e-12);
    }
  }
}

TEST(ExtractTest, ConcretenessIsZeroOrInRange) {
  Rng rng(11);
  const std::vector<std::string> words = {"cat", "idea", "run", "quickly", "blue", "and",
                                          "the", "house", "zzz", "happy", "school", "!"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (std::size_t i = 0, n = 1 + rng.below(15); i < n; ++i) text += words[rng.below(words.size())] + " ";
    const auto x = Extract(Tag(text, SampleLexicon()));
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      const double c = x[kNumBuckets + b];
      EXPECT_TRUE(c == 0.0 || (c >= 1.0 && c <= 5.0));
      if (x[b] == 0) EXPECT_EQ(c, 0.0);
    }
  }
}

TEST(FeatureCsvTest, RoundTripsExactly) {
  Rng rng(3);
  FeatureTable table;
  for (int i = 0; i < 50; ++i) {
    table.ids.push_back("p" + std::to_string(i));
    auto row = testing::RandomRow(rng);
    row[kNumBuckets] = rng.uniform(1.0, 5.0);  // not on a 0.01 grid
    table.rows.push_back(row);
  }
  const auto parsed = ParseFeatureCsv(FormatFeatureCsv(table));
  EXPECT_EQ(parsed.ids, table.ids);
  EXPECT_EQ(parsed.rows, table.rows);
}

TEST(FeatureCsvTest, RejectsMissingColumnsAndBadValues) {
  try {
    ParseFeatureCsv("id,count_NOUN\na,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingColumn);
  }
  FeatureTable one{{"a"}, {FeatureVector{}}};
  auto text = FormatFeatureCsv(one);
  text.replace(text.rfind(",0"), 2, ",x");
  try {
    ParseFeatureCsv(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedRow);
  }
}

TEST(ExtractBatchTest, KeepsInputOrderAndRejectsDuplicates) {
  const std::vector<PromptRecord> prompts = {{"b", "A red apple.", "joyful"}, {"a", "", "sad"}};
  const auto table = ExtractBatch(prompts, SampleLexicon(), *DefaultTagger());
  EXPECT_EQ(table.ids, (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(table.rows[1], FeatureVector{});
  try {
    ExtractBatch({{"a", "x", "sad"}, {"a", "y", "sad"}}, SampleLexicon(), *DefaultTagger());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
  }
}

TEST(PromptsJsonlTest, ParsesAndReportsBadLines) {
  const auto prompts = ParsePromptsJsonl(
      "{\"id\":\"1\",\"emotion\":\"sad\",\"text\":\"hi\"}\n\n{\"id\":\"2\",\"emotion\":\"joyful\",\"text\":\"yo\"}\n");
  ASSERT_EQ(prompts.size(), 2u);
  EXPECT_EQ(prompts[1].emotion, "joyful");
  EXPECT_THROW(ParsePromptsJsonl("{\"id\":\"1\"}\n"), Error);
  EXPECT_THROW(ParsePromptsJsonl("not json\n"), Error);
}

}  // namespace
}  // namespace promptedit
