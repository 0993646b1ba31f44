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

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "promptedit/editor.hpp"
#include "promptedit/embedding.hpp"
#include "promptedit/error.hpp"
#include "promptedit/explain.hpp"
#include "promptedit/strings.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace promptedit {
namespace {

constexpr std::string_view kRunningExample =
    "My best friend will be going to school in another country for 4 years.";

struct RunningExampleDeps {
  ConcretenessLexicon lexicon = ConcretenessLexicon::Load(DataDir() / "concreteness_sample.tsv");
  FixtureEmbedder embedder = FixtureEmbedder::Load(testing::FixtureDir() / "running_example_embeddings.json");
  FixtureRelatedWords related = FixtureRelatedWords::Load(DataDir() / "conceptnet_fixture.json");
  std::shared_ptr<const Tagger> tagger = DefaultTagger();

  EditorDeps deps() {
    EditorDeps d;
    d.tagger = tagger.get();
    d.lexicon = &lexicon;
    d.embedder = &embedder;
    d.related = &related;
    return d;
  }
};

TEST(EditTest, RunningExampleMatchesStoredTrace) {
  RunningExampleDeps env;
  const auto start = std::chrono::steady_clock::now();
  const auto edited = Edit(kRunningExample, "sad", CuratedRubric(), env.deps());
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));

  const auto& t = edited.trace;
  ASSERT_EQ(t.removed.size(), 1u);
  EXPECT_EQ(t.removed[0].word, "years");
  EXPECT_EQ(t.removed[0].reason, "R1");
  EXPECT_EQ(t.retrieval_seeds, (std::vector<std::string>{"friend", "going", "school"}));
  ASSERT_EQ(t.added.size(), 3u);
  for (const auto& a : t.added) EXPECT_GT(a.concreteness, 2.0);
  EXPECT_EQ(edited.text, "best, friend, going, school, country, friendly, old, distant, sad");
  EXPECT_EQ(t.fired_rules, (std::vector<std::string>{"R1", "R2", "R4"}));
  EXPECT_TRUE(t.warnings.empty());

  const auto stored = ReadFile(testing::FixtureDir() / "running_example_trace.json");
  EXPECT_EQ(TraceToJson(t), stored);
}

TEST(EditTest, ReplayRebuildsTheFinalPrompt) {
  RunningExampleDeps env;
  const auto edited = Edit(kRunningExample, "Sad", CuratedRubric(), env.deps());
  EXPECT_EQ(ReplayTrace(edited.trace), edited.text);
  EXPECT_EQ(edited.trace.emotion, "sad");
}

TEST(EditTest, LabelAppendBaseline) {
  EXPECT_EQ(LabelAppend("A dog in the rain.", "Sad"), "A dog in the rain. sad.");
}

TEST(EditTest, InputErrors) {
  RunningExampleDeps env;
  try {
    Edit(kRunningExample, "hungry", CuratedRubric(), env.deps());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownEmotion);
  }
  try {
    Edit("   ", "sad", CuratedRubric(), env.deps());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyText);
  }
  const std::set<std::string> custom = {"hungry"};
  auto d = env.deps();
  d.emotions = &custom;
  EXPECT_NO_THROW(Edit(kRunningExample, "hungry", CuratedRubric(), d));
}

TEST(EditTest, ReductionNeverRemovesTheLastWordOfABucket) {
  RunningExampleDeps env;
  Rubric r;
  r.version = "zero";
  Rule reduce;
  reduce.id = "Z";
  reduce.any_of = {{*FeatureIndex("count_NOUN"), CompareOp::kGt, 0}};
  reduce.action = {ActionKind::kReduceTo, PosBucket::kNoun, 1, 0, 0};
  Rule label;
  label.id = "L";
  r.rules = {reduce, label};
  const auto edited = Edit(kRunningExample, "sad", r, env.deps());
  EXPECT_EQ(edited.trace.removed.size(), 3u);
  EXPECT_EQ(edited.text, "best, friend, going, sad");
}

TEST(EditTest, NoContentWordsLeavesTheLabel) {
  RunningExampleDeps env;
  const auto edited = Edit("It is what it is.", "sad", CuratedRubric(), env.deps());
  EXPECT_EQ(edited.text, "sad");
  EXPECT_FALSE(edited.trace.warnings.empty());
}

TEST(EditTest, JsonAndTextRenderings) {
  RunningExampleDeps env;
  const auto edited = Edit(kRunningExample, "sad", CuratedRubric(), env.deps());
  const auto line = EditedToJsonLine("p1", edited);
  ASSERT_EQ(line.back(), '\n');
  EXPECT_EQ(line.find('\n'), line.size() - 1);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["id"], "p1");
  EXPECT_EQ(j["edited"], edited.text);
  EXPECT_EQ(j["trace"]["removed"][0]["word"], "years");
  const auto text = FormatTrace(edited.trace);
  for (const auto* marker : {"A  ", "B  ", "C  ", "D  "}) EXPECT_NE(text.find(marker), std::string::npos);
}

TEST(EditPropertyTest, RubricPostConditionsOnRandomPrompts) {
  const auto sweep = testing::RubricPropertySweep(500, 2024);
  EXPECT_EQ(sweep.prompts, 500);
  EXPECT_EQ(sweep.violations, 0);
  for (const auto& e : sweep.examples) ADD_FAILURE() << e;
}

TEST(EditBatchTest, ParallelMatchesSerialAndRecordsErrors) {
  RunningExampleDeps env;
  std::vector<PromptRecord> prompts;
  const std::vector<std::string> texts = {std::string(kRunningExample), "A red bus.", "",
                                          "The old man sat by the sea.", "We cheered loudly."};
  for (int i = 0; i < 40; ++i) {
    prompts.push_back({"p" + std::to_string(i), texts[i % texts.size()], i % 7 == 3 ? "nope" : "sad"});
  }
  const auto serial = EditBatch(prompts, CuratedRubric(), env.deps(), 1);
  const auto parallel = EditBatch(prompts, CuratedRubric(), env.deps(), 6);
  ASSERT_EQ(serial.size(), prompts.size());
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    EXPECT_EQ(serial[i].id, prompts[i].id);
    EXPECT_EQ(parallel[i].id, prompts[i].id);
    EXPECT_EQ(serial[i].error_code, parallel[i].error_code);
    if (serial[i].result) {
      EXPECT_EQ(EditedToJsonLine(serial[i].id, *serial[i].result),
                EditedToJsonLine(parallel[i].id, *parallel[i].result));
    }
  }
  EXPECT_EQ(serial[2].error_code, ErrorCode::kEmptyText);
  EXPECT_EQ(serial[3].error_code, ErrorCode::kUnknownEmotion);
  prompts.push_back(prompts.front());
  EXPECT_THROW(EditBatch(prompts, CuratedRubric(), env.deps(), 2), Error);
}

}  // namespace
}  // namespace promptedit
