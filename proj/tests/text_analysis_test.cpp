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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "promptedit/error.hpp"
#include "promptedit/text_analysis.hpp"

namespace promptedit {
namespace {

const ConcretenessLexicon& SampleLexicon() {
  static const auto lexicon = ConcretenessLexicon::Load(DataDir() / "concreteness_sample.tsv");
  return lexicon;
}

std::string Buckets(std::string_view text) {
  std::string out;
  for (const auto& t : Tag(text, SampleLexicon()).tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface + "/" + std::string(BucketName(t.pos));
  }
  return out;
}

TEST(TokenizeTest, SplitsCliticsAndKeepsCompounds) {
  std::vector<std::string> got;
  std::vector<RawTokenKind> kinds;
  for (const auto& t : Tokenize("We didn't see the well-known 3rd act, honestly.")) {
    got.push_back(t.text);
    kinds.push_back(t.kind);
  }
  const std::vector<std::string> want = {"We", "did", "n't", "see", "the", "well-known",
                                         "3rd", "act", ",", "honestly", "."};
  EXPECT_EQ(got, want);
  EXPECT_EQ(kinds[6], RawTokenKind::kNumber);
  EXPECT_EQ(kinds[8], RawTokenKind::kPunct);
}

TEST(TokenizeTest, FoldsTypographicQuotes) {
  const auto toks = Tokenize("I\xE2\x80\x99m here");
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[1].text, "'m");
}

TEST(TagTest, GoldenTagsForTheRunningExample) {
  EXPECT_EQ(Buckets("My best friend will be going to school in another country for 4 years."),
            "My/PRON best/ADJ friend/NOUN will/OTHER be/OTHER going/VERB to/ADP school/NOUN "
            "in/ADP another/DET country/NOUN for/ADP 4/OTHER years/NOUN");
}

TEST(TagTest, GoldenTagsWithParticiplesAndClitics) {
  EXPECT_EQ(Buckets("I was so scared when my boyfriend cheated on me, I felt destroyed."),
            "I/PRON was/OTHER so/ADV scared/ADJ when/ADV my/PRON boyfriend/NOUN cheated/VERB "
            "on/ADP me/PRON I/PRON felt/VERB destroyed/ADJ");
  EXPECT_EQ(Buckets("The kids didn't want to leave the beach, they've been playing all day!"),
            "The/DET kids/NOUN did/OTHER n't/ADV want/VERB to/ADP leave/VERB the/DET beach/NOUN "
            "they/PRON 've/OTHER been/OTHER playing/VERB all/DET day/NOUN");
}

TEST(TagTest, AuxiliariesNeverCountAsVerbs) {
  for (const auto* w : {"will", "be", "been", "have", "do", "can", "would", "is"}) {
    EXPECT_TRUE(IsAuxiliary(w)) << w;
    EXPECT_EQ(BucketFor("VB", w), PosBucket::kOther) << w;
  }
  EXPECT_FALSE(IsAuxiliary("go"));
  EXPECT_EQ(BucketFor("VBD", "went"), PosBucket::kVerb);
}

TEST(TagTest, BucketForCoversPennTags) {
  EXPECT_EQ(BucketFor("NNS", "cats"), PosBucket::kNoun);
  EXPECT_EQ(BucketFor("NNP", "Paris"), PosBucket::kPropn);
  EXPECT_EQ(BucketFor("JJR", "bigger"), PosBucket::kAdj);
  EXPECT_EQ(BucketFor("RB", "fast"), PosBucket::kAdv);
  EXPECT_EQ(BucketFor("CC", "and"), PosBucket::kConj);
  EXPECT_EQ(BucketFor("NOUN", "x"), PosBucket::kNoun);
}

TEST(TagTest, StandaloneWordsUsedAsRetrievalCandidates) {
  const auto tagger = DefaultTagger();
  for (const auto* w : {"friendly", "old", "distant", "public", "elementary", "broken"}) {
    EXPECT_EQ(TagStandalone(w, *tagger), PosBucket::kAdj) << w;
  }
  EXPECT_EQ(TagStandalone("teacher", *tagger), PosBucket::kNoun);
}

TEST(TagTest, EmptyTextIsAnErrorAndPunctuationYieldsNoTokens) {
  try {
    Tag("  ", SampleLexicon());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyText);
  }
  EXPECT_TRUE(Tag(" ... !? ", SampleLexicon()).tokens.empty());
}

TEST(TagTest, TokenIndicesAreConsecutive) {
  const auto tagged = Tag("One cat. Two dogs! Three birds?", SampleLexicon());
  for (std::size_t i = 0; i < tagged.tokens.size(); ++i) EXPECT_EQ(tagged.tokens[i].index, i);
}

TEST(LexiconTest, ResolvesInflectedForms) {
  const auto lex = ConcretenessLexicon::FromEntries(
      {{"year", 2.9}, {"run", 3.5}, {"stop", 3.2}, {"make", 2.6}, {"box", 4.8}});
  EXPECT_EQ(lex.resolve("Years")->first, "year");
  EXPECT_EQ(lex.resolve("running")->first, "run");
  EXPECT_EQ(lex.resolve("stopped")->first, "stop");
  EXPECT_EQ(lex.resolve("making")->first, "make");
  EXPECT_EQ(lex.resolve("boxes")->first, "box");
  EXPECT_FALSE(lex.resolve("zebra").has_value());
  EXPECT_DOUBLE_EQ(*lex.lookup("YEAR"), 2.9);
}

TEST(LexiconTest, SkipsMalformedRowsAndLastOccurrenceWins) {
  const auto dir = std::filesystem::temp_directory_path() / "promptedit-lexicon-test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "lex.tsv";
  {
    std::ofstream out(path);
    out << "Word\tBigram\tConc.M\tConc.SD\n"
        << "apple\t0\t5.0\t0.1\n"
        << "idea\t0\tn/a\t0\n"
        << "ghost\t0\t7.5\t0\n"
        << "apple\t0\t4.5\t0.2\n";
  }
  const auto lex = ConcretenessLexicon::Load(path);
  EXPECT_EQ(lex.entry_count(), 1u);
  EXPECT_EQ(lex.malformed_rows(), 2u);
  EXPECT_DOUBLE_EQ(*lex.lookup("apple"), 4.5);
}

TEST(LexiconTest, MissingColumnIsAnError) {
  const auto path = std::filesystem::temp_directory_path() / "promptedit-lexicon-bad.tsv";
  {
    std::ofstream out(path);
    out << "Word\tRating\napple\t5\n";
  }
  try {
    ConcretenessLexicon::Load(path);
    FAIL() << "expected MissingColumn";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingColumn);
  }
}

TEST(SpellcheckTest, FlagsUnknownChunksOnly) {
  const WordList words({"the", "cat", "sat"});
  const auto lex = ConcretenessLexicon::FromEntries({{"mat", 4.9}});
  EXPECT_TRUE(Spellcheck("The cat sat on-the mat 42.", lex, words).size() == 1);
  EXPECT_EQ(Spellcheck("The cat sat on-the mat 42.", lex, words)[0], "on-the");
  EXPECT_EQ(Spellcheck("the #%@)%I cat", lex, words), std::vector<std::string>{"#%@)%I"});
  EXPECT_TRUE(Spellcheck("\"The cat,\" sat.", lex, words).empty());
}

}  // namespace
}  // namespace promptedit
