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

#include <fstream>
#include <string>

#include "cli_runner.hpp"
#include "test_util.hpp"

namespace promptedit::testing {
namespace {

TEST(CliTest, EveryCommandIsByteDeterministic) {
  for (const auto& check : CheckCliDeterminism()) EXPECT_TRUE(check.ok) << check.command << ": " << check.detail;
}

TEST(CliTest, HelpListsEveryFlag) {
  const auto dir = MakeTempDir("cli-help");
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"features", {"--in", "--out"}},
      {"edit", {"--text", "--emotion", "--rubric", "--trace", "--json", "--allow-unknown-words"}},
      {"edit-batch", {"--in", "--out", "--rubric", "--allow-unknown-words"}},
      {"train", {"--features", "--scores", "--target", "--trees", "--depth", "--learning-rate",
                 "--min-leaf", "--subsample", "--folds", "--out", "--report"}},
      {"explain", {"--model", "--features", "--out", "--importance-out", "--background-size", "--samples"}},
      {"pdp", {"--model", "--features", "--feature", "--grid", "--points", "--background-size", "--out"}},
      {"derive-rubric", {"--model", "--features", "--out", "--accept", "--add-count"}},
      {"curated-rubric", {"--out"}},
      {"evaluate", {"--manifest", "--out", "--records-out", "--metric", "--aggregate-images", "--resamples"}},
      {"correlate", {"--probs", "--out"}},
      {"saliency", {"--text", "--emotion", "--words"}},
      {"synth", {"--rows", "--noise", "--features-out", "--scores-out"}},
      {"spellcheck", {"--text"}},
  };
  const auto top = RunCli("--help", dir);
  EXPECT_EQ(top.exit_code, 0);
  for (const auto* flag : {"--config", "--embed-backend", "--embed-dim", "--conceptnet", "--lexicon",
                           "--wordlist", "--cache-dir", "--seed", "--parallelism", "--emotion-set"}) {
    EXPECT_NE(top.out.find(flag), std::string::npos) << flag;
  }
  for (const auto& [cmd, flags] : commands) {
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
    const auto help = RunCli(cmd + " --help", dir);
    EXPECT_EQ(help.exit_code, 0) << cmd;
    for (const auto& flag : flags) EXPECT_NE(help.out.find(flag), std::string::npos) << cmd << " " << flag;
  }
}

TEST(CliTest, ExitCodes) {
  const auto dir = MakeTempDir("cli-exit");
  EXPECT_EQ(RunCli("edit --text hi --emotion sad --frobnicate", dir).exit_code, 1);
  EXPECT_EQ(RunCli("", dir).exit_code, 1);
  EXPECT_EQ(RunCli("train --features missing.csv --scores missing.csv --out m.json --trees 0", dir).exit_code, 2);
  EXPECT_EQ(RunCli("edit --text 'A dog.' --emotion nope", dir).exit_code, 2);
  EXPECT_EQ(RunCli("edit --text 'A dgo.' --emotion sad", dir).exit_code, 2);
  EXPECT_EQ(RunCli("edit --text 'A dog.' --emotion sad --seed -4", dir).exit_code, 1);
  const auto backend = RunCli("edit --text 'A dog.' --emotion sad --embed-backend http://127.0.0.1:1", dir);
  EXPECT_EQ(backend.exit_code, 3) << backend.err;
  const auto ok = RunCli("edit --text 'A dog.' --emotion sad", dir);
  EXPECT_EQ(ok.exit_code, 0) << ok.err;
  EXPECT_TRUE(ok.out.ends_with(", sad\n")) << ok.out;
}

TEST(CliTest, ConfigPrecedenceReachesTheCommand) {
  const auto dir = MakeTempDir("cli-config");
  std::ofstream(dir / "promptedit.conf") << "emotion_set = hungry\n";
  EXPECT_EQ(RunCli("--config promptedit.conf edit --text 'A dog.' --emotion hungry", dir).exit_code, 0);
  EXPECT_EQ(RunCli("--config promptedit.conf edit --text 'A dog.' --emotion sad", dir).exit_code, 2);
  EXPECT_EQ(RunCli("--config promptedit.conf --emotion-set sad edit --text 'A dog.' --emotion sad", dir).exit_code, 0);
  EXPECT_EQ(RunCli("--config nowhere.conf curated-rubric", dir).exit_code, 2);
  // Environment sits between flags and the file.
  EXPECT_EQ(RunCli("--config promptedit.conf edit --text 'A dog.' --emotion sad", dir,
                   "REPROMPT_EMOTION_SET=sad").exit_code, 0);
  EXPECT_EQ(RunCli("--emotion-set hungry edit --text 'A dog.' --emotion sad", dir,
                   "REPROMPT_EMOTION_SET=sad").exit_code, 2);
  EXPECT_EQ(RunCli("edit --text 'A dog.' --emotion hungry", dir, "REPROMPT_CONFIG=promptedit.conf").exit_code, 0);
}

}  // namespace
}  // namespace promptedit::testing
