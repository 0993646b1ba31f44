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

#ifndef PROMPTEDIT_TOOLS_CONFIG_HPP_
#define PROMPTEDIT_TOOLS_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "promptedit/embedding.hpp"
#include "promptedit/related_words.hpp"
#include "promptedit/text_analysis.hpp"

namespace promptedit::cli {

inline constexpr std::string_view kEnvPrefix = "REPROMPT_";

struct Config {
  std::string embed_backend = "mock";  // "mock" or an http(s) URL
  std::size_t embed_dim = MockEmbedder::kDefaultDim;
  std::string conceptnet;  // fixture path or http(s) URL; empty = bundled fixture
  std::string lexicon;     // empty = bundled sample
  std::string wordlist;    // empty = bundled list
  std::string cache_dir = ".promptedit-cache";
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  std::vector<std::string> emotion_set;  // empty = default set
};

// Keys accepted in every layer, e.g. "embed_backend".
const std::vector<std::string>& ConfigKeys();

using Layer = std::map<std::string, std::string>;

// Flat "key = value" lines; '#' starts a comment. Unknown keys are errors.
Layer ParseConfigFile(std::string_view text, std::string_view source = "config");

// REPROMPT_<KEY> for every key, read through `getenv`.
Layer ReadEnvironment(const std::function<const char*(const char*)>& getenv);

// flags > environment > file > defaults. Throws InvalidArgument on bad values.
Config ResolveConfig(const Layer& flags, const Layer& env, const Layer& file);

bool IsUrl(std::string_view s);

// Long-lived objects a command needs, each built on first use.
class RuntimeBuilder {
 public:
  explicit RuntimeBuilder(Config config) : config_(std::move(config)) {}

  const Config& config() const { return config_; }
  const Tagger& tagger();
  const ConcretenessLexicon& lexicon();
  const WordList& wordlist();
  const Embedder& embedder();
  RelatedWordsClient& related();
  const std::set<std::string>& emotions();

 private:
  Config config_;
  std::shared_ptr<const Tagger> tagger_;
  std::unique_ptr<ConcretenessLexicon> lexicon_;
  std::unique_ptr<WordList> wordlist_;
  std::unique_ptr<Embedder> embedder_;
  std::unique_ptr<RelatedWordsClient> related_;
  std::optional<std::set<std::string>> emotions_;
};

}  // namespace promptedit::cli

#endif  // PROMPTEDIT_TOOLS_CONFIG_HPP_
