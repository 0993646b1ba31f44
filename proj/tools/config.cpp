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

#include "config.hpp"

#include <algorithm>
#include <cctype>

#include "promptedit/emotions.hpp"
#include "promptedit/error.hpp"
#include "promptedit/strings.hpp"

namespace promptedit::cli {

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "embed_backend", "embed_dim",   "conceptnet", "lexicon",     "wordlist",
      "cache_dir",     "seed",        "parallelism", "emotion_set"};
  return keys;
}

namespace {

bool IsKey(const std::string& key) {
  const auto& keys = ConfigKeys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::string Upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

Layer ParseConfigFile(std::string_view text, std::string_view source) {
  Layer layer;
  std::size_t line_no = 0;
  for (const auto& raw : Split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, where + ": expected key = value");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::replace(key.begin(), key.end(), '-', '_');
    if (!IsKey(key)) throw Error(ErrorCode::kInvalidArgument, where + ": unknown key '" + key + "'");
    layer[key] = std::string(Trim(line.substr(eq + 1)));
  }
  return layer;
}

Layer ReadEnvironment(const std::function<const char*(const char*)>& getenv) {
  Layer layer;
  for (const auto& key : ConfigKeys()) {
    const std::string name = std::string(kEnvPrefix) + Upper(key);
    if (const char* v = getenv(name.c_str()); v && *v) layer[key] = v;
  }
  return layer;
}

bool IsUrl(std::string_view s) {
  return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0;
}

Config ResolveConfig(const Layer& flags, const Layer& env, const Layer& file) {
  const auto pick = [&](const std::string& key) -> std::optional<std::string> {
    for (const Layer* layer : {&flags, &env, &file}) {
      if (auto it = layer->find(key); it != layer->end()) return it->second;
    }
    return std::nullopt;
  };
  const auto integer = [&](const std::string& key, long long min) -> std::optional<long long> {
    const auto v = pick(key);
    if (!v) return std::nullopt;
    long long out = 0;
    if (!ParseInt(*v, out) || out < min) {
      throw Error(ErrorCode::kInvalidArgument, key + " must be an integer >= " +
                                                   std::to_string(min) + ", got '" + *v + "'");
    }
    return out;
  };
  Config c;
  if (auto v = pick("embed_backend")) {
    if (*v != "mock" && !IsUrl(*v)) {
      throw Error(ErrorCode::kInvalidArgument, "embed_backend must be 'mock' or an http(s) URL");
    }
    c.embed_backend = *v;
  }
  if (auto v = integer("embed_dim", 1)) c.embed_dim = static_cast<std::size_t>(*v);
  if (auto v = pick("conceptnet")) c.conceptnet = *v;
  if (auto v = pick("lexicon")) c.lexicon = *v;
  if (auto v = pick("wordlist")) c.wordlist = *v;
  if (auto v = pick("cache_dir")) c.cache_dir = *v;
  if (auto v = integer("seed", 0)) c.seed = static_cast<std::uint64_t>(*v);
  if (auto v = integer("parallelism", 1)) c.parallelism = static_cast<std::size_t>(*v);
  if (auto v = pick("emotion_set")) {
    for (const auto& part : Split(*v, ',')) {
      const auto label = ToLower(Trim(part));
      if (!label.empty()) c.emotion_set.push_back(label);
    }
  }
  return c;
}

const Tagger& RuntimeBuilder::tagger() {
  if (!tagger_) tagger_ = DefaultTagger();
  return *tagger_;
}

const ConcretenessLexicon& RuntimeBuilder::lexicon() {
  if (!lexicon_) {
    const auto path = config_.lexicon.empty() ? DataDir() / "concreteness_sample.tsv"
                                              : std::filesystem::path(config_.lexicon);
    lexicon_ = std::make_unique<ConcretenessLexicon>(ConcretenessLexicon::Load(path));
  }
  return *lexicon_;
}

const WordList& RuntimeBuilder::wordlist() {
  if (!wordlist_) {
    const auto path = config_.wordlist.empty() ? DataDir() / "wordfreq-spelling.txt"
                                               : std::filesystem::path(config_.wordlist);
    wordlist_ = std::make_unique<WordList>(WordList::Load(path));
  }
  return *wordlist_;
}

const Embedder& RuntimeBuilder::embedder() {
  if (!embedder_) {
    if (config_.embed_backend == "mock") {
      embedder_ = std::make_unique<MockEmbedder>(config_.embed_dim, config_.seed);
    } else {
      HttpEmbedderOptions opts;
      opts.max_in_flight = std::max<std::size_t>(config_.parallelism, 1);
      embedder_ = std::make_unique<HttpEmbedder>(config_.embed_backend, MakeHttpTransport(), opts);
    }
  }
  return *embedder_;
}

RelatedWordsClient& RuntimeBuilder::related() {
  if (!related_) {
    if (IsUrl(config_.conceptnet)) {
      ConceptNetOptions opts;
      opts.base_url = config_.conceptnet;
      opts.cache_dir = config_.cache_dir;
      related_ = std::make_unique<ConceptNetClient>(opts, MakeHttpTransport());
    } else {
      const auto path = config_.conceptnet.empty() ? DataDir() / "conceptnet_fixture.json"
                                                   : std::filesystem::path(config_.conceptnet);
      related_ = std::make_unique<FixtureRelatedWords>(FixtureRelatedWords::Load(path));
    }
  }
  return *related_;
}

const std::set<std::string>& RuntimeBuilder::emotions() {
  if (!emotions_) {
    emotions_ = config_.emotion_set.empty()
                    ? DefaultEmotionSet()
                    : std::set<std::string>(config_.emotion_set.begin(), config_.emotion_set.end());
  }
  return *emotions_;
}

}  // namespace promptedit::cli
