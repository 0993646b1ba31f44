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

#ifndef PROMPTEDIT_RELATED_WORDS_HPP_
#define PROMPTEDIT_RELATED_WORDS_HPP_

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "promptedit/http.hpp"
#include "promptedit/text_analysis.hpp"

namespace promptedit {

enum class RelatedSource { kLive, kCache, kFixture };

std::string_view RelatedSourceName(RelatedSource source);

struct Neighbor {
  std::string word;
  double weight = 0.0;  // relatedness in [0, 1]

  bool operator==(const Neighbor&) const = default;
};

struct RelatedWordsResult {
  std::string seed;
  std::vector<Neighbor> neighbors;  // descending weight, ties by word
  RelatedSource source = RelatedSource::kFixture;

  bool operator==(const RelatedWordsResult&) const = default;
};

class RelatedWordsClient {
 public:
  virtual ~RelatedWordsClient() = default;
  // Throws InvalidArgument for a malformed seed or limit outside [1, 100].
  // An unknown seed yields no neighbors rather than an error.
  virtual RelatedWordsResult Related(std::string_view seed, int limit) = 0;
};

// Keeps single lowercase English words (letters with inner hyphens or
// apostrophes), merges duplicates at their largest weight, clamps weights
// to [0, 1], sorts, and truncates to `limit`.
std::vector<Neighbor> NormalizeNeighbors(std::vector<Neighbor> raw, int limit);

// Reads a ConceptNet /related response: {"related": [{"@id": "/c/en/word",
// "weight": w}, ...]}.
std::vector<Neighbor> ParseConceptNetRelated(std::string_view json, int limit);

// Offline source backed by a JSON map {seed: [{"word", "weight"}, ...]}.
// Never touches the network.
class FixtureRelatedWords final : public RelatedWordsClient {
 public:
  static FixtureRelatedWords Load(const std::filesystem::path& path);
  static FixtureRelatedWords FromJson(std::string_view json);

  RelatedWordsResult Related(std::string_view seed, int limit) override;

 private:
  std::unordered_map<std::string, std::vector<Neighbor>> map_;
};

struct ConceptNetOptions {
  std::string base_url = "https://api.conceptnet.io";
  // Empty disables the on-disk cache.
  std::filesystem::path cache_dir;
  std::chrono::milliseconds min_interval{250};
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

// Live client: GET {base}/related/c/en/{seed}?filter=/c/en&limit={limit}.
// Live requests are serialized and spaced by min_interval. Results are kept
// for the session and, when cache_dir is set, in content-addressed files
// written atomically. Throws ServiceUnavailable once retries are exhausted.
class ConceptNetClient final : public RelatedWordsClient {
 public:
  ConceptNetClient(ConceptNetOptions options, std::shared_ptr<HttpTransport> transport);

  RelatedWordsResult Related(std::string_view seed, int limit) override;

  std::filesystem::path CachePath(std::string_view seed, int limit) const;
  std::size_t live_requests() const;

 private:
  RelatedWordsResult Fetch(const std::string& seed, int limit);

  ConceptNetOptions options_;
  std::shared_ptr<HttpTransport> transport_;
  mutable std::mutex session_mu_;
  std::map<std::pair<std::string, int>, RelatedWordsResult> session_;
  mutable std::mutex live_mu_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
  std::size_t live_requests_ = 0;
};

struct FilteredWord {
  std::string word;
  double weight = 0.0;
  std::optional<double> concreteness;
};

// Keeps neighbors whose standalone tag falls in `bucket`, preserving order,
// and attaches lexicon concreteness where available.
std::vector<FilteredWord> FilterByPos(const RelatedWordsResult& result, PosBucket bucket,
                                      const ConcretenessLexicon& lexicon, const Tagger& tagger);

}  // namespace promptedit

#endif  // PROMPTEDIT_RELATED_WORDS_HPP_
