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

#include "promptedit/related_words.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

#include "json.hpp"
#include "promptedit/error.hpp"
#include "promptedit/strings.hpp"

namespace promptedit {

std::string_view RelatedSourceName(RelatedSource source) {
  switch (source) {
    case RelatedSource::kLive: return "LIVE";
    case RelatedSource::kCache: return "CACHE";
    case RelatedSource::kFixture: return "FIXTURE";
  }
  return "FIXTURE";
}

namespace {

// Lowercase letters, with single hyphens or apostrophes between letters.
bool IsPlainWord(std::string_view w) {
  if (w.empty()) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const char c = w[i];
    if (c >= 'a' && c <= 'z') continue;
    const bool inner = i > 0 && i + 1 < w.size() && w[i - 1] >= 'a' && w[i - 1] <= 'z';
    if ((c == '-' || c == '\'') && inner) continue;
    return false;
  }
  return true;
}

std::string CheckRequest(std::string_view seed, int limit) {
  if (limit < 1 || limit > 100) {
    throw Error(ErrorCode::kInvalidArgument,
                "limit must be in [1, 100], got " + std::to_string(limit));
  }
  std::string s = ToLower(Trim(seed));
  if (!IsPlainWord(s)) {
    throw Error(ErrorCode::kInvalidArgument, "'" + std::string(seed) + "' is not a lemma");
  }
  return s;
}

std::string PercentEncode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.') {
      out += c;
    } else {
      out += '%';
      out += kHex[u >> 4];
      out += kHex[u & 15];
    }
  }
  return out;
}

std::string NeighborsJson(const RelatedWordsResult& r, int limit) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["limit"] = limit;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& n : r.neighbors) arr.push_back({{"word", n.word}, {"weight", n.weight}});
  j["neighbors"] = std::move(arr);
  return j.dump() + "\n";
}

std::vector<Neighbor> ReadNeighborArray(const nlohmann::json& arr) {
  std::vector<Neighbor> out;
  for (const auto& e : arr) out.push_back({e.at("word").get<std::string>(), e.at("weight").get<double>()});
  return out;
}

}  // namespace

std::vector<Neighbor> NormalizeNeighbors(std::vector<Neighbor> raw, int limit) {
  std::vector<Neighbor> kept;
  for (auto& n : raw) {
    if (!IsPlainWord(n.word)) continue;
    n.weight = std::clamp(n.weight, 0.0, 1.0);
    auto it = std::find_if(kept.begin(), kept.end(),
                           [&](const Neighbor& k) { return k.word == n.word; });
    if (it == kept.end()) {
      kept.push_back(std::move(n));
    } else {
      it->weight = std::max(it->weight, n.weight);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.word < b.word;
  });
  if (limit >= 0 && kept.size() > static_cast<std::size_t>(limit)) kept.resize(static_cast<std::size_t>(limit));
  return kept;
}

std::vector<Neighbor> ParseConceptNetRelated(std::string_view text, int limit) {
  std::vector<Neighbor> raw;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& e : j.at("related")) {
      const auto id = e.at("@id").get<std::string>();
      constexpr std::string_view kPrefix = "/c/en/";
      if (id.rfind(kPrefix, 0) != 0) continue;
      std::string word = id.substr(kPrefix.size());
      if (const auto slash = word.find('/'); slash != std::string::npos) word.resize(slash);
      raw.push_back({word, e.at("weight").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("related-words response: ") + e.what());
  }
  return NormalizeNeighbors(std::move(raw), limit);
}

// --- Fixture ---------------------------------------------------------------

FixtureRelatedWords FixtureRelatedWords::Load(const std::filesystem::path& path) {
  return FromJson(ReadFile(path));
}

FixtureRelatedWords FixtureRelatedWords::FromJson(std::string_view text) {
  FixtureRelatedWords f;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& [seed, arr] : j.items()) f.map_[ToLower(seed)] = ReadNeighborArray(arr);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("related-words fixture: ") + e.what());
  }
  return f;
}

RelatedWordsResult FixtureRelatedWords::Related(std::string_view seed_in, int limit) {
  const std::string seed = CheckRequest(seed_in, limit);
  RelatedWordsResult r{seed, {}, RelatedSource::kFixture};
  if (auto it = map_.find(seed); it != map_.end()) r.neighbors = NormalizeNeighbors(it->second, limit);
  return r;
}

// --- Live client -------------------------------------------------------------

ConceptNetClient::ConceptNetClient(ConceptNetOptions options,
                                   std::shared_ptr<HttpTransport> transport)
    : options_(std::move(options)), transport_(std::move(transport)) {
  while (!options_.base_url.empty() && options_.base_url.back() == '/') options_.base_url.pop_back();
  if (options_.attempts < 1) options_.attempts = 1;
}

std::filesystem::path ConceptNetClient::CachePath(std::string_view seed, int limit) const {
  const std::string key = "conceptnet-related|" + options_.base_url + "|" + std::string(seed) +
                          "|" + std::to_string(limit);
  return options_.cache_dir / (HexDigest(Fnv1a64(key)) + ".json");
}

std::size_t ConceptNetClient::live_requests() const {
  std::lock_guard lock(live_mu_);
  return live_requests_;
}

RelatedWordsResult ConceptNetClient::Related(std::string_view seed_in, int limit) {
  const std::string seed = CheckRequest(seed_in, limit);
  const auto key = std::make_pair(seed, limit);
  {
    std::lock_guard lock(session_mu_);
    if (auto it = session_.find(key); it != session_.end()) return it->second;
  }
  RelatedWordsResult result;
  bool cached = false;
  if (!options_.cache_dir.empty()) {
    const auto path = CachePath(seed, limit);
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) {
      try {
        const auto j = nlohmann::json::parse(ReadFile(path));
        if (j.at("seed").get<std::string>() == seed && j.at("limit").get<int>() == limit) {
          result = {seed, ReadNeighborArray(j.at("neighbors")), RelatedSource::kCache};
          cached = true;
        }
      } catch (const std::exception&) {
        // Unreadable cache entries are refetched and overwritten.
      }
    }
  }
  if (!cached) {
    result = Fetch(seed, limit);
    if (!options_.cache_dir.empty()) {
      std::filesystem::create_directories(options_.cache_dir);
      WriteFileAtomic(CachePath(seed, limit), NeighborsJson(result, limit));
    }
  }
  std::lock_guard lock(session_mu_);
  return session_.try_emplace(key, std::move(result)).first->second;
}

RelatedWordsResult ConceptNetClient::Fetch(const std::string& seed, int limit) {
  const std::string url = options_.base_url + "/related/c/en/" + PercentEncode(seed) +
                          "?filter=/c/en&limit=" + std::to_string(limit);
  std::lock_guard lock(live_mu_);
  auto backoff = options_.initial_backoff;
  HttpResponse resp;
  for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
    if (last_request_) {
      const auto wait = *last_request_ + options_.min_interval - std::chrono::steady_clock::now();
      if (wait > std::chrono::steady_clock::duration::zero()) std::this_thread::sleep_for(wait);
    }
    last_request_ = std::chrono::steady_clock::now();
    ++live_requests_;
    resp = transport_->Get(url);
    if (resp.status == 200) {
      return {seed, ParseConceptNetRelated(resp.body, limit), RelatedSource::kLive};
    }
    if (resp.status == 404) return {seed, {}, RelatedSource::kLive};
    const bool retryable = resp.status == 0 || resp.status == 429 || resp.status >= 500;
    if (!retryable) break;
    if (attempt < options_.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw Error(ErrorCode::kServiceUnavailable,
              url + " failed (last status " + std::to_string(resp.status) + ")");
}

std::vector<FilteredWord> FilterByPos(const RelatedWordsResult& result, PosBucket bucket,
                                      const ConcretenessLexicon& lexicon, const Tagger& tagger) {
  std::vector<FilteredWord> out;
  for (const auto& n : result.neighbors) {
    if (TagStandalone(n.word, tagger) != bucket) continue;
    FilteredWord w{n.word, n.weight, std::nullopt};
    if (auto hit = lexicon.resolve(n.word)) w.concreteness = hit->second;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace promptedit
