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

#include "promptedit/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "promptedit/error.hpp"
#include "promptedit/random.hpp"
#include "promptedit/strings.hpp"

namespace promptedit {

std::string_view AlignmentKindName(AlignmentKind kind) {
  switch (kind) {
    case AlignmentKind::kIea: return "IEA";
    case AlignmentKind::kIta: return "ITA";
    case AlignmentKind::kTextText: return "TEXT_TEXT";
  }
  return "TEXT_TEXT";
}

namespace {

std::vector<std::string> MockWords(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  if (words.empty()) words.emplace_back(text);
  std::sort(words.begin(), words.end());
  return words;
}

}  // namespace

MockEmbedder::MockEmbedder(std::size_t dim, std::uint64_t seed, std::string backend_id)
    : dim_(dim), seed_(seed), backend_id_(std::move(backend_id)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be positive");
}

std::vector<double> MockEmbedder::TokenVector(std::string_view token) const {
  Rng rng(Fnv1a64(token, seed_));
  std::vector<double> v(dim_);
  for (double& x : v) x = rng.normal();
  return v;
}

EmbeddingVector MockEmbedder::Normalized(std::vector<double> v) const {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return {std::move(v), backend_id_};
}

std::vector<EmbeddingVector> MockEmbedder::EmbedText(const std::vector<std::string>& texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    if (Trim(text).empty()) throw Error(ErrorCode::kEmptyText, "cannot embed empty text");
    std::vector<double> sum(dim_, 0.0);
    for (const auto& w : MockWords(text)) {
      const auto tv = TokenVector(w);
      for (std::size_t i = 0; i < dim_; ++i) sum[i] += tv[i];
    }
    out.push_back(Normalized(std::move(sum)));
  }
  return out;
}

std::vector<EmbeddingVector> MockEmbedder::EmbedImage(
    const std::vector<std::string>& images) const {
  std::vector<EmbeddingVector> out;
  out.reserve(images.size());
  for (const auto& bytes : images) out.push_back(Normalized(TokenVector(bytes)));
  return out;
}

// --- Fixture ---------------------------------------------------------------

FixtureEmbedder::FixtureEmbedder(std::string backend_id, std::size_t dim,
                                 std::unordered_map<std::string, std::vector<double>> texts,
                                 std::unordered_map<std::string, std::vector<double>> images)
    : backend_id_(std::move(backend_id)),
      dim_(dim),
      texts_(std::move(texts)),
      images_(std::move(images)),
      fallback_(dim, 0, backend_id_) {
  for (const auto* table : {&texts_, &images_}) {
    for (const auto& [key, v] : *table) {
      if (v.size() != dim_) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "fixture vector for '" + key + "' has dim " + std::to_string(v.size()));
      }
    }
  }
}

FixtureEmbedder FixtureEmbedder::Load(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  const auto read_table = [&](const char* key) {
    std::unordered_map<std::string, std::vector<double>> table;
    if (j.contains(key)) {
      for (const auto& [k, v] : j[key].items()) table[k] = v.get<std::vector<double>>();
    }
    return table;
  };
  return FixtureEmbedder(j.value("backend_id", std::string("fixture")),
                         j.at("dim").get<std::size_t>(), read_table("texts"),
                         read_table("images"));
}

std::vector<EmbeddingVector> FixtureEmbedder::EmbedText(
    const std::vector<std::string>& texts) const {
  std::vector<EmbeddingVector> out;
  for (const auto& t : texts) {
    if (auto it = texts_.find(t); it != texts_.end()) {
      out.push_back({it->second, backend_id_});
    } else {
      out.push_back(std::move(fallback_.EmbedText({t}).front()));
    }
  }
  return out;
}

std::vector<EmbeddingVector> FixtureEmbedder::EmbedImage(
    const std::vector<std::string>& images) const {
  std::vector<EmbeddingVector> out;
  for (const auto& bytes : images) {
    if (auto it = images_.find(bytes); it != images_.end()) {
      out.push_back({it->second, backend_id_});
    } else {
      out.push_back(std::move(fallback_.EmbedImage({bytes}).front()));
    }
  }
  return out;
}

// --- HTTP sidecar client --------------------------------------------------

HttpEmbedder::HttpEmbedder(std::string base_url, std::shared_ptr<HttpTransport> transport,
                           HttpEmbedderOptions options)
    : base_url_(std::move(base_url)),
      transport_(std::move(transport)),
      options_(options),
      in_flight_(static_cast<std::ptrdiff_t>(
          std::clamp<std::size_t>(options.max_in_flight, 1, 1024))) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (options_.max_batch == 0) options_.max_batch = 1;
  if (options_.attempts < 1) options_.attempts = 1;
}

std::string HttpEmbedder::backend_id() const {
  std::lock_guard lock(mu_);
  return model_.empty() ? "sidecar:" + base_url_ : "sidecar:" + model_;
}

std::vector<EmbeddingVector> HttpEmbedder::EmbedText(
    const std::vector<std::string>& texts) const {
  for (const auto& t : texts) {
    if (Trim(t).empty()) throw Error(ErrorCode::kEmptyText, "cannot embed empty text");
  }
  return Request("/v1/embed/text", "texts", texts);
}

std::vector<EmbeddingVector> HttpEmbedder::EmbedImage(
    const std::vector<std::string>& images) const {
  std::vector<std::string> encoded;
  encoded.reserve(images.size());
  for (const auto& bytes : images) encoded.push_back(Base64Encode(bytes));
  return Request("/v1/embed/image", "images", encoded);
}

std::vector<EmbeddingVector> HttpEmbedder::Request(
    const std::string& path, const std::string& field,
    const std::vector<std::string>& payload) const {
  std::vector<EmbeddingVector> out;
  out.reserve(payload.size());
  for (std::size_t start = 0; start < payload.size(); start += options_.max_batch) {
    const std::size_t end = std::min(payload.size(), start + options_.max_batch);
    const std::vector<std::string> chunk(payload.begin() + static_cast<std::ptrdiff_t>(start),
                                         payload.begin() + static_cast<std::ptrdiff_t>(end));
    in_flight_.acquire();
    try {
      auto part = RequestChunk(path, field, chunk);
      in_flight_.release();
      for (auto& v : part) out.push_back(std::move(v));
    } catch (...) {
      in_flight_.release();
      throw;
    }
  }
  return out;
}

std::vector<EmbeddingVector> HttpEmbedder::RequestChunk(
    const std::string& path, const std::string& field,
    const std::vector<std::string>& payload) const {
  const std::string url = base_url_ + path;
  const std::string body = nlohmann::json{{field, payload}}.dump();
  auto backoff = options_.initial_backoff;
  HttpResponse resp;
  for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
    resp = transport_->Post(url, body, "application/json");
    if (resp.status == 200) break;
    if (resp.status >= 400 && resp.status < 500) {
      throw Error(ErrorCode::kInvalidArgument,
                  url + " rejected request (" + std::to_string(resp.status) + "): " + resp.body);
    }
    if (attempt < options_.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  if (resp.status != 200) {
    throw Error(ErrorCode::kBackendUnavailable,
                url + " unavailable after " + std::to_string(options_.attempts) +
                    " attempts (last status " + std::to_string(resp.status) + ")");
  }

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(resp.body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, url + ": " + e.what());
  }
  if (!j.contains("embeddings") || !j.contains("dim") || !j["embeddings"].is_array()) {
    throw Error(ErrorCode::kParse, url + ": response lacks embeddings/dim");
  }
  const auto dim = j["dim"].get<std::size_t>();
  const std::string model = j.value("model", std::string("unknown"));
  if (j["embeddings"].size() != payload.size()) {
    throw Error(ErrorCode::kParse, url + ": " + std::to_string(j["embeddings"].size()) +
                                       " embeddings for " + std::to_string(payload.size()) +
                                       " inputs");
  }
  {
    std::lock_guard lock(mu_);
    if (dim_ == 0) {
      dim_ = dim;
      model_ = model;
    } else if (dim_ != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "sidecar switched from dim " + std::to_string(dim_) + " to " +
                      std::to_string(dim));
    }
  }
  std::vector<EmbeddingVector> out;
  for (const auto& e : j["embeddings"]) {
    EmbeddingVector v{e.get<std::vector<double>>(), "sidecar:" + model};
    if (v.dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding of length " + std::to_string(v.dim()) + " but dim " +
                      std::to_string(dim));
    }
    out.push_back(std::move(v));
  }
  return out;
}

// --- Scores ----------------------------------------------------------------

AlignmentScore ClipScore(const EmbeddingVector& a, const EmbeddingVector& b,
                         AlignmentKind kind) {
  if (a.backend_id != b.backend_id) {
    throw Error(ErrorCode::kBackendMismatch,
                "cannot compare '" + a.backend_id + "' with '" + b.backend_id + "'");
  }
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  const double value = dot / (std::sqrt(na) * std::sqrt(nb));
  return {kind, std::clamp(value, -1.0, 1.0)};
}

AlignmentScore Iea(const Embedder& embedder, const std::string& image,
                   const std::string& emotion) {
  if (Trim(emotion).empty()) throw Error(ErrorCode::kEmptyText, "emotion label is empty");
  const auto img = embedder.EmbedImage({image});
  const auto txt = embedder.EmbedText({emotion});
  return ClipScore(img.front(), txt.front(), AlignmentKind::kIea);
}

AlignmentScore Ita(const Embedder& embedder, const std::string& image,
                   const std::string& text) {
  if (Trim(text).empty()) throw Error(ErrorCode::kEmptyText, "text is empty");
  const auto img = embedder.EmbedImage({image});
  const auto txt = embedder.EmbedText({text});
  return ClipScore(img.front(), txt.front(), AlignmentKind::kIta);
}

std::string SaliencyReference(std::string_view text, std::string_view emotion) {
  return std::string(text) + " " + ToLower(emotion) + ".";
}

SaliencyRanking WordSaliency(const Embedder& embedder, std::string_view text,
                             std::string_view emotion,
                             const std::vector<std::string>& candidates) {
  if (Trim(emotion).empty()) throw Error(ErrorCode::kEmptyText, "emotion label is empty");
  SaliencyRanking ranking;
  ranking.reference_text = SaliencyReference(text, emotion);
  if (candidates.empty()) return ranking;
  std::vector<std::string> inputs = {ranking.reference_text};
  for (const auto& c : candidates) inputs.push_back(ToLower(c));
  const auto vectors = embedder.EmbedText(inputs);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ranking.entries.push_back(
        {ToLower(candidates[i]), ClipScore(vectors[i + 1], vectors[0]).value, i});
  }
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const SaliencyEntry& a, const SaliencyEntry& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.index < b.index;
                   });
  return ranking;
}

}  // namespace promptedit
