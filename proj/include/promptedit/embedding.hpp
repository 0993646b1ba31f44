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

#ifndef PROMPTEDIT_EMBEDDING_HPP_
#define PROMPTEDIT_EMBEDDING_HPP_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <vector>

#include "promptedit/http.hpp"

namespace promptedit {

struct EmbeddingVector {
  std::vector<double> values;
  std::string backend_id;

  std::size_t dim() const { return values.size(); }
};

enum class AlignmentKind { kIea, kIta, kTextText };

std::string_view AlignmentKindName(AlignmentKind kind);

struct AlignmentScore {
  AlignmentKind kind = AlignmentKind::kTextText;
  double value = 0.0;
};

// Text and image encoder living in one embedding space. Implementations
// must be safe to call concurrently.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<EmbeddingVector> EmbedText(const std::vector<std::string>& texts) const = 0;
  // Images are raw encoded file bytes (PNG, JPEG, ...).
  virtual std::vector<EmbeddingVector> EmbedImage(
      const std::vector<std::string>& images) const = 0;
  virtual std::string backend_id() const = 0;
};

// Deterministic stand-in: a text is the normalized sum of seeded Gaussian
// vectors, one per lowercase word in its multiset of words; an image is the
// vector of its bytes taken as a single word. Text with no word characters is
// hashed whole.
class MockEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDefaultDim = 512;

  explicit MockEmbedder(std::size_t dim = kDefaultDim, std::uint64_t seed = 0,
                        std::string backend_id = "mock");

  std::vector<EmbeddingVector> EmbedText(const std::vector<std::string>& texts) const override;
  std::vector<EmbeddingVector> EmbedImage(const std::vector<std::string>& images) const override;
  std::string backend_id() const override { return backend_id_; }

  std::vector<double> TokenVector(std::string_view token) const;

 private:
  EmbeddingVector Normalized(std::vector<double> v) const;

  std::size_t dim_;
  std::uint64_t seed_;
  std::string backend_id_;
};

// Replays pinned vectors for exact texts (and images, keyed by their bytes)
// from a JSON file; anything else falls through to a MockEmbedder of the
// same dimension:
//   {"backend_id": "...", "dim": 2, "texts": {"word": [..]}, "images": {...}}
class FixtureEmbedder final : public Embedder {
 public:
  static FixtureEmbedder Load(const std::filesystem::path& path);
  FixtureEmbedder(std::string backend_id, std::size_t dim,
                  std::unordered_map<std::string, std::vector<double>> texts,
                  std::unordered_map<std::string, std::vector<double>> images = {});

  std::vector<EmbeddingVector> EmbedText(const std::vector<std::string>& texts) const override;
  std::vector<EmbeddingVector> EmbedImage(const std::vector<std::string>& images) const override;
  std::string backend_id() const override { return backend_id_; }

 private:
  std::string backend_id_;
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>> texts_;
  std::unordered_map<std::string, std::vector<double>> images_;
  MockEmbedder fallback_;
};

struct HttpEmbedderOptions {
  std::size_t max_in_flight = 4;
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  // Server-side limit per request; larger inputs are split.
  std::size_t max_batch = 64;
};

// Client for the embedding sidecar:
//   POST {base}/v1/embed/text  {"texts": [...]}
//   POST {base}/v1/embed/image {"images": [base64, ...]}
//   -> {"embeddings": [[...], ...], "dim": n, "model": "..."}
// Vectors are tagged "sidecar:<model>".
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(std::string base_url, std::shared_ptr<HttpTransport> transport,
               HttpEmbedderOptions options = {});

  std::vector<EmbeddingVector> EmbedText(const std::vector<std::string>& texts) const override;
  std::vector<EmbeddingVector> EmbedImage(const std::vector<std::string>& images) const override;
  std::string backend_id() const override;

 private:
  std::vector<EmbeddingVector> Request(const std::string& path, const std::string& field,
                                       const std::vector<std::string>& payload) const;
  std::vector<EmbeddingVector> RequestChunk(const std::string& path, const std::string& field,
                                            const std::vector<std::string>& payload) const;

  std::string base_url_;
  std::shared_ptr<HttpTransport> transport_;
  HttpEmbedderOptions options_;
  mutable std::counting_semaphore<1024> in_flight_;
  mutable std::mutex mu_;
  mutable std::size_t dim_ = 0;
  mutable std::string model_;
};

// Cosine similarity. Throws BackendMismatch, DimensionMismatch, ZeroVector.
AlignmentScore ClipScore(const EmbeddingVector& a, const EmbeddingVector& b,
                         AlignmentKind kind = AlignmentKind::kTextText);

AlignmentScore Iea(const Embedder& embedder, const std::string& image,
                   const std::string& emotion);
AlignmentScore Ita(const Embedder& embedder, const std::string& image,
                   const std::string& text);

struct SaliencyEntry {
  std::string word;
  double score = 0.0;
  // Position of the word among the candidates; breaks score ties.
  std::size_t index = 0;
};

struct SaliencyRanking {
  std::string reference_text;
  std::vector<SaliencyEntry> entries;  // descending score, then ascending index
};

// text + " " + lowercase(emotion) + "."
std::string SaliencyReference(std::string_view text, std::string_view emotion);

// Scores each candidate word (lowercased) by its cosine with the reference
// text built from `text` and `emotion`.
SaliencyRanking WordSaliency(const Embedder& embedder, std::string_view text,
                             std::string_view emotion,
                             const std::vector<std::string>& candidates);

}  // namespace promptedit

#endif  // PROMPTEDIT_EMBEDDING_HPP_
