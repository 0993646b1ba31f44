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

#include "promptedit/features.hpp"

#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "promptedit/csv.hpp"
#include "promptedit/error.hpp"
#include "promptedit/strings.hpp"

namespace promptedit {

const std::array<std::string, kNumFeatures>& FeatureNames() {
  static const std::array<std::string, kNumFeatures> names = [] {
    std::array<std::string, kNumFeatures> out;
    for (std::size_t i = 0; i < kNumBuckets; ++i) {
      out[i] = "count_" + std::string(BucketName(kAllBuckets[i]));
      out[kNumBuckets + i] = "conc_" + std::string(BucketName(kAllBuckets[i]));
    }
    return out;
  }();
  return names;
}

std::optional<std::size_t> FeatureIndex(std::string_view name) {
  const auto& names = FeatureNames();
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (names[i] == name) return i;
  }
  if (name == "#nouns") return CountIndex(PosBucket::kNoun);
  if (name == "#adjs") return CountIndex(PosBucket::kAdj);
  if (name == "#verbs") return CountIndex(PosBucket::kVerb);
  if (name == "conc_noun") return ConcIndex(PosBucket::kNoun);
  if (name == "conc_adj") return ConcIndex(PosBucket::kAdj);
  if (name == "conc_verb") return ConcIndex(PosBucket::kVerb);
  return std::nullopt;
}

std::size_t RequireFeatureIndex(std::string_view name) {
  if (auto idx = FeatureIndex(name)) return *idx;
  throw Error(ErrorCode::kUnknownFeature, "no feature named '" + std::string(name) + "'");
}

FeatureVector ExtractTokens(std::span<const Token> tokens) {
  FeatureVector fv;
  std::array<double, kNumBuckets> conc_sum{};
  std::array<int, kNumBuckets> rated{};
  for (const Token& t : tokens) {
    const auto b = static_cast<std::size_t>(t.pos);
    fv[b] += 1.0;
    if (t.concreteness) {
      conc_sum[b] += *t.concreteness;
      ++rated[b];
    }
  }
  for (std::size_t b = 0; b < kNumBuckets; ++b) {
    fv[kNumBuckets + b] = rated[b] > 0 ? conc_sum[b] / rated[b] : 0.0;
  }
  return fv;
}

FeatureVector Extract(const TaggedText& tagged) { return ExtractTokens(tagged.tokens); }

FeatureTable ExtractBatch(const std::vector<PromptRecord>& prompts,
                          const ConcretenessLexicon& lexicon, const Tagger& tagger) {
  FeatureTable table;
  std::unordered_set<std::string> seen;
  for (const auto& p : prompts) {
    if (!seen.insert(p.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate prompt id '" + p.id + "'");
    }
  }
  for (const auto& p : prompts) {
    table.ids.push_back(p.id);
    if (Trim(p.text).empty()) {
      table.rows.emplace_back();
      continue;
    }
    table.rows.push_back(Extract(Tag(p.text, lexicon, tagger)));
  }
  return table;
}

std::string FormatFeatureCsv(const FeatureTable& table) {
  std::vector<std::string> header = {"id"};
  for (const auto& n : FeatureNames()) header.push_back(n);
  std::string out = csv::FormatRow(header);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> fields = {table.ids[r]};
    for (double v : table.rows[r].values()) fields.push_back(FormatDouble(v));
    out += csv::FormatRow(fields);
  }
  return out;
}

FeatureTable ParseFeatureCsv(std::string_view text, std::string_view source) {
  const csv::Table t = csv::Parse(text);
  const std::string src(source);
  const std::size_t id_col = t.require("id", src);
  std::array<std::size_t, kNumFeatures> cols{};
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    cols[i] = t.require(FeatureNames()[i], src);
  }
  FeatureTable table;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = src + ":" + std::to_string(t.lines[r]);
    if (row.size() != t.header.size()) {
      throw Error(ErrorCode::kMalformedRow, where + ": expected " +
                                                std::to_string(t.header.size()) + " fields");
    }
    FeatureVector fv;
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      double v = 0;
      if (!ParseDouble(row[cols[i]], v)) {
        throw Error(ErrorCode::kMalformedRow,
                    where + ": non-numeric " + FeatureNames()[i] + " '" + row[cols[i]] + "'");
      }
      fv[i] = v;
    }
    if (!seen.insert(row[id_col]).second) {
      throw Error(ErrorCode::kDuplicateId, where + ": duplicate id '" + row[id_col] + "'");
    }
    table.ids.push_back(row[id_col]);
    table.rows.push_back(fv);
  }
  return table;
}

std::vector<PromptRecord> ParsePromptsJsonl(std::string_view text, std::string_view source) {
  std::vector<PromptRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text")) {
      throw Error(ErrorCode::kMalformedRow, where + ": expected object with id and text");
    }
    PromptRecord p;
    p.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    p.text = j["text"].get<std::string>();
    p.emotion = j.value("emotion", std::string());
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace promptedit
