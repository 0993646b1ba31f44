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

#ifndef PROMPTEDIT_TEXT_ANALYSIS_HPP_
#define PROMPTEDIT_TEXT_ANALYSIS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace promptedit {

// Coarse part-of-speech classes. The order is part of the feature schema.
enum class PosBucket : std::uint8_t {
  kNoun,
  kVerb,
  kAdj,
  kAdv,
  kPron,
  kPropn,
  kDet,
  kAdp,
  kConj,
  kOther,
};

inline constexpr std::size_t kNumBuckets = 10;
inline constexpr std::array<PosBucket, kNumBuckets> kAllBuckets = {
    PosBucket::kNoun, PosBucket::kVerb, PosBucket::kAdj,  PosBucket::kAdv,
    PosBucket::kPron, PosBucket::kPropn, PosBucket::kDet, PosBucket::kAdp,
    PosBucket::kConj, PosBucket::kOther};

std::string_view BucketName(PosBucket bucket);
std::optional<PosBucket> ParseBucket(std::string_view name);

// Auxiliary and modal verbs ("will", "be", "have", "do", "can", ...) never
// count as VERB.
bool IsAuxiliary(std::string_view lowercase_word);

// Maps a fine tag (Penn Treebank, or a bucket name such as "NOUN") to its
// bucket. Auxiliaries map to OTHER regardless of tag.
PosBucket BucketFor(std::string_view fine_tag, std::string_view word);

class ConcretenessLexicon {
 public:
  ConcretenessLexicon() = default;

  // TSV with a header containing Word and Conc.M; other columns ignored.
  // Rows whose rating does not parse (or is outside [1, 5]) are skipped and
  // counted in malformed_rows(). Last occurrence of a word wins.
  static ConcretenessLexicon Load(const std::filesystem::path& path);
  static ConcretenessLexicon FromEntries(
      const std::vector<std::pair<std::string, double>>& entries);

  // Case-insensitive exact lookup. Absence is not an error.
  std::optional<double> lookup(std::string_view lemma) const;

  // Lowercased word, then suffix-stripped fallbacks (-s, -es, -ed, -ing, with
  // doubled-consonant and silent-e repair). Returns the form that hit.
  std::optional<std::pair<std::string, double>> resolve(std::string_view word) const;

  bool contains(std::string_view word) const { return lookup(word).has_value(); }
  std::size_t entry_count() const { return ratings_.size(); }
  std::size_t malformed_rows() const { return malformed_rows_; }

 private:
  std::unordered_map<std::string, double> ratings_;
  std::size_t malformed_rows_ = 0;
};

// Candidate base forms of an inflected word, most literal first.
std::vector<std::string> LemmaCandidates(std::string_view lowercase_word);

struct Token {
  std::string surface;
  std::string lemma;
  PosBucket pos = PosBucket::kOther;
  std::optional<double> concreteness;
  std::size_t index = 0;
  // Tag reported by the tagger before bucketing (e.g. "VBN").
  std::string fine_tag;
};

struct TaggedText {
  std::string source;
  std::vector<Token> tokens;
  std::optional<std::string> emotion;
};

enum class RawTokenKind { kWord, kNumber, kPunct };

struct RawToken {
  std::string text;
  RawTokenKind kind = RawTokenKind::kWord;
};

// Splits text into words (hyphenated compounds kept whole, clitics such as
// "n't" and "'ve" split off), numbers (any token containing a digit) and
// single punctuation marks. Typographic quotes are folded to ASCII.
std::vector<RawToken> Tokenize(std::string_view text);

// Pluggable part-of-speech tagger over one sentence of tokens.
class Tagger {
 public:
  virtual ~Tagger() = default;
  // One fine tag per input token, in order.
  virtual std::vector<std::string> Tag(const std::vector<std::string>& tokens) const = 0;
  virtual std::string name() const = 0;
};

// Transformation-based tagger: lexicon lookup, lexical rules for unknown
// words, then contextual rules, applied in file order.
class BrillTagger final : public Tagger {
 public:
  static BrillTagger Load(const std::filesystem::path& lexicon,
                          const std::filesystem::path& lexical_rules,
                          const std::filesystem::path& context_rules);
  // Loads brill-{lexicon,morphology,context}.txt from a directory.
  static BrillTagger LoadDirectory(const std::filesystem::path& dir);

  std::vector<std::string> Tag(const std::vector<std::string>& tokens) const override;
  std::string name() const override { return "brill-1.14"; }

  std::size_t lexicon_size() const { return lexicon_.size(); }

 private:
  struct LexicalRule {
    std::optional<std::string> from_tag;
    std::string affix;
    std::string command;
    std::string to_tag;
  };
  struct ContextRule {
    std::string from_tag;
    std::string to_tag;
    std::string command;
    std::string x;
    std::string y;
  };

  const std::string* Find(const std::string& word) const;
  std::string TagUnknown(const std::string& word, const std::string* prev,
                         const std::string* next) const;
  void ApplyContext(std::vector<std::string>& words,
                    std::vector<std::string>& tags) const;

  std::unordered_map<std::string, std::string> lexicon_;
  std::vector<LexicalRule> lexical_rules_;
  std::vector<ContextRule> context_rules_;
};

// Undoes the "to + noun -> verb" contextual rule after motion verbs, where
// "to" marks a destination ("going to school").
void RestoreDestinationNouns(const std::vector<std::string>& words,
                             const std::vector<std::string>& initial,
                             std::vector<std::string>& tags);

// Participle readings that behave as adjectives: "I was scared", "so
// destroyed", and a participle tagged in isolation ("broken").
void ApplyAdjectivalParticiples(const std::vector<std::string>& words,
                                std::vector<std::string>& tags);

// Directory holding the bundled tagger data, lexicon sample, word list and
// related-words fixture. REPROMPT_DATA_DIR overrides the compiled default.
std::filesystem::path DataDir();

// Process-wide tagger built from DataDir()/tagger, loaded on first use.
std::shared_ptr<const Tagger> DefaultTagger();

// Tags text with the given tagger. Punctuation is dropped; numbers are kept
// as OTHER. Sentences are tagged independently.
TaggedText Tag(std::string_view text, const ConcretenessLexicon& lexicon,
               const Tagger& tagger);
TaggedText Tag(std::string_view text, const ConcretenessLexicon& lexicon);

// Tags a single word with no surrounding context.
PosBucket TagStandalone(std::string_view word, const Tagger& tagger);

class WordList {
 public:
  WordList() = default;
  explicit WordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}
  // Newline-delimited; the first whitespace-separated field of each line is
  // the word (so frequency lists load too). Lines starting ";;;" are skipped.
  static WordList Load(const std::filesystem::path& path);

  bool contains(std::string_view lowercase_word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Whitespace-delimited chunks of text that are neither known words (word
// list or lexicon) nor plain numbers. Edge punctuation is ignored; a chunk is
// reported verbatim. Empty result means the text is safe to score.
std::vector<std::string> Spellcheck(std::string_view text,
                                    const ConcretenessLexicon& lexicon,
                                    const WordList& wordlist);

}  // namespace promptedit

#endif  // PROMPTEDIT_TEXT_ANALYSIS_HPP_
