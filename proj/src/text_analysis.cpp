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

#include "promptedit/text_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include "promptedit/csv.hpp"
#include "promptedit/error.hpp"
#include "promptedit/strings.hpp"

#ifndef PROMPTEDIT_DATA_DIR
#define PROMPTEDIT_DATA_DIR "data"
#endif

namespace promptedit {

namespace {

constexpr std::array<std::string_view, kNumBuckets> kBucketNames = {
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "PROPN", "DET", "ADP", "CONJ", "OTHER"};

bool IsAsciiAlpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}
bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

}  // namespace

std::string_view BucketName(PosBucket bucket) {
  return kBucketNames[static_cast<std::size_t>(bucket)];
}

std::optional<PosBucket> ParseBucket(std::string_view name) {
  for (std::size_t i = 0; i < kNumBuckets; ++i) {
    if (kBucketNames[i] == name) return kAllBuckets[i];
  }
  return std::nullopt;
}

bool IsAuxiliary(std::string_view w) {
  static const std::unordered_set<std::string_view> kAux = {
      "be",    "am",    "is",    "are",   "was",   "were",  "been",  "being",
      "'m",    "'re",   "'s",    "have",  "has",   "had",   "having", "'ve",
      "'d",    "do",    "does",  "did",   "doing", "will",  "would", "shall",
      "should", "can",  "could", "may",   "might", "must",  "'ll",   "ca",
      "wo",    "ought", "wanna", "gonna", "gotta", "ai"};
  return kAux.contains(w);
}

PosBucket BucketFor(std::string_view tag, std::string_view word) {
  if (auto named = ParseBucket(tag)) {
    if (*named == PosBucket::kVerb && IsAuxiliary(ToLower(word))) return PosBucket::kOther;
    return *named;
  }
  if (tag == "NN" || tag == "NNS") return PosBucket::kNoun;
  if (tag == "NNP" || tag == "NNPS" || tag == "NP") return PosBucket::kPropn;
  if (StartsWith(tag, "VB")) {
    return IsAuxiliary(ToLower(word)) ? PosBucket::kOther : PosBucket::kVerb;
  }
  if (tag == "JJ" || tag == "JJR" || tag == "JJS") return PosBucket::kAdj;
  if (tag == "RB" || tag == "RBR" || tag == "RBS" || tag == "WRB") return PosBucket::kAdv;
  if (tag == "PRP" || tag == "PRP$" || tag == "WP" || tag == "WP$" || tag == "EX" ||
      tag == "PP") {
    return PosBucket::kPron;
  }
  if (tag == "DT" || tag == "PDT" || tag == "WDT") return PosBucket::kDet;
  if (tag == "IN" || tag == "TO" || tag == "RP") return PosBucket::kAdp;
  if (tag == "CC") return PosBucket::kConj;
  return PosBucket::kOther;
}

// --- Concreteness lexicon -------------------------------------------------

ConcretenessLexicon ConcretenessLexicon::Load(const std::filesystem::path& path) {
  const csv::Table table = csv::ReadFile(path.string(), '\t');
  const std::size_t word_col = table.require("Word", path.string());
  const std::size_t conc_col = table.require("Conc.M", path.string());
  ConcretenessLexicon lexicon;
  for (const auto& row : table.rows) {
    double rating = 0.0;
    if (row.size() <= std::max(word_col, conc_col) ||
        !ParseDouble(row[conc_col], rating) || rating < 1.0 || rating > 5.0 ||
        Trim(row[word_col]).empty()) {
      ++lexicon.malformed_rows_;
      continue;
    }
    lexicon.ratings_[ToLower(Trim(row[word_col]))] = rating;
  }
  if (lexicon.ratings_.empty()) {
    throw Error(ErrorCode::kEmptyLexicon, path.string() + " has no valid rows");
  }
  return lexicon;
}

ConcretenessLexicon ConcretenessLexicon::FromEntries(
    const std::vector<std::pair<std::string, double>>& entries) {
  ConcretenessLexicon lexicon;
  for (const auto& [word, rating] : entries) {
    if (rating < 1.0 || rating > 5.0) {
      throw Error(ErrorCode::kMalformedRow, "rating out of [1, 5] for '" + word + "'");
    }
    lexicon.ratings_[ToLower(word)] = rating;
  }
  return lexicon;
}

std::optional<double> ConcretenessLexicon::lookup(std::string_view lemma) const {
  const auto it = ratings_.find(ToLower(lemma));
  if (it == ratings_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> LemmaCandidates(std::string_view w) {
  std::vector<std::string> out;
  const auto add = [&](std::string s) {
    if (!s.empty() && std::find(out.begin(), out.end(), s) == out.end()) {
      out.push_back(std::move(s));
    }
  };
  const std::string word(w);
  add(word);
  const std::size_t n = word.size();
  if (n > 3 && EndsWith(word, "s") && !EndsWith(word, "ss")) {
    add(word.substr(0, n - 1));
  }
  if (n > 4 && EndsWith(word, "ies")) add(word.substr(0, n - 3) + "y");
  if (n > 3 && EndsWith(word, "es")) add(word.substr(0, n - 2));
  // Undoubling: "stopped" -> "stopp" -> "stop".
  const auto strip_with_repair = [&](std::size_t suffix_len) {
    if (n <= suffix_len + 1) return;
    const std::string stem = word.substr(0, n - suffix_len);
    add(stem);
    add(stem + "e");
    const std::size_t m = stem.size();
    if (m >= 3 && stem[m - 1] == stem[m - 2] && !IsVowel(stem[m - 1])) {
      add(stem.substr(0, m - 1));
    }
  };
  if (EndsWith(word, "ed")) {
    if (n > 4 && EndsWith(word, "ied")) add(word.substr(0, n - 3) + "y");
    strip_with_repair(2);
  }
  if (EndsWith(word, "ing")) strip_with_repair(3);
  return out;
}

std::optional<std::pair<std::string, double>> ConcretenessLexicon::resolve(
    std::string_view word) const {
  for (auto& candidate : LemmaCandidates(ToLower(word))) {
    const auto it = ratings_.find(candidate);
    if (it != ratings_.end()) return std::make_pair(std::move(candidate), it->second);
  }
  return std::nullopt;
}

// --- Tokenizer -----------------------------------------------------------

namespace {

enum class CharClass { kSpace, kLetter, kDigit, kPunct };

struct Glyph {
  std::string text;  // ASCII-folded where a folding exists.
  CharClass cls;
};

std::vector<Glyph> Decode(std::string_view s) {
  std::vector<Glyph> glyphs;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = c;
    if (c >= 0xF0 && i + 3 < s.size()) {
      len = 4;
      cp = ((c & 0x07u) << 18) | ((s[i + 1] & 0x3Fu) << 12) | ((s[i + 2] & 0x3Fu) << 6) |
           (s[i + 3] & 0x3Fu);
    } else if (c >= 0xE0 && i + 2 < s.size()) {
      len = 3;
      cp = ((c & 0x0Fu) << 12) | ((s[i + 1] & 0x3Fu) << 6) | (s[i + 2] & 0x3Fu);
    } else if (c >= 0xC0 && i + 1 < s.size()) {
      len = 2;
      cp = ((c & 0x1Fu) << 6) | (s[i + 1] & 0x3Fu);
    }
    std::string raw(s.substr(i, len));
    i += len;
    if (cp < 0x80) {
      const char a = static_cast<char>(cp);
      CharClass cls = CharClass::kPunct;
      if (std::isspace(static_cast<unsigned char>(a))) cls = CharClass::kSpace;
      else if (IsAsciiAlpha(a)) cls = CharClass::kLetter;
      else if (IsAsciiDigit(a)) cls = CharClass::kDigit;
      glyphs.push_back({std::move(raw), cls});
      continue;
    }
    if (cp == 0x2018 || cp == 0x2019 || cp == 0x02BC) {
      glyphs.push_back({"'", CharClass::kPunct});
    } else if (cp == 0x201C || cp == 0x201D) {
      glyphs.push_back({"\"", CharClass::kPunct});
    } else if (cp == 0x2013 || cp == 0x2014) {
      glyphs.push_back({"-", CharClass::kPunct});
    } else if (cp == 0x2026) {
      glyphs.push_back({"...", CharClass::kPunct});
    } else if (cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200B) || cp == 0x3000) {
      glyphs.push_back({" ", CharClass::kSpace});
    } else if (cp >= 0xC0 && cp != 0xD7 && cp != 0xF7 &&
               !(cp >= 0x2000 && cp <= 0x2BFF) && !(cp >= 0x3000 && cp <= 0x303F) &&
               !(cp >= 0xFE00 && cp <= 0xFE0F) && cp < 0x1F000) {
      glyphs.push_back({std::move(raw), CharClass::kLetter});
    } else {
      glyphs.push_back({std::move(raw), CharClass::kPunct});
    }
  }
  return glyphs;
}

bool IsAlnum(const Glyph& g) {
  return g.cls == CharClass::kLetter || g.cls == CharClass::kDigit;
}

void EmitWord(std::string word, bool has_digit, std::vector<RawToken>& out) {
  if (has_digit) {
    out.push_back({std::move(word), RawTokenKind::kNumber});
    return;
  }
  const std::string lower = ToLower(word);
  std::size_t clitic = 0;
  if (lower.size() > 3 && EndsWith(lower, "n't")) {
    clitic = 3;
  } else if (lower.size() > 3 &&
             (EndsWith(lower, "'ll") || EndsWith(lower, "'ve") || EndsWith(lower, "'re"))) {
    clitic = 3;
  } else if (lower.size() > 2 &&
             (EndsWith(lower, "'s") || EndsWith(lower, "'m") || EndsWith(lower, "'d"))) {
    clitic = 2;
  }
  if (clitic == 0) {
    out.push_back({std::move(word), RawTokenKind::kWord});
    return;
  }
  out.push_back({word.substr(0, word.size() - clitic), RawTokenKind::kWord});
  out.push_back({word.substr(word.size() - clitic), RawTokenKind::kWord});
}

}  // namespace

std::vector<RawToken> Tokenize(std::string_view text) {
  const std::vector<Glyph> g = Decode(text);
  std::vector<RawToken> out;
  std::size_t i = 0;
  while (i < g.size()) {
    if (g[i].cls == CharClass::kSpace) {
      ++i;
      continue;
    }
    if (IsAlnum(g[i])) {
      std::string word;
      bool has_digit = false;
      while (i < g.size()) {
        if (IsAlnum(g[i])) {
          has_digit |= g[i].cls == CharClass::kDigit;
          word += g[i].text;
          ++i;
          continue;
        }
        const bool joiner = g[i].text == "-" || g[i].text == "'";
        const bool numeric_sep = (g[i].text == "." || g[i].text == ",") &&
                                 g[i - 1].cls == CharClass::kDigit;
        if ((joiner || numeric_sep) && i + 1 < g.size() && IsAlnum(g[i + 1]) &&
            (!numeric_sep || g[i + 1].cls == CharClass::kDigit)) {
          word += g[i].text;
          ++i;
          continue;
        }
        break;
      }
      EmitWord(std::move(word), has_digit, out);
      continue;
    }
    std::string punct = g[i].text;
    ++i;
    if (punct == ".") {
      while (i < g.size() && g[i].text == ".") {
        punct += ".";
        ++i;
      }
    }
    out.push_back({std::move(punct), RawTokenKind::kPunct});
  }
  return out;
}

// --- Brill tagger ----------------------------------------------------------

namespace {

std::vector<std::string> DataLines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (StartsWith(line, ";;;") || Trim(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> Fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

bool IsLexicalCommand(std::string_view c) {
  static const std::unordered_set<std::string_view> kCommands = {
      "char",     "haspref",   "hassuf",    "addpref", "addsuf",
      "deletepref", "deletesuf", "goodleft", "goodright"};
  return kCommands.contains(c);
}

// Python's str.istitle() restricted to ASCII case.
bool IsTitle(std::string_view w) {
  bool cased_seen = false;
  bool prev_cased = false;
  for (char c : w) {
    const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    const bool lower = std::islower(static_cast<unsigned char>(c)) != 0;
    if (upper) {
      if (prev_cased) return false;
      prev_cased = cased_seen = true;
    } else if (lower) {
      if (!prev_cased) return false;
      prev_cased = cased_seen = true;
    } else {
      prev_cased = false;
    }
  }
  return cased_seen;
}

bool IsCardinal(std::string_view w) {
  if (w.empty()) return false;
  return std::all_of(w.begin(), w.end(), [](char c) {
    return IsAsciiDigit(c) || c == '-' || c == ',' || c == '.' || c == ':' || c == '/' ||
           c == '%' || c == '$';
  });
}

}  // namespace

BrillTagger BrillTagger::Load(const std::filesystem::path& lexicon,
                              const std::filesystem::path& lexical_rules,
                              const std::filesystem::path& context_rules) {
  BrillTagger tagger;
  for (const auto& line : DataLines(lexicon)) {
    const auto f = Fields(line);
    if (f.size() < 2) continue;
    // Ambiguous entries ("NN|JJ") keep their first reading.
    tagger.lexicon_.emplace(f[0], f[1].substr(0, f[1].find('|')));
  }
  for (const auto& line : DataLines(lexical_rules)) {
    const auto f = Fields(line);
    if (f.size() < 4) continue;
    LexicalRule rule;
    if (IsLexicalCommand(f[1])) {
      rule.affix = f[0];
      rule.command = f[1];
    } else if (f[2].size() > 1 && f[2][0] == 'f' && IsLexicalCommand(f[2].substr(1))) {
      rule.from_tag = f[0];
      rule.affix = f[1];
      rule.command = f[2].substr(1);
    } else {
      continue;
    }
    rule.to_tag = f[f.size() - 2];
    tagger.lexical_rules_.push_back(std::move(rule));
  }
  for (const auto& line : DataLines(context_rules)) {
    const auto f = Fields(line);
    if (f.size() < 4) continue;
    ContextRule rule{f[0], f[1], ToLower(f[2]), f[3], f.size() > 4 ? f[4] : ""};
    tagger.context_rules_.push_back(std::move(rule));
  }
  if (tagger.lexicon_.empty()) {
    throw Error(ErrorCode::kParse, "empty tagger lexicon " + lexicon.string());
  }
  return tagger;
}

BrillTagger BrillTagger::LoadDirectory(const std::filesystem::path& dir) {
  return Load(dir / "brill-lexicon.txt", dir / "brill-morphology.txt",
              dir / "brill-context.txt");
}

const std::string* BrillTagger::Find(const std::string& word) const {
  const auto it = lexicon_.find(word);
  return it == lexicon_.end() ? nullptr : &it->second;
}

std::string BrillTagger::TagUnknown(const std::string& w, const std::string* prev,
                                    const std::string* next) const {
  if (IsTitle(w)) return "NNP";
  if (IsCardinal(w)) return "CD";
  std::string tag = "NN";
  for (const auto& r : lexical_rules_) {
    if (r.from_tag && *r.from_tag != tag) continue;
    const std::string& x = r.affix;
    const std::string_view c = r.command;
    bool hit = false;
    if (c == "char") {
      hit = w.find(x) != std::string::npos;
    } else if (c == "haspref") {
      hit = StartsWith(w, x);
    } else if (c == "hassuf") {
      hit = EndsWith(w, x);
    } else if (c == "addpref") {
      hit = Find(x + w) != nullptr;
    } else if (c == "addsuf") {
      hit = Find(w + x) != nullptr;
    } else if (c == "deletepref") {
      hit = StartsWith(w, x) && Find(w.substr(x.size())) != nullptr;
    } else if (c == "deletesuf") {
      hit = EndsWith(w, x) && Find(w.substr(0, w.size() - x.size())) != nullptr;
    } else if (c == "goodleft") {
      hit = next != nullptr && *next == x;
    } else if (c == "goodright") {
      hit = prev != nullptr && *prev == x;
    }
    if (hit) tag = r.to_tag;
  }
  return tag;
}

void BrillTagger::ApplyContext(std::vector<std::string>& words,
                               std::vector<std::string>& tags) const {
  static const std::string kPad = "STAART";
  const auto n = static_cast<std::ptrdiff_t>(words.size());
  const auto word = [&](std::ptrdiff_t i) -> const std::string& {
    return (i < 0 || i >= n) ? kPad : words[static_cast<std::size_t>(i)];
  };
  const auto tag = [&](std::ptrdiff_t i) -> const std::string& {
    return (i < 0 || i >= n) ? kPad : tags[static_cast<std::size_t>(i)];
  };
  for (const auto& r : context_rules_) {
    const std::string& x = r.x;
    const std::string& y = r.y;
    const std::string_view c = r.command;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (r.from_tag != "*" && tags[static_cast<std::size_t>(i)] != r.from_tag) continue;
      bool hit = false;
      if (c == "prevtag") hit = x == tag(i - 1);
      else if (c == "nexttag") hit = x == tag(i + 1);
      else if (c == "prev2tag") hit = x == tag(i - 2);
      else if (c == "next2tag") hit = x == tag(i + 2);
      else if (c == "prev1or2tag") hit = x == tag(i - 1) || x == tag(i - 2);
      else if (c == "next1or2tag") hit = x == tag(i + 1) || x == tag(i + 2);
      else if (c == "prev1or2or3tag") hit = x == tag(i - 1) || x == tag(i - 2) || x == tag(i - 3);
      else if (c == "next1or2or3tag") hit = x == tag(i + 1) || x == tag(i + 2) || x == tag(i + 3);
      else if (c == "surroundtag") hit = x == tag(i - 1) && y == tag(i + 1);
      else if (c == "curwd") hit = x == word(i);
      else if (c == "prevwd") hit = x == word(i - 1);
      else if (c == "nextwd") hit = x == word(i + 1);
      else if (c == "prev1or2wd") hit = x == word(i - 1) || x == word(i - 2);
      else if (c == "next1or2wd") hit = x == word(i + 1) || x == word(i + 2);
      else if (c == "prev1or2or3wd") hit = x == word(i - 1) || x == word(i - 2) || x == word(i - 3);
      else if (c == "next1or2or3wd") hit = x == word(i + 1) || x == word(i + 2) || x == word(i + 3);
      else if (c == "prevwdtag") hit = x == word(i - 1) && y == tag(i - 1);
      else if (c == "nextwdtag") hit = x == word(i + 1) && y == tag(i + 1);
      else if (c == "wdprevtag") hit = x == tag(i - 1) && y == word(i);
      else if (c == "wdnexttag") hit = x == word(i) && y == tag(i + 1);
      else if (c == "wdand2aft") hit = x == word(i) && y == word(i + 2);
      else if (c == "wdand2tagbfr") hit = x == tag(i - 2) && y == word(i);
      else if (c == "wdand2tagaft") hit = x == word(i) && y == tag(i + 2);
      else if (c == "lbigram") hit = x == word(i - 1) && y == word(i);
      else if (c == "rbigram") hit = x == word(i) && y == word(i + 1);
      else if (c == "prevbigram") hit = x == tag(i - 2) && y == tag(i - 1);
      else if (c == "nextbigram") hit = x == tag(i + 1) && y == tag(i + 2);
      if (hit) tags[static_cast<std::size_t>(i)] = r.to_tag;
    }
  }
}

std::vector<std::string> BrillTagger::Tag(const std::vector<std::string>& tokens) const {
  std::vector<std::string> words = tokens;
  std::vector<std::string> tags(words.size());
  std::vector<bool> known(words.size(), false);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string* t = Find(words[i]);
    if (t == nullptr && i == 0) t = Find(ToLower(words[i]));
    if (t != nullptr) {
      tags[i] = *t;
      known[i] = true;
    }
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    // Digit strings are numbers even where the lexicon knows a chat reading
    // ("4" as "for").
    if (!words[i].empty() && IsCardinal(words[i]) &&
        std::any_of(words[i].begin(), words[i].end(), IsAsciiDigit)) {
      tags[i] = "CD";
      continue;
    }
    if (known[i]) continue;
    const std::string* prev = i > 0 ? &words[i - 1] : nullptr;
    const std::string* next = i + 1 < words.size() ? &words[i + 1] : nullptr;
    tags[i] = TagUnknown(words[i], prev, next);
  }
  const std::vector<std::string> initial = tags;
  ApplyContext(words, tags);
  RestoreDestinationNouns(words, initial, tags);
  ApplyAdjectivalParticiples(words, tags);
  return tags;
}

void RestoreDestinationNouns(const std::vector<std::string>& words,
                             const std::vector<std::string>& initial,
                             std::vector<std::string>& tags) {
  static const std::unordered_set<std::string_view> kMotion = {
      "go",     "goes",     "going",  "went",    "gone",    "come",   "comes",
      "coming", "came",     "walk",   "walked",  "walking", "drive",  "drove",
      "driving", "head",    "headed", "heading", "move",    "moved",  "moving",
      "return", "returned", "returning", "travel", "traveled", "travelled",
      "traveling", "fly",   "flew",   "flying",  "run",     "ran",    "running",
      "back",   "way",      "trip",   "off"};
  for (std::size_t i = 2; i < words.size(); ++i) {
    if (tags[i] != "VB" || (initial[i] != "NN" && initial[i] != "NNS")) continue;
    if (ToLower(words[i - 1]) != "to") continue;
    if (kMotion.contains(ToLower(words[i - 2]))) tags[i] = initial[i];
  }
}

void ApplyAdjectivalParticiples(const std::vector<std::string>& words,
                                std::vector<std::string>& tags) {
  static const std::unordered_set<std::string_view> kLinking = {
      "be",     "am",     "is",      "are",    "was",     "were",   "been",
      "being",  "'m",     "'re",     "feel",   "feels",   "felt",   "feeling",
      "seem",   "seems",  "seemed",  "look",   "looks",   "looked", "become",
      "became", "becomes", "appear", "appears", "appeared"};
  static const std::unordered_set<std::string_view> kDegree = {
      "so",         "very",     "too",        "really",   "quite",  "extremely",
      "pretty",     "totally",  "completely", "super",    "incredibly",
      "absolutely", "rather",   "somewhat",   "fairly",   "utterly", "truly",
      "deeply",     "terribly", "less",       "more",     "most",   "least"};
  if (words.size() == 1) {
    if (tags[0] == "VBN") tags[0] = "JJ";
    return;
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (tags[i] != "VBN" && tags[i] != "VBD") continue;
    if (i + 1 < words.size() && ToLower(words[i + 1]) == "by") continue;
    bool adjectival = false;
    // Walk back over adverbs ("was so very tired") to the governing word.
    std::size_t j = i;
    while (j > 0) {
      --j;
      const std::string w = ToLower(words[j]);
      if (kDegree.contains(w)) {
        adjectival = true;
        break;
      }
      if (kLinking.contains(w) || (w == "'s" && tags[j] == "VBZ")) {
        adjectival = true;
        break;
      }
      if (tags[j] == "RB" || w == "n't") continue;
      break;
    }
    // A VBD here is a participle mis-read as past tense ("he was broke").
    if (adjectival) tags[i] = "JJ";
  }
}

std::filesystem::path DataDir() {
  if (const char* env = std::getenv("REPROMPT_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return PROMPTEDIT_DATA_DIR;
}

std::shared_ptr<const Tagger> DefaultTagger() {
  static const std::shared_ptr<const Tagger> tagger =
      std::make_shared<BrillTagger>(BrillTagger::LoadDirectory(DataDir() / "tagger"));
  return tagger;
}

namespace {

bool IsSentenceEnd(const RawToken& t) {
  return t.kind == RawTokenKind::kPunct &&
         (t.text == "." || t.text == "!" || t.text == "?" || t.text == "...");
}

}  // namespace

TaggedText Tag(std::string_view text, const ConcretenessLexicon& lexicon,
               const Tagger& tagger) {
  if (Trim(text).empty()) throw Error(ErrorCode::kEmptyText, "text is empty");
  TaggedText tagged;
  tagged.source = std::string(text);
  const std::vector<RawToken> raw = Tokenize(text);

  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t end = start;
    while (end < raw.size() && !IsSentenceEnd(raw[end])) ++end;
    // Trailing sentence punctuation belongs to the sentence.
    while (end < raw.size() && IsSentenceEnd(raw[end])) ++end;
    std::vector<std::string> words;
    for (std::size_t i = start; i < end; ++i) words.push_back(raw[i].text);
    const std::vector<std::string> tags = tagger.Tag(words);
    for (std::size_t i = start; i < end; ++i) {
      const RawToken& rt = raw[i];
      if (rt.kind == RawTokenKind::kPunct) continue;
      Token token;
      token.surface = rt.text;
      token.fine_tag = tags[i - start];
      token.index = tagged.tokens.size();
      if (rt.kind == RawTokenKind::kNumber) {
        token.lemma = rt.text;
        token.pos = PosBucket::kOther;
      } else {
        token.pos = BucketFor(token.fine_tag, rt.text);
        if (auto hit = lexicon.resolve(rt.text)) {
          token.lemma = std::move(hit->first);
          token.concreteness = hit->second;
        } else {
          token.lemma = ToLower(rt.text);
        }
      }
      tagged.tokens.push_back(std::move(token));
    }
    start = end;
  }
  return tagged;
}

TaggedText Tag(std::string_view text, const ConcretenessLexicon& lexicon) {
  return Tag(text, lexicon, *DefaultTagger());
}

PosBucket TagStandalone(std::string_view word, const Tagger& tagger) {
  const std::vector<std::string> tokens = {std::string(word)};
  const auto tags = tagger.Tag(tokens);
  return BucketFor(tags.front(), word);
}

// --- Spellcheck ------------------------------------------------------------

WordList WordList::Load(const std::filesystem::path& path) {
  std::unordered_set<std::string> words;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (StartsWith(line, ";;;")) continue;
    std::istringstream fields(line);
    std::string word;
    if (fields >> word) words.insert(ToLower(word));
  }
  return WordList(std::move(words));
}

bool WordList::contains(std::string_view lowercase_word) const {
  return words_.contains(std::string(lowercase_word));
}

namespace {

bool IsEdgePunct(char c) {
  return std::string_view(".,!?;:\"()[]{}'`").find(c) != std::string_view::npos;
}

bool KnownWord(const std::string& w, const ConcretenessLexicon& lexicon,
               const WordList& wordlist) {
  if (w.empty()) return false;
  if (wordlist.contains(w) || lexicon.contains(w)) return true;
  // Inflections of known words ("years", "invited").
  for (const auto& candidate : LemmaCandidates(w)) {
    if (wordlist.contains(candidate) || lexicon.contains(candidate)) return true;
  }
  return false;
}

bool KnownChunk(const std::string& lower, const ConcretenessLexicon& lexicon,
                const WordList& wordlist) {
  if (KnownWord(lower, lexicon, wordlist)) return true;
  if (lower.find('-') != std::string::npos) {
    const auto parts = Split(lower, '-');
    return std::all_of(parts.begin(), parts.end(), [&](const std::string& p) {
      return KnownChunk(p, lexicon, wordlist);
    });
  }
  const std::size_t apos = lower.find('\'');
  if (apos != std::string::npos && apos > 0) {
    static const std::unordered_set<std::string_view> kClitics = {"s", "t", "ve", "re",
                                                                  "m", "ll", "d"};
    const std::string base = lower.substr(0, apos);
    const std::string clitic = lower.substr(apos + 1);
    if (!kClitics.contains(clitic)) return false;
    if (clitic == "t" && EndsWith(base, "n")) {
      // "didn't" -> "did", "can't" -> "can", "won't" -> "will".
      const std::string stem = base.substr(0, base.size() - 1);
      return KnownWord(stem, lexicon, wordlist) || KnownWord(base, lexicon, wordlist) ||
             base == "won";
    }
    return KnownWord(base, lexicon, wordlist);
  }
  return false;
}

}  // namespace

std::vector<std::string> Spellcheck(std::string_view text,
                                    const ConcretenessLexicon& lexicon,
                                    const WordList& wordlist) {
  std::vector<std::string> flagged;
  std::istringstream in{std::string(text)};
  std::string chunk;
  while (in >> chunk) {
    std::string_view core = chunk;
    while (!core.empty() && IsEdgePunct(core.front())) core.remove_prefix(1);
    while (!core.empty() && IsEdgePunct(core.back())) core.remove_suffix(1);
    if (core.empty()) continue;
    std::string normalized;
    // Fold typographic apostrophes before lookup.
    for (std::size_t i = 0; i < core.size(); ++i) {
      if (core.substr(i, 3) == "\xE2\x80\x99") {
        normalized += '\'';
        i += 2;
      } else {
        normalized += core[i];
      }
    }
    if (IsCardinal(normalized)) continue;
    const std::string lower = ToLower(normalized);
    const bool alphabetic = std::all_of(lower.begin(), lower.end(), [](char c) {
      return IsAsciiAlpha(c) || c == '-' || c == '\'' || static_cast<unsigned char>(c) >= 0x80;
    });
    if (!alphabetic || !KnownChunk(lower, lexicon, wordlist)) flagged.push_back(chunk);
  }
  return flagged;
}

}  // namespace promptedit
