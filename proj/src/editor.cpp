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

#include "promptedit/editor.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "promptedit/emotions.hpp"
#include "promptedit/strings.hpp"

namespace promptedit {

namespace {

bool IsContent(PosBucket b) {
  return b == PosBucket::kNoun || b == PosBucket::kVerb || b == PosBucket::kAdj;
}

struct Survivor {
  Token token;
  std::size_t content_index;
};

FeatureVector SurvivorFeatures(const std::vector<Survivor>& survivors) {
  std::vector<Token> tokens;
  tokens.reserve(survivors.size());
  for (const auto& s : survivors) tokens.push_back(s.token);
  return ExtractTokens(tokens);
}

void CheckDeps(const EditorDeps& deps) {
  if (!deps.tagger || !deps.lexicon || !deps.embedder || !deps.related) {
    throw Error(ErrorCode::kInvalidArgument, "editor dependencies are incomplete");
  }
}

void ApplyReduce(const Rule& rule, const std::vector<ContentWord>& content,
                 std::vector<Survivor>& survivors, EditTrace& trace) {
  const PosBucket bucket = rule.action.bucket;
  const auto floor = static_cast<std::size_t>(std::max(rule.action.target, 1));
  bool fired = false;
  while (rule.Fires(SurvivorFeatures(survivors))) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
      if (survivors[i].token.pos == bucket) members.push_back(i);
    }
    if (members.size() <= floor) break;
    // Least salient goes first; on a tie the later word goes.
    std::size_t victim = members.front();
    for (std::size_t m : members) {
      const auto& a = content[survivors[m].content_index];
      const auto& v = content[survivors[victim].content_index];
      if (a.saliency < v.saliency || (a.saliency == v.saliency && a.index > v.index)) victim = m;
    }
    const auto& cw = content[survivors[victim].content_index];
    trace.removed.push_back({cw.word, cw.pos, rule.id, cw.index});
    survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(victim));
    fired = true;
  }
  if (fired) trace.fired_rules.push_back(rule.id);
}

void ApplyAdd(const Rule& rule, std::string_view text, const std::vector<ContentWord>& content,
              const std::vector<Survivor>& survivors, const EditorDeps& deps, EditTrace& trace) {
  if (!rule.Fires(SurvivorFeatures(survivors))) return;
  trace.fired_rules.push_back(rule.id);

  // Seeds: the three most salient surviving words.
  std::vector<const ContentWord*> ranked;
  for (const auto& s : survivors) ranked.push_back(&content[s.content_index]);
  std::stable_sort(ranked.begin(), ranked.end(), [](const ContentWord* a, const ContentWord* b) {
    if (a->saliency != b->saliency) return a->saliency > b->saliency;
    return a->index < b->index;
  });
  std::vector<std::string> seeds;
  for (const auto* cw : ranked) {
    if (seeds.size() == 3) break;
    if (std::find(seeds.begin(), seeds.end(), cw->word) == seeds.end()) seeds.push_back(cw->word);
  }
  std::vector<Neighbor> pooled;
  for (const auto& seed : seeds) {
    trace.retrieval_seeds.push_back(seed);
    RelatedWordsResult r;
    try {
      r = deps.related->Related(seed, deps.related_limit);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInvalidArgument) throw;
      trace.warnings.push_back("skipped retrieval seed '" + seed + "'");
      continue;
    }
    pooled.insert(pooled.end(), r.neighbors.begin(), r.neighbors.end());
  }
  pooled = NormalizeNeighbors(std::move(pooled), -1);
  trace.retrieved.insert(trace.retrieved.end(), pooled.begin(), pooled.end());

  std::unordered_set<std::string> taken = {trace.emotion};
  for (const auto& cw : content) {
    taken.insert(cw.word);
    taken.insert(cw.lemma);
  }
  for (const auto& a : trace.added) taken.insert(a.word);
  RelatedWordsResult pool{"", pooled, RelatedSource::kFixture};
  std::vector<FilteredWord> candidates;
  for (auto& fw : FilterByPos(pool, PosBucket::kAdj, *deps.lexicon, *deps.tagger)) {
    if (!fw.concreteness || !(*fw.concreteness > rule.action.min_concreteness)) continue;
    const auto hit = deps.lexicon->resolve(fw.word);
    if (taken.count(fw.word) || (hit && taken.count(hit->first))) continue;
    candidates.push_back(std::move(fw));
  }
  for (const auto& c : candidates) trace.adjective_candidates.push_back(c.word);
  if (candidates.empty()) {
    if (rule.action.count > 0) trace.warnings.push_back("no qualifying adjectives for " + rule.id);
    return;
  }
  std::vector<std::string> words;
  for (const auto& c : candidates) words.push_back(c.word);
  const auto ranking = WordSaliency(*deps.embedder, text, trace.emotion, words);
  // Ranking ties fall back to candidate order: weight, then word.
  std::size_t added = 0;
  for (const auto& e : ranking.entries) {
    if (added == static_cast<std::size_t>(rule.action.count)) break;
    const auto& c = candidates[e.index];
    trace.added.push_back({c.word, e.score, *c.concreteness, c.weight});
    ++added;
  }
  if (added < static_cast<std::size_t>(rule.action.count)) {
    trace.warnings.push_back("only " + std::to_string(added) + " of " +
                             std::to_string(rule.action.count) + " adjectives qualified for " +
                             rule.id);
  }
}

std::string Assemble(const std::vector<std::string>& kept, const std::vector<AddedWord>& added,
                     const std::string& emotion) {
  std::vector<std::string> parts = kept;
  for (const auto& a : added) parts.push_back(a.word);
  parts.push_back(emotion);
  return Join(parts, ", ");
}

}  // namespace

EditedPrompt Edit(std::string_view text, std::string_view emotion_in, const Rubric& rubric,
                  const EditorDeps& deps) {
  CheckDeps(deps);
  rubric.Validate();
  if (Trim(text).empty()) throw Error(ErrorCode::kEmptyText, "prompt text is empty");
  const std::string emotion = ToLower(Trim(emotion_in));
  const auto& allowed = deps.emotions ? *deps.emotions : DefaultEmotionSet();
  if (emotion.empty() || !allowed.count(emotion)) {
    throw Error(ErrorCode::kUnknownEmotion, "'" + std::string(emotion_in) + "'");
  }

  EditTrace trace;
  trace.original = std::string(text);
  trace.emotion = emotion;
  trace.rubric_version = rubric.version;

  // (A) content words and their saliency.
  const TaggedText tagged = Tag(text, *deps.lexicon, *deps.tagger);
  std::vector<Survivor> survivors;
  std::vector<std::string> words;
  for (const auto& tok : tagged.tokens) {
    if (!IsContent(tok.pos)) continue;
    ContentWord cw;
    cw.word = ToLower(tok.surface);
    cw.lemma = tok.lemma;
    cw.pos = tok.pos;
    cw.concreteness = tok.concreteness;
    cw.index = trace.content_words.size();
    words.push_back(cw.word);
    survivors.push_back({tok, cw.index});
    trace.content_words.push_back(std::move(cw));
  }
  trace.reference_text = SaliencyReference(text, emotion);
  if (!words.empty()) {
    const auto ranking = WordSaliency(*deps.embedder, text, emotion, words);
    for (const auto& e : ranking.entries) trace.content_words[e.index].saliency = e.score;
  }

  // Reductions first, then additions, then the label.
  for (const auto& rule : rubric.rules) {
    if (rule.action.kind == ActionKind::kReduceTo) {
      ApplyReduce(rule, trace.content_words, survivors, trace);
    }
  }
  for (const auto& rule : rubric.rules) {
    if (rule.action.kind == ActionKind::kAddAdjectives) {
      ApplyAdd(rule, text, trace.content_words, survivors, deps, trace);
    }
  }
  trace.fired_rules.push_back(rubric.rules.back().id);

  std::vector<std::string> kept;
  for (const auto& s : survivors) kept.push_back(trace.content_words[s.content_index].word);
  if (kept.empty() && trace.added.empty()) {
    trace.warnings.push_back("no content words survived; output is the label alone");
  }
  trace.final_prompt = Assemble(kept, trace.added, emotion);
  return {trace.final_prompt, std::move(trace)};
}

std::vector<BatchItem> EditBatch(const std::vector<PromptRecord>& prompts, const Rubric& rubric,
                                 const EditorDeps& deps, std::size_t parallelism) {
  std::unordered_set<std::string> ids;
  for (const auto& p : prompts) {
    if (!ids.insert(p.id).second) throw Error(ErrorCode::kDuplicateId, "id '" + p.id + "'");
  }
  std::vector<BatchItem> out(prompts.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < prompts.size(); i = next++) {
      auto& item = out[i];
      item.id = prompts[i].id;
      try {
        item.result = Edit(prompts[i].text, prompts[i].emotion, rubric, deps);
      } catch (const Error& e) {
        item.error_code = e.code();
        item.error = e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(prompts.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

std::string LabelAppend(std::string_view text, std::string_view emotion) {
  const auto t = Trim(text);
  std::string label = ToLower(Trim(emotion));
  while (!label.empty() && label.back() == '.') label.pop_back();
  if (t.empty() || label.empty()) throw Error(ErrorCode::kEmptyText, "text and label are required");
  return std::string(t) + " " + label + ".";
}

std::string ReplayTrace(const EditTrace& trace) {
  std::vector<bool> gone(trace.content_words.size(), false);
  for (const auto& r : trace.removed) {
    if (r.index < gone.size()) gone[r.index] = true;
  }
  std::vector<std::string> kept;
  for (const auto& cw : trace.content_words) {
    if (!gone[cw.index]) kept.push_back(cw.word);
  }
  return Assemble(kept, trace.added, trace.emotion);
}

namespace {

nlohmann::ordered_json TraceJson(const EditTrace& t) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["original"] = t.original;
  j["emotion"] = t.emotion;
  j["reference_text"] = t.reference_text;
  auto content = ordered_json::array();
  for (const auto& c : t.content_words) {
    ordered_json cj = {{"word", c.word}, {"lemma", c.lemma}, {"pos", BucketName(c.pos)},
                       {"saliency", c.saliency}, {"index", c.index}};
    cj["concreteness"] = c.concreteness ? ordered_json(*c.concreteness) : ordered_json(nullptr);
    content.push_back(std::move(cj));
  }
  j["content_words"] = std::move(content);
  auto removed = ordered_json::array();
  for (const auto& r : t.removed) {
    removed.push_back({{"word", r.word}, {"pos", BucketName(r.pos)}, {"reason", r.reason},
                       {"index", r.index}});
  }
  j["removed"] = std::move(removed);
  j["retrieval_seeds"] = t.retrieval_seeds;
  auto retrieved = ordered_json::array();
  for (const auto& n : t.retrieved) retrieved.push_back({{"word", n.word}, {"weight", n.weight}});
  j["retrieved"] = std::move(retrieved);
  j["adjective_candidates"] = t.adjective_candidates;
  auto added = ordered_json::array();
  for (const auto& a : t.added) {
    added.push_back({{"word", a.word}, {"saliency", a.saliency},
                     {"concreteness", a.concreteness}, {"weight", a.weight}});
  }
  j["added"] = std::move(added);
  j["fired_rules"] = t.fired_rules;
  j["warnings"] = t.warnings;
  j["final_prompt"] = t.final_prompt;
  j["rubric_version"] = t.rubric_version;
  return j;
}

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string TraceToJson(const EditTrace& trace) { return TraceJson(trace).dump(2) + "\n"; }

std::string EditedToJsonLine(std::string_view id, const EditedPrompt& edited) {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["emotion"] = edited.trace.emotion;
  j["original"] = edited.trace.original;
  j["edited"] = edited.text;
  j["trace"] = TraceJson(edited.trace);
  return j.dump() + "\n";
}

std::string FormatTrace(const EditTrace& t) {
  std::string s;
  s += "input:     " + t.original + "\n";
  s += "emotion:   " + t.emotion + "\n";
  s += "reference: " + t.reference_text + "\n\n";
  s += "A  content words (saliency)\n";
  for (const auto& c : t.content_words) {
    s += "   " + c.word + "  " + std::string(BucketName(c.pos)) + "  " + Fixed(c.saliency) + "\n";
  }
  s += "\n   removed\n";
  if (t.removed.empty()) s += "   (none)\n";
  for (const auto& r : t.removed) {
    s += "   " + r.word + "  " + std::string(BucketName(r.pos)) + "  by " + r.reason + "\n";
  }
  s += "\nB  retrieval seeds: " + (t.retrieval_seeds.empty() ? "(none)" : Join(t.retrieval_seeds, ", ")) + "\n";
  std::vector<std::string> got;
  for (const auto& n : t.retrieved) got.push_back(n.word + " " + Fixed(n.weight, 3));
  s += "   retrieved: " + (got.empty() ? "(none)" : Join(got, ", ")) + "\n";
  s += "\nC  adjective candidates: " +
       (t.adjective_candidates.empty() ? "(none)" : Join(t.adjective_candidates, ", ")) + "\n";
  for (const auto& a : t.added) {
    s += "   added " + a.word + "  saliency " + Fixed(a.saliency) + "  concreteness " +
         Fixed(a.concreteness, 2) + "\n";
  }
  s += "\nD  " + t.final_prompt + "\n";
  for (const auto& w : t.warnings) s += "warning: " + w + "\n";
  return s;
}

}  // namespace promptedit
