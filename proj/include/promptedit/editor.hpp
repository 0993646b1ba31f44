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

#ifndef PROMPTEDIT_EDITOR_HPP_
#define PROMPTEDIT_EDITOR_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "promptedit/embedding.hpp"
#include "promptedit/error.hpp"
#include "promptedit/explain.hpp"
#include "promptedit/features.hpp"
#include "promptedit/related_words.hpp"
#include "promptedit/text_analysis.hpp"

namespace promptedit {

struct ContentWord {
  std::string word;  // lowercased surface form
  std::string lemma;
  PosBucket pos = PosBucket::kNoun;
  double saliency = 0.0;
  std::optional<double> concreteness;
  std::size_t index = 0;  // position among the content words
};

struct RemovedWord {
  std::string word;
  PosBucket pos = PosBucket::kNoun;
  std::string reason;  // id of the rule that removed it
  std::size_t index = 0;
};

struct AddedWord {
  std::string word;
  double saliency = 0.0;
  double concreteness = 0.0;
  double weight = 0.0;  // retrieval weight
};

struct EditTrace {
  std::string original;
  std::string emotion;  // lowercased
  std::string reference_text;
  std::vector<ContentWord> content_words;
  std::vector<RemovedWord> removed;
  std::vector<std::string> retrieval_seeds;
  std::vector<Neighbor> retrieved;  // pooled across seeds
  std::vector<std::string> adjective_candidates;
  std::vector<AddedWord> added;
  std::vector<std::string> fired_rules;
  std::vector<std::string> warnings;
  std::string final_prompt;
  std::string rubric_version;
};

struct EditedPrompt {
  std::string text;
  EditTrace trace;
};

// Everything Edit needs besides its input. Pointers are borrowed.
struct EditorDeps {
  const Tagger* tagger = nullptr;
  const ConcretenessLexicon* lexicon = nullptr;
  const Embedder* embedder = nullptr;
  RelatedWordsClient* related = nullptr;
  // Accepted emotion labels (lowercase); null means DefaultEmotionSet().
  const std::set<std::string>* emotions = nullptr;
  int related_limit = 20;
};

// Keeps nouns, verbs and adjectives; applies every REDUCE_TO rule (dropping
// the least salient word of its bucket while the trigger holds, never the
// last one); then every ADD_ADJECTIVES rule (related words of the three most
// salient survivors, filtered to rated adjectives above the concreteness
// bound, most salient first); then joins survivors, additions and the
// emotion label with ", ".
// Throws EmptyText, UnknownEmotion and whatever the dependencies throw.
EditedPrompt Edit(std::string_view text, std::string_view emotion, const Rubric& rubric,
                  const EditorDeps& deps);

struct BatchItem {
  std::string id;
  std::optional<EditedPrompt> result;
  std::optional<ErrorCode> error_code;
  std::string error;
};

// Edits every prompt; a failing prompt records its error and the batch goes
// on. Output order equals input order for any `parallelism`. Throws
// DuplicateId before doing any work.
std::vector<BatchItem> EditBatch(const std::vector<PromptRecord>& prompts, const Rubric& rubric,
                                 const EditorDeps& deps, std::size_t parallelism = 1);

// text + " " + lowercase(emotion) + "."
std::string LabelAppend(std::string_view text, std::string_view emotion);

// Rebuilds the final prompt from a trace's recorded decisions alone.
std::string ReplayTrace(const EditTrace& trace);

std::string TraceToJson(const EditTrace& trace);
// {id, emotion, original, edited, trace} on one line.
std::string EditedToJsonLine(std::string_view id, const EditedPrompt& edited);
// Human-readable, one block per editing step.
std::string FormatTrace(const EditTrace& trace);

}  // namespace promptedit

#endif  // PROMPTEDIT_EDITOR_HPP_
