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

// Command-line front end. Every command is a thin adapter over one library
// operation; randomness flows from --seed only.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "promptedit/editor.hpp"
#include "promptedit/error.hpp"
#include "promptedit/evaluation.hpp"
#include "promptedit/explain.hpp"
#include "promptedit/features.hpp"
#include "promptedit/proxy_model.hpp"
#include "promptedit/strings.hpp"
#include "promptedit/synthetic.hpp"

namespace pe = promptedit;
namespace cli = promptedit::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

void WriteOutput(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::fwrite(data.data(), 1, data.size(), stdout);
    std::fflush(stdout);
  } else {
    pe::WriteFileAtomic(path, data);
  }
}

std::vector<std::string> CommaList(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& part : pe::Split(s, ',')) {
    const auto t = pe::Trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

pe::Rubric LoadRubric(const std::string& path) {
  return path.empty() ? pe::CuratedRubric() : pe::ParseRubric(pe::ReadFile(path));
}

pe::EditorDeps MakeDeps(cli::RuntimeBuilder& rt) {
  pe::EditorDeps deps;
  deps.tagger = &rt.tagger();
  deps.lexicon = &rt.lexicon();
  deps.embedder = &rt.embedder();
  deps.related = &rt.related();
  deps.emotions = &rt.emotions();
  return deps;
}

std::vector<pe::FeatureVector> Background(const pe::FeatureTable& table, std::size_t size,
                                          std::uint64_t seed) {
  return pe::SampleBackground(table.rows, size, seed);
}

const std::vector<std::string> kRubricFeatures = {"count_NOUN", "conc_NOUN", "count_ADJ",
                                                  "conc_ADJ",   "count_VERB", "conc_VERB"};

pe::GridSpec ParseGrid(const std::string& grid, std::size_t points) {
  pe::GridSpec spec;
  spec.points = points;
  if (grid == "auto") return spec;
  if (grid == "observed") {
    spec.kind = pe::GridKind::kObserved;
    return spec;
  }
  spec.kind = pe::GridKind::kExplicit;
  for (const auto& v : CommaList(grid)) {
    double x = 0.0;
    if (!pe::ParseDouble(v, x)) {
      throw pe::Error(pe::ErrorCode::kInvalidArgument, "--grid value '" + v + "' is not a number");
    }
    spec.values.push_back(x);
  }
  return spec;
}

int ExitCodeFor(const pe::Error& e) {
  if (e.is_backend_failure()) return kExitBackend;
  if (e.code() == pe::ErrorCode::kInvalidArgument || e.code() == pe::ErrorCode::kInvalidParams) {
    return kExitUsage;
  }
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"promptedit: word-level prompt features, proxy models, rubric-driven prompt "
               "editing and alignment scoring"};
  app.require_subcommand(1);
  app.fallthrough();

  // Layer of configuration given as flags.
  std::map<std::string, std::string> flag_values;
  std::string config_path;
  app.add_option("--config", config_path, "Config file of key = value lines (env REPROMPT_CONFIG)");
  const std::vector<std::pair<std::string, std::string>> config_flags = {
      {"embed_backend", "Embedding backend: mock or the sidecar base URL"},
      {"embed_dim", "Dimension of the mock backend (default 512)"},
      {"conceptnet", "Related-words source: fixture JSON path or ConceptNet base URL"},
      {"lexicon", "Concreteness TSV with Word and Conc.M columns"},
      {"wordlist", "Spellcheck word list, one word per line"},
      {"cache_dir", "Cache directory for live related-word lookups"},
      {"seed", "Seed for every random choice (default 0)"},
      {"parallelism", "Worker threads for batch editing and embedding requests"},
      {"emotion_set", "Comma-separated accepted emotion labels"}};
  std::map<std::string, CLI::Option*> config_opts;
  for (const auto& [key, help] : config_flags) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    config_opts[key] = app.add_option(flag, flag_values[key], help);
  }

  // features
  auto* c_features = app.add_subcommand("features", "Extract the 20 word-level features");
  std::string f_in, f_out;
  c_features->add_option("--in", f_in, "Prompts as JSON lines {id, emotion, text}")->required();
  c_features->add_option("--out", f_out, "Feature CSV (default stdout)");

  // edit
  auto* c_edit = app.add_subcommand("edit", "Edit one prompt with a rubric");
  std::string e_text, e_emotion, e_rubric;
  bool e_trace = false, e_json = false, e_allow_unknown = false;
  c_edit->add_option("--text", e_text, "Prompt text")->required();
  c_edit->add_option("--emotion", e_emotion, "Emotion label")->required();
  c_edit->add_option("--rubric", e_rubric, "Rubric JSON (default: the curated rubric)");
  c_edit->add_flag("--trace", e_trace, "Print every editing step");
  c_edit->add_flag("--json", e_json, "Print the result and trace as one JSON line");
  c_edit->add_flag("--allow-unknown-words", e_allow_unknown, "Skip the spellcheck gate");

  // edit-batch
  auto* c_batch = app.add_subcommand("edit-batch", "Edit a JSON-lines file of prompts");
  std::string b_in, b_out, b_rubric;
  bool b_allow_unknown = false;
  c_batch->add_option("--in", b_in, "Prompts as JSON lines {id, emotion, text}")->required();
  c_batch->add_option("--out", b_out, "Edited prompts as JSON lines (default stdout)");
  c_batch->add_option("--rubric", b_rubric, "Rubric JSON (default: the curated rubric)");
  c_batch->add_flag("--allow-unknown-words", b_allow_unknown, "Skip the spellcheck gate");

  // train
  auto* c_train = app.add_subcommand("train", "Train the proxy model and cross-validate it");
  std::string t_features, t_scores, t_target = "iea", t_out, t_report;
  pe::TrainParams t_params;
  int t_folds = 5;
  c_train->add_option("--features", t_features, "Feature CSV")->required();
  c_train->add_option("--scores", t_scores, "Score CSV id,emotion,text,iea,ita")->required();
  c_train->add_option("--target", t_target, "iea or ita")->capture_default_str();
  c_train->add_option("--out", t_out, "Model JSON")->required();
  c_train->add_option("--report", t_report, "Cross-validation report JSON (default stdout)");
  c_train->add_option("--trees", t_params.num_trees, "Boosting rounds")->capture_default_str();
  c_train->add_option("--depth", t_params.max_depth, "Maximum tree depth")->capture_default_str();
  c_train->add_option("--learning-rate", t_params.learning_rate, "Shrinkage")->capture_default_str();
  c_train->add_option("--min-leaf", t_params.min_leaf, "Minimum rows per leaf")->capture_default_str();
  c_train->add_option("--subsample", t_params.subsample, "Row fraction per tree")->capture_default_str();
  c_train->add_option("--folds", t_folds, "Cross-validation folds")->capture_default_str();

  // explain
  auto* c_explain = app.add_subcommand("explain", "Shapley attributions and global importance");
  std::string x_model, x_features, x_out, x_importance;
  std::size_t x_background = 200, x_samples = 2000;
  c_explain->add_option("--model", x_model, "Model JSON")->required();
  c_explain->add_option("--features", x_features, "Feature CSV of instances to explain")->required();
  c_explain->add_option("--out", x_out, "Explanations as JSON lines (default stdout)");
  c_explain->add_option("--importance-out", x_importance, "Global importance JSON");
  c_explain->add_option("--background-size", x_background, "Background rows")->capture_default_str();
  c_explain->add_option("--samples", x_samples,
                        "Permutations when the model uses too many features for exact values")
      ->capture_default_str();

  // pdp
  auto* c_pdp = app.add_subcommand("pdp", "Partial dependence curves");
  std::string p_model, p_features, p_out, p_grid = "auto";
  std::vector<std::string> p_names;
  std::size_t p_points = 50, p_background = 200;
  c_pdp->add_option("--model", p_model, "Model JSON")->required();
  c_pdp->add_option("--features", p_features, "Feature CSV used as background")->required();
  c_pdp->add_option("--feature", p_names, "Feature name (repeatable; default the six rubric features)");
  c_pdp->add_option("--grid", p_grid, "auto, observed, or comma-separated values")->capture_default_str();
  c_pdp->add_option("--points", p_points, "Points for concreteness grids")->capture_default_str();
  c_pdp->add_option("--background-size", p_background, "Background rows")->capture_default_str();
  c_pdp->add_option("--out", p_out, "PDP CSV (default stdout)");

  // derive-rubric
  auto* c_derive = app.add_subcommand("derive-rubric", "Propose rubric rules from PDP ranges");
  std::string d_model, d_features, d_out, d_accept;
  std::size_t d_points = 50, d_background = 200;
  int d_add = 3;
  c_derive->add_option("--model", d_model, "Model JSON")->required();
  c_derive->add_option("--features", d_features, "Feature CSV used as background")->required();
  c_derive->add_option("--out", d_out, "Candidates JSON, or the rubric with --accept (default stdout)");
  c_derive->add_option("--accept", d_accept, "Comma-separated candidate ids to adopt as a rubric");
  c_derive->add_option("--add-count", d_add, "Adjectives added by an ADD_ADJECTIVES rule")->capture_default_str();
  c_derive->add_option("--points", d_points, "Points for concreteness grids")->capture_default_str();
  c_derive->add_option("--background-size", d_background, "Background rows")->capture_default_str();

  // curated-rubric
  auto* c_curated = app.add_subcommand("curated-rubric", "Write the curated three-rule rubric");
  std::string r_out;
  c_curated->add_option("--out", r_out, "Rubric JSON (default stdout)");

  // evaluate
  auto* c_eval = app.add_subcommand("evaluate", "Score conditions and compare them");
  std::string v_manifest, v_out, v_records, v_metric = "both";
  bool v_aggregate = false;
  std::size_t v_resamples = 10000;
  c_eval->add_option("--manifest", v_manifest, "CSV prompt_id,condition,emotion,text,image_path")->required();
  c_eval->add_option("--out", v_out, "Report JSON (default stdout)");
  c_eval->add_option("--records-out", v_records, "Per-record scores CSV");
  c_eval->add_option("--metric", v_metric, "iea, ita or both")->capture_default_str();
  c_eval->add_flag("--aggregate-images", v_aggregate, "Average several images of one prompt");
  c_eval->add_option("--resamples", v_resamples, "Bootstrap resamples")->capture_default_str();

  // correlate
  auto* c_corr = app.add_subcommand("correlate", "Correlate alignment with emotion probabilities");
  std::string k_probs, k_out;
  c_corr->add_option("--probs", k_probs, "CSV image_path,p_<emotion>,...")->required();
  c_corr->add_option("--out", k_out, "Report JSON (default stdout)");

  // saliency
  auto* c_sal = app.add_subcommand("saliency", "Rank words by saliency against text + emotion");
  std::string s_text, s_emotion, s_words;
  c_sal->add_option("--text", s_text, "Prompt text")->required();
  c_sal->add_option("--emotion", s_emotion, "Emotion label")->required();
  c_sal->add_option("--words", s_words, "Comma-separated words (default: nouns, verbs, adjectives)");

  // synth
  auto* c_synth = app.add_subcommand("synth", "Generate the planted-rule synthetic dataset");
  std::string y_features, y_scores;
  std::size_t y_rows = 2000;
  double y_noise = 0.05;
  c_synth->add_option("--rows", y_rows, "Rows")->capture_default_str();
  c_synth->add_option("--noise", y_noise, "Label flip probability")->capture_default_str();
  c_synth->add_option("--features-out", y_features, "Feature CSV")->required();
  c_synth->add_option("--scores-out", y_scores, "Score CSV")->required();

  // spellcheck
  auto* c_spell = app.add_subcommand("spellcheck", "List words unknown to the word list and lexicon");
  std::string w_text;
  c_spell->add_option("--text", w_text, "Text to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cli::Layer flags;
    for (const auto& [key, opt] : config_opts) {
      if (opt->count() > 0) flags[key] = flag_values[key];
    }
    const auto env = cli::ReadEnvironment([](const char* n) { return std::getenv(n); });
    if (config_path.empty()) {
      if (const char* p = std::getenv("REPROMPT_CONFIG")) config_path = p;
    }
    const auto file = config_path.empty() ? cli::Layer{}
                                          : cli::ParseConfigFile(pe::ReadFile(config_path), config_path);
    cli::RuntimeBuilder rt(cli::ResolveConfig(flags, env, file));
    const auto seed = rt.config().seed;

    if (c_features->parsed()) {
      const auto prompts = pe::ParsePromptsJsonl(pe::ReadFile(f_in), f_in);
      const auto table = pe::ExtractBatch(prompts, rt.lexicon(), rt.tagger());
      WriteOutput(f_out, pe::FormatFeatureCsv(table));
    } else if (c_edit->parsed()) {
      if (!e_allow_unknown) {
        const auto flagged = pe::Spellcheck(e_text, rt.lexicon(), rt.wordlist());
        if (!flagged.empty()) {
          throw pe::Error(pe::ErrorCode::kMalformedRow,
                          "unknown words " + pe::Join(flagged, " ") +
                              " (use --allow-unknown-words to edit anyway)");
        }
      }
      const auto edited = pe::Edit(e_text, e_emotion, LoadRubric(e_rubric), MakeDeps(rt));
      if (e_json) {
        WriteOutput("", pe::EditedToJsonLine("", edited));
      } else if (e_trace) {
        WriteOutput("", pe::FormatTrace(edited.trace));
      } else {
        WriteOutput("", edited.text + "\n");
      }
      for (const auto& w : edited.trace.warnings) std::cerr << "warning: " << w << "\n";
    } else if (c_batch->parsed()) {
      const auto prompts = pe::ParsePromptsJsonl(pe::ReadFile(b_in), b_in);
      std::vector<pe::PromptRecord> accepted;
      std::map<std::string, std::string> rejected;
      for (const auto& p : prompts) {
        const auto flagged = b_allow_unknown ? std::vector<std::string>{}
                                             : pe::Spellcheck(p.text, rt.lexicon(), rt.wordlist());
        if (flagged.empty()) {
          accepted.push_back(p);
        } else {
          rejected[p.id] = "unknown words " + pe::Join(flagged, " ");
        }
      }
      const auto items = pe::EditBatch(accepted, LoadRubric(b_rubric), MakeDeps(rt),
                                       rt.config().parallelism);
      std::string out;
      bool backend_failed = false;
      std::size_t failures = rejected.size();
      for (const auto& [id, why] : rejected) std::cerr << id << ": " << why << "\n";
      for (const auto& item : items) {
        if (item.result) {
          out += pe::EditedToJsonLine(item.id, *item.result);
        } else {
          ++failures;
          backend_failed = backend_failed || item.error_code == pe::ErrorCode::kBackendUnavailable ||
                           item.error_code == pe::ErrorCode::kServiceUnavailable;
          std::cerr << item.id << ": " << item.error << "\n";
        }
      }
      WriteOutput(b_out, out);
      if (backend_failed) return kExitBackend;
      if (failures > 0) return kExitData;
    } else if (c_train->parsed()) {
      const auto features = pe::ParseFeatureCsv(pe::ReadFile(t_features), t_features);
      const auto scores = pe::ParseScoreCsv(pe::ReadFile(t_scores), t_scores);
      const auto dataset = pe::JoinScores(features, scores, pe::ParseTarget(t_target));
      t_params.seed = seed;
      pe::ValidateParams(t_params);
      const auto cv = pe::CrossValidate(dataset, t_params, t_folds);
      const auto model = pe::Train(dataset, t_params);
      WriteOutput(t_out, pe::SerializeModel(model));
      nlohmann::ordered_json report;
      report["target"] = pe::TargetName(dataset.target);
      report["rows"] = dataset.rows.size();
      report["score_mean"] = dataset.score_mean;
      report["folds"] = cv.folds;
      report["auc_per_fold"] = cv.auc_per_fold;
      report["auc_mean"] = cv.auc_mean;
      WriteOutput(t_report, report.dump(2) + "\n");
    } else if (c_explain->parsed()) {
      const auto model = pe::DeserializeModel(pe::ReadFile(x_model));
      model.CheckSchema();
      const auto table = pe::ParseFeatureCsv(pe::ReadFile(x_features), x_features);
      const auto bg = Background(table, x_background, seed);
      const bool exact = model.UsedFeatures().size() <= pe::kMaxExactPlayers;
      std::string out;
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto e = exact ? pe::ShapleyExact(model, table.rows[i], bg, std::nullopt, table.ids[i])
                             : pe::ShapleySampled(model, table.rows[i], bg, x_samples, seed + i,
                                                  std::nullopt, table.ids[i]);
        out += pe::SerializeExplanation(e) + "\n";
      }
      WriteOutput(x_out, out);
      if (!x_importance.empty() && !table.rows.empty()) {
        const auto gi = pe::GlobalImportance(model, table.rows, bg, x_samples, seed);
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& r : gi.ranking) j.push_back({{"feature", r.feature}, {"mean_abs", r.mean_abs}});
        WriteOutput(x_importance, j.dump(2) + "\n");
      }
    } else if (c_pdp->parsed()) {
      const auto model = pe::DeserializeModel(pe::ReadFile(p_model));
      const auto table = pe::ParseFeatureCsv(pe::ReadFile(p_features), p_features);
      const auto bg = Background(table, p_background, seed);
      const auto spec = ParseGrid(p_grid, p_points);
      std::vector<pe::PdpCurve> curves;
      for (const auto& name : p_names.empty() ? kRubricFeatures : p_names) {
        curves.push_back(pe::Pdp(model, name, bg, spec));
      }
      WriteOutput(p_out, pe::FormatPdpCsv(curves));
    } else if (c_derive->parsed()) {
      const auto model = pe::DeserializeModel(pe::ReadFile(d_model));
      const auto table = pe::ParseFeatureCsv(pe::ReadFile(d_features), d_features);
      const auto bg = Background(table, d_background, seed);
      pe::GridSpec spec;
      spec.points = d_points;
      std::vector<pe::PdpCurve> curves;
      for (const auto& name : kRubricFeatures) curves.push_back(pe::Pdp(model, name, bg, spec));
      const auto candidates = pe::CandidateRules(curves, d_add);
      if (!d_accept.empty()) {
        WriteOutput(d_out, pe::SerializeRubric(pe::AcceptCandidates(candidates, CommaList(d_accept))));
      } else {
        pe::Rubric listing;
        listing.version = "candidates";
        for (const auto& c : candidates.rules) listing.rules.push_back(c.rule);
        auto j = nlohmann::ordered_json::parse(pe::SerializeRubric(listing));
        for (std::size_t i = 0; i < candidates.rules.size(); ++i) {
          j["rules"][i]["rationale"] = candidates.rules[i].rationale;
        }
        j["advisories"] = candidates.advisories;
        auto ranges = nlohmann::ordered_json::object();
        for (const auto& c : curves) {
          auto arr = nlohmann::ordered_json::array();
          for (const auto& r : pe::DeriveRubricRanges(c)) arr.push_back(pe::FormatRange(r));
          ranges[c.feature] = std::move(arr);
        }
        j["ranges"] = std::move(ranges);
        WriteOutput(d_out, j.dump(2) + "\n");
      }
    } else if (c_curated->parsed()) {
      WriteOutput(r_out, pe::SerializeRubric(pe::CuratedRubric()));
    } else if (c_eval->parsed()) {
      if (v_metric != "iea" && v_metric != "ita" && v_metric != "both") {
        throw pe::Error(pe::ErrorCode::kInvalidArgument, "--metric must be iea, ita or both");
      }
      const auto inputs = pe::ReadManifest(v_manifest);
      pe::ScoreOptions so;
      so.aggregate_images = v_aggregate;
      const auto scored = pe::ScoreConditions(inputs, rt.embedder(), so);
      for (const auto& w : scored.warnings) std::cerr << "warning: " << w << "\n";
      if (!v_records.empty()) WriteOutput(v_records, pe::FormatRecordsCsv(scored.records));
      pe::CompareOptions co;
      co.resamples = v_resamples;
      co.seed = seed;
      nlohmann::ordered_json j;
      std::string text;
      for (auto m : {pe::Metric::kIea, pe::Metric::kIta}) {
        if (v_metric != "both" && v_metric != pe::ToLower(pe::MetricName(m))) continue;
        const auto report = pe::Compare(scored.records, m, co);
        j[std::string(pe::MetricName(m))] = nlohmann::ordered_json::parse(pe::ComparisonToJson(report));
        text += pe::FormatComparison(report) + "\n";
      }
      if (v_out.empty() || v_out == "-") {
        WriteOutput("", text);
      } else {
        WriteOutput(v_out, j.dump(2) + "\n");
        std::cerr << text;
      }
    } else if (c_corr->parsed()) {
      const auto [images, emotions] = pe::ReadEmotionProbabilities(k_probs);
      const auto report = pe::EmotionCorrelation(images, emotions, rt.embedder());
      if (k_out.empty() || k_out == "-") {
        WriteOutput("", pe::FormatCorrelation(report));
      } else {
        WriteOutput(k_out, pe::CorrelationToJson(report));
        std::cerr << pe::FormatCorrelation(report);
      }
    } else if (c_sal->parsed()) {
      std::vector<std::string> words = CommaList(s_words);
      if (words.empty()) {
        for (const auto& tok : pe::Tag(s_text, rt.lexicon(), rt.tagger()).tokens) {
          if (tok.pos == pe::PosBucket::kNoun || tok.pos == pe::PosBucket::kVerb ||
              tok.pos == pe::PosBucket::kAdj) {
            words.push_back(tok.surface);
          }
        }
      }
      const auto ranking = pe::WordSaliency(rt.embedder(), s_text, s_emotion, words);
      std::string out = "reference\t" + ranking.reference_text + "\n";
      for (const auto& e : ranking.entries) out += e.word + "\t" + pe::FormatDouble(e.score) + "\n";
      WriteOutput("", out);
    } else if (c_synth->parsed()) {
      const auto data = pe::GeneratePlanted({y_rows, y_noise, seed});
      pe::FeatureTable table;
      std::vector<pe::ScoreRecord> scores;
      for (std::size_t i = 0; i < data.dataset.rows.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "s%05zu", i);
        const auto& row = data.dataset.rows[i];
        table.ids.push_back(id);
        table.rows.push_back(row.x);
        scores.push_back({id, "", "", row.raw_score, row.raw_score});
      }
      WriteOutput(y_features, pe::FormatFeatureCsv(table));
      WriteOutput(y_scores, pe::FormatScoreCsv(scores));
    } else if (c_spell->parsed()) {
      std::string out;
      for (const auto& w : pe::Spellcheck(w_text, rt.lexicon(), rt.wordlist())) out += w + "\n";
      WriteOutput("", out);
    }
  } catch (const pe::Error& e) {
    std::cerr << "promptedit: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "promptedit: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
