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

#include "promptedit/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"
#include "promptedit/csv.hpp"
#include "promptedit/error.hpp"
#include "promptedit/random.hpp"
#include "promptedit/strings.hpp"

namespace promptedit {

std::string_view PromptConditionName(PromptCondition c) {
  switch (c) {
    case PromptCondition::kOriginal: return "ORIGINAL";
    case PromptCondition::kLabelAppended: return "LABEL_APPENDED";
    case PromptCondition::kReprompt: return "REPROMPT";
    case PromptCondition::kManualEdited: return "MANUAL_EDITED";
  }
  return "ORIGINAL";
}

PromptCondition ParsePromptCondition(std::string_view name) {
  std::string upper(Trim(name));
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto c : {PromptCondition::kOriginal, PromptCondition::kLabelAppended,
                 PromptCondition::kReprompt, PromptCondition::kManualEdited}) {
    if (upper == PromptConditionName(c)) return c;
  }
  throw Error(ErrorCode::kParse, "unknown condition '" + std::string(name) + "'");
}

std::string_view MetricName(Metric m) { return m == Metric::kIea ? "IEA" : "ITA"; }

// --- Scoring -----------------------------------------------------------------

ScoreResult ScoreConditions(const std::vector<ScoringInput>& inputs, const Embedder& embedder,
                            const ScoreOptions& options) {
  ScoreResult out;
  if (inputs.empty()) return out;
  std::unordered_map<std::string, std::string> original;
  for (const auto& in : inputs) {
    if (in.condition == PromptCondition::kOriginal) original[in.prompt_id] = in.text;
  }
  std::vector<std::string> emotions, texts, images;
  std::map<std::string, std::size_t> emotion_slot, text_slot;
  for (const auto& in : inputs) {
    auto it = original.find(in.prompt_id);
    if (it == original.end()) {
      throw Error(ErrorCode::kMissingOriginal, "prompt '" + in.prompt_id + "' has no ORIGINAL text");
    }
    const std::string emotion = ToLower(Trim(in.emotion));
    if (!ValenceOf(emotion)) {
      throw Error(ErrorCode::kUnknownEmotion, "'" + in.emotion + "' is not in the valence table");
    }
    if (emotion_slot.try_emplace(emotion, emotions.size()).second) emotions.push_back(emotion);
    if (text_slot.try_emplace(it->second, texts.size()).second) texts.push_back(it->second);
    images.push_back(in.image);
  }
  const auto emotion_vecs = embedder.EmbedText(emotions);
  const auto text_vecs = embedder.EmbedText(texts);
  const auto image_vecs = embedder.EmbedImage(images);

  std::map<std::pair<std::string, PromptCondition>, std::size_t> slot;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    const std::string emotion = ToLower(Trim(in.emotion));
    const double iea =
        ClipScore(image_vecs[i], emotion_vecs[emotion_slot.at(emotion)], AlignmentKind::kIea).value;
    const double ita =
        ClipScore(image_vecs[i], text_vecs[text_slot.at(original.at(in.prompt_id))],
                  AlignmentKind::kIta)
            .value;
    ConditionRecord rec{in.prompt_id, in.condition, emotion, *ValenceOf(emotion), iea, ita, 1};
    const auto key = std::make_pair(in.prompt_id, in.condition);
    auto [it, fresh] = slot.try_emplace(key, out.records.size());
    if (fresh) {
      out.records.push_back(rec);
      continue;
    }
    auto& prev = out.records[it->second];
    if (options.aggregate_images) {
      // Running mean over all images of this prompt and condition.
      const auto k = static_cast<double>(prev.images);
      prev.iea = (prev.iea * k + iea) / (k + 1.0);
      prev.ita = (prev.ita * k + ita) / (k + 1.0);
      ++prev.images;
    } else {
      out.warnings.push_back("duplicate " + in.prompt_id + "/" +
                             std::string(PromptConditionName(in.condition)) +
                             ": keeping the last image");
      prev = rec;
    }
  }
  return out;
}

std::vector<ScoringInput> ReadManifest(const std::filesystem::path& path) {
  const auto table = csv::ReadFile(path.string());
  const std::string src = path.string();
  const auto c_id = table.require("prompt_id", src);
  const auto c_cond = table.require("condition", src);
  const auto c_emotion = table.require("emotion", src);
  const auto c_text = table.require("text", src);
  const auto c_image = table.require("image_path", src);
  const auto dir = path.parent_path();
  std::vector<ScoringInput> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = src + ":" + std::to_string(table.lines[r]);
    if (row.size() != table.header.size()) {
      throw Error(ErrorCode::kMalformedRow, where + ": wrong field count");
    }
    ScoringInput in;
    in.prompt_id = row[c_id];
    try {
      in.condition = ParsePromptCondition(row[c_cond]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedRow, where + ": " + e.what());
    }
    in.emotion = row[c_emotion];
    in.text = row[c_text];
    in.image_path = row[c_image];
    const std::filesystem::path p(in.image_path);
    in.image = ReadFile(p.is_absolute() ? p : dir / p);
    out.push_back(std::move(in));
  }
  return out;
}

std::string FormatRecordsCsv(const std::vector<ConditionRecord>& records) {
  std::string out = "prompt_id,condition,emotion,valence,iea,ita,images\n";
  for (const auto& r : records) {
    out += csv::FormatRow({r.prompt_id, std::string(PromptConditionName(r.condition)), r.emotion,
                           std::string(ValenceName(r.valence)), FormatDouble(r.iea),
                           FormatDouble(r.ita), std::to_string(r.images)});
  }
  return out;
}

// --- Statistics ----------------------------------------------------------------

WilcoxonResult WilcoxonSignedRank(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShapeMismatch, "unpaired samples");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = b[i] - a[i];
    if (diff != 0.0) d.push_back(diff);
  }
  WilcoxonResult res;
  res.n = d.size();
  if (d.empty()) return res;
  std::sort(d.begin(), d.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  // Doubled midranks stay integral.
  std::vector<long long> rank2(d.size());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < d.size();) {
    std::size_t j = i;
    while (j < d.size() && std::abs(d[j]) == std::abs(d[i])) ++j;
    for (std::size_t k = i; k < j; ++k) rank2[k] = static_cast<long long>(i + 1 + j);
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  long long w2 = 0, total2 = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    total2 += rank2[i];
    if (d[i] > 0) w2 += rank2[i];
  }
  res.w_plus = static_cast<double>(w2) / 2.0;
  res.w_minus = static_cast<double>(total2 - w2) / 2.0;
  const auto n = static_cast<double>(d.size());
  if (d.size() <= kWilcoxonExactMax) {
    // ways[s]: sign assignments whose positive doubled ranks sum to s.
    std::vector<double> ways(static_cast<std::size_t>(total2) + 1, 0.0);
    ways[0] = 1.0;
    long long reach = 0;
    for (long long r : rank2) {
      for (long long s = reach; s >= 0; --s) {
        if (ways[static_cast<std::size_t>(s)] != 0.0) {
          ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
        }
      }
      reach += r;
    }
    double lower = 0.0, upper = 0.0;
    for (long long s = 0; s <= total2; ++s) {
      if (s <= w2) lower += ways[static_cast<std::size_t>(s)];
      if (s >= w2) upper += ways[static_cast<std::size_t>(s)];
    }
    const double all = std::ldexp(1.0, static_cast<int>(d.size()));
    res.p = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    res.exact = true;
  } else {
    const double mu = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double dev = std::max(0.0, std::abs(res.w_plus - mu) - 0.5);
    res.p = var > 0.0 ? std::min(1.0, std::erfc(dev / std::sqrt(var) / std::sqrt(2.0))) : 1.0;
    res.exact = false;
  }
  return res;
}

Interval BootstrapMeanCi(const std::vector<double>& values_in, std::size_t resamples,
                         std::uint64_t seed, double level) {
  if (values_in.empty()) throw Error(ErrorCode::kTooFewRows, "bootstrap of an empty sample");
  if (resamples < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 resamples");
  std::vector<double> values = values_in;
  std::sort(values.begin(), values.end());
  Rng rng(seed);
  std::vector<double> means(resamples);
  const auto n = values.size();
  for (auto& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[rng.below(n)];
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const auto quantile = [&](double q) {
    const double h = (static_cast<double>(resamples) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, resamples - 1);
    return means[lo] + (h - static_cast<double>(lo)) * (means[hi] - means[lo]);
  };
  const double tail = (1.0 - level) / 2.0;
  return {quantile(tail), quantile(1.0 - tail)};
}

CorrelationRow Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kShapeMismatch, "columns differ in length");
  if (x.size() < 3) throw Error(ErrorCode::kTooFewRows, "correlation needs at least 3 rows");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "correlation of a constant column");
  }
  CorrelationRow row;
  row.n = x.size();
  row.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::abs(row.r) == 1.0) {
    row.lower95 = row.upper95 = row.r;
    row.p = 0.0;
    return row;
  }
  if (row.n > 3) {
    const double z = std::atanh(row.r);
    const double half = 1.959963984540054 / std::sqrt(n - 3.0);
    row.lower95 = std::tanh(z - half);
    row.upper95 = std::tanh(z + half);
  } else {
    row.lower95 = -1.0;
    row.upper95 = 1.0;
  }
  const double t = row.r * std::sqrt((n - 2.0) / (1.0 - row.r * row.r));
  const boost::math::students_t dist(n - 2.0);
  row.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
  return row;
}

// --- Comparison ----------------------------------------------------------------

namespace {

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

ComparisonBlock BuildBlock(const std::vector<const ConditionRecord*>& records, Metric metric,
                           const CompareOptions& options) {
  std::map<PromptCondition, std::map<std::string, double>> by_condition;
  for (const auto* r : records) {
    by_condition[r->condition][r->prompt_id] = metric == Metric::kIea ? r->iea : r->ita;
  }
  ComparisonBlock block;
  for (const auto& [cond, values] : by_condition) {
    std::vector<double> v;
    for (const auto& [id, x] : values) v.push_back(x);
    std::sort(v.begin(), v.end());
    block.conditions.push_back(
        {cond, v.size(), Mean(v), BootstrapMeanCi(v, options.resamples, options.seed)});
  }
  for (auto ia = by_condition.begin(); ia != by_condition.end(); ++ia) {
    for (auto ib = std::next(ia); ib != by_condition.end(); ++ib) {
      // Pairs in value order so the result ignores ids and record order.
      std::vector<std::pair<double, double>> pairs;
      for (const auto& [id, va] : ia->second) {
        if (auto it = ib->second.find(id); it != ib->second.end()) pairs.emplace_back(va, it->second);
      }
      if (pairs.size() < kMinPairs) continue;
      std::sort(pairs.begin(), pairs.end());
      std::vector<double> a, b, diff;
      for (const auto& [va, vb] : pairs) {
        a.push_back(va);
        b.push_back(vb);
        diff.push_back(vb - va);
      }
      PairwiseComparison pc;
      pc.a = ia->first;
      pc.b = ib->first;
      pc.pairs = pairs.size();
      pc.mean_difference = Mean(b) - Mean(a);
      std::vector<double> sorted_diff = diff;
      std::sort(sorted_diff.begin(), sorted_diff.end());
      pc.difference_ci = BootstrapMeanCi(sorted_diff, options.resamples, options.seed);
      pc.test = WilcoxonSignedRank(a, b);
      pc.significant = pc.test.p < kSignificantP;
      pc.marginally_significant = !pc.significant && pc.test.p < kMarginalP;
      block.pairs.push_back(pc);
    }
  }
  return block;
}

}  // namespace

ComparisonReport Compare(const std::vector<ConditionRecord>& records, Metric metric,
                         const CompareOptions& options) {
  ComparisonReport report;
  report.metric = metric;
  report.method =
      "prompt-matched Wilcoxon signed-rank tests with percentile bootstrap 95% CIs (" +
      std::to_string(options.resamples) +
      " resamples); a linear mixed-effects model is not fitted";
  std::vector<const ConditionRecord*> all, pos, neg;
  for (const auto& r : records) {
    all.push_back(&r);
    (r.valence == Valence::kPositive ? pos : neg).push_back(&r);
  }
  report.overall = BuildBlock(all, metric, options);
  if (report.overall.pairs.empty()) {
    throw Error(ErrorCode::kInsufficientPairs, "no two conditions share " +
                                                   std::to_string(kMinPairs) + " prompts");
  }
  if (!pos.empty()) report.positive = BuildBlock(pos, metric, options);
  if (!neg.empty()) report.negative = BuildBlock(neg, metric, options);
  return report;
}

namespace {

nlohmann::ordered_json BlockJson(const ComparisonBlock& block) {
  using nlohmann::ordered_json;
  ordered_json j;
  auto conds = ordered_json::array();
  for (const auto& c : block.conditions) {
    conds.push_back({{"condition", PromptConditionName(c.condition)},
                     {"n", c.n},
                     {"mean", c.mean},
                     {"ci95", {c.ci.lower, c.ci.upper}}});
  }
  j["conditions"] = std::move(conds);
  auto pairs = ordered_json::array();
  for (const auto& p : block.pairs) {
    pairs.push_back({{"a", PromptConditionName(p.a)},
                     {"b", PromptConditionName(p.b)},
                     {"pairs", p.pairs},
                     {"mean_difference", p.mean_difference},
                     {"difference_ci95", {p.difference_ci.lower, p.difference_ci.upper}},
                     {"wilcoxon_w_plus", p.test.w_plus},
                     {"wilcoxon_w_minus", p.test.w_minus},
                     {"wilcoxon_n", p.test.n},
                     {"exact", p.test.exact},
                     {"p", p.test.p},
                     {"significant", p.significant},
                     {"marginally_significant", p.marginally_significant}});
  }
  j["pairs"] = std::move(pairs);
  return j;
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string BlockText(const ComparisonBlock& block) {
  std::string s;
  for (const auto& c : block.conditions) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-15s n=%-5zu mean=%.4f  95%% CI [%.4f, %.4f]\n",
                  std::string(PromptConditionName(c.condition)).c_str(), c.n, c.mean, c.ci.lower,
                  c.ci.upper);
    s += line;
  }
  for (const auto& p : block.pairs) {
    s += "  " + std::string(PromptConditionName(p.b)) + " - " +
         std::string(PromptConditionName(p.a)) + ": diff " + Fmt("%+.4f", p.mean_difference) +
         " [" + Fmt("%.4f", p.difference_ci.lower) + ", " + Fmt("%.4f", p.difference_ci.upper) +
         "]  pairs " + std::to_string(p.pairs) + "  p=" + Fmt("%.3g", p.test.p) +
         (p.significant ? "  ***" : p.marginally_significant ? "  *" : "") + "\n";
  }
  return s;
}

}  // namespace

std::string ComparisonToJson(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["metric"] = MetricName(report.metric);
  j["method"] = report.method;
  j["alpha_significant"] = kSignificantP;
  j["alpha_marginal"] = kMarginalP;
  j["overall"] = BlockJson(report.overall);
  j["positive"] = report.positive ? BlockJson(*report.positive) : nlohmann::ordered_json(nullptr);
  j["negative"] = report.negative ? BlockJson(*report.negative) : nlohmann::ordered_json(nullptr);
  return j.dump(2) + "\n";
}

std::string FormatComparison(const ComparisonReport& report) {
  std::string s = std::string(MetricName(report.metric)) + " comparison\n";
  s += "method: " + report.method + "\n";
  s += "*** p < .001, * p < .005\n\nall prompts\n" + BlockText(report.overall);
  if (report.positive) s += "\npositive valence\n" + BlockText(*report.positive);
  if (report.negative) s += "\nnegative valence\n" + BlockText(*report.negative);
  return s;
}

// --- Correlation ---------------------------------------------------------------

CorrelationReport EmotionCorrelation(const std::vector<EmotionImage>& images,
                                     const std::vector<std::string>& emotions,
                                     const Embedder& embedder) {
  if (images.size() < 3) throw Error(ErrorCode::kTooFewRows, "need at least 3 images");
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].probabilities.size() != emotions.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "image " + std::to_string(i) + " has " +
                      std::to_string(images[i].probabilities.size()) + " probabilities for " +
                      std::to_string(emotions.size()) + " emotions");
    }
  }
  std::vector<std::string> bytes;
  for (const auto& im : images) bytes.push_back(im.image);
  const auto image_vecs = embedder.EmbedImage(bytes);
  std::vector<std::string> labels;
  for (const auto& e : emotions) labels.push_back(ToLower(Trim(e)));
  const auto label_vecs = embedder.EmbedText(labels);
  CorrelationReport report;
  for (std::size_t j = 0; j < emotions.size(); ++j) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < images.size(); ++i) {
      x.push_back(ClipScore(image_vecs[i], label_vecs[j], AlignmentKind::kIea).value);
      y.push_back(images[i].probabilities[j]);
    }
    auto row = Pearson(x, y);
    row.emotion = emotions[j];
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::pair<std::vector<EmotionImage>, std::vector<std::string>> ReadEmotionProbabilities(
    const std::filesystem::path& path) {
  const auto table = csv::ReadFile(path.string());
  const std::string src = path.string();
  const auto c_image = table.require("image_path", src);
  std::vector<std::size_t> cols;
  std::vector<std::string> emotions;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c].rfind("p_", 0) == 0) {
      cols.push_back(c);
      emotions.push_back(table.header[c].substr(2));
    }
  }
  if (cols.empty()) throw Error(ErrorCode::kMissingColumn, src + ": no p_<emotion> columns");
  std::vector<EmotionImage> images;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = src + ":" + std::to_string(table.lines[r]);
    if (row.size() != table.header.size()) {
      throw Error(ErrorCode::kMalformedRow, where + ": wrong field count");
    }
    EmotionImage im;
    im.image_path = row[c_image];
    for (std::size_t c : cols) {
      double v = 0.0;
      if (!ParseDouble(row[c], v)) throw Error(ErrorCode::kMalformedRow, where + ": bad probability");
      im.probabilities.push_back(v);
    }
    const std::filesystem::path p(im.image_path);
    im.image = ReadFile(p.is_absolute() ? p : path.parent_path() / p);
    images.push_back(std::move(im));
  }
  return {std::move(images), std::move(emotions)};
}

std::string CorrelationToJson(const CorrelationReport& report) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"emotion", r.emotion},
                    {"pearson_r", r.r},
                    {"n", r.n},
                    {"lower95", r.lower95},
                    {"upper95", r.upper95},
                    {"p", r.p}});
  }
  nlohmann::ordered_json j;
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string FormatCorrelation(const CorrelationReport& report) {
  std::string s = "emotion        r        n      lower95  upper95  p\n";
  for (const auto& r : report.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %8.4f %6zu %8.4f %8.4f  %.3g\n", r.emotion.c_str(),
                  r.r, r.n, r.lower95, r.upper95, r.p);
    s += line;
  }
  return s;
}

}  // namespace promptedit
