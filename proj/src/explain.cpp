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

#include "promptedit/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "promptedit/error.hpp"
#include "promptedit/random.hpp"
#include "promptedit/strings.hpp"

namespace promptedit {

namespace {

using Point = std::array<double, kNumFeatures>;

Point ToPoint(const FeatureVector& v) {
  Point p;
  std::copy(v.values().begin(), v.values().end(), p.begin());
  return p;
}

double Prob(const TreeEnsemble& model, const Point& p) {
  return Logistic(model.RawUnchecked(p.data()));
}

std::vector<std::size_t> ResolvePlayers(const TreeEnsemble& model,
                                        std::optional<std::vector<std::size_t>> players) {
  std::vector<std::size_t> out = players ? std::move(*players) : model.UsedFeatures();
  for (std::size_t f : out) {
    if (f >= kNumFeatures) {
      throw Error(ErrorCode::kUnknownFeature, "feature index " + std::to_string(f));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void CheckInputs(const TreeEnsemble& model, const std::vector<FeatureVector>& background) {
  model.CheckSchema();
  if (background.empty()) throw Error(ErrorCode::kEmptyBackground, "background set is empty");
}

// Shared by both estimators: baseline and the all-players value.
void FillEndpoints(const TreeEnsemble& model, const Point& x,
                   const std::vector<std::size_t>& players,
                   const std::vector<FeatureVector>& background, ShapExplanation& e) {
  double base = 0.0, full = 0.0;
  for (const auto& zv : background) {
    Point z = ToPoint(zv);
    base += Prob(model, z);
    for (std::size_t f : players) z[f] = x[f];
    full += Prob(model, z);
  }
  const auto n = static_cast<double>(background.size());
  e.baseline = base / n;
  e.output = full / n;
}

}  // namespace

ShapExplanation ShapleyExact(const TreeEnsemble& model, const FeatureVector& xv,
                             const std::vector<FeatureVector>& background,
                             std::optional<std::vector<std::size_t>> players_in,
                             std::string instance_id) {
  CheckInputs(model, background);
  const auto players = ResolvePlayers(model, std::move(players_in));
  if (players.size() > kMaxExactPlayers) {
    throw Error(ErrorCode::kTooManyFeatures,
                std::to_string(players.size()) + " players exceed the exact limit of " +
                    std::to_string(kMaxExactPlayers));
  }
  ShapExplanation e;
  e.instance_id = std::move(instance_id);
  e.players = players;
  const Point x = ToPoint(xv);
  FillEndpoints(model, x, players, background, e);

  // Trees that read each feature; only those change when it flips.
  std::vector<std::vector<std::size_t>> readers(kNumFeatures);
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    std::vector<bool> seen(kNumFeatures, false);
    for (const auto& n : model.trees[t].nodes) {
      if (!n.is_leaf() && !seen[static_cast<std::size_t>(n.feature)]) {
        seen[static_cast<std::size_t>(n.feature)] = true;
        readers[static_cast<std::size_t>(n.feature)].push_back(t);
      }
    }
  }
  // weight[d][s] = s! (d - s - 1)! / d!
  std::vector<std::vector<double>> weight(kMaxExactPlayers + 1);
  for (std::size_t d = 1; d <= kMaxExactPlayers; ++d) {
    weight[d].resize(d);
    double binom = 1.0;  // C(d - 1, s)
    for (std::size_t s = 0; s < d; ++s) {
      weight[d][s] = 1.0 / (static_cast<double>(d) * binom);
      binom = binom * static_cast<double>(d - 1 - s) / static_cast<double>(s + 1);
    }
  }

  std::array<double, kNumFeatures> phi{};
  std::vector<double> tree_out(model.trees.size());
  std::vector<double> value;
  for (const auto& zv : background) {
    const Point z = ToPoint(zv);
    // Players equal in x and z are dummies of this row's game.
    std::vector<std::size_t> diff;
    for (std::size_t f : players) {
      if (x[f] != z[f]) diff.push_back(f);
    }
    const std::size_t d = diff.size();
    if (d == 0) continue;
    Point p = z;
    for (std::size_t t = 0; t < model.trees.size(); ++t) tree_out[t] = model.trees[t].Eval(p.data());
    const auto total = [&] {
      double s = 0.0;
      for (double v : tree_out) s += v;
      return Logistic(model.base_score + model.learning_rate * s);
    };
    const std::size_t masks = std::size_t{1} << d;
    value.assign(masks, 0.0);
    value[0] = total();
    // Gray-code walk: each step flips one player between z and x.
    for (std::size_t i = 1; i < masks; ++i) {
      const auto bit = static_cast<std::size_t>(std::countr_zero(i));
      const std::size_t gray = i ^ (i >> 1);
      const std::size_t f = diff[bit];
      p[f] = (gray >> bit) & 1 ? x[f] : z[f];
      for (std::size_t t : readers[f]) tree_out[t] = model.trees[t].Eval(p.data());
      value[gray] = total();
    }
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t bit = std::size_t{1} << j;
      double acc = 0.0;
      for (std::size_t mask = 0; mask < masks; ++mask) {
        if (mask & bit) continue;
        acc += weight[d][static_cast<std::size_t>(std::popcount(mask))] *
               (value[mask | bit] - value[mask]);
      }
      phi[diff[j]] += acc;
    }
  }
  const auto n = static_cast<double>(background.size());
  for (std::size_t f : players) e.attributions[f] = phi[f] / n;
  return e;
}

ShapExplanation ShapleySampled(const TreeEnsemble& model, const FeatureVector& xv,
                               const std::vector<FeatureVector>& background, std::size_t samples,
                               std::uint64_t seed,
                               std::optional<std::vector<std::size_t>> players_in,
                               std::string instance_id) {
  CheckInputs(model, background);
  if (samples < 100) throw Error(ErrorCode::kInvalidArgument, "need at least 100 samples");
  const auto players = ResolvePlayers(model, std::move(players_in));
  ShapExplanation e;
  e.instance_id = std::move(instance_id);
  e.players = players;
  const Point x = ToPoint(xv);
  FillEndpoints(model, x, players, background, e);
  if (players.empty()) return e;

  std::array<double, kNumFeatures> phi{};
  std::vector<std::size_t> order = players;
  Rng rng(seed);
  const auto walk = [&](const Point& z, auto first, auto last) {
    Point p = z;
    double prev = Prob(model, p);
    for (auto it = first; it != last; ++it) {
      p[*it] = x[*it];
      const double cur = Prob(model, p);
      phi[*it] += cur - prev;
      prev = cur;
    }
  };
  for (std::size_t s = 0; s < samples; s += 2) {
    const Point z = ToPoint(background[(s / 2) % background.size()]);
    rng.shuffle(std::span<std::size_t>(order));
    walk(z, order.begin(), order.end());
    if (s + 1 < samples) walk(z, order.rbegin(), order.rend());
  }
  double sum = 0.0, abs_sum = 0.0;
  for (std::size_t f : players) {
    phi[f] /= static_cast<double>(samples);
    sum += phi[f];
    abs_sum += std::abs(phi[f]);
  }
  const double residual = (e.output - e.baseline) - sum;
  for (std::size_t f : players) {
    const double share = abs_sum > 0.0 ? std::abs(phi[f]) / abs_sum
                                       : 1.0 / static_cast<double>(players.size());
    e.attributions[f] = phi[f] + residual * share;
  }
  return e;
}

GlobalImportanceResult GlobalImportance(const TreeEnsemble& model,
                                        const std::vector<FeatureVector>& sample,
                                        const std::vector<FeatureVector>& background,
                                        std::size_t samples, std::uint64_t seed) {
  if (sample.empty()) throw Error(ErrorCode::kEmptySample, "importance sample is empty");
  CheckInputs(model, background);
  const bool exact = model.UsedFeatures().size() <= kMaxExactPlayers;
  std::array<double, kNumFeatures> total{};
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto e = exact ? ShapleyExact(model, sample[i], background)
                         : ShapleySampled(model, sample[i], background, samples, seed + i);
    for (std::size_t f = 0; f < kNumFeatures; ++f) total[f] += std::abs(e.attributions[f]);
  }
  GlobalImportanceResult out;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    out.ranking.push_back({FeatureNames()[f], total[f] / static_cast<double>(sample.size())});
  }
  std::sort(out.ranking.begin(), out.ranking.end(),
            [](const ImportanceEntry& a, const ImportanceEntry& b) {
              if (a.mean_abs != b.mean_abs) return a.mean_abs > b.mean_abs;
              return a.feature < b.feature;
            });
  return out;
}

std::vector<FeatureVector> SampleBackground(const std::vector<FeatureVector>& rows,
                                            std::size_t max_rows, std::uint64_t seed) {
  if (rows.size() <= max_rows) return rows;
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(idx));
  idx.resize(max_rows);
  std::sort(idx.begin(), idx.end());
  std::vector<FeatureVector> out;
  out.reserve(max_rows);
  for (std::size_t i : idx) out.push_back(rows[i]);
  return out;
}

// --- Partial dependence -----------------------------------------------------

std::vector<double> MakeGrid(std::size_t feature, const std::vector<FeatureVector>& background,
                             const GridSpec& spec) {
  std::vector<double> grid;
  if (spec.kind == GridKind::kExplicit) {
    grid = spec.values;
  } else {
    if (background.empty()) throw Error(ErrorCode::kEmptyBackground, "background set is empty");
    std::vector<double> seen;
    for (const auto& row : background) seen.push_back(row[feature]);
    std::sort(seen.begin(), seen.end());
    if (spec.kind == GridKind::kObserved) {
      grid = seen;
    } else if (IsCountFeature(feature)) {
      const auto top = static_cast<long long>(std::floor(seen.back()));
      for (long long v = 0; v <= top; ++v) grid.push_back(static_cast<double>(v));
    } else {
      const double lo = seen.front(), hi = seen.back();
      if (spec.points < 2) throw Error(ErrorCode::kInvalidArgument, "grid needs >= 2 points");
      if (lo < hi) {
        const auto steps = static_cast<double>(spec.points - 1);
        for (std::size_t i = 0; i + 1 < spec.points; ++i) {
          grid.push_back(lo + (hi - lo) * static_cast<double>(i) / steps);
        }
        grid.push_back(hi);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double g : grid) {
    if (!std::isfinite(g)) throw Error(ErrorCode::kInvalidArgument, "non-finite grid value");
  }
  if (grid.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid for " + FeatureNames()[feature] + " has fewer than 2 points");
  }
  return grid;
}

PdpCurve Pdp(const TreeEnsemble& model, std::string_view feature,
             const std::vector<FeatureVector>& background, const GridSpec& spec) {
  const std::size_t f = RequireFeatureIndex(feature);
  CheckInputs(model, background);
  PdpCurve curve;
  curve.feature = FeatureNames()[f];
  curve.grid = MakeGrid(f, background, spec);
  const auto n = static_cast<double>(background.size());
  double base = 0.0;
  for (const auto& row : background) base += Prob(model, ToPoint(row));
  curve.baseline = base / n;
  for (double g : curve.grid) {
    double sum = 0.0;
    for (const auto& row : background) {
      Point p = ToPoint(row);
      p[f] = g;
      sum += Prob(model, p);
    }
    curve.means.push_back(sum / n);
  }
  return curve;
}

std::vector<ValueRange> DeriveRubricRanges(const PdpCurve& curve) {
  std::vector<ValueRange> out;
  const std::size_t n = std::min(curve.grid.size(), curve.means.size());
  for (std::size_t i = 0; i < n;) {
    if (!(curve.means[i] > curve.baseline)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && curve.means[j + 1] > curve.baseline) ++j;
    ValueRange r;
    r.lo = curve.grid[i];
    r.hi = curve.grid[j];
    if (i > 0) r.below = curve.grid[i - 1];
    if (j + 1 < n) r.above = curve.grid[j + 1];
    out.push_back(r);
    i = j + 1;
  }
  return out;
}

std::string FormatRange(const ValueRange& r) {
  std::string s = r.below ? "(" + FormatDouble(*r.below) : "[" + FormatDouble(r.lo);
  s += ", ";
  s += r.above ? FormatDouble(*r.above) + ")" : FormatDouble(r.hi) + "]";
  return s;
}

// --- Rubric ----------------------------------------------------------------

std::string_view CompareOpSymbol(CompareOp op) {
  switch (op) {
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
  }
  return ">";
}

CompareOp ParseCompareOp(std::string_view s) {
  if (s == ">") return CompareOp::kGt;
  if (s == ">=") return CompareOp::kGe;
  if (s == "<") return CompareOp::kLt;
  if (s == "<=") return CompareOp::kLe;
  throw Error(ErrorCode::kParse, "unknown comparison '" + std::string(s) + "'");
}

bool Condition::Holds(const FeatureVector& x) const {
  const double v = x[feature];
  switch (op) {
    case CompareOp::kGt: return v > threshold;
    case CompareOp::kGe: return v >= threshold;
    case CompareOp::kLt: return v < threshold;
    case CompareOp::kLe: return v <= threshold;
  }
  return false;
}

std::string_view ActionKindName(ActionKind kind) {
  switch (kind) {
    case ActionKind::kReduceTo: return "REDUCE_TO";
    case ActionKind::kAddAdjectives: return "ADD_ADJECTIVES";
    case ActionKind::kAppendLabel: return "APPEND_LABEL";
  }
  return "APPEND_LABEL";
}

namespace {

ActionKind ParseActionKind(std::string_view s) {
  if (s == "REDUCE_TO") return ActionKind::kReduceTo;
  if (s == "ADD_ADJECTIVES") return ActionKind::kAddAdjectives;
  if (s == "APPEND_LABEL") return ActionKind::kAppendLabel;
  throw Error(ErrorCode::kParse, "unknown action '" + std::string(s) + "'");
}

std::string_view ProvenanceName(Provenance p) {
  return p == Provenance::kCurated ? "curated" : "derived";
}

Rule LabelRule(std::string id, Provenance provenance) {
  Rule r;
  r.id = std::move(id);
  r.action.kind = ActionKind::kAppendLabel;
  r.provenance = provenance;
  return r;
}

}  // namespace

bool Rule::Fires(const FeatureVector& x) const {
  if (any_of.empty()) return true;
  return std::any_of(any_of.begin(), any_of.end(),
                     [&](const Condition& c) { return c.Holds(x); });
}

void Rubric::Validate() const {
  const auto bad = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "rubric: " + what);
  };
  if (rules.empty() || rules.back().action.kind != ActionKind::kAppendLabel) {
    bad("the last rule must append the label");
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    if (r.action.kind == ActionKind::kAppendLabel) {
      if (i + 1 != rules.size()) bad("only one label rule is allowed");
      continue;
    }
    if (r.any_of.empty()) bad("rule " + r.id + " has no trigger");
    for (const auto& c : r.any_of) {
      if (c.feature >= kNumFeatures) bad("rule " + r.id + " references an unknown feature");
      if (!std::isfinite(c.threshold)) bad("rule " + r.id + " has a non-finite threshold");
    }
    if (r.action.kind == ActionKind::kReduceTo && r.action.target < 1) {
      bad("rule " + r.id + " must keep at least one word");
    }
    if (r.action.kind == ActionKind::kAddAdjectives &&
        (r.action.count < 0 || !std::isfinite(r.action.min_concreteness))) {
      bad("rule " + r.id + " has an invalid adjective action");
    }
  }
}

Rubric CuratedRubric() {
  Rubric rubric;
  rubric.version = "curated-v1";
  const auto cond = [](PosBucket b, bool conc, CompareOp op, double t) {
    return Condition{conc ? ConcIndex(b) : CountIndex(b), op, t};
  };
  Rule r1;
  r1.id = "R1";
  r1.any_of = {cond(PosBucket::kNoun, false, CompareOp::kGt, 3)};
  r1.action = {ActionKind::kReduceTo, PosBucket::kNoun, 3, 0, 0.0};
  r1.provenance = Provenance::kCurated;
  Rule r2;
  r2.id = "R2";
  r2.any_of = {cond(PosBucket::kAdj, false, CompareOp::kLt, 2),
               cond(PosBucket::kAdj, true, CompareOp::kLt, 2.0)};
  r2.action = {ActionKind::kAddAdjectives, PosBucket::kAdj, 0, 3, 2.0};
  r2.provenance = Provenance::kCurated;
  Rule r3;
  r3.id = "R3";
  r3.any_of = {cond(PosBucket::kVerb, false, CompareOp::kGt, 2)};
  r3.action = {ActionKind::kReduceTo, PosBucket::kVerb, 2, 0, 0.0};
  r3.provenance = Provenance::kCurated;
  rubric.rules = {r1, r2, r3, LabelRule("R4", Provenance::kCurated)};
  rubric.advisories = {"conc_NOUN favoured in [3.5, 4.2]; no editing action",
                       "conc_VERB favoured above 2.0; no editing action"};
  return rubric;
}

std::string SerializeRubric(const Rubric& rubric) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["version"] = rubric.version;
  auto rules = ordered_json::array();
  for (const auto& r : rubric.rules) {
    ordered_json jr;
    jr["id"] = r.id;
    if (r.any_of.empty()) {
      jr["feature"] = nullptr;
      jr["trigger"] = nullptr;
    } else {
      const auto& first = r.any_of.front();
      jr["feature"] = FeatureNames()[first.feature];
      ordered_json trig;
      trig["op"] = CompareOpSymbol(first.op);
      trig["threshold"] = first.threshold;
      if (r.any_of.size() > 1) {
        auto alts = ordered_json::array();
        for (std::size_t i = 1; i < r.any_of.size(); ++i) {
          const auto& c = r.any_of[i];
          alts.push_back({{"feature", FeatureNames()[c.feature]},
                          {"op", CompareOpSymbol(c.op)},
                          {"threshold", c.threshold}});
        }
        trig["or"] = std::move(alts);
      }
      jr["trigger"] = std::move(trig);
    }
    ordered_json act;
    act["kind"] = ActionKindName(r.action.kind);
    if (r.action.kind == ActionKind::kReduceTo) {
      act["bucket"] = BucketName(r.action.bucket);
      act["target"] = r.action.target;
    } else if (r.action.kind == ActionKind::kAddAdjectives) {
      act["count"] = r.action.count;
      act["min_concreteness"] = r.action.min_concreteness;
    }
    jr["action"] = std::move(act);
    jr["provenance"] = ProvenanceName(r.provenance);
    rules.push_back(std::move(jr));
  }
  j["rules"] = std::move(rules);
  j["advisories"] = rubric.advisories;
  return j.dump(2) + "\n";
}

Rubric ParseRubric(std::string_view text) {
  Rubric rubric;
  try {
    const auto j = nlohmann::json::parse(text);
    rubric.version = j.at("version").get<std::string>();
    for (const auto& jr : j.at("rules")) {
      Rule r;
      r.id = jr.value("id", std::string());
      const auto& act = jr.at("action");
      r.action.kind = ParseActionKind(act.at("kind").get<std::string>());
      if (r.action.kind == ActionKind::kReduceTo) {
        const auto bucket = ParseBucket(act.at("bucket").get<std::string>());
        if (!bucket) throw Error(ErrorCode::kParse, "rule " + r.id + ": unknown bucket");
        r.action.bucket = *bucket;
        r.action.target = act.at("target").get<int>();
      } else if (r.action.kind == ActionKind::kAddAdjectives) {
        r.action.bucket = PosBucket::kAdj;
        r.action.count = act.at("count").get<int>();
        r.action.min_concreteness = act.at("min_concreteness").get<double>();
      }
      const std::string prov = jr.value("provenance", std::string("derived"));
      if (prov != "derived" && prov != "curated") {
        throw Error(ErrorCode::kParse, "rule " + r.id + ": unknown provenance '" + prov + "'");
      }
      r.provenance = prov == "curated" ? Provenance::kCurated : Provenance::kDerived;
      if (jr.contains("trigger") && !jr["trigger"].is_null()) {
        const auto& trig = jr["trigger"];
        r.any_of.push_back({RequireFeatureIndex(jr.at("feature").get<std::string>()),
                            ParseCompareOp(trig.at("op").get<std::string>()),
                            trig.at("threshold").get<double>()});
        if (trig.contains("or")) {
          for (const auto& c : trig["or"]) {
            r.any_of.push_back({RequireFeatureIndex(c.at("feature").get<std::string>()),
                                ParseCompareOp(c.at("op").get<std::string>()),
                                c.at("threshold").get<double>()});
          }
        }
      }
      rubric.rules.push_back(std::move(r));
    }
    if (j.contains("advisories")) {
      rubric.advisories = j["advisories"].get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("rubric: ") + e.what());
  }
  rubric.Validate();
  return rubric;
}

Candidates CandidateRules(const std::vector<PdpCurve>& curves, int add_count) {
  Candidates out;
  std::optional<Condition> adj_count, adj_conc;
  std::vector<Rule> reduce;
  for (const auto& curve : curves) {
    const std::size_t f = RequireFeatureIndex(curve.feature);
    const auto ranges = DeriveRubricRanges(curve);
    if (ranges.empty()) {
      out.advisories.push_back(curve.feature + " never exceeds the baseline");
      continue;
    }
    const auto& r = ranges.front();
    const bool single = ranges.size() == 1;
    const PosBucket b = FeatureBucket(f);
    if (single && IsCountFeature(f) && (b == PosBucket::kNoun || b == PosBucket::kVerb) &&
        !r.below && r.above) {
      Rule rule;
      rule.any_of = {{f, CompareOp::kGt, r.hi}};
      rule.action = {ActionKind::kReduceTo, b, static_cast<int>(std::lround(r.hi)), 0, 0.0};
      reduce.push_back(rule);
      continue;
    }
    if (single && b == PosBucket::kAdj && r.below && !r.above) {
      (IsCountFeature(f) ? adj_count : adj_conc) = Condition{f, CompareOp::kLe, *r.below};
      continue;
    }
    std::string ranges_text;
    for (const auto& rr : ranges) {
      ranges_text += (ranges_text.empty() ? "" : " ") + FormatRange(rr);
    }
    out.advisories.push_back(curve.feature + " favoured on " + ranges_text);
  }
  int next_id = 1;
  const auto add = [&](Rule rule, std::string rationale) {
    rule.id = "C" + std::to_string(next_id++);
    rule.provenance = Provenance::kDerived;
    out.rules.push_back({std::move(rule), std::move(rationale)});
  };
  for (const auto& rule : reduce) {
    if (rule.action.bucket == PosBucket::kNoun) {
      add(rule, "prediction above baseline only while " + FeatureNames()[rule.any_of[0].feature] +
                    " <= " + std::to_string(rule.action.target));
    }
  }
  if (adj_count || adj_conc) {
    Rule rule;
    std::string why = "prediction above baseline when";
    if (adj_count) {
      rule.any_of.push_back(*adj_count);
      why += " count_ADJ > " + FormatDouble(adj_count->threshold);
    }
    if (adj_conc) {
      rule.any_of.push_back(*adj_conc);
      why += std::string(adj_count ? " and" : "") + " conc_ADJ > " +
             FormatDouble(adj_conc->threshold);
    }
    rule.action = {ActionKind::kAddAdjectives, PosBucket::kAdj, 0, add_count,
                   adj_conc ? adj_conc->threshold : 0.0};
    add(rule, why);
  }
  for (const auto& rule : reduce) {
    if (rule.action.bucket == PosBucket::kVerb) {
      add(rule, "prediction above baseline only while " + FeatureNames()[rule.any_of[0].feature] +
                    " <= " + std::to_string(rule.action.target));
    }
  }
  return out;
}

Rubric AcceptCandidates(const Candidates& candidates, const std::vector<std::string>& accepted) {
  Rubric rubric;
  rubric.version = "derived-v1";
  for (const auto& id : accepted) {
    const bool known = std::any_of(candidates.rules.begin(), candidates.rules.end(),
                                   [&](const CandidateRule& c) { return c.rule.id == id; });
    if (!known) throw Error(ErrorCode::kInvalidArgument, "no candidate rule '" + id + "'");
  }
  for (const auto& c : candidates.rules) {
    if (std::find(accepted.begin(), accepted.end(), c.rule.id) != accepted.end()) {
      rubric.rules.push_back(c.rule);
    }
  }
  rubric.rules.push_back(LabelRule("C" + std::to_string(candidates.rules.size() + 1),
                                   Provenance::kDerived));
  rubric.advisories = candidates.advisories;
  rubric.Validate();
  return rubric;
}

std::string SerializeExplanation(const ShapExplanation& e) {
  nlohmann::ordered_json j;
  j["instance_id"] = e.instance_id;
  j["baseline"] = e.baseline;
  j["output"] = e.output;
  nlohmann::ordered_json attr;
  for (std::size_t f = 0; f < kNumFeatures; ++f) attr[FeatureNames()[f]] = e.attributions[f];
  j["attributions"] = std::move(attr);
  return j.dump();
}

std::string FormatPdpCsv(const std::vector<PdpCurve>& curves) {
  std::string out = "feature,grid_value,mean_prediction,baseline\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      out += c.feature + "," + FormatDouble(c.grid[i]) + "," + FormatDouble(c.means[i]) + "," +
             FormatDouble(c.baseline) + "\n";
    }
  }
  return out;
}

}  // namespace promptedit
