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

#include "promptedit/proxy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "promptedit/csv.hpp"
#include "promptedit/error.hpp"
#include "promptedit/random.hpp"
#include "promptedit/strings.hpp"

namespace promptedit {

std::string_view TargetName(Target target) {
  return target == Target::kIea ? "iea" : "ita";
}

Target ParseTarget(std::string_view name) {
  const std::string lower = ToLower(name);
  if (lower == "iea") return Target::kIea;
  if (lower == "ita") return Target::kIta;
  throw Error(ErrorCode::kInvalidArgument, "target must be iea or ita, got '" +
                                               std::string(name) + "'");
}

BinarizedScores Binarize(const std::vector<double>& scores) {
  if (scores.size() < 2) {
    throw Error(ErrorCode::kTooFewScores, "need at least 2 scores, got " +
                                              std::to_string(scores.size()));
  }
  BinarizedScores out;
  out.mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
             static_cast<double>(scores.size());
  out.labels.reserve(scores.size());
  for (double s : scores) out.labels.push_back(s > out.mean ? 1 : 0);
  return out;
}

ProxyDataset MakeDataset(const std::vector<FeatureVector>& features,
                         const std::vector<double>& scores, Target target) {
  if (features.size() != scores.size()) {
    throw Error(ErrorCode::kShapeMismatch, std::to_string(features.size()) +
                                               " feature rows but " +
                                               std::to_string(scores.size()) + " scores");
  }
  const auto bin = Binarize(scores);
  ProxyDataset ds;
  ds.target = target;
  ds.score_mean = bin.mean;
  ds.rows.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    ds.rows.push_back({features[i], scores[i], bin.labels[i]});
  }
  return ds;
}

std::vector<ScoreRecord> ParseScoreCsv(std::string_view text, std::string_view source) {
  const auto table = csv::Parse(text);
  const std::size_t c_id = table.require("id", source);
  const std::size_t c_emotion = table.require("emotion", source);
  const std::size_t c_text = table.require("text", source);
  const std::size_t c_iea = table.require("iea", source);
  const std::size_t c_ita = table.require("ita", source);
  std::vector<ScoreRecord> out;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = std::string(source) + ":" + std::to_string(table.lines[r]);
    if (row.size() != table.header.size()) {
      throw Error(ErrorCode::kMalformedRow, where + ": expected " +
                                                std::to_string(table.header.size()) +
                                                " fields");
    }
    ScoreRecord rec{row[c_id], row[c_emotion], row[c_text], 0.0, 0.0};
    if (!ParseDouble(row[c_iea], rec.iea) || !ParseDouble(row[c_ita], rec.ita)) {
      throw Error(ErrorCode::kMalformedRow, where + ": non-numeric score");
    }
    if (!seen.insert(rec.id).second) {
      throw Error(ErrorCode::kDuplicateId, where + ": id '" + rec.id + "'");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string FormatScoreCsv(const std::vector<ScoreRecord>& records) {
  std::string out = "id,emotion,text,iea,ita\n";
  for (const auto& r : records) {
    out += csv::FormatRow({r.id, r.emotion, r.text, FormatDouble(r.iea), FormatDouble(r.ita)});
  }
  return out;
}

ProxyDataset JoinScores(const FeatureTable& features, const std::vector<ScoreRecord>& scores,
                        Target target) {
  std::unordered_map<std::string, const ScoreRecord*> by_id;
  for (const auto& s : scores) by_id[s.id] = &s;
  std::vector<double> y;
  y.reserve(features.ids.size());
  for (const auto& id : features.ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kMalformedRow, "no score for feature row '" + id + "'");
    }
    y.push_back(target == Target::kIea ? it->second->iea : it->second->ita);
  }
  return MakeDataset(features.rows, y, target);
}

// --- Model -----------------------------------------------------------------

double Tree::Eval(const double* x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[n.feature] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

TreeEnsemble::TreeEnsemble()
    : feature_schema(FeatureNames().begin(), FeatureNames().end()) {}

void TreeEnsemble::CheckSchema() const {
  const auto& names = FeatureNames();
  if (feature_schema.size() != names.size() ||
      !std::equal(feature_schema.begin(), feature_schema.end(), names.begin())) {
    throw Error(ErrorCode::kSchemaMismatch,
                "model feature schema differs from " + std::string(kFeatureSchemaVersion));
  }
}

double TreeEnsemble::RawUnchecked(const double* x) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.Eval(x);
  return base_score + learning_rate * sum;
}

std::vector<std::size_t> TreeEnsemble::UsedFeatures() const {
  std::vector<bool> used(kNumFeatures, false);
  for (const auto& t : trees) {
    for (const auto& n : t.nodes) {
      if (!n.is_leaf()) used[static_cast<std::size_t>(n.feature)] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    if (used[f]) out.push_back(f);
  }
  return out;
}

double Logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double PredictRaw(const TreeEnsemble& model, const FeatureVector& x) {
  model.CheckSchema();
  return model.RawUnchecked(x.values().data());
}

double Predict(const TreeEnsemble& model, const FeatureVector& x) {
  return Logistic(PredictRaw(model, x));
}

// --- Training --------------------------------------------------------------

namespace {

constexpr int kMaxQuantileCuts = 32;

double Softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double RowLoss(double raw, int y) { return Softplus(raw) - (y ? raw : 0.0); }

// Rows of a dataset in an order that depends only on their contents.
std::vector<std::size_t> CanonicalOrder(const std::vector<ProxyRow>& rows) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto va = rows[a].x.values();
    const auto vb = rows[b].x.values();
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      if (va[f] != vb[f]) return va[f] < vb[f];
    }
    if (rows[a].label != rows[b].label) return rows[a].label < rows[b].label;
    return rows[a].raw_score < rows[b].raw_score;
  });
  return order;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

struct Frontier {
  int node = 0;
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

class Booster {
 public:
  Booster(const std::vector<ProxyRow>& rows, const TrainParams& params)
      : params_(params), n_(rows.size()) {
    const auto order = CanonicalOrder(rows);
    x_.resize(n_ * kNumFeatures);
    y_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& row = rows[order[i]];
      std::copy(row.x.values().begin(), row.x.values().end(), x_.begin() + i * kNumFeatures);
      y_[i] = row.label;
    }
    sorted_.resize(kNumFeatures);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      auto& s = sorted_[f];
      s.resize(n_);
      std::iota(s.begin(), s.end(), 0);
      std::stable_sort(s.begin(), s.end(),
                       [&](std::size_t a, std::size_t b) { return X(a, f) < X(b, f); });
    }
  }

  TreeEnsemble Run() {
    TreeEnsemble model;
    model.learning_rate = params_.learning_rate;
    const double positives = std::accumulate(y_.begin(), y_.end(), 0.0);
    const double p = positives / static_cast<double>(n_);
    model.base_score = std::log(p / (1.0 - p));
    sum_.assign(n_, 0.0);
    grad_.assign(n_, 0.0);
    hess_.assign(n_, 0.0);
    Rng rng(params_.seed);
    for (int t = 0; t < params_.num_trees; ++t) {
      for (std::size_t i = 0; i < n_; ++i) {
        const double prob = Logistic(Raw(model, i));
        grad_[i] = prob - y_[i];
        hess_[i] = std::max(prob * (1.0 - prob), 1e-16);
      }
      const auto active = SampleRows(rng);
      Tree tree = Grow(active);
      Backtrack(model, tree);
      for (std::size_t i = 0; i < n_; ++i) sum_[i] += tree.Eval(&x_[i * kNumFeatures]);
      model.trees.push_back(std::move(tree));
    }
    return model;
  }

 private:
  double X(std::size_t row, std::size_t f) const { return x_[row * kNumFeatures + f]; }

  double Raw(const TreeEnsemble& m, std::size_t i) const {
    return m.base_score + m.learning_rate * sum_[i];
  }

  std::vector<bool> SampleRows(Rng& rng) const {
    std::vector<bool> active(n_, true);
    if (params_.subsample >= 1.0) return active;
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(params_.subsample * static_cast<double>(n_))));
    std::vector<std::size_t> idx(n_);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(std::span<std::size_t>(idx));
    active.assign(n_, false);
    for (std::size_t i = 0; i < keep; ++i) active[idx[i]] = true;
    return active;
  }

  double Score(double g, double h) const { return g * g / (h + params_.lambda); }

  // Best split of one node along one feature. `rows` are sorted by value.
  void Scan(const std::vector<std::size_t>& rows, std::size_t f, const Frontier& node,
            Split& best) const {
    const std::size_t n = rows.size();
    const auto min_leaf = static_cast<std::size_t>(params_.min_leaf);
    if (n < 2 * min_leaf || n < 2) return;
    // Cut positions: a cut at k puts rows[0..k) left.
    std::vector<std::size_t> cuts;
    for (std::size_t k = 1; k < n; ++k) {
      if (X(rows[k - 1], f) != X(rows[k], f)) cuts.push_back(k);
    }
    if (!IsCountFeature(f) && cuts.size() > static_cast<std::size_t>(kMaxQuantileCuts)) {
      std::vector<std::size_t> picked;
      for (int q = 1; q <= kMaxQuantileCuts; ++q) {
        const std::size_t target = std::max<std::size_t>(
            1, n * static_cast<std::size_t>(q) / (kMaxQuantileCuts + 1));
        const auto it = std::lower_bound(cuts.begin(), cuts.end(), target);
        if (it != cuts.end() && (picked.empty() || picked.back() != *it)) picked.push_back(*it);
      }
      cuts = std::move(picked);
    }
    const double parent = Score(node.g, node.h);
    double gl = 0.0, hl = 0.0;
    std::size_t k = 0;
    for (std::size_t cut : cuts) {
      for (; k < cut; ++k) {
        gl += grad_[rows[k]];
        hl += hess_[rows[k]];
      }
      if (cut < min_leaf || n - cut < min_leaf) continue;
      const double gain = Score(gl, hl) + Score(node.g - gl, node.h - hl) - parent;
      if (gain > best.gain && gain > 1e-12) {
        best.gain = gain;
        best.feature = static_cast<int>(f);
        best.threshold = 0.5 * (X(rows[cut - 1], f) + X(rows[cut], f));
      }
    }
  }

  Tree Grow(const std::vector<bool>& active) {
    Tree tree;
    tree.nodes.emplace_back();
    std::vector<int> slot(n_, -1);  // frontier position of each row
    std::vector<Frontier> frontier(1);
    for (std::size_t i = 0; i < n_; ++i) {
      if (!active[i]) continue;
      slot[i] = 0;
      frontier[0].g += grad_[i];
      frontier[0].h += hess_[i];
      ++frontier[0].count;
    }
    std::vector<Frontier> leaves;
    for (int depth = 0; depth < params_.max_depth && !frontier.empty(); ++depth) {
      std::vector<Split> best(frontier.size());
      std::vector<std::vector<std::size_t>> lists(frontier.size());
      for (std::size_t f = 0; f < kNumFeatures; ++f) {
        for (auto& l : lists) l.clear();
        for (std::size_t r : sorted_[f]) {
          if (slot[r] >= 0) lists[static_cast<std::size_t>(slot[r])].push_back(r);
        }
        for (std::size_t a = 0; a < frontier.size(); ++a) Scan(lists[a], f, frontier[a], best[a]);
      }
      std::vector<Frontier> next;
      std::vector<int> remap(frontier.size() * 2, -1);
      for (std::size_t a = 0; a < frontier.size(); ++a) {
        if (best[a].feature < 0) {
          leaves.push_back(frontier[a]);
          continue;
        }
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        auto& parent = tree.nodes[static_cast<std::size_t>(frontier[a].node)];
        parent.feature = best[a].feature;
        parent.threshold = best[a].threshold;
        parent.left = left;
        parent.right = left + 1;
        remap[2 * a] = static_cast<int>(next.size());
        next.push_back({left, 0.0, 0.0, 0});
        remap[2 * a + 1] = static_cast<int>(next.size());
        next.push_back({left + 1, 0.0, 0.0, 0});
      }
      for (std::size_t i = 0; i < n_; ++i) {
        if (slot[i] < 0) continue;
        const auto a = static_cast<std::size_t>(slot[i]);
        if (best[a].feature < 0) {
          slot[i] = -1;
          continue;
        }
        const bool go_left = X(i, static_cast<std::size_t>(best[a].feature)) <= best[a].threshold;
        const int dst = remap[2 * a + (go_left ? 0 : 1)];
        slot[i] = dst;
        auto& child = next[static_cast<std::size_t>(dst)];
        child.g += grad_[i];
        child.h += hess_[i];
        ++child.count;
      }
      frontier = std::move(next);
    }
    for (const auto& f : frontier) leaves.push_back(f);
    for (const auto& leaf : leaves) {
      tree.nodes[static_cast<std::size_t>(leaf.node)].value = -leaf.g / (leaf.h + params_.lambda);
    }
    return tree;
  }

  // Shrinks any leaf whose step would raise the training loss of the rows it
  // holds, so that the loss never increases from one round to the next.
  void Backtrack(const TreeEnsemble& model, Tree& tree) const {
    std::vector<std::vector<std::size_t>> members(tree.nodes.size());
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t k = 0;
      const double* x = &x_[i * kNumFeatures];
      while (!tree.nodes[k].is_leaf()) {
        const auto& nd = tree.nodes[k];
        k = static_cast<std::size_t>(x[nd.feature] <= nd.threshold ? nd.left : nd.right);
      }
      members[k].push_back(i);
    }
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      auto& node = tree.nodes[k];
      if (!node.is_leaf() || members[k].empty()) continue;
      double before = 0.0;
      for (std::size_t i : members[k]) before += RowLoss(Raw(model, i), y_[i]);
      const auto loss_with = [&](double w) {
        double total = 0.0;
        for (std::size_t i : members[k]) {
          total += RowLoss(model.base_score + model.learning_rate * (sum_[i] + w), y_[i]);
        }
        return total;
      };
      int halvings = 0;
      while (node.value != 0.0 && loss_with(node.value) > before) {
        node.value = ++halvings > 40 ? 0.0 : node.value * 0.5;
      }
    }
  }

  const TrainParams& params_;
  std::size_t n_;
  std::vector<double> x_;
  std::vector<int> y_;
  std::vector<std::vector<std::size_t>> sorted_;
  std::vector<double> sum_, grad_, hess_;
};

}  // namespace

void ValidateParams(const TrainParams& p) {
  const auto bad = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidParams, what);
  };
  if (p.num_trees < 0) bad("num_trees must be >= 0");
  if (p.max_depth < 1) bad("max_depth must be >= 1");
  if (!(p.learning_rate > 0.0 && p.learning_rate <= 1.0)) bad("learning_rate must be in (0, 1]");
  if (p.min_leaf < 1) bad("min_leaf must be >= 1");
  if (!(p.subsample > 0.0 && p.subsample <= 1.0)) bad("subsample must be in (0, 1]");
  if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) bad("lambda must be finite and >= 0");
}

TreeEnsemble Train(const ProxyDataset& dataset, const TrainParams& params) {
  ValidateParams(params);
  if (dataset.rows.empty()) throw Error(ErrorCode::kTooFewRows, "empty training set");
  const auto positives = std::count_if(dataset.rows.begin(), dataset.rows.end(),
                                       [](const ProxyRow& r) { return r.label == 1; });
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(dataset.rows.size())) {
    throw Error(ErrorCode::kSingleClass, "training labels contain a single class");
  }
  return Booster(dataset.rows, params).Run();
}

std::vector<double> TrainingLossCurve(const TreeEnsemble& model, const ProxyDataset& dataset) {
  model.CheckSchema();
  const auto order = CanonicalOrder(dataset.rows);
  std::vector<double> sums(dataset.rows.size(), 0.0);
  std::vector<double> curve;
  const auto mean_loss = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto& row = dataset.rows[order[i]];
      total += RowLoss(model.base_score + model.learning_rate * sums[i], row.label);
    }
    return total / static_cast<double>(order.size());
  };
  curve.push_back(mean_loss());
  for (const auto& tree : model.trees) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      sums[i] += tree.Eval(dataset.rows[order[i]].x.values().data());
    }
    curve.push_back(mean_loss());
  }
  return curve;
}

double Auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "scores and labels differ in length");
  }
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  double rank_sum = 0.0;
  double positives = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[idx[k]] == 1) {
        rank_sum += midrank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw Error(ErrorCode::kSingleClass, "AUC needs both classes");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

CvReport CrossValidate(const ProxyDataset& dataset, const TrainParams& params, int k) {
  ValidateParams(params);
  if (k < 2) throw Error(ErrorCode::kInvalidParams, "need at least 2 folds");
  const auto order = CanonicalOrder(dataset.rows);
  std::vector<std::size_t> pos, neg;
  for (std::size_t i : order) (dataset.rows[i].label == 1 ? pos : neg).push_back(i);
  const auto folds = static_cast<std::size_t>(k);
  if (pos.size() < folds || neg.size() < folds) {
    throw Error(ErrorCode::kTooFewRows, "each class needs at least " + std::to_string(k) +
                                            " rows for stratified folds");
  }
  Rng rng(params.seed);
  rng.shuffle(std::span<std::size_t>(pos));
  rng.shuffle(std::span<std::size_t>(neg));
  std::vector<std::size_t> fold_of(dataset.rows.size());
  for (std::size_t j = 0; j < pos.size(); ++j) fold_of[pos[j]] = j % folds;
  for (std::size_t j = 0; j < neg.size(); ++j) fold_of[neg[j]] = (j + pos.size()) % folds;

  CvReport report;
  report.folds = k;
  for (std::size_t fold = 0; fold < folds; ++fold) {
    ProxyDataset train;
    train.target = dataset.target;
    train.score_mean = dataset.score_mean;
    std::vector<const ProxyRow*> held;
    for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
      if (fold_of[i] == fold) {
        held.push_back(&dataset.rows[i]);
      } else {
        train.rows.push_back(dataset.rows[i]);
      }
    }
    const auto model = Train(train, params);
    std::vector<double> scores;
    std::vector<int> labels;
    for (const auto* row : held) {
      scores.push_back(model.RawUnchecked(row->x.values().data()));
      labels.push_back(row->label);
    }
    report.auc_per_fold.push_back(Auc(scores, labels));
  }
  report.auc_mean = std::accumulate(report.auc_per_fold.begin(), report.auc_per_fold.end(), 0.0) /
                    static_cast<double>(folds);
  return report;
}

// --- Serialization ---------------------------------------------------------

std::string SerializeModel(const TreeEnsemble& model) {
  nlohmann::ordered_json j;
  j["schema_version"] = TreeEnsemble::kSchemaVersion;
  j["feature_schema_version"] = kFeatureSchemaVersion;
  j["feature_schema"] = model.feature_schema;
  j["base_score"] = FormatDouble(model.base_score);
  j["learning_rate"] = FormatDouble(model.learning_rate);
  auto trees = nlohmann::ordered_json::array();
  for (const auto& t : model.trees) {
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : t.nodes) {
      nlohmann::ordered_json node;
      if (n.is_leaf()) {
        node["leaf"] = FormatDouble(n.value);
      } else {
        node["feature"] = model.feature_schema.at(static_cast<std::size_t>(n.feature));
        node["threshold"] = FormatDouble(n.threshold);
        node["left"] = n.left;
        node["right"] = n.right;
      }
      nodes.push_back(std::move(node));
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);
  return j.dump(1) + "\n";
}

namespace {

double DecimalField(const nlohmann::json& j, const char* key) {
  double v = 0.0;
  if (!j.contains(key) || !j[key].is_string() || !ParseDouble(j[key].get<std::string>(), v)) {
    throw Error(ErrorCode::kParse, std::string("model field '") + key +
                                       "' must be a decimal string");
  }
  return v;
}

}  // namespace

TreeEnsemble DeserializeModel(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model: ") + e.what());
  }
  if (j.value("schema_version", std::string()) != TreeEnsemble::kSchemaVersion) {
    throw Error(ErrorCode::kSchemaMismatch, "unsupported model schema_version");
  }
  TreeEnsemble model;
  try {
    model.feature_schema = j.at("feature_schema").get<std::vector<std::string>>();
    model.base_score = DecimalField(j, "base_score");
    model.learning_rate = DecimalField(j, "learning_rate");
    for (const auto& jt : j.at("trees")) {
      Tree tree;
      for (const auto& jn : jt.at("nodes")) {
        TreeNode node;
        if (jn.contains("leaf")) {
          node.value = DecimalField(jn, "leaf");
        } else {
          const auto name = jn.at("feature").get<std::string>();
          const auto it = std::find(model.feature_schema.begin(), model.feature_schema.end(), name);
          if (it == model.feature_schema.end()) {
            throw Error(ErrorCode::kUnknownFeature, "split on '" + name + "'");
          }
          node.feature = static_cast<int>(it - model.feature_schema.begin());
          node.threshold = DecimalField(jn, "threshold");
          node.left = jn.at("left").get<int>();
          node.right = jn.at("right").get<int>();
        }
        tree.nodes.push_back(node);
      }
      const auto count = static_cast<int>(tree.nodes.size());
      if (count == 0) throw Error(ErrorCode::kParse, "tree without nodes");
      for (int i = 0; i < count; ++i) {
        const auto& n = tree.nodes[static_cast<std::size_t>(i)];
        if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= count || n.right >= count)) {
          throw Error(ErrorCode::kParse, "tree child index out of range");
        }
      }
      model.trees.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model: ") + e.what());
  }
  return model;
}

}  // namespace promptedit
