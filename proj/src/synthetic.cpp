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

#include "promptedit/synthetic.hpp"

#include <array>
#include <cmath>

#include "promptedit/random.hpp"

namespace promptedit {

bool PlantedRule(const FeatureVector& x) {
  return x[CountIndex(PosBucket::kAdj)] > kPlantedAdjCount &&
         x[ConcIndex(PosBucket::kAdj)] > kPlantedAdjConc;
}

SyntheticData GeneratePlanted(const SyntheticOptions& options) {
  // Inclusive upper bound of each bucket's count, in bucket order.
  static constexpr std::array<int, kNumBuckets> kMaxCount = {6, 4, 4, 2, 3, 1, 3, 3, 1, 3};
  Rng rng(options.seed);
  SyntheticData out;
  out.dataset.target = Target::kIea;
  double total = 0.0;
  for (std::size_t r = 0; r < options.rows; ++r) {
    FeatureVector x;
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      const auto count = static_cast<double>(rng.below(static_cast<std::uint64_t>(kMaxCount[b]) + 1));
      x[b] = count;
      x[kNumBuckets + b] = count > 0 ? std::round(rng.uniform(1.0, 5.0) * 100.0) / 100.0 : 0.0;
    }
    const int clean = PlantedRule(x) ? 1 : 0;
    const int label = rng.bernoulli(options.noise) ? 1 - clean : clean;
    out.clean_labels.push_back(clean);
    out.dataset.rows.push_back({x, static_cast<double>(label), label});
    total += label;
  }
  out.dataset.score_mean = options.rows ? total / static_cast<double>(options.rows) : 0.0;
  return out;
}

}  // namespace promptedit
