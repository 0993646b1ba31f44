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

#ifndef PROMPTEDIT_SYNTHETIC_HPP_
#define PROMPTEDIT_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "promptedit/proxy_model.hpp"

namespace promptedit {

// Ground truth of the planted-rule generator.
inline constexpr double kPlantedAdjCount = 1.0;  // count_ADJ must exceed this
inline constexpr double kPlantedAdjConc = 2.0;   // conc_ADJ must exceed this

bool PlantedRule(const FeatureVector& x);

struct SyntheticOptions {
  std::size_t rows = 2000;
  double noise = 0.05;  // probability of flipping a label
  std::uint64_t seed = 0;
};

struct SyntheticData {
  ProxyDataset dataset;
  std::vector<int> clean_labels;
};

// Random feature rows shaped like real prompts (small counts, concreteness
// means on a 0.01 grid in [1, 5]) labelled by PlantedRule with label noise.
// raw_score is the noisy label itself, so the dataset mean is the base rate.
SyntheticData GeneratePlanted(const SyntheticOptions& options);

}  // namespace promptedit

#endif  // PROMPTEDIT_SYNTHETIC_HPP_
