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

#ifndef PROMPTEDIT_EMOTIONS_HPP_
#define PROMPTEDIT_EMOTIONS_HPP_

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace promptedit {

enum class Valence { kPositive, kNegative };

std::string_view ValenceName(Valence v);

// Frozen valence table. Lookup is case-insensitive; labels outside the
// table have no valence.
std::optional<Valence> ValenceOf(std::string_view emotion);

// The 32 EmpatheticDialogues labels together with the valence-table labels.
const std::set<std::string>& DefaultEmotionSet();

}  // namespace promptedit

#endif  // PROMPTEDIT_EMOTIONS_HPP_
