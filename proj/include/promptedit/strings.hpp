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

#ifndef PROMPTEDIT_STRINGS_HPP_
#define PROMPTEDIT_STRINGS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace promptedit {

std::string ToLower(std::string_view s);
std::string_view Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Shortest decimal string that parses back to the identical double.
std::string FormatDouble(double value);
// Strict parse of a whole string; returns false on trailing garbage.
bool ParseDouble(std::string_view text, double& out);
bool ParseInt(std::string_view text, long long& out);

std::string ReadFile(const std::filesystem::path& path);
// Writes to a sibling temp file then renames over the target.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

// FNV-1a, 64 bit. Stable across platforms; used for content addressing and
// the mock embedding backend.
std::uint64_t Fnv1a64(std::string_view data, std::uint64_t seed = 0);
std::string HexDigest(std::uint64_t value);

}  // namespace promptedit

#endif  // PROMPTEDIT_STRINGS_HPP_
