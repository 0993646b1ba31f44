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

#ifndef PROMPTEDIT_CSV_HPP_
#define PROMPTEDIT_CSV_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace promptedit::csv {

// RFC 4180 style: comma separated, double-quoted fields may contain commas,
// newlines and doubled quotes.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row, for diagnostics.
  std::vector<std::size_t> lines;

  // Index of a header column, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  // Like column() but throws MissingColumn naming `source`.
  std::size_t require(std::string_view name, std::string_view source) const;
};

Table Parse(std::string_view text, char sep = ',');
Table ReadFile(const std::string& path, char sep = ',');

std::string EscapeField(std::string_view field);
std::string FormatRow(const std::vector<std::string>& fields);

}  // namespace promptedit::csv

#endif  // PROMPTEDIT_CSV_HPP_
