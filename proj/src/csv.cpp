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

#include "promptedit/csv.hpp"

#include "promptedit/error.hpp"
#include "promptedit/strings.hpp"

namespace promptedit::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require(std::string_view name, std::string_view source) const {
  if (auto idx = column(name)) return *idx;
  throw Error(ErrorCode::kMissingColumn,
              std::string(source) + ": header lacks column '" + std::string(name) + "'");
}

Table Parse(std::string_view text, char sep) {
  Table table;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  const auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    const bool blank = fields.size() == 1 && fields[0].empty();
    if (!blank) {
      records.push_back(std::move(fields));
      record_lines.push_back(record_line);
    }
    fields.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == sep) {
      end_field();
    } else if (c == '\n') {
      end_record();
      ++line;
      record_line = line;
    } else if (c == '\r') {
      // CRLF tolerated.
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParse, "unterminated quoted field starting near line " +
                                       std::to_string(record_line));
  }
  if (!field.empty() || !fields.empty()) end_record();

  if (!records.empty()) {
    table.header = std::move(records.front());
    for (std::size_t i = 1; i < records.size(); ++i) {
      table.rows.push_back(std::move(records[i]));
      table.lines.push_back(record_lines[i]);
    }
  }
  // Strip a UTF-8 byte order mark from the first header cell.
  if (!table.header.empty() && table.header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    table.header[0].erase(0, 3);
  }
  return table;
}

Table ReadFile(const std::string& path, char sep) {
  return Parse(promptedit::ReadFile(path), sep);
}

std::string EscapeField(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string FormatRow(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += EscapeField(fields[i]);
  }
  out += '\n';
  return out;
}

}  // namespace promptedit::csv
