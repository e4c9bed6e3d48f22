// Copyright 2026 The sll Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sll/text_io.h"

#include <charconv>
#include <cmath>
#include <fstream>

#include "sll/types.h"

namespace sll::text {

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Split(std::string_view s, char delimiter) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double ParseDouble(std::string_view token, const std::string& context) {
  token = Trim(token);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kFormat,
                context + ": non-numeric token '" + std::string(token) + "'");
  }
  return value;
}

long long ParseInt(std::string_view token, const std::string& context) {
  token = Trim(token);
  long long value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kFormat,
                context + ": not an integer '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::pair<std::string, std::string>> ReadKeyValueFile(
    const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::string>> entries;
  int line_no = 0;
  for (const auto& line : ReadLines(path)) {
    ++line_no;
    const auto body = Trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kFormat, path.string() + ":" +
                                          std::to_string(line_no) +
                                          ": expected key=value");
    }
    entries.emplace_back(std::string(Trim(body.substr(0, eq))),
                         std::string(Trim(body.substr(eq + 1))));
  }
  return entries;
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace sll::text
