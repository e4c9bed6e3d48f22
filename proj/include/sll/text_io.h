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

// Small helpers for the plain-text formats used by datasets, manifests,
// grids and accuracy tables.

#ifndef SLL_TEXT_IO_H_
#define SLL_TEXT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sll::text {

// All lines of a file with '\r' stripped. A single trailing empty line
// (from the final newline) is dropped. Throws Error(kIo) if unreadable.
std::vector<std::string> ReadLines(const std::filesystem::path& path);

std::string_view Trim(std::string_view s);

std::vector<std::string_view> Split(std::string_view s, char delimiter);

// Strict parsers: the whole (trimmed) token must be consumed. They throw
// Error(kFormat) with `context` prepended to the message.
double ParseDouble(std::string_view token, const std::string& context);
long long ParseInt(std::string_view token, const std::string& context);

// `key=value` lines; blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> ReadKeyValueFile(
    const std::filesystem::path& path);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace sll::text

#endif  // SLL_TEXT_IO_H_
