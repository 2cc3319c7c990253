// Copyright 2026 The eeorder Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace eeorder::text {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
// Splits on runs of ASCII whitespace.
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool has_whitespace(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace eeorder::text
