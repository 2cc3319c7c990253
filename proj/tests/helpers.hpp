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

#include "eeorder/phonology.hpp"
#include "eeorder/rng.hpp"

namespace eeorder::test {

inline const LanguageProfile& hmong() {
  static const LanguageProfile p = load_profile("hmong", default_data_dir());
  return p;
}

inline const LanguageProfile& lahu() {
  static const LanguageProfile p = load_profile("lahu", default_data_dir());
  return p;
}

// A fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("eeorder_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace eeorder::test
