// Copyright (c) 2026 The ouvls Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace ouvls {

using Json = nlohmann::ordered_json;

/// Progress sink for long-running operations. May be empty.
using LogFn = std::function<void(std::string_view)>;

std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: to a sibling temp file, then
/// renames over the target. Creates parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

/// 64-bit FNV-1a, rendered as "fnv1a64:<16 hex digits>".
std::string content_hash(std::string_view bytes);
std::string file_hash(const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace ouvls
