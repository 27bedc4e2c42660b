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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ouvls {

/// Literal token substituted for every numeric run.
inline constexpr std::string_view kNumToken = "<num>";

/// Rule-based sentence splitter. A boundary follows a run of '.', '!' or '?'
/// (plus any closing quotes or brackets) when the text ends there, or when
/// whitespace and then an uppercase letter follow. A lone '.' after a known
/// abbreviation ("st.", "approx.", "no.", ...) is not a boundary. Sentences
/// are returned trimmed, in order.
std::vector<std::string> split_sentences(std::string_view paragraph);

/// Lowercase, fold accents (canonical decomposition, then drop nonspacing
/// marks) and map typographic quotes to their ASCII forms. Input must be
/// UTF-8; invalid sequences become U+FFFD.
std::string fold_text(std::string_view text);

/// Full token pipeline for one sentence: fold_text, pad punctuation
/// `.,;:!?()"'` with spaces (except '.'/',' between digits), split on
/// whitespace, then replace every numeric run with "<num>", splitting it off
/// from any letters it was glued to ("16th" -> "<num>", "th").
std::vector<std::string> preprocess(std::string_view sentence);

std::string join_tokens(std::span<const std::string> tokens);

bool is_valid_utf8(std::string_view text);

/// Removes markup tags and decodes the common character entities found in
/// the syndication export. Collapses runs of whitespace.
std::string strip_markup(std::string_view text);

}  // namespace ouvls
