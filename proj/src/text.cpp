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

#include "ouvls/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "ouvls/error.hpp"

namespace ouvls {

namespace {

constexpr std::array<std::string_view, 26> kAbbreviations = {
    "st",   "sts",  "approx", "no",  "nos", "nr",  "mt",  "mts", "ft",
    "dr",   "mr",   "mrs",    "ms",  "prof", "rev", "fr",  "ca",  "cf",
    "vs",   "e.g",  "i.e",    "viz", "jr",  "sr",  "vol", "fig"};

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Decodes the code point at byte offset `i`; advances `i`. Invalid bytes
// decode to a negative value.
UChar32 next_cp(std::string_view s, int32_t& i) {
  UChar32 c;
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const auto n = static_cast<int32_t>(s.size());
  U8_NEXT(p, i, n, c);
  return c;
}

UChar32 cp_at(std::string_view s, int32_t i) {
  return next_cp(s, i);
}

bool is_space_cp(UChar32 c) { return c >= 0 && u_isUWhiteSpace(c); }

bool is_closer(UChar32 c) {
  return c == ')' || c == ']' || c == '"' || c == '\'' || c == 0x2019 ||
         c == 0x201D || c == 0x00BB;
}

bool is_opener(UChar32 c) {
  return c == '(' || c == '[' || c == '"' || c == '\'' || c == 0x2018 ||
         c == 0x201C || c == 0x00AB;
}

bool is_upper_cp(UChar32 c) { return c >= 0 && (u_isupper(c) || u_istitle(c)); }

bool is_abbreviation(std::string_view text, int32_t dot) {
  int32_t b = dot;
  while (b > 0) {
    char c = text[b - 1];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '.') {
      --b;
    } else {
      break;
    }
  }
  if (b == dot) return false;
  std::string word(text.substr(b, dot - b));
  for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

std::string trim(std::string_view s) {
  int32_t b = 0;
  auto n = static_cast<int32_t>(s.size());
  while (b < n) {
    int32_t k = b;
    if (!is_space_cp(next_cp(s, k))) break;
    b = k;
  }
  int32_t e = n;
  while (e > b) {
    // walk back to the start of the previous code point
    int32_t k = e - 1;
    while (k > b && (static_cast<unsigned char>(s[k]) & 0xC0) == 0x80) --k;
    if (!is_space_cp(cp_at(s, k))) break;
    e = k;
  }
  return std::string(s.substr(b, e - b));
}

bool is_pad_punct(UChar32 c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '(': case ')': case '"': case '\'':
      return true;
    default:
      return false;
  }
}

bool is_digit_cp(UChar32 c) { return c >= 0 && u_isdigit(c); }

void append_cp(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool err = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, err);
  if (!err) out.append(buf, static_cast<std::size_t>(len));
}

// Splits `token` into alternating text fragments and "<num>" markers.
void emit_with_numbers(const std::vector<UChar32>& cps,
                       std::vector<std::string>& out) {
  std::string pending;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!is_digit_cp(cps[i])) {
      append_cp(pending, cps[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size()) {
      if (is_digit_cp(cps[j])) {
        ++j;
      } else if ((cps[j] == '.' || cps[j] == ',') && j + 1 < cps.size() &&
                 is_digit_cp(cps[j + 1])) {
        ++j;
      } else {
        break;
      }
    }
    if (!pending.empty()) out.push_back(std::move(pending));
    pending.clear();
    out.emplace_back(kNumToken);
    i = j;
  }
  if (!pending.empty()) out.push_back(std::move(pending));
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view p) {
  std::vector<std::string> out;
  const auto n = static_cast<int32_t>(p.size());
  int32_t start = 0;
  int32_t i = 0;
  auto emit = [&](int32_t end) {
    std::string s = trim(p.substr(start, end - start));
    if (!s.empty()) out.push_back(std::move(s));
    start = end;
  };
  while (i < n) {
    if (!is_terminator(p[i])) {
      ++i;
      continue;
    }
    const int32_t run_begin = i;
    int32_t j = i;
    while (j < n && is_terminator(p[j])) ++j;
    const bool single_dot = (j - run_begin == 1) && p[run_begin] == '.';
    while (j < n) {
      int32_t k = j;
      if (!is_closer(next_cp(p, k))) break;
      j = k;
    }
    // Boundary test on what follows the terminator run.
    int32_t k = j;
    bool saw_space = false;
    while (k < n) {
      int32_t m = k;
      if (!is_space_cp(next_cp(p, m))) break;
      saw_space = true;
      k = m;
    }
    bool boundary = false;
    if (k >= n) {
      boundary = true;
    } else if (saw_space) {
      while (k < n) {
        int32_t m = k;
        if (!is_opener(next_cp(p, m))) break;
        k = m;
      }
      boundary = k < n && is_upper_cp(cp_at(p, k));
    }
    if (boundary && single_dot && is_abbreviation(p, run_begin)) {
      boundary = false;
    }
    if (boundary) emit(j);
    i = j;
  }
  emit(n);
  return out;
}

std::string fold_text(std::string_view text) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.toLower(icu::Locale::getRoot());
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInternal, "ICU NFD unavailable");
  icu::UnicodeString decomposed = nfd->normalize(u, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInternal, "ICU normalize failed");
  icu::UnicodeString folded;
  for (int32_t i = 0; i < decomposed.length();) {
    UChar32 c = decomposed.char32At(i);
    i += U16_LENGTH(c);
    if (u_charType(c) == U_NON_SPACING_MARK) continue;
    switch (c) {
      case 0x2018: case 0x2019: case 0x201B: case 0x2032:
        c = '\'';
        break;
      case 0x201C: case 0x201D: case 0x201E: case 0x2033:
        c = '"';
        break;
      default:
        break;
    }
    folded.append(c);
  }
  std::string out;
  folded.toUTF8String(out);
  return out;
}

std::vector<std::string> preprocess(std::string_view sentence) {
  const std::string folded = fold_text(sentence);
  std::vector<UChar32> cps;
  cps.reserve(folded.size());
  for (int32_t i = 0; i < static_cast<int32_t>(folded.size());) {
    UChar32 c = next_cp(folded, i);
    cps.push_back(c < 0 ? 0xFFFD : c);
  }

  std::vector<std::string> tokens;
  std::vector<UChar32> current;
  auto flush = [&] {
    if (!current.empty()) emit_with_numbers(current, tokens);
    current.clear();
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const UChar32 c = cps[i];
    if (is_space_cp(c)) {
      flush();
      continue;
    }
    if (is_pad_punct(c)) {
      const bool numeric_sep = (c == '.' || c == ',') && i > 0 &&
                               i + 1 < cps.size() && is_digit_cp(cps[i - 1]) &&
                               is_digit_cp(cps[i + 1]);
      if (!numeric_sep) {
        flush();
        std::string p;
        append_cp(p, c);
        tokens.push_back(std::move(p));
        continue;
      }
    }
    current.push_back(c);
  }
  flush();
  return tokens;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

bool is_valid_utf8(std::string_view text) {
  for (int32_t i = 0; i < static_cast<int32_t>(text.size());) {
    if (next_cp(text, i) < 0) return false;
  }
  return true;
}

std::string strip_markup(std::string_view text) {
  std::string raw;
  raw.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '<') {
      const auto close = text.find('>', i);
      // Only treat it as a tag when it looks like one: "<p>", "</em>", "<br/>".
      if (close != std::string_view::npos && close > i + 1 &&
          (std::isalpha(static_cast<unsigned char>(text[i + 1])) ||
           text[i + 1] == '/' || text[i + 1] == '!')) {
        raw.push_back(' ');
        i = close;
        continue;
      }
    }
    if (c == '&') {
      const auto semi = text.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 10) {
        std::string_view ent = text.substr(i + 1, semi - i - 1);
        UChar32 cp = -1;
        if (ent == "amp") cp = '&';
        else if (ent == "lt") cp = '<';
        else if (ent == "gt") cp = '>';
        else if (ent == "quot") cp = '"';
        else if (ent == "apos") cp = '\'';
        else if (ent == "nbsp") cp = ' ';
        else if (ent.size() > 1 && ent[0] == '#') {
          try {
            cp = (ent[1] == 'x' || ent[1] == 'X')
                     ? static_cast<UChar32>(std::stoul(std::string(ent.substr(2)), nullptr, 16))
                     : static_cast<UChar32>(std::stoul(std::string(ent.substr(1))));
          } catch (...) {
            cp = -1;
          }
          if (cp < 0 || cp > 0x10FFFF) cp = -1;
        }
        if (cp >= 0) {
          append_cp(raw, cp);
          i = semi;
          continue;
        }
      }
    }
    raw.push_back(c);
  }
  // collapse whitespace
  std::string out;
  out.reserve(raw.size());
  bool space = false;
  for (int32_t i = 0; i < static_cast<int32_t>(raw.size());) {
    const int32_t begin = i;
    UChar32 c = next_cp(raw, i);
    if (is_space_cp(c)) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.append(raw, static_cast<std::size_t>(begin),
               static_cast<std::size_t>(i - begin));
  }
  return out;
}

}  // namespace ouvls
