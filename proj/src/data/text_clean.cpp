// Copyright 2026 The MDRD Authors. All Rights Reserved.
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


#include "mdrd/data/text_clean.hpp"

#include <unicode/normalizer2.h>
#include <unicode/regex.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <memory>
#include <vector>

#include "mdrd/error.hpp"

namespace mdrd::data {

namespace {

constexpr int kMaxPasses = 8;

struct Patterns {
  std::unique_ptr<icu::RegexPattern> urls;
  std::unique_ptr<icu::RegexPattern> emails;
  std::unique_ptr<icu::RegexPattern> phones;
  std::unique_ptr<icu::RegexPattern> symbols;
  std::unique_ptr<icu::RegexPattern> hashes;
  std::unique_ptr<icu::RegexPattern> unconventional;
  std::unique_ptr<icu::RegexPattern> spaces;
  const icu::Normalizer2* nfkc = nullptr;
};

std::unique_ptr<icu::RegexPattern> compile(const char* pattern, uint32_t flags = 0) {
  UErrorCode status = U_ZERO_ERROR;
  UParseError perr;
  std::unique_ptr<icu::RegexPattern> p(
      icu::RegexPattern::compile(icu::UnicodeString::fromUTF8(pattern), flags, perr, status));
  if (U_FAILURE(status)) fail("clean_text: bad pattern ", pattern, ": ", u_errorName(status));
  return p;
}

const Patterns& patterns() {
  static const Patterns p = [] {
    Patterns out;
    out.urls = compile(R"((?:https?://|ftp://|www\.)\S+)", UREGEX_CASE_INSENSITIVE);
    out.emails = compile(R"([\p{L}\p{N}._%+\-]+@[\p{L}\p{N}\-]+(?:\.[\p{L}\p{N}\-]+)*\.\p{L}{2,})");
    out.phones = compile(R"(\+?\d(?:[\d\-() ]{6,}\d))");
    // Emoji, pictographs and symbol categories, plus the glue characters of
    // emoji sequences (variation selectors, ZWJ, keycap combiner).
    out.symbols = compile(R"([\p{Extended_Pictographic}\p{S}\x{FE00}-\x{FE0F}\x{200D}\x{20E3}])");
    out.hashes = compile(R"(#+(?=\w))");
    // Regional indicators, tag characters, private use, unassigned, controls
    // other than whitespace, and format characters other than ZWNJ.
    out.unconventional = compile(
        R"([\x{1F1E6}-\x{1F1FF}\x{E0000}-\x{E007F}\p{Co}\p{Cn}[\p{Cc}--[\t\n\x{0B}\f\r\x{85}]][\p{Cf}--[\x{200C}]]])");
    out.spaces = compile(R"([\s\x{200C}]*\s[\s\x{200C}]*)");
    UErrorCode status = U_ZERO_ERROR;
    out.nfkc = icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status)) fail("clean_text: NFKC unavailable: ", u_errorName(status));
    return out;
  }();
  return p;
}

icu::UnicodeString replace_all(const icu::RegexPattern& pattern, const icu::UnicodeString& text,
                               const icu::UnicodeString& with) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> m(pattern.matcher(text, status));
  icu::UnicodeString out = m->replaceAll(with, status);
  if (U_FAILURE(status)) fail("clean_text: regex failure: ", u_errorName(status));
  return out;
}

icu::UnicodeString normalize(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = patterns().nfkc->normalize(text, status);
  if (U_FAILURE(status)) fail("clean_text: normalization failed: ", u_errorName(status));
  return out;
}

using Table = std::vector<std::pair<icu::UnicodeString, icu::UnicodeString>>;

// Keys are normalized like the text and applied longest first so that a
// multi-codepoint emoji is replaced before any of its parts.
Table prepare(const std::map<std::string, std::string>& table, bool pad) {
  Table out;
  for (const auto& [from, to] : table) {
    icu::UnicodeString key = normalize(icu::UnicodeString::fromUTF8(from));
    if (key.isEmpty()) continue;
    icu::UnicodeString value = icu::UnicodeString::fromUTF8(to);
    if (pad) value = icu::UnicodeString(u" ") + value + icu::UnicodeString(u" ");
    out.emplace_back(std::move(key), std::move(value));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.first.length() > b.first.length(); });
  return out;
}

icu::UnicodeString apply(icu::UnicodeString text, const Table& table) {
  for (const auto& [from, to] : table) text.findAndReplace(from, to);
  return text;
}

icu::UnicodeString one_pass(const icu::UnicodeString& input, const Table& chars, const Table& emoji) {
  const Patterns& p = patterns();
  const icu::UnicodeString space(u" ");
  const icu::UnicodeString none;
  icu::UnicodeString t = apply(normalize(input), chars);
  t = apply(t, emoji);
  t = replace_all(*p.urls, t, space);
  t = replace_all(*p.emails, t, space);
  t = replace_all(*p.phones, t, space);
  t = replace_all(*p.symbols, t, space);
  t = replace_all(*p.hashes, t, none);
  t = replace_all(*p.unconventional, t, none);
  t = replace_all(*p.spaces, t, space);
  t.trim();
  return t;
}

}  // namespace

std::optional<std::string> clean_text(std::string_view raw, const CleanOptions& options) {
  const Table chars = prepare(options.char_substitutions, false);
  const Table emoji = prepare(options.emoji_map, true);
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    icu::UnicodeString next = one_pass(text, chars, emoji);
    const bool stable = next == text;
    text = std::move(next);
    if (stable) break;
  }
  if (text.isEmpty()) return std::nullopt;
  std::string out;
  text.toUTF8String(out);
  return out;
}

}  // namespace mdrd::data
