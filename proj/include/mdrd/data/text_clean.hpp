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


#ifndef MDRD_DATA_TEXT_CLEAN_HPP_
#define MDRD_DATA_TEXT_CLEAN_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace mdrd::data {

struct CleanOptions {
  /// Emoji (or emoji sequence) -> replacement word.
  std::map<std::string, std::string> emoji_map;
  /// Applied right after NFKC; defaults unify Arabic yeh/kaf with Persian forms.
  std::map<std::string, std::string> char_substitutions = {{"ي", "ی"}, {"ك", "ک"}};
};

/// Normalizes a post. Steps, in order: NFKC + character table, mapped-emoji
/// substitution, removal of URLs / e-mails / phone numbers / other emoji and
/// symbols, '#' stripping before hashtag words, removal of flags and
/// non-printing or private-use code points (ZWNJ is kept), whitespace
/// collapse. The steps repeat until the text stops changing, which makes
/// the function idempotent. Returns nullopt when nothing is left.
std::optional<std::string> clean_text(std::string_view raw, const CleanOptions& options = {});

}  // namespace mdrd::data

#endif  // MDRD_DATA_TEXT_CLEAN_HPP_
