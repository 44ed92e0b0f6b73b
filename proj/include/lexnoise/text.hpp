// Copyright 2026 The lexnoise Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXNOISE_TEXT_HPP_
#define LEXNOISE_TEXT_HPP_

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lexnoise::text {

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Lowercases and strips leading/trailing whitespace and punctuation.
inline std::string normalize_word(std::string_view word) {
  word = trim(word);
  while (!word.empty() && is_punct(word.front())) word.remove_prefix(1);
  while (!word.empty() && is_punct(word.back())) word.remove_suffix(1);
  return to_lower(word);
}

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// Whitespace tokens, lowercased. Used for language-model text.
inline std::vector<std::string> tokenize(std::string_view line) {
  auto tokens = split_whitespace(line);
  for (auto& t : tokens) t = to_lower(t);
  return tokens;
}

}  // namespace lexnoise::text

#endif  // LEXNOISE_TEXT_HPP_
