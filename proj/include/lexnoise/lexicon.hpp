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

#ifndef LEXNOISE_LEXICON_HPP_
#define LEXNOISE_LEXICON_HPP_

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexnoise/csv.hpp"
#include "lexnoise/error.hpp"
#include "lexnoise/text.hpp"

namespace lexnoise {

using Pronunciation = std::vector<std::string>;

// Drops trailing stress digits: "AE1" -> "AE".
inline std::string strip_stress(std::string_view phone) {
  while (!phone.empty() && std::isdigit(static_cast<unsigned char>(phone.back()))) phone.remove_suffix(1);
  return std::string(phone);
}

inline Pronunciation strip_stress(const Pronunciation& pron) {
  Pronunciation out;
  out.reserve(pron.size());
  for (const auto& p : pron) out.push_back(strip_stress(p));
  return out;
}

// Word -> ordered pronunciations, ARPABET-dictionary style. Keys are lowercase.
class PronunciationLexicon {
 public:
  void add(std::string_view word, Pronunciation pron) {
    if (pron.empty()) throw DataError("lexicon: pronunciation for '" + std::string(word) + "' is empty");
    entries_[text::to_lower(word)].push_back(std::move(pron));
  }

  bool contains(std::string_view word) const { return entries_.count(text::to_lower(word)) > 0; }

  const std::vector<Pronunciation>& pronunciations(std::string_view word) const {
    auto it = entries_.find(text::to_lower(word));
    if (it == entries_.end()) throw OutOfVocabularyError(std::string(word));
    return it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<Pronunciation>>& entries() const { return entries_; }

  // Writes the dictionary layout accepted by parse_lexicon.
  void write(std::ostream& out) const {
    for (const auto& [word, prons] : entries_) {
      for (std::size_t i = 0; i < prons.size(); ++i) {
        std::string upper = word;
        for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        out << upper;
        if (i > 0) out << '(' << i + 1 << ')';
        out << ' ';
        for (const auto& p : prons[i]) out << ' ' << p;
        out << '\n';
      }
    }
  }

 private:
  std::map<std::string, std::vector<Pronunciation>> entries_;
};

inline PronunciationLexicon parse_lexicon(std::istream& in, const std::string& source) {
  PronunciationLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.starts_with(";;;")) continue;
    auto fields = text::split_whitespace(trimmed);
    std::string word = fields.front();
    // WORD(n) marks an alternate pronunciation.
    if (const auto open = word.rfind('('); open != std::string::npos && open > 0 && word.back() == ')') {
      const auto digits = std::string_view(word).substr(open + 1, word.size() - open - 2);
      const bool numeric = !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
      });
      if (!numeric) throw DataError(source, line_no, "malformed alternate marker in '" + word + "'");
      word.resize(open);
    }
    if (fields.size() < 2) throw DataError(source, line_no, "entry '" + word + "' has no phonemes");
    lexicon.add(word, Pronunciation(fields.begin() + 1, fields.end()));
  }
  if (lexicon.size() == 0) throw DataError(source + ": empty lexicon");
  return lexicon;
}

inline PronunciationLexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon '" + path + "'");
  return parse_lexicon(in, path);
}

// Phoneme count of the first-listed pronunciation.
inline std::size_t phoneme_length(const PronunciationLexicon& lexicon, std::string_view word) {
  return lexicon.pronunciations(text::normalize_word(word)).front().size();
}

// True when the normalized spellings agree, or when the words share a
// pronunciation (stress ignored). OOV words compare by spelling only.
inline bool phonetic_match(const PronunciationLexicon& lexicon, std::string_view target,
                           std::string_view response) {
  const std::string a = text::normalize_word(target);
  const std::string b = text::normalize_word(response);
  if (a.empty() || b.empty()) return false;
  if (a == b) return true;
  if (!lexicon.contains(a) || !lexicon.contains(b)) return false;
  std::set<Pronunciation> forms;
  for (const auto& p : lexicon.pronunciations(a)) forms.insert(strip_stress(p));
  for (const auto& p : lexicon.pronunciations(b)) {
    if (forms.count(strip_stress(p))) return true;
  }
  return false;
}

inline constexpr std::string_view kTargetSlot = "{TARGET}";

struct SynonymPairRecord {
  std::string pair_id;
  std::string word_a;
  std::string word_b;
  std::string context;  // contains kTargetSlot exactly once
  std::string audio_a;  // optional
  std::string audio_b;  // optional

  std::string render(std::string_view word) const {
    std::string out = context;
    out.replace(out.find(kTargetSlot), kTargetSlot.size(), word);
    return out;
  }

  // Lowercased whitespace tokens left of the slot.
  std::vector<std::string> left_context() const {
    return text::tokenize(std::string_view(context).substr(0, context.find(kTargetSlot)));
  }
};

inline void validate_pair(const SynonymPairRecord& pair) {
  if (pair.word_a.empty() || pair.word_b.empty()) throw DataError("pair '" + pair.pair_id + "': empty word");
  if (text::to_lower(pair.word_a) == text::to_lower(pair.word_b)) {
    throw DataError("pair '" + pair.pair_id + "': word_a and word_b are identical ('" + pair.word_a + "')");
  }
  const auto first = pair.context.find(kTargetSlot);
  if (first == std::string::npos) {
    throw DataError("pair '" + pair.pair_id + "': context lacks the {TARGET} slot");
  }
  if (pair.context.find(kTargetSlot, first + 1) != std::string::npos) {
    throw DataError("pair '" + pair.pair_id + "': context has more than one {TARGET} slot");
  }
}

inline std::vector<SynonymPairRecord> parse_pairs(const csv::Table& table) {
  const auto c_id = table.column("pair_id");
  const auto c_a = table.column("word_a");
  const auto c_b = table.column("word_b");
  const auto c_ctx = table.column("context");
  const auto c_audio_a = table.find_column("audio_a");
  const auto c_audio_b = table.find_column("audio_b");
  std::vector<SynonymPairRecord> pairs;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    SynonymPairRecord p;
    p.pair_id = row[c_id];
    p.word_a = text::to_lower(text::trim(row[c_a]));
    p.word_b = text::to_lower(text::trim(row[c_b]));
    p.context = row[c_ctx];
    if (c_audio_a) p.audio_a = row[*c_audio_a];
    if (c_audio_b) p.audio_b = row[*c_audio_b];
    try {
      validate_pair(p);
    } catch (const DataError& e) {
      table.fail(r, e.what());
    }
    if (!seen.insert(p.pair_id).second) table.fail(r, "duplicate pair_id '" + p.pair_id + "'");
    pairs.push_back(std::move(p));
  }
  return pairs;
}

inline std::vector<SynonymPairRecord> load_pairs(const std::string& path) {
  return parse_pairs(csv::read_file(path));
}

}  // namespace lexnoise

#endif  // LEXNOISE_LEXICON_HPP_
