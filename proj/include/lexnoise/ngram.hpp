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

#ifndef LEXNOISE_NGRAM_HPP_
#define LEXNOISE_NGRAM_HPP_

// Interpolated Kneser-Ney n-gram model with a single absolute discount.
//
// The highest order uses raw counts; every lower order uses continuation
// counts (number of distinct left extensions). The unigram level interpolates
// with a uniform distribution over the predictable vocabulary, which includes
// </s> and <unk> but not <s>.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexnoise/error.hpp"
#include "lexnoise/text.hpp"

namespace lexnoise::lm {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";
inline constexpr int kBosId = 0;
inline constexpr int kEosId = 1;
inline constexpr int kUnkId = 2;

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kMagic = "#lexnoise-ngram";

using Sentence = std::vector<std::string>;

// Highest-order n-gram counts plus the vocabulary they index. Everything else
// in the model is derived from these.
struct NgramCounts {
  int order = 3;
  int min_count = 2;
  std::vector<std::string> vocab;                 // id -> word
  std::map<std::vector<int>, long long> counts;   // keys have exactly `order` ids
};

// Counts order-grams over <s>-padded, </s>-terminated sentences. Words seen
// fewer than min_count times are replaced by <unk>.
inline NgramCounts count_ngrams(const std::vector<Sentence>& corpus, int order, int min_count = 2) {
  if (order < 1) throw DataError("lm: order must be >= 1");
  if (min_count < 1) throw DataError("lm: min_count must be >= 1");
  std::map<std::string, long long> freq;
  std::size_t sentences = 0;
  for (const auto& s : corpus) {
    if (s.empty()) continue;
    ++sentences;
    for (const auto& w : s) ++freq[text::to_lower(w)];
  }
  if (sentences == 0) throw DataError("lm: empty corpus");

  NgramCounts out;
  out.order = order;
  out.min_count = min_count;
  out.vocab = {std::string(kBos), std::string(kEos), std::string(kUnk)};
  std::unordered_map<std::string, int> index;
  for (int i = 0; i < 3; ++i) index.emplace(out.vocab[static_cast<std::size_t>(i)], i);
  for (const auto& [w, c] : freq) {
    if (c >= min_count && !index.count(w)) {
      index.emplace(w, static_cast<int>(out.vocab.size()));
      out.vocab.push_back(w);
    }
  }

  std::vector<int> ids;
  for (const auto& s : corpus) {
    if (s.empty()) continue;
    ids.assign(static_cast<std::size_t>(order - 1), kBosId);
    for (const auto& w : s) {
      auto it = index.find(text::to_lower(w));
      ids.push_back(it == index.end() ? kUnkId : it->second);
    }
    ids.push_back(kEosId);
    for (std::size_t end = static_cast<std::size_t>(order); end <= ids.size(); ++end) {
      ++out.counts[std::vector<int>(ids.begin() + static_cast<long>(end) - order, ids.begin() + static_cast<long>(end))];
    }
  }
  return out;
}

class NgramModel {
 public:
  static NgramModel build(NgramCounts counts, double discount) {
    if (!(discount > 0.0 && discount < 1.0)) throw DataError("lm: discount must lie in (0, 1)");
    if (counts.order < 1) throw DataError("lm: order must be >= 1");
    if (counts.vocab.size() < 3 || counts.vocab[kBosId] != kBos || counts.vocab[kEosId] != kEos ||
        counts.vocab[kUnkId] != kUnk) {
      throw DataError("lm: vocabulary must start with <s>, </s>, <unk>");
    }
    NgramModel m;
    m.counts_ = std::move(counts);
    m.discount_ = discount;
    for (std::size_t i = 0; i < m.counts_.vocab.size(); ++i) {
      if (!m.index_.emplace(m.counts_.vocab[i], static_cast<int>(i)).second) {
        throw DataError("lm: duplicate vocabulary entry '" + m.counts_.vocab[i] + "'");
      }
    }
    const auto order = static_cast<std::size_t>(m.counts_.order);
    m.levels_.resize(order);
    for (const auto& [gram, c] : m.counts_.counts) {
      if (gram.size() != order) throw DataError("lm: n-gram of wrong order");
      for (int id : gram) {
        if (id < 0 || static_cast<std::size_t>(id) >= m.counts_.vocab.size()) {
          throw DataError("lm: n-gram id out of range");
        }
      }
      if (gram.back() == kBosId) throw DataError("lm: <s> cannot be predicted");
      if (c <= 0) throw DataError("lm: n-gram counts must be positive");
      m.levels_[order - 1][std::vector<int>(gram.begin(), gram.end() - 1)].counts[gram.back()] += c;
    }
    // Continuation counts: each distinct (k+1)-gram type adds one to its k-gram suffix.
    for (std::size_t k = order - 1; k >= 1; --k) {
      for (const auto& [ctx, stats] : m.levels_[k]) {
        const std::vector<int> suffix(ctx.begin() + 1, ctx.end());
        auto& lower = m.levels_[k - 1][suffix];
        for (const auto& entry : stats.counts) lower.counts[entry.first] += 1;
      }
    }
    for (auto& level : m.levels_) {
      for (auto& [ctx, stats] : level) {
        stats.total = 0;
        for (const auto& entry : stats.counts) stats.total += entry.second;
        stats.types = static_cast<long long>(stats.counts.size());
      }
    }
    return m;
  }

  int order() const { return counts_.order; }
  double discount() const { return discount_; }
  const NgramCounts& counts() const { return counts_; }
  const std::vector<std::string>& vocab() const { return counts_.vocab; }

  // Ids that carry probability mass (everything except <s>).
  std::size_t predictable_size() const { return counts_.vocab.size() - 1; }

  int id(std::string_view word) const {
    const std::string w = text::to_lower(word);
    auto it = index_.find(w);
    return it == index_.end() ? kUnkId : it->second;
  }

  // Raw count of a highest-order n-gram (words mapped through the vocabulary).
  long long count(const std::vector<std::string>& ngram) const {
    if (ngram.size() != static_cast<std::size_t>(order())) throw Error("lm: count() needs an n-gram of the model order");
    std::vector<int> ids;
    for (const auto& w : ngram) ids.push_back(id(w));
    auto it = counts_.counts.find(ids);
    return it == counts_.counts.end() ? 0 : it->second;
  }

  // P(word | context); only the last order-1 ids of context are used, and a
  // short context is padded on the left with <s>.
  double probability(int word, std::span<const int> context) const {
    const auto n = static_cast<std::size_t>(order());
    std::vector<int> ctx(n - 1, kBosId);
    const std::size_t take = std::min(context.size(), n - 1);
    std::copy(context.end() - static_cast<long>(take), context.end(), ctx.end() - static_cast<long>(take));
    return interpolated(n, ctx, word);
  }

  // Natural-log probability of target given its left context.
  double log_prob(std::string_view target, const std::vector<std::string>& left_context) const {
    std::vector<int> ctx;
    ctx.reserve(left_context.size());
    for (const auto& w : left_context) ctx.push_back(id(w));
    return std::log(probability(id(target), ctx));
  }

  void write(std::ostream& out) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", discount_);
    out << kMagic << '\n'
        << "version " << kFormatVersion << '\n'
        << "order " << counts_.order << '\n'
        << "discount " << buf << '\n'
        << "min_count " << counts_.min_count << '\n'
        << "vocab " << counts_.vocab.size() << '\n';
    for (const auto& w : counts_.vocab) out << w << '\n';
    out << "ngrams " << counts_.counts.size() << '\n';
    for (const auto& [gram, c] : counts_.counts) {
      out << c;
      for (int id : gram) out << ' ' << counts_.vocab[static_cast<std::size_t>(id)];
      out << '\n';
    }
    out << "end\n";
  }

  static NgramModel read(std::istream& in, const std::string& source) {
    std::size_t line_no = 0;
    std::string line;
    auto next = [&]() -> std::string& {
      if (!std::getline(in, line)) throw DataError(source + ": truncated model file");
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    };
    auto field = [&](std::string_view key) {
      const std::string& l = next();
      if (!l.starts_with(key) || l.size() <= key.size() || l[key.size()] != ' ') {
        throw DataError(source, line_no, "expected '" + std::string(key) + "'");
      }
      return l.substr(key.size() + 1);
    };
    auto to_long = [&](const std::string& s) {
      char* end = nullptr;
      const long long v = std::strtoll(s.c_str(), &end, 10);
      if (s.empty() || *end != '\0') throw DataError(source, line_no, "bad integer '" + s + "'");
      return v;
    };

    if (next() != kMagic) throw DataError(source + ": not a lexnoise n-gram model");
    const long long version = to_long(field("version"));
    if (version != kFormatVersion) {
      throw FormatVersionError(source + ": unsupported model format version " + std::to_string(version) +
                               " (this build reads version " + std::to_string(kFormatVersion) + ")");
    }
    NgramCounts counts;
    counts.order = static_cast<int>(to_long(field("order")));
    const std::string disc = field("discount");
    char* end = nullptr;
    const double discount = std::strtod(disc.c_str(), &end);
    if (*end != '\0') throw DataError(source, line_no, "bad discount");
    counts.min_count = static_cast<int>(to_long(field("min_count")));
    const long long vocab_size = to_long(field("vocab"));
    for (long long i = 0; i < vocab_size; ++i) counts.vocab.push_back(next());
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < counts.vocab.size(); ++i) index.emplace(counts.vocab[i], static_cast<int>(i));
    const long long n_grams = to_long(field("ngrams"));
    for (long long i = 0; i < n_grams; ++i) {
      const auto parts = text::split_whitespace(next());
      if (parts.size() != static_cast<std::size_t>(counts.order) + 1) {
        throw DataError(source, line_no, "n-gram line has the wrong number of fields");
      }
      std::vector<int> gram;
      for (std::size_t j = 1; j < parts.size(); ++j) {
        auto it = index.find(parts[j]);
        if (it == index.end()) throw DataError(source, line_no, "unknown word '" + parts[j] + "'");
        gram.push_back(it->second);
      }
      counts.counts[gram] = to_long(parts[0]);
    }
    if (next() != "end") throw DataError(source, line_no, "missing end marker");
    return build(std::move(counts), discount);
  }

 private:
  struct ContextStats {
    std::map<int, long long> counts;
    long long total = 0;
    long long types = 0;
  };

  double interpolated(std::size_t k, std::span<const int> ctx, int word) const {
    const double lower = k == 1 ? 1.0 / static_cast<double>(predictable_size())
                                : interpolated(k - 1, ctx.subspan(1), word);
    const auto& level = levels_[k - 1];
    auto it = level.find(std::vector<int>(ctx.begin(), ctx.end()));
    if (it == level.end() || it->second.total == 0) return lower;
    const auto& stats = it->second;
    auto c_it = stats.counts.find(word);
    const double c = c_it == stats.counts.end() ? 0.0 : static_cast<double>(c_it->second);
    const double total = static_cast<double>(stats.total);
    return std::max(c - discount_, 0.0) / total +
           discount_ * static_cast<double>(stats.types) / total * lower;
  }

  NgramCounts counts_;
  double discount_ = 0.75;
  std::unordered_map<std::string, int> index_;
  std::vector<std::map<std::vector<int>, ContextStats>> levels_;  // levels_[k-1]: order-k stats
};

inline NgramModel train(const std::vector<Sentence>& corpus, int order = 3, double discount = 0.75,
                        int min_count = 2) {
  if (!(discount > 0.0 && discount < 1.0)) throw DataError("lm: discount must lie in (0, 1)");
  return NgramModel::build(count_ngrams(corpus, order, min_count), discount);
}

inline std::vector<Sentence> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus '" + path + "'");
  std::vector<Sentence> corpus;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = text::tokenize(line);
    if (!tokens.empty()) corpus.push_back(std::move(tokens));
  }
  return corpus;
}

inline void save_model(const NgramModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  model.write(out);
  if (!out) throw DataError(path + ": write failed");
}

inline NgramModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model '" + path + "'");
  return NgramModel::read(in, path);
}

}  // namespace lexnoise::lm

#endif  // LEXNOISE_NGRAM_HPP_
