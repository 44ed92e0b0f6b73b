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

#ifndef LEXNOISE_ANALYSIS_HPP_
#define LEXNOISE_ANALYSIS_HPP_

// Listener transcripts -> Human Recognition Scores (HRS) and per-pair
// recognition differences.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "lexnoise/audio.hpp"
#include "lexnoise/csv.hpp"
#include "lexnoise/error.hpp"
#include "lexnoise/lexicon.hpp"
#include "lexnoise/stats.hpp"
#include "lexnoise/text.hpp"

namespace lexnoise::analysis {

enum class JudgeMode { kSingleWord, kInContext };

inline JudgeMode parse_mode(std::string_view s) {
  if (s == "single_word") return JudgeMode::kSingleWord;
  if (s == "in_context") return JudgeMode::kInContext;
  throw DataError("unknown mode '" + std::string(s) + "' (expected single_word or in_context)");
}

inline constexpr std::string_view kPlaceholder = "...";

struct ResponseRecord {
  std::string stimulus_id;
  std::string participant_id;
  std::string target;
  NoiseCondition condition;
  std::string transcript;
};

// Lowercased words of a transcript. Runs of three or more dots (and U+2026)
// mark unheard words and produce no token; other punctuation is stripped
// from token edges.
inline std::vector<std::string> transcript_tokens(std::string_view transcript) {
  std::string spaced;
  spaced.reserve(transcript.size() + 8);
  for (std::size_t i = 0; i < transcript.size();) {
    if (transcript.substr(i, 3) == "\xE2\x80\xA6") {
      spaced += ' ';
      i += 3;
      continue;
    }
    if (transcript[i] == '.') {
      std::size_t j = i;
      while (j < transcript.size() && transcript[j] == '.') ++j;
      if (j - i >= kPlaceholder.size()) {
        spaced += ' ';
      } else {
        spaced.append(transcript.substr(i, j - i));
      }
      i = j;
      continue;
    }
    spaced += transcript[i++];
  }
  std::vector<std::string> tokens;
  for (const auto& raw : text::split_whitespace(spaced)) {
    auto w = text::normalize_word(raw);
    if (!w.empty()) tokens.push_back(std::move(w));
  }
  return tokens;
}

inline bool judge_response(const PronunciationLexicon& lexicon, std::string_view target,
                           std::string_view transcript, JudgeMode mode) {
  const auto tokens = transcript_tokens(transcript);
  if (tokens.empty()) return false;
  if (mode == JudgeMode::kSingleWord) {
    std::string joined = tokens.front();
    for (std::size_t i = 1; i < tokens.size(); ++i) joined += " " + tokens[i];
    return phonetic_match(lexicon, target, joined);
  }
  return std::any_of(tokens.begin(), tokens.end(),
                     [&](const std::string& t) { return phonetic_match(lexicon, target, t); });
}

struct StimulusScore {
  std::string stimulus_id;
  std::string target;
  NoiseCondition condition;
  std::size_t n_correct = 0;
  std::size_t n_total = 0;
  double hrs = 0.0;
};

// One score per (stimulus_id, condition), in order of first appearance.
inline std::vector<StimulusScore> compute_hrs(const std::vector<ResponseRecord>& records,
                                              const PronunciationLexicon& lexicon, JudgeMode mode) {
  if (records.empty()) throw DataError("compute_hrs: no response records");
  using Key = std::tuple<std::string, double, std::string>;
  std::map<Key, std::size_t> slot;
  std::set<std::tuple<std::string, double, std::string, std::string>> seen;
  std::vector<StimulusScore> scores;
  for (const auto& r : records) {
    if (!seen.emplace(r.stimulus_id, r.condition.snr_db, r.condition.noise_id, r.participant_id).second) {
      throw DataError("duplicate response from participant '" + r.participant_id + "' for stimulus '" +
                      r.stimulus_id + "'");
    }
    const Key key{r.stimulus_id, r.condition.snr_db, r.condition.noise_id};
    auto [it, inserted] = slot.emplace(key, scores.size());
    if (inserted) {
      scores.push_back({r.stimulus_id, text::normalize_word(r.target), r.condition, 0, 0, 0.0});
    }
    auto& s = scores[it->second];
    if (s.target != text::normalize_word(r.target)) {
      throw DataError("stimulus '" + r.stimulus_id + "' has conflicting targets '" + s.target + "' and '" +
                      r.target + "'");
    }
    ++s.n_total;
    if (judge_response(lexicon, r.target, r.transcript, mode)) ++s.n_correct;
  }
  for (auto& s : scores) s.hrs = static_cast<double>(s.n_correct) / static_cast<double>(s.n_total);
  return scores;
}

struct PairComparison {
  std::string pair_id;
  NoiseCondition condition;
  std::string word_a;
  std::string word_b;
  double hrs_a = 0.0;
  double hrs_b = 0.0;
  double diff_hrs = 0.0;
  double hrs_min = 0.0;
  double hrs_max = 0.0;
  std::string winner;
  bool tie = false;
};

inline PairComparison make_comparison(const SynonymPairRecord& pair, const NoiseCondition& condition,
                                      double hrs_a, double hrs_b) {
  PairComparison c;
  c.pair_id = pair.pair_id;
  c.condition = condition;
  c.word_a = pair.word_a;
  c.word_b = pair.word_b;
  c.hrs_a = hrs_a;
  c.hrs_b = hrs_b;
  c.diff_hrs = std::abs(hrs_a - hrs_b);
  c.hrs_min = std::min(hrs_a, hrs_b);
  c.hrs_max = std::max(hrs_a, hrs_b);
  c.tie = hrs_a == hrs_b;
  c.winner = hrs_b > hrs_a ? pair.word_b : pair.word_a;
  return c;
}

namespace detail {

// A stimulus belongs to a pair when its id is the pair id or starts with the
// pair id followed by one of ":/_-".
inline bool linked_to_pair(std::string_view stimulus_id, std::string_view pair_id) {
  if (stimulus_id == pair_id) return true;
  return stimulus_id.size() > pair_id.size() && stimulus_id.starts_with(pair_id) &&
         std::string_view(":/_-").find(stimulus_id[pair_id.size()]) != std::string_view::npos;
}

inline const StimulusScore* find_member(const std::vector<StimulusScore>& scores, const SynonymPairRecord& pair,
                                        const std::string& word, const NoiseCondition& condition) {
  std::vector<const StimulusScore*> linked, unlinked;
  for (const auto& s : scores) {
    if (s.target != word || !(s.condition == condition)) continue;
    (linked_to_pair(s.stimulus_id, pair.pair_id) ? linked : unlinked).push_back(&s);
  }
  if (linked.size() == 1) return linked.front();
  if (linked.size() > 1) {
    throw DataError("pair '" + pair.pair_id + "': several stimuli score '" + word + "' in one condition");
  }
  if (unlinked.size() == 1) return unlinked.front();
  if (unlinked.size() > 1) {
    throw DataError("pair '" + pair.pair_id + "': ambiguous score for '" + word +
                    "'; prefix stimulus ids with the pair id");
  }
  return nullptr;
}

}  // namespace detail

// Comparisons for every condition in which either member of a pair was scored.
inline std::vector<PairComparison> compare_pairs(const std::vector<StimulusScore>& scores,
                                                 const std::vector<SynonymPairRecord>& pairs) {
  std::set<NoiseCondition> conditions;
  for (const auto& s : scores) conditions.insert(s.condition);
  std::vector<PairComparison> out;
  for (const auto& pair : pairs) {
    for (const auto& condition : conditions) {
      const auto* a = detail::find_member(scores, pair, pair.word_a, condition);
      const auto* b = detail::find_member(scores, pair, pair.word_b, condition);
      if (!a && !b) continue;
      if (!a || !b) {
        throw DataError("pair '" + pair.pair_id + "': missing score for '" + (a ? pair.word_b : pair.word_a) +
                        "' at SNR " + csv::format_double(condition.snr_db));
      }
      out.push_back(make_comparison(pair, condition, a->hrs, b->hrs));
    }
  }
  return out;
}

struct ConditionSummary {
  NoiseCondition condition;
  std::size_t n_stimuli = 0;
  double mean_hrs = 0.0;
  std::size_t n_pairs = 0;
  double mean_diff_hrs = 0.0;
  double mean_hrs_min = 0.0;
  double mean_hrs_max = 0.0;
};

inline ConditionSummary summarize_condition(const std::vector<StimulusScore>& scores,
                                            const std::vector<PairComparison>& comparisons,
                                            const NoiseCondition& condition) {
  ConditionSummary s;
  s.condition = condition;
  std::vector<double> hrs, diff, lo, hi;
  for (const auto& sc : scores) {
    if (sc.condition == condition) hrs.push_back(sc.hrs);
  }
  for (const auto& c : comparisons) {
    if (!(c.condition == condition)) continue;
    diff.push_back(c.diff_hrs);
    lo.push_back(c.hrs_min);
    hi.push_back(c.hrs_max);
  }
  if (hrs.size() + diff.size() < 2) throw DataError("condition summary: insufficient data");
  s.n_stimuli = hrs.size();
  s.n_pairs = diff.size();
  if (!hrs.empty()) s.mean_hrs = stats::mean(hrs);
  if (!diff.empty()) {
    s.mean_diff_hrs = stats::mean(diff);
    s.mean_hrs_min = stats::mean(lo);
    s.mean_hrs_max = stats::mean(hi);
  }
  return s;
}

// Paired t-test of diff.HRS between two conditions, matched by pair id.
// mean_difference is first - second.
inline stats::TTestResult compare_conditions(const std::vector<PairComparison>& comparisons,
                                             const NoiseCondition& first, const NoiseCondition& second) {
  std::map<std::string, double> a, b;
  for (const auto& c : comparisons) {
    if (c.condition == first) a[c.pair_id] = c.diff_hrs;
    if (c.condition == second) b[c.pair_id] = c.diff_hrs;
  }
  std::vector<double> xs, ys;
  for (const auto& [id, v] : a) {
    if (auto it = b.find(id); it != b.end()) {
      xs.push_back(v);
      ys.push_back(it->second);
    }
  }
  if (xs.size() < 2) throw DataError("condition comparison: fewer than 2 pairs observed in both conditions");
  return stats::paired_t_test(xs, ys);
}

// Paired t-test of stimulus HRS between two conditions, matched by stimulus id.
inline stats::TTestResult compare_condition_hrs(const std::vector<StimulusScore>& scores,
                                                const NoiseCondition& first, const NoiseCondition& second) {
  std::map<std::string, double> a, b;
  for (const auto& s : scores) {
    if (s.condition == first) a[s.stimulus_id] = s.hrs;
    if (s.condition == second) b[s.stimulus_id] = s.hrs;
  }
  std::vector<double> xs, ys;
  for (const auto& [id, v] : a) {
    if (auto it = b.find(id); it != b.end()) {
      xs.push_back(v);
      ys.push_back(it->second);
    }
  }
  if (xs.size() < 2) throw DataError("condition comparison: fewer than 2 stimuli observed in both conditions");
  return stats::paired_t_test(xs, ys);
}

// ---- CSV interchange ----

inline std::vector<ResponseRecord> parse_responses(const csv::Table& table) {
  const auto c_stim = table.column("stimulus_id");
  const auto c_part = table.column("participant_id");
  const auto c_target = table.column("target");
  const auto c_snr = table.column("condition_snr_db");
  const auto c_noise = table.column("noise_id");
  const auto c_text = table.column("transcript");
  std::vector<ResponseRecord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ResponseRecord rec;
    rec.stimulus_id = row[c_stim];
    rec.participant_id = row[c_part];
    rec.target = row[c_target];
    rec.condition.snr_db = csv::parse_double(row[c_snr], table, r, "condition_snr_db");
    rec.condition.noise_id = row[c_noise];
    rec.transcript = row[c_text];
    if (rec.stimulus_id.empty()) table.fail(r, "empty stimulus_id");
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::vector<ResponseRecord> load_responses(const std::string& path) {
  return parse_responses(csv::read_file(path));
}

inline void write_scores(std::ostream& out, const std::vector<StimulusScore>& scores) {
  csv::write_row(out, {"stimulus_id", "target", "condition_snr_db", "noise_id", "n_correct", "n_total", "hrs"});
  for (const auto& s : scores) {
    csv::write_row(out, {s.stimulus_id, s.target, csv::format_double(s.condition.snr_db), s.condition.noise_id,
                         std::to_string(s.n_correct), std::to_string(s.n_total), csv::format_double(s.hrs)});
  }
}

inline std::vector<StimulusScore> parse_scores(const csv::Table& table) {
  const auto c_stim = table.column("stimulus_id");
  const auto c_target = table.column("target");
  const auto c_snr = table.column("condition_snr_db");
  const auto c_noise = table.column("noise_id");
  const auto c_correct = table.column("n_correct");
  const auto c_total = table.column("n_total");
  std::vector<StimulusScore> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    StimulusScore s;
    s.stimulus_id = row[c_stim];
    s.target = row[c_target];
    s.condition = {csv::parse_double(row[c_snr], table, r, "condition_snr_db"), row[c_noise]};
    const double correct = csv::parse_double(row[c_correct], table, r, "n_correct");
    const double total = csv::parse_double(row[c_total], table, r, "n_total");
    if (total < 1 || correct < 0 || correct > total || correct != std::floor(correct) || total != std::floor(total)) {
      table.fail(r, "invalid counts");
    }
    s.n_correct = static_cast<std::size_t>(correct);
    s.n_total = static_cast<std::size_t>(total);
    s.hrs = correct / total;
    out.push_back(std::move(s));
  }
  return out;
}

inline void write_comparisons(std::ostream& out, const std::vector<PairComparison>& comparisons) {
  csv::write_row(out, {"pair_id", "condition_snr_db", "noise_id", "word_a", "word_b", "hrs_a", "hrs_b",
                       "diff_hrs", "hrs_min", "hrs_max", "winner", "tie"});
  for (const auto& c : comparisons) {
    csv::write_row(out, {c.pair_id, csv::format_double(c.condition.snr_db), c.condition.noise_id, c.word_a,
                         c.word_b, csv::format_double(c.hrs_a), csv::format_double(c.hrs_b),
                         csv::format_double(c.diff_hrs), csv::format_double(c.hrs_min),
                         csv::format_double(c.hrs_max), c.winner, c.tie ? "true" : "false"});
  }
}

inline std::vector<PairComparison> parse_comparisons(const csv::Table& table) {
  const auto c_id = table.column("pair_id");
  const auto c_snr = table.column("condition_snr_db");
  const auto c_noise = table.column("noise_id");
  const auto c_a = table.column("word_a");
  const auto c_b = table.column("word_b");
  const auto c_ha = table.column("hrs_a");
  const auto c_hb = table.column("hrs_b");
  std::vector<PairComparison> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    SynonymPairRecord pair{row[c_id], row[c_a], row[c_b], std::string(kTargetSlot), "", ""};
    const NoiseCondition cond{csv::parse_double(row[c_snr], table, r, "condition_snr_db"), row[c_noise]};
    const double a = csv::parse_double(row[c_ha], table, r, "hrs_a");
    const double b = csv::parse_double(row[c_hb], table, r, "hrs_b");
    if (a < 0 || a > 1 || b < 0 || b > 1) table.fail(r, "HRS outside [0, 1]");
    out.push_back(make_comparison(pair, cond, a, b));
  }
  return out;
}

}  // namespace lexnoise::analysis

#endif  // LEXNOISE_ANALYSIS_HPP_
