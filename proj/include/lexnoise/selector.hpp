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

#ifndef LEXNOISE_SELECTOR_HPP_
#define LEXNOISE_SELECTOR_HPP_

// Feature extraction for a synonym pair and choice of the word predicted to
// be recognized better under a given noise condition.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lexnoise/audio.hpp"
#include "lexnoise/error.hpp"
#include "lexnoise/lexicon.hpp"
#include "lexnoise/ngram.hpp"
#include "lexnoise/regression.hpp"
#include "lexnoise/stoi.hpp"

namespace lexnoise::selector {

inline constexpr std::array<std::string_view, 6> kFeatureNames = {
    "log.prob", "diff.log.prob", "ph.len", "diff.ph.len", "STOI", "diff.STOI"};

// Features of the hypothesized winner; diff_* are winner minus alternative.
struct FeatureVector {
  double log_prob = 0.0;
  double diff_log_prob = 0.0;
  double ph_len = 0.0;
  double diff_ph_len = 0.0;
  std::optional<double> stoi;
  std::optional<double> diff_stoi;

  std::optional<double> get(std::string_view name) const {
    if (name == "log.prob") return log_prob;
    if (name == "diff.log.prob") return diff_log_prob;
    if (name == "ph.len") return ph_len;
    if (name == "diff.ph.len") return diff_ph_len;
    if (name == "STOI") return stoi;
    if (name == "diff.STOI") return diff_stoi;
    throw DataError("unknown feature '" + std::string(name) + "'");
  }
};

inline bool is_stoi_feature(std::string_view name) { return name == "STOI" || name == "diff.STOI"; }

// Clean/noisy recordings of one word's utterance and the sample range
// [span_start, span_end) covering the target word.
struct WordAudio {
  AudioSignal clean;
  AudioSignal noisy;
  std::size_t span_start = 0;
  std::size_t span_end = 0;
};

using AudioByWord = std::map<std::string, WordAudio>;

inline double span_stoi(const WordAudio& audio) {
  const auto check = [&](const AudioSignal& s, const char* which) {
    if (audio.span_start >= audio.span_end || audio.span_end > s.size()) {
      throw DataError(std::string("audio span [") + std::to_string(audio.span_start) + ", " +
                      std::to_string(audio.span_end) + ") is outside the " + which + " signal");
    }
  };
  check(audio.clean, "clean");
  check(audio.noisy, "noisy");
  const auto cut = [&](const AudioSignal& s) {
    return AudioSignal{std::vector<double>(s.samples.begin() + static_cast<long>(audio.span_start),
                                           s.samples.begin() + static_cast<long>(audio.span_end)),
                       s.sample_rate};
  };
  return stoi::compute_stoi(cut(audio.clean), cut(audio.noisy));
}

struct WordFeatures {
  double log_prob = 0.0;
  double ph_len = 0.0;
  std::optional<double> stoi;
};

inline WordFeatures word_features(const SynonymPairRecord& pair, const std::string& word, const lm::NgramModel& lm,
                                  const PronunciationLexicon& lexicon, const AudioByWord* audio) {
  WordFeatures f;
  f.log_prob = lm.log_prob(word, pair.left_context());
  f.ph_len = static_cast<double>(phoneme_length(lexicon, word));
  if (audio) {
    if (auto it = audio->find(word); it != audio->end()) f.stoi = span_stoi(it->second);
  }
  return f;
}

inline FeatureVector combine(const WordFeatures& winner, const WordFeatures& alternative) {
  FeatureVector v;
  v.log_prob = winner.log_prob;
  v.diff_log_prob = winner.log_prob - alternative.log_prob;
  v.ph_len = winner.ph_len;
  v.diff_ph_len = winner.ph_len - alternative.ph_len;
  if (winner.stoi && alternative.stoi) {
    v.stoi = winner.stoi;
    v.diff_stoi = *winner.stoi - *alternative.stoi;
  }
  return v;
}

// STOI features are filled only when audio for both words is supplied.
inline FeatureVector extract_features(const SynonymPairRecord& pair,
                                      const std::pair<std::string, std::string>& candidate_order,
                                      const lm::NgramModel& lm, const PronunciationLexicon& lexicon,
                                      const AudioByWord* audio = nullptr) {
  const auto winner = word_features(pair, candidate_order.first, lm, lexicon, audio);
  const auto alternative = word_features(pair, candidate_order.second, lm, lexicon, audio);
  if (audio && winner.stoi.has_value() != alternative.stoi.has_value()) {
    throw DataError("pair '" + pair.pair_id + "': audio supplied for only one of the two words");
  }
  return combine(winner, alternative);
}

// Half-open SNR interval [min, max) in dB.
struct SnrBand {
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  bool contains(double snr) const { return snr >= min && snr < max; }
};

enum class Provenance { kFitted, kCanonical };

struct ConditionModel {
  SnrBand band;
  double intercept = 0.0;
  std::vector<std::pair<std::string, double>> coefficients;  // feature name -> beta
  Provenance provenance = Provenance::kFitted;
  std::string label;

  bool uses_stoi() const {
    return std::any_of(coefficients.begin(), coefficients.end(),
                       [](const auto& c) { return is_stoi_feature(c.first); });
  }
};

inline ConditionModel model_from_fit(const regression::FitResult& fit, SnrBand band, std::string label = {}) {
  ConditionModel m;
  m.band = band;
  m.provenance = Provenance::kFitted;
  m.label = std::move(label);
  for (const auto& c : fit.coefficients) {
    if (c.name == regression::kInterceptName) {
      m.intercept = c.estimate;
    } else {
      m.coefficients.emplace_back(c.name, c.estimate);
    }
  }
  return m;
}

inline double predict_diff_hrs(const FeatureVector& features, const ConditionModel& model) {
  double y = model.intercept;
  for (const auto& [name, beta] : model.coefficients) {
    const auto value = features.get(name);
    if (!value) throw DataError("model needs feature '" + name + "' but it was not computed (no audio?)");
    y += beta * *value;
  }
  return y;
}

// Models whose bands partition the real line.
class ModelSet {
 public:
  ModelSet() = default;
  explicit ModelSet(std::vector<ConditionModel> models) : models_(std::move(models)) {
    if (models_.empty()) throw DataError("model set is empty");
    std::sort(models_.begin(), models_.end(), [](const auto& a, const auto& b) { return a.band.min < b.band.min; });
    if (models_.front().band.min != -std::numeric_limits<double>::infinity() ||
        models_.back().band.max != std::numeric_limits<double>::infinity()) {
      throw DataError("model SNR bands must cover the whole real line");
    }
    for (std::size_t i = 0; i < models_.size(); ++i) {
      if (!(models_[i].band.min < models_[i].band.max)) throw DataError("model SNR band is empty");
      if (i + 1 < models_.size() && models_[i].band.max != models_[i + 1].band.min) {
        throw DataError("model SNR bands overlap or leave a gap");
      }
    }
  }

  const ConditionModel& for_snr(double snr_db) const {
    for (const auto& m : models_) {
      if (m.band.contains(snr_db)) return m;
    }
    throw DataError("no model covers SNR " + csv::format_double(snr_db) + " dB");
  }

  const std::vector<ConditionModel>& models() const { return models_; }

 private:
  std::vector<ConditionModel> models_;
};

struct Decision {
  std::string pair_id;
  std::string chosen;
  std::string alternative;
  double predicted_gain = 0.0;  // prediction under the chosen hypothesis
  double prediction_a = 0.0;    // word_a hypothesized as winner
  double prediction_b = 0.0;
  bool tie = false;
  FeatureVector features_a;  // word_a as winner hypothesis
  FeatureVector features_b;
  const ConditionModel* model = nullptr;
};

inline constexpr double kDecisionTieTolerance = 1e-9;

// Scores both winner hypotheses and keeps the larger prediction. Near-equal
// predictions are a tie resolved to word_a.
inline Decision choose(const SynonymPairRecord& pair, const AudioByWord* audio, const NoiseCondition& condition,
                       const ModelSet& models, const lm::NgramModel& lm, const PronunciationLexicon& lexicon) {
  const ConditionModel& model = models.for_snr(condition.snr_db);
  const bool has_audio = audio && (audio->count(pair.word_a) || audio->count(pair.word_b));
  if (model.uses_stoi() && !has_audio) {
    throw DataError("pair '" + pair.pair_id + "': model for SNR " + csv::format_double(condition.snr_db) +
                    " dB needs STOI but no audio was supplied");
  }
  const AudioByWord* used_audio = has_audio ? audio : nullptr;
  const auto fa = word_features(pair, pair.word_a, lm, lexicon, used_audio);
  const auto fb = word_features(pair, pair.word_b, lm, lexicon, used_audio);
  if (used_audio && (!fa.stoi || !fb.stoi)) {
    throw DataError("pair '" + pair.pair_id + "': audio supplied for only one of the two words");
  }
  Decision d;
  d.pair_id = pair.pair_id;
  d.model = &model;
  d.features_a = combine(fa, fb);
  d.features_b = combine(fb, fa);
  d.prediction_a = predict_diff_hrs(d.features_a, model);
  d.prediction_b = predict_diff_hrs(d.features_b, model);
  d.tie = std::abs(d.prediction_a - d.prediction_b) < kDecisionTieTolerance;
  const bool pick_b = !d.tie && d.prediction_b > d.prediction_a;
  d.chosen = pick_b ? pair.word_b : pair.word_a;
  d.alternative = pick_b ? pair.word_a : pair.word_b;
  d.predicted_gain = pick_b ? d.prediction_b : d.prediction_a;
  return d;
}

// ---- models JSON ----
// [{"snr_band": [min|null, max|null], "coefficients": {"(Intercept)": b0, "log.prob": b1, ...},
//   "provenance": "fitted"|"canonical", "label": "..."}]

inline nlohmann::json to_json(const ConditionModel& m) {
  nlohmann::json band = nlohmann::json::array();
  band.push_back(std::isinf(m.band.min) ? nlohmann::json(nullptr) : nlohmann::json(m.band.min));
  band.push_back(std::isinf(m.band.max) ? nlohmann::json(nullptr) : nlohmann::json(m.band.max));
  nlohmann::json out;
  out["snr_band"] = band;
  out["coefficients"][std::string(regression::kInterceptName)] = m.intercept;
  for (const auto& [name, beta] : m.coefficients) out["coefficients"][name] = beta;
  out["provenance"] = m.provenance == Provenance::kCanonical ? "canonical" : "fitted";
  if (!m.label.empty()) out["label"] = m.label;
  return out;
}

inline ConditionModel model_from_json(const nlohmann::json& j, const std::string& source) {
  const auto fail = [&](const std::string& what) -> DataError { return DataError(source + ": " + what); };
  if (!j.is_object()) throw fail("model entry must be an object");
  ConditionModel m;
  const auto& band = j.at("snr_band");
  if (!band.is_array() || band.size() != 2) throw fail("snr_band must be [min, max]");
  if (!band[0].is_null()) m.band.min = band[0].get<double>();
  if (!band[1].is_null()) m.band.max = band[1].get<double>();
  const std::string prov = j.value("provenance", "fitted");
  if (prov == "canonical") {
    m.provenance = Provenance::kCanonical;
  } else if (prov == "fitted") {
    m.provenance = Provenance::kFitted;
  } else {
    throw fail("unknown provenance '" + prov + "'");
  }
  m.label = j.value("label", "");
  bool have_intercept = false;
  for (const auto& [name, value] : j.at("coefficients").items()) {
    if (name == regression::kInterceptName) {
      m.intercept = value.get<double>();
      have_intercept = true;
      continue;
    }
    if (std::find(kFeatureNames.begin(), kFeatureNames.end(), name) == kFeatureNames.end()) {
      throw fail("unknown coefficient '" + name + "'");
    }
    m.coefficients.emplace_back(name, value.get<double>());
  }
  if (!have_intercept) throw fail("model lacks an (Intercept) coefficient");
  // Evaluate in canonical feature order regardless of JSON key order.
  std::sort(m.coefficients.begin(), m.coefficients.end(), [](const auto& a, const auto& b) {
    return std::find(kFeatureNames.begin(), kFeatureNames.end(), a.first) <
           std::find(kFeatureNames.begin(), kFeatureNames.end(), b.first);
  });
  return m;
}

inline std::vector<ConditionModel> parse_models(const std::string& text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": invalid JSON: " + e.what());
  }
  if (!j.is_array()) throw DataError(source + ": models file must hold a JSON list");
  std::vector<ConditionModel> out;
  try {
    for (const auto& entry : j) out.push_back(model_from_json(entry, source));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": " + e.what());
  }
  return out;
}

inline std::vector<ConditionModel> load_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open models file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_models(text, path);
}

// Significant per-condition coefficients of reference diff.HRS models.
// Their log.prob scale comes from a neural LM, so with this library's n-gram
// log probabilities they are sign-and-ranking devices, not calibrated predictors.
inline std::vector<ConditionModel> canonical_models() {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  return {
      {{2.5, kInf}, -0.775,
       {{"log.prob", -0.034}, {"diff.log.prob", 0.033}, {"ph.len", 0.027}, {"diff.ph.len", 0.023}},
       Provenance::kCanonical, "babble SNR 5"},
      {{-2.5, 2.5}, -0.608,
       {{"log.prob", -0.045}, {"diff.log.prob", 0.04}, {"diff.ph.len", 0.033}},
       Provenance::kCanonical, "babble SNR 0"},
      {{-kInf, -2.5}, 1.134, {{"STOI", -1.428}, {"diff.STOI", 0.694}}, Provenance::kCanonical, "babble SNR -5"},
  };
}

}  // namespace lexnoise::selector

#endif  // LEXNOISE_SELECTOR_HPP_
