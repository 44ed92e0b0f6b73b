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

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "lexnoise/ngram.hpp"
#include "lexnoise/selector.hpp"
#include "test_support.hpp"

namespace lexnoise::selector {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Fixture {
  PronunciationLexicon lexicon = load_lexicon(testing::data_file("lexicon-sample.dict"));
  lm::NgramModel lm = lm::train(lm::read_corpus(testing::data_file("corpus-sample.txt")));
  std::vector<SynonymPairRecord> pairs = load_pairs(testing::data_file("pairs-sample.csv"));
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

ModelSet single_model(std::vector<std::pair<std::string, double>> coefficients, double intercept = 0.0) {
  return ModelSet({{{-kInf, kInf}, intercept, std::move(coefficients), Provenance::kFitted, "test"}});
}

WordAudio word_audio(std::uint64_t seed, double snr_db) {
  const auto clean = testing::speech_like(seed, 1.5, 16000);
  const auto noise = testing::babble(seed + 100, 3.0, 16000);
  const auto mix = mix_at_snr(clean, noise, {snr_db, "babble"}, 0);
  return {clean, mix.mixture, 0, clean.size()};
}

TEST(FeatureTest, IdenticalWordsHaveZeroDifferences) {
  const SynonymPairRecord pair{"x", "sea", "sea", "dives into the {TARGET}", "", ""};
  const auto v = extract_features(pair, {"sea", "sea"}, fx().lm, fx().lexicon);
  EXPECT_EQ(v.diff_log_prob, 0.0);
  EXPECT_EQ(v.diff_ph_len, 0.0);
  EXPECT_FALSE(v.stoi.has_value());
  EXPECT_FALSE(v.diff_stoi.has_value());
}

TEST(FeatureTest, PhonemeLengths) {
  const auto v = extract_features(fx().pairs[0], {"sea", "ocean"}, fx().lm, fx().lexicon);
  EXPECT_EQ(v.ph_len, 2.0);
  EXPECT_EQ(v.diff_ph_len, -2.0);
  const auto& lm = fx().lm;
  const std::vector<int> ctx{lm.id("into"), lm.id("the")};
  EXPECT_NEAR(v.log_prob, std::log(lm.probability(lm.id("sea"), ctx)), 1e-12);
  EXPECT_LT(v.log_prob, 0.0);
}

TEST(FeatureTest, SwappingHypothesisNegatesDifferences) {
  for (const auto& pair : fx().pairs) {
    const auto ab = extract_features(pair, {pair.word_a, pair.word_b}, fx().lm, fx().lexicon);
    const auto ba = extract_features(pair, {pair.word_b, pair.word_a}, fx().lm, fx().lexicon);
    EXPECT_EQ(ab.diff_log_prob, -ba.diff_log_prob) << pair.pair_id;
    EXPECT_EQ(ab.diff_ph_len, -ba.diff_ph_len) << pair.pair_id;
    EXPECT_NEAR(ab.log_prob - ab.diff_log_prob, ba.log_prob, 1e-12);
  }
}

TEST(FeatureTest, StoiFeaturesFromAudio) {
  AudioByWord audio{{"sea", word_audio(1, 10.0)}, {"ocean", word_audio(2, -5.0)}};
  const auto v = extract_features(fx().pairs[0], {"sea", "ocean"}, fx().lm, fx().lexicon, &audio);
  ASSERT_TRUE(v.stoi && v.diff_stoi);
  EXPECT_GT(*v.diff_stoi, 0.0);
  EXPECT_NEAR(*v.stoi, span_stoi(audio.at("sea")), 1e-15);
  AudioByWord partial{{"sea", word_audio(1, 10.0)}};
  EXPECT_THROW(extract_features(fx().pairs[0], {"sea", "ocean"}, fx().lm, fx().lexicon, &partial), DataError);
}

TEST(PredictTest, LinearInFeatures) {
  const auto models = canonical_models();
  FeatureVector zero;
  EXPECT_EQ(predict_diff_hrs(zero, models[0]), -0.775);
  FeatureVector one;
  one.diff_log_prob = 1.0;
  EXPECT_NEAR(predict_diff_hrs(one, models[0]), -0.775 + 0.033, 1e-15);
  FeatureVector no_audio;
  EXPECT_THROW(predict_diff_hrs(no_audio, models[2]), DataError);
}

TEST(PredictTest, FittedModelReproducesFittedValues) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  regression::DesignMatrix d;
  d.predictors = {"log.prob", "diff.ph.len"};
  d.x.resize(30, 2);
  d.y.resize(30);
  for (int i = 0; i < 30; ++i) {
    d.x(i, 0) = -5 + g(rng);
    d.x(i, 1) = std::round(2 * g(rng));
    d.y(i) = 0.1 + 0.02 * d.x(i, 0) + 0.05 * d.x(i, 1) + 0.1 * g(rng);
  }
  const auto fit = regression::ols_fit(d);
  const auto model = model_from_fit(fit, {-kInf, kInf});
  for (int i = 0; i < 30; ++i) {
    FeatureVector v;
    v.log_prob = d.x(i, 0);
    v.diff_ph_len = d.x(i, 1);
    EXPECT_NEAR(predict_diff_hrs(v, model), d.y(i) - fit.residuals(i), 1e-12);
  }
}

TEST(ChooseTest, TieGoesToFirstWord) {
  const SynonymPairRecord pair{"x", "sea", "see", "into the {TARGET}", "", ""};
  // Same pronunciation length and an intercept-only model: both hypotheses score equally.
  const auto d = choose(pair, nullptr, {0.0, "babble"}, single_model({{"diff.ph.len", 1.0}}, 0.3), fx().lm,
                        fx().lexicon);
  EXPECT_TRUE(d.tie);
  EXPECT_EQ(d.chosen, "sea");
  EXPECT_EQ(d.alternative, "see");
  EXPECT_DOUBLE_EQ(d.predicted_gain, 0.3);
}

TEST(ChooseTest, PositiveStoiWeightPrefersClearerWord) {
  AudioByWord audio{{"sea", word_audio(3, -8.0)}, {"ocean", word_audio(4, 10.0)}};
  const auto d =
      choose(fx().pairs[0], &audio, {-5.0, "babble"}, single_model({{"diff.STOI", 1.0}}), fx().lm, fx().lexicon);
  EXPECT_EQ(d.chosen, "ocean");
  EXPECT_FALSE(d.tie);
  EXPECT_GT(d.prediction_b, 0.0);
  EXPECT_NEAR(d.prediction_a, -d.prediction_b, 1e-15);
}

TEST(ChooseTest, CanonicalLowSnrModelFavoursLowerStoi) {
  // Under the canonical -5 dB model the hypotheses differ by -0.04 * (STOI_a - STOI_b).
  AudioByWord audio{{"sea", word_audio(3, -8.0)}, {"ocean", word_audio(4, 10.0)}};
  const ModelSet models(canonical_models());
  const auto d = choose(fx().pairs[0], &audio, {-5.0, "babble"}, models, fx().lm, fx().lexicon);
  const double sa = *d.features_a.stoi, sb = *d.features_b.stoi;
  EXPECT_NEAR(d.prediction_a - d.prediction_b, -0.04 * (sa - sb), 1e-12);
  EXPECT_EQ(d.chosen, "sea");
  EXPECT_EQ(d.model->label, "babble SNR -5");
}

TEST(ChooseTest, HighSnrUsesLanguageModel) {
  const ModelSet models(canonical_models());
  for (const auto& pair : fx().pairs) {
    const auto d = choose(pair, nullptr, {5.0, "babble"}, models, fx().lm, fx().lexicon);
    EXPECT_EQ(d.model->label, "babble SNR 5");
    // -0.034 lp_w + 0.033 (lp_w - lp_o) + 0.027 ph_w + 0.023 (ph_w - ph_o), both hypotheses
    const auto& a = d.features_a;
    const double lpa = a.log_prob, lpb = a.log_prob - a.diff_log_prob;
    const double pha = a.ph_len, phb = a.ph_len - a.diff_ph_len;
    const double gap = -0.034 * (lpa - lpb) + 0.066 * (lpa - lpb) + 0.027 * (pha - phb) + 0.046 * (pha - phb);
    EXPECT_NEAR(d.prediction_a - d.prediction_b, gap, 1e-12) << pair.pair_id;
    EXPECT_EQ(d.chosen, gap < -1e-9 ? pair.word_b : pair.word_a) << pair.pair_id;
  }
}

TEST(ChooseTest, BandBoundaries) {
  const ModelSet models(canonical_models());
  EXPECT_EQ(models.for_snr(2.5).label, "babble SNR 5");
  EXPECT_EQ(models.for_snr(2.4999).label, "babble SNR 0");
  EXPECT_EQ(models.for_snr(-2.5).label, "babble SNR 0");
  EXPECT_EQ(models.for_snr(-2.5001).label, "babble SNR -5");
  EXPECT_EQ(models.for_snr(-40).label, "babble SNR -5");
}

TEST(ChooseTest, SwapInvariance) {
  AudioByWord audio;
  for (std::size_t i = 0; i < fx().pairs.size(); ++i) {
    audio[fx().pairs[i].word_a] = word_audio(10 + i, -6.0 + static_cast<double>(i));
    audio[fx().pairs[i].word_b] = word_audio(20 + i, -2.0 - static_cast<double>(i));
  }
  const ModelSet models(canonical_models());
  for (double snr : {5.0, 0.0, -5.0}) {
    for (const auto& pair : fx().pairs) {
      SynonymPairRecord swapped = pair;
      std::swap(swapped.word_a, swapped.word_b);
      const auto d1 = choose(pair, &audio, {snr, "babble"}, models, fx().lm, fx().lexicon);
      const auto d2 = choose(swapped, &audio, {snr, "babble"}, models, fx().lm, fx().lexicon);
      if (d1.tie) continue;
      EXPECT_EQ(d1.chosen, d2.chosen) << pair.pair_id << " " << snr;
      EXPECT_NEAR(d1.predicted_gain, d2.predicted_gain, 1e-12);
    }
  }
}

TEST(ChooseTest, NoisyAmplitudeDoesNotMatter) {
  AudioByWord audio{{"sea", word_audio(5, -3.0)}, {"ocean", word_audio(6, -7.0)}};
  const ModelSet models(canonical_models());
  const auto base = choose(fx().pairs[0], &audio, {-5.0, "babble"}, models, fx().lm, fx().lexicon);
  for (double c : {0.01, 3.0}) {
    auto scaled = audio;
    for (auto& [w, a] : scaled) {
      for (auto& s : a.noisy.samples) s *= c;
    }
    const auto d = choose(fx().pairs[0], &scaled, {-5.0, "babble"}, models, fx().lm, fx().lexicon);
    EXPECT_EQ(d.chosen, base.chosen);
    EXPECT_NEAR(d.predicted_gain, base.predicted_gain, 1e-9);
  }
}

TEST(ChooseTest, StoiModelWithoutAudioIsAnError) {
  const ModelSet models(canonical_models());
  EXPECT_THROW(choose(fx().pairs[0], nullptr, {-5.0, "babble"}, models, fx().lm, fx().lexicon), DataError);
  EXPECT_NO_THROW(choose(fx().pairs[0], nullptr, {0.0, "babble"}, models, fx().lm, fx().lexicon));
}

TEST(ModelSetTest, BandsMustPartition) {
  EXPECT_THROW(ModelSet(std::vector<ConditionModel>{}), DataError);
  ConditionModel lo{{-kInf, 0.0}, 0.0, {}, Provenance::kFitted, ""};
  ConditionModel hi{{1.0, kInf}, 0.0, {}, Provenance::kFitted, ""};
  EXPECT_THROW(ModelSet({lo, hi}), DataError);
  hi.band.min = -1.0;
  EXPECT_THROW(ModelSet({lo, hi}), DataError);
  hi.band.min = 0.0;
  EXPECT_NO_THROW(ModelSet({hi, lo}));
  EXPECT_THROW(ModelSet({lo}), DataError);
}

TEST(ModelJsonTest, RoundTrip) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& m : canonical_models()) list.push_back(to_json(m));
  const auto back = parse_models(list.dump(), "mem");
  const auto ref = canonical_models();
  ASSERT_EQ(back.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_EQ(back[i].band.min, ref[i].band.min);
    EXPECT_EQ(back[i].band.max, ref[i].band.max);
    EXPECT_EQ(back[i].intercept, ref[i].intercept);
    EXPECT_EQ(back[i].coefficients, ref[i].coefficients);
    EXPECT_EQ(back[i].provenance, Provenance::kCanonical);
    EXPECT_EQ(back[i].label, ref[i].label);
  }
}

TEST(ModelJsonTest, ShippedFileMatchesBuiltIn) {
  const auto shipped = load_models(testing::data_file("canonical_models.json"));
  const auto ref = canonical_models();
  ASSERT_EQ(shipped.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_EQ(shipped[i].intercept, ref[i].intercept);
    EXPECT_EQ(shipped[i].coefficients, ref[i].coefficients);
    EXPECT_EQ(shipped[i].label, ref[i].label);
  }
}

TEST(ModelJsonTest, Errors) {
  EXPECT_THROW(parse_models("{", "m"), DataError);
  EXPECT_THROW(parse_models("{}", "m"), DataError);
  EXPECT_THROW(parse_models(R"j([{"snr_band":[null,null],"coefficients":{"log.prob":1}}])j", "m"), DataError);
  EXPECT_THROW(parse_models(R"j([{"snr_band":[null,null],"coefficients":{"(Intercept)":0,"speed":1}}])j", "m"),
               DataError);
  EXPECT_THROW(parse_models(R"j([{"snr_band":[null],"coefficients":{"(Intercept)":0}}])j", "m"), DataError);
  EXPECT_THROW(parse_models(R"j([{"coefficients":{"(Intercept)":0}}])j", "m"), DataError);
  EXPECT_THROW(load_models("/nonexistent/models.json"), DataError);
}

}  // namespace
}  // namespace lexnoise::selector
