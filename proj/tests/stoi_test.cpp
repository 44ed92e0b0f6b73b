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
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "lexnoise/csv.hpp"
#include "lexnoise/stats.hpp"
#include "lexnoise/stoi.hpp"
#include "test_support.hpp"

namespace lexnoise::stoi {
namespace {

std::string fixture(const std::string& name) { return std::string(LEXNOISE_FIXTURE_DIR) + "/stoi/" + name; }

TEST(StoiConfigTest, Defaults) {
  const StoiConfig c;
  EXPECT_EQ(c.working_rate, 10000);
  EXPECT_EQ(c.frame_len, 256u);
  EXPECT_EQ(c.frame_shift, 128u);
  EXPECT_EQ(c.fft_len, 512u);
  EXPECT_EQ(c.band_count, 15u);
  EXPECT_EQ(c.analysis_len, 30u);
  const auto cf = center_frequencies(c);
  EXPECT_DOUBLE_EQ(cf[0], 150.0);
  EXPECT_NEAR(cf[3], 300.0, 1e-12);
  EXPECT_NEAR(cf[14], 150.0 * std::pow(2.0, 14.0 / 3.0), 1e-9);
}

TEST(StoiConfigTest, RejectsBadOverlap) {
  StoiConfig c;
  c.frame_shift = 100;
  EXPECT_THROW(c.validate(), Error);
  c = StoiConfig{};
  c.fft_len = 300;
  EXPECT_THROW(c.validate(), Error);
  c = StoiConfig{};
  c.band_count = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(StoiBandsTest, EdgesSnapToNearestBin) {
  const auto bins = band_bins({});
  // 150 * 2^(-1/6) = 133.6 Hz -> bin 7 (136.7 Hz); 150 * 2^(1/6) = 168.4 Hz -> bin 9 (175.8 Hz).
  EXPECT_EQ(bins[0].first, 7u);
  EXPECT_EQ(bins[0].second, 9u);
  for (std::size_t k = 1; k < bins.size(); ++k) EXPECT_EQ(bins[k].first, bins[k - 1].second);
}

TEST(StoiFramesTest, CountFollowsCeilingRule) {
  const StoiConfig c;
  for (std::size_t len : {256u, 257u, 383u, 384u, 385u, 1000u, 10000u}) {
    const auto expected = static_cast<std::size_t>(
        std::ceil((static_cast<double>(len) - 256.0) / 128.0) + 1.0);
    EXPECT_EQ(frame_count(len, c), expected) << len;
    const auto env = third_octave_envelopes(testing::white_noise(len, len, 10000), c);
    EXPECT_EQ(env.frames(), expected);
    EXPECT_EQ(env.bands(), 15u);
  }
  EXPECT_EQ(frame_count(255, c), 0u);
  EXPECT_THROW(third_octave_envelopes(AudioSignal{std::vector<double>(255, 0.1), 10000}), DataError);
}

TEST(StoiEnvelopeTest, ToneConcentratesInItsBand) {
  const StoiConfig c;
  const auto cf = center_frequencies(c);
  // The lowest bands are only two bins wide, narrower than the window's
  // main lobe, so the check starts where bands are wide enough to resolve.
  for (std::size_t band = 6; band < c.band_count; ++band) {
    const auto env = third_octave_envelopes(testing::tone(cf[band], 0.5, 10000), c);
    for (std::size_t m = 2; m + 2 < env.frames(); ++m) {
      const double own = env.at(band, m);
      for (std::size_t j = 0; j < env.bands(); ++j) {
        if (j == band) continue;
        ASSERT_GT(20.0 * std::log10(own / (env.at(j, m) + 1e-300)), 20.0)
            << "tone band " << band << " vs band " << j << " frame " << m;
      }
    }
  }
}

TEST(StoiEnvelopeTest, ZeroSignalGivesZeroMatrix) {
  const auto env = third_octave_envelopes(AudioSignal{std::vector<double>(3000, 0.0), 10000});
  for (std::size_t j = 0; j < env.bands(); ++j) {
    for (std::size_t m = 0; m < env.frames(); ++m) EXPECT_EQ(env.at(j, m), 0.0);
  }
}

TEST(StoiEnvelopeTest, WhiteNoiseFillsEveryBand) {
  const auto x = testing::white_noise(5, 256 + 99 * 128, 10000);
  const auto env = third_octave_envelopes(x);
  ASSERT_EQ(env.frames(), 100u);
  for (std::size_t j = 0; j < env.bands(); ++j) {
    for (std::size_t m = 0; m < env.frames(); ++m) EXPECT_GT(env.at(j, m), 0.0);
  }
}

TEST(StoiEnvelopeTest, RequiresWorkingRate) {
  EXPECT_THROW(third_octave_envelopes(testing::white_noise(1, 4000, 16000)), DataError);
}

TEST(SilentFramesTest, TrailingSilenceIsRemoved) {
  auto x = testing::white_noise(7, 10000, 10000);
  for (std::size_t i = 5000; i < x.size(); ++i) x.samples[i] = 0.0;
  auto y = testing::white_noise(8, 10000, 10000);
  const auto [xs, ys] = remove_silent_frames(x, y);
  EXPECT_EQ(xs.size(), ys.size());
  EXPECT_NEAR(xs.duration_seconds(), 0.5, 0.03);
}

TEST(SilentFramesTest, NothingRemovedWithoutSilence) {
  const auto x = testing::white_noise(9, 256 + 50 * 128, 10000);
  const auto [xs, ys] = remove_silent_frames(x, x);
  EXPECT_EQ(xs.size(), x.size());
  // Interior samples see two overlapping periodic-Hann-like windows: check
  // the overlap-add equals window-weighted input.
  const auto w = analysis_window(256);
  for (std::size_t i = 300; i < 400; ++i) {
    const std::size_t k = i % 128;
    EXPECT_NEAR(xs.samples[i], x.samples[i] * (w[k] + w[k + 128]), 1e-12);
  }
  const auto odd = testing::white_noise(9, 256 + 50 * 128 + 77, 10000);
  EXPECT_EQ(remove_silent_frames(odd, odd).first.size(), odd.size() - 77);
}

TEST(SilentFramesTest, Errors) {
  const AudioSignal zero{std::vector<double>(4000, 0.0), 10000};
  try {
    remove_silent_frames(zero, zero);
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("all frames silent"), std::string::npos);
  }
  EXPECT_THROW(remove_silent_frames(testing::white_noise(1, 4000, 10000), testing::white_noise(1, 4001, 10000)),
               DataError);
}

TEST(ComputeStoiTest, SelfIdentity) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = testing::speech_like(seed);
    EXPECT_NEAR(compute_stoi(x, x), 1.0, 1e-6);
  }
}

TEST(ComputeStoiTest, GainInvariance) {
  const auto x = testing::speech_like(12);
  for (double c : {0.5, 2.0}) {
    auto y = x;
    for (double& v : y.samples) v *= c;
    EXPECT_NEAR(compute_stoi(x, y), 1.0, 1e-6) << c;
  }
}

TEST(ComputeStoiTest, BoundedOnUnrelatedSignals) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = testing::speech_like(seed, 1.0);
    const auto y = testing::white_noise(seed + 50, x.size(), x.sample_rate, 0.3);
    const double d = compute_stoi(x, y);
    EXPECT_GE(d, -1.0);
    EXPECT_LE(d, 1.0);
    EXPECT_LT(d, 0.5);
  }
}

TEST(ComputeStoiTest, DecreasesWithSnr) {
  const auto noise = testing::babble(31, 5.0);
  std::vector<double> snrs, scores;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto x = testing::speech_like(seed + 200);
    double previous = 2.0;
    for (double snr : {5.0, 0.0, -5.0}) {
      const auto mix = mix_at_snr(x, noise, {snr, "babble"}, seed * 7919);
      const double d = compute_stoi(x, mix.mixture);
      EXPECT_LT(d, previous) << "seed " << seed << " snr " << snr;
      previous = d;
      snrs.push_back(snr);
      scores.push_back(d);
    }
  }
  EXPECT_GT(stats::spearman(snrs, scores), 0.8);
}

TEST(ComputeStoiTest, ResamplesHigherRates) {
  const auto x = testing::speech_like(77, 1.5, 16000);
  const auto noise = testing::white_noise(78, x.size(), 16000, 0.05);
  const auto mix = mix_with_gain(x, noise, 1.0, 0);
  const double at16 = compute_stoi(x, mix.mixture);
  const double at10 = compute_stoi(resample(x, 10000), resample(mix.mixture, 10000));
  EXPECT_DOUBLE_EQ(at16, at10);
}

TEST(ComputeStoiTest, Errors) {
  const auto x = testing::speech_like(1, 1.0, 16000);
  // Lower than the working rate.
  EXPECT_THROW(compute_stoi(testing::speech_like(1, 1.0, 8000), testing::speech_like(1, 1.0, 8000)), DataError);
  // Durations differ by more than one frame.
  EXPECT_THROW(compute_stoi(x, testing::speech_like(1, 1.2, 16000)), DataError);
  // Silent reference.
  EXPECT_THROW(compute_stoi(AudioSignal{std::vector<double>(x.size(), 0.0), 16000}, x), DataError);
  // Too short for a 30-frame segment.
  const auto short_x = testing::white_noise(3, 3000, 10000);
  EXPECT_THROW(compute_stoi(short_x, short_x), DataError);
}

TEST(ComputeStoiTest, MatchesPystoiReference) {
  const auto table = csv::read_file(fixture("expected.csv"));
  ASSERT_EQ(table.rows.size(), 6u);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& name = table.rows[r][0];
    const auto clean = load_wav(fixture(name + "_clean.wav"));
    const auto degraded = load_wav(fixture(name + "_degraded.wav"));
    const double d = compute_stoi(clean, degraded);
    // Same framing as this library: the reference is exact up to rounding.
    EXPECT_NEAR(d, csv::parse_double(table.rows[r][1], table, r, "stoi_same_framing"), 1e-9) << name;
    // Released pystoi drops the final frame; the scores stay close.
    EXPECT_NEAR(d, csv::parse_double(table.rows[r][2], table, r, "stoi_pystoi"), 5e-3) << name;
  }
}

}  // namespace
}  // namespace lexnoise::stoi
