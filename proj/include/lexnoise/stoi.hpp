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

#ifndef LEXNOISE_STOI_HPP_
#define LEXNOISE_STOI_HPP_

// Short-Time Objective Intelligibility: mean correlation between short-time
// one-third-octave band envelopes of a clean and a degraded signal.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "lexnoise/audio.hpp"
#include "lexnoise/error.hpp"
#include "lexnoise/fft.hpp"

namespace lexnoise::stoi {

struct StoiConfig {
  int working_rate = 10000;
  std::size_t frame_len = 256;
  std::size_t frame_shift = 128;
  std::size_t fft_len = 512;
  std::size_t band_count = 15;
  double band_start_cf = 150.0;
  std::size_t analysis_len = 30;
  double clip_db = -15.0;
  double silence_range_db = 40.0;

  void validate() const {
    if (working_rate <= 0) throw Error("stoi: working rate must be positive");
    if (frame_len == 0 || frame_shift * 2 != frame_len) {
      throw Error("stoi: frame shift must be half the frame length");
    }
    if (fft_len < frame_len || (fft_len & (fft_len - 1)) != 0) {
      throw Error("stoi: FFT length must be a power of two >= frame length");
    }
    if (band_count < 1 || analysis_len < 1) throw Error("stoi: band count and analysis length must be >= 1");
  }
};

// band x frame grid of band envelopes, row-major by band.
class EnvelopeMatrix {
 public:
  EnvelopeMatrix() = default;
  EnvelopeMatrix(std::size_t bands, std::size_t frames)
      : bands_(bands), frames_(frames), values_(bands * frames, 0.0) {}

  std::size_t bands() const { return bands_; }
  std::size_t frames() const { return frames_; }
  double& at(std::size_t band, std::size_t frame) { return values_[band * frames_ + frame]; }
  double at(std::size_t band, std::size_t frame) const { return values_[band * frames_ + frame]; }

 private:
  std::size_t bands_ = 0;
  std::size_t frames_ = 0;
  std::vector<double> values_;
};

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Hann window of length+2 points with both zero end points dropped.
inline std::vector<double> analysis_window(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n + 1) /
                                static_cast<double>(length + 1));
  }
  return w;
}

// Band centre frequencies: band_start_cf * 2^(k/3).
inline std::vector<double> center_frequencies(const StoiConfig& config) {
  std::vector<double> cf(config.band_count);
  for (std::size_t k = 0; k < cf.size(); ++k) {
    cf[k] = config.band_start_cf * std::pow(2.0, static_cast<double>(k) / 3.0);
  }
  return cf;
}

// Half-open FFT bin range [first, last) per band, edges snapped to the nearest bin.
inline std::vector<std::pair<std::size_t, std::size_t>> band_bins(const StoiConfig& config) {
  const std::size_t n_bins = config.fft_len / 2 + 1;
  const double bin_hz = static_cast<double>(config.working_rate) / static_cast<double>(config.fft_len);
  auto nearest_bin = [&](double hz) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double d = std::abs(static_cast<double>(b) * bin_hz - hz);
      if (d < best_dist) {
        best_dist = d;
        best = b;
      }
    }
    return best;
  };
  std::vector<std::pair<std::size_t, std::size_t>> bins(config.band_count);
  for (std::size_t k = 0; k < config.band_count; ++k) {
    const double kk = static_cast<double>(k);
    const double low = config.band_start_cf * std::pow(2.0, (2.0 * kk - 1.0) / 6.0);
    const double high = config.band_start_cf * std::pow(2.0, (2.0 * kk + 1.0) / 6.0);
    bins[k] = {nearest_bin(low), nearest_bin(high)};
  }
  return bins;
}

inline std::size_t frame_count(std::size_t length, const StoiConfig& config) {
  if (length < config.frame_len) return 0;
  return (length - config.frame_len + config.frame_shift - 1) / config.frame_shift + 1;
}

// Excises frames whose clean-signal energy is more than silence_range_db
// below the loudest clean frame, from both signals, then overlap-adds.
inline std::pair<AudioSignal, AudioSignal> remove_silent_frames(const AudioSignal& clean,
                                                                const AudioSignal& degraded,
                                                                const StoiConfig& config = {}) {
  config.validate();
  if (clean.size() != degraded.size()) throw DataError("stoi: clean/degraded length mismatch");
  if (clean.sample_rate != degraded.sample_rate) throw DataError("stoi: sample-rate mismatch");
  const std::size_t n = config.frame_len;
  const std::size_t hop = config.frame_shift;
  if (clean.size() < n) throw DataError("stoi: signal shorter than one frame");

  const auto window = analysis_window(n);
  const std::size_t frames = (clean.size() - n) / hop + 1;
  std::vector<double> energy_db(frames);
  double max_norm = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = window[i] * clean.samples[f * hop + i];
      acc += v * v;
    }
    const double norm = std::sqrt(acc);
    max_norm = std::max(max_norm, norm);
    energy_db[f] = 20.0 * std::log10(norm + kEps);
  }
  if (max_norm == 0.0) throw DataError("stoi: all frames silent");
  const double max_db = *std::max_element(energy_db.begin(), energy_db.end());

  std::vector<std::size_t> kept;
  for (std::size_t f = 0; f < frames; ++f) {
    if (max_db - config.silence_range_db - energy_db[f] < 0.0) kept.push_back(f);
  }
  const std::size_t out_len = (kept.size() - 1) * hop + n;
  AudioSignal clean_out{std::vector<double>(out_len, 0.0), clean.sample_rate};
  AudioSignal degraded_out{std::vector<double>(out_len, 0.0), clean.sample_rate};
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t src = kept[k] * hop;
    const std::size_t dst = k * hop;
    for (std::size_t i = 0; i < n; ++i) {
      clean_out.samples[dst + i] += window[i] * clean.samples[src + i];
      degraded_out.samples[dst + i] += window[i] * degraded.samples[src + i];
    }
  }
  return {std::move(clean_out), std::move(degraded_out)};
}

// Hann-windowed STFT grouped into one-third-octave bands. The final frame is
// zero-padded when the signal does not end on a hop boundary.
inline EnvelopeMatrix third_octave_envelopes(const AudioSignal& signal, const StoiConfig& config = {}) {
  config.validate();
  if (signal.sample_rate != config.working_rate) {
    throw DataError("stoi: envelopes require a signal at " + std::to_string(config.working_rate) + " Hz");
  }
  const std::size_t frames = frame_count(signal.size(), config);
  if (frames == 0) throw DataError("stoi: signal shorter than one frame");
  const auto window = analysis_window(config.frame_len);
  const auto bins = band_bins(config);

  EnvelopeMatrix env(config.band_count, frames);
  std::vector<double> frame(config.frame_len);
  for (std::size_t m = 0; m < frames; ++m) {
    const std::size_t start = m * config.frame_shift;
    for (std::size_t i = 0; i < config.frame_len; ++i) {
      const std::size_t idx = start + i;
      frame[i] = idx < signal.size() ? window[i] * signal.samples[idx] : 0.0;
    }
    const auto power = fft::power_spectrum(frame, config.fft_len);
    for (std::size_t j = 0; j < config.band_count; ++j) {
      double acc = 0.0;
      for (std::size_t b = bins[j].first; b < bins[j].second; ++b) acc += power[b];
      env.at(j, m) = std::sqrt(acc);
    }
  }
  return env;
}

// Intermediate intelligibility measure averaged over all bands and all
// analysis_len-frame segments of two envelope matrices.
inline double correlate_envelopes(const EnvelopeMatrix& clean, const EnvelopeMatrix& degraded,
                                  const StoiConfig& config = {}) {
  if (clean.bands() != degraded.bands() || clean.frames() != degraded.frames()) {
    throw DataError("stoi: envelope dimensions differ");
  }
  const std::size_t len = config.analysis_len;
  if (clean.frames() < len) {
    throw DataError("stoi: " + std::to_string(clean.frames()) +
                    " non-silent frames, fewer than the analysis length of " + std::to_string(len));
  }
  const double clip = std::pow(10.0, -config.clip_db / 20.0);
  const std::size_t segments = clean.frames() - len + 1;
  std::vector<double> x(len), y(len);
  double total = 0.0;
  for (std::size_t s = 0; s < segments; ++s) {
    double seg_sum = 0.0;
    for (std::size_t j = 0; j < clean.bands(); ++j) {
      double xx = 0.0, yy = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        x[t] = clean.at(j, s + t);
        y[t] = degraded.at(j, s + t);
        xx += x[t] * x[t];
        yy += y[t] * y[t];
      }
      const double alpha = std::sqrt(xx) / (std::sqrt(yy) + kEps);
      double mx = 0.0, my = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        y[t] = std::min(alpha * y[t], x[t] * (1.0 + clip));
        mx += x[t];
        my += y[t];
      }
      mx /= static_cast<double>(len);
      my /= static_cast<double>(len);
      double sxy = 0.0, sxx = 0.0, syy = 0.0;
      for (std::size_t t = 0; t < len; ++t) {
        const double dx = x[t] - mx;
        const double dy = y[t] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
      }
      seg_sum += sxy / ((std::sqrt(sxx) + kEps) * (std::sqrt(syy) + kEps));
    }
    total += seg_sum / static_cast<double>(clean.bands());
  }
  return total / static_cast<double>(segments);
}

// Score in [-1, 1]; higher is more intelligible. Both inputs are resampled to
// the working rate and must agree in duration to within one frame.
inline double compute_stoi(const AudioSignal& clean, const AudioSignal& degraded,
                           const StoiConfig& config = {}) {
  config.validate();
  detail::require_signal(clean, "stoi clean");
  detail::require_signal(degraded, "stoi degraded");
  if (clean.sample_rate < config.working_rate || degraded.sample_rate < config.working_rate) {
    throw DataError("stoi: sample rate below the " + std::to_string(config.working_rate) +
                    " Hz working rate");
  }
  const double tolerance = static_cast<double>(config.frame_len) / config.working_rate;
  if (std::abs(clean.duration_seconds() - degraded.duration_seconds()) > tolerance) {
    throw DataError("stoi: clean and degraded durations differ by more than one frame");
  }
  AudioSignal x = resample(clean, config.working_rate);
  AudioSignal y = resample(degraded, config.working_rate);
  const std::size_t len = std::min(x.size(), y.size());
  x.samples.resize(len);
  y.samples.resize(len);

  auto [xs, ys] = remove_silent_frames(x, y, config);
  const auto x_env = third_octave_envelopes(xs, config);
  const auto y_env = third_octave_envelopes(ys, config);
  return correlate_envelopes(x_env, y_env, config);
}

}  // namespace lexnoise::stoi

#endif  // LEXNOISE_STOI_HPP_
