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

#ifndef LEXNOISE_AUDIO_HPP_
#define LEXNOISE_AUDIO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lexnoise/error.hpp"

namespace lexnoise {

// Mono waveform. Amplitudes are nominally in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

// Listening environment: an SNR in dB and the noise source it was mixed with.
struct NoiseCondition {
  double snr_db = 0.0;
  std::string noise_id;

  friend bool operator==(const NoiseCondition&, const NoiseCondition&) = default;
  friend auto operator<=>(const NoiseCondition&, const NoiseCondition&) = default;
};

enum class WavEncoding { kPcm16, kFloat32 };

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

inline void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

inline void require_signal(const AudioSignal& s, const char* what) {
  if (s.sample_rate <= 0) throw DataError(std::string(what) + ": sample rate must be positive");
  if (s.samples.empty()) throw DataError(std::string(what) + ": empty signal");
}

}  // namespace detail

// Decodes an in-memory RIFF/WAVE image. Stereo (or wider) input is averaged to mono.
inline AudioSignal decode_wav(std::span<const unsigned char> bytes, const std::string& source) {
  const auto fail = [&](const std::string& what) -> DataError {
    return DataError(source + ": " + what);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::span<const unsigned char> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = detail::read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) throw fail("truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = detail::read_u16(f);
      channels = detail::read_u16(f + 2);
      rate = detail::read_u32(f + 4);
      bits = detail::read_u16(f + 14);
      if (format == 0xFFFE) {
        if (size < 40) throw fail("truncated WAVE_FORMAT_EXTENSIBLE header");
        format = detail::read_u16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      // Tolerate writers that leave the size field at its maximum.
      data = bytes.subspan(body, std::min<std::size_t>(size, available));
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw fail("missing fmt chunk");
  if (!have_data) throw fail("missing data chunk");
  if (channels == 0 || rate == 0) throw fail("invalid channel count or sample rate");

  const bool pcm16 = format == 1 && bits == 16;
  const bool float32 = format == 3 && bits == 32;
  if (!pcm16 && !float32) {
    throw fail("unsupported encoding (format " + std::to_string(format) + ", " +
               std::to_string(bits) + " bits); expected PCM16 or float32");
  }
  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) throw fail("zero-length audio");

  AudioSignal out;
  out.sample_rate = static_cast<int>(rate);
  out.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data.data() + i * frame_bytes + c * (bits / 8);
      if (pcm16) {
        sum += static_cast<std::int16_t>(detail::read_u16(p)) / 32768.0;
      } else {
        const std::uint32_t raw = detail::read_u32(p);
        float v;
        std::memcpy(&v, &raw, sizeof v);
        sum += v;
      }
    }
    out.samples[i] = sum / channels;
  }
  return out;
}

inline AudioSignal load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": unreadable file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_wav(bytes, path);
}

inline std::vector<unsigned char> encode_wav(const AudioSignal& signal, WavEncoding encoding) {
  if (signal.sample_rate <= 0) throw DataError("encode_wav: sample rate must be positive");
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint32_t data_size = static_cast<std::uint32_t>(signal.samples.size() * (bits / 8));
  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  detail::put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  detail::put_u32(out, 16);
  detail::put_u16(out, encoding == WavEncoding::kPcm16 ? 1 : 3);
  detail::put_u16(out, 1);
  detail::put_u32(out, static_cast<std::uint32_t>(signal.sample_rate));
  detail::put_u32(out, static_cast<std::uint32_t>(signal.sample_rate) * (bits / 8));
  detail::put_u16(out, bits / 8);
  detail::put_u16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  detail::put_u32(out, data_size);
  for (double x : signal.samples) {
    if (encoding == WavEncoding::kPcm16) {
      const long q = std::lround(std::clamp(x * 32768.0, -32768.0, 32767.0));
      detail::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      const float f = static_cast<float>(x);
      std::uint32_t raw;
      std::memcpy(&raw, &f, sizeof raw);
      detail::put_u32(out, raw);
    }
  }
  return out;
}

inline void save_wav(const std::string& path, const AudioSignal& signal,
                     WavEncoding encoding = WavEncoding::kPcm16) {
  const auto bytes = encode_wav(signal, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError(path + ": write failed");
}

inline double rms(std::span<const double> samples) {
  if (samples.empty()) throw DataError("rms: empty signal");
  long double acc = 0.0L;
  for (double x : samples) acc += static_cast<long double>(x) * x;
  return static_cast<double>(std::sqrt(acc / static_cast<long double>(samples.size())));
}

inline double rms(const AudioSignal& signal) { return rms(signal.samples); }

// Band-limited rational resampler: Kaiser-windowed sinc, one precomputed
// filter phase per distinct fractional offset (up to kMaxPhases).
class Resampler {
 public:
  static constexpr int kZeroCrossings = 48;
  static constexpr double kRolloff = 0.9;  // cutoff as a fraction of the lower Nyquist
  static constexpr double kKaiserBeta = 9.0;
  static constexpr long kMaxPhases = 4096;

  Resampler(int source_rate, int target_rate) : source_rate_(source_rate), target_rate_(target_rate) {
    if (source_rate <= 0 || target_rate <= 0) throw DataError("resample: rates must be positive");
    const long g = std::gcd(static_cast<long>(source_rate), static_cast<long>(target_rate));
    up_ = target_rate / g;
    down_ = source_rate / g;
    scale_ = std::min(1.0, static_cast<double>(up_) / static_cast<double>(down_));
    cutoff_ = 0.5 * scale_ * kRolloff;  // cycles per input sample
    half_width_ = kZeroCrossings / (2.0 * cutoff_);
    taps_half_ = static_cast<long>(std::ceil(half_width_));
    if (up_ <= kMaxPhases) {
      table_.resize(static_cast<std::size_t>(up_ * 2 * taps_half_));
      for (long p = 0; p < up_; ++p) {
        fill_phase(static_cast<double>(p) / static_cast<double>(up_),
                   std::span<double>(table_).subspan(static_cast<std::size_t>(p * 2 * taps_half_),
                                                     static_cast<std::size_t>(2 * taps_half_)));
      }
    }
  }

  std::size_t output_length(std::size_t input_length) const {
    return static_cast<std::size_t>((static_cast<long double>(input_length) * up_ + down_ / 2) /
                                    down_);
  }

  std::vector<double> process(std::span<const double> input) const {
    const std::size_t n_out = output_length(input.size());
    std::vector<double> out(n_out);
    std::vector<double> scratch;
    const long n_in = static_cast<long>(input.size());
    const std::size_t width = static_cast<std::size_t>(2 * taps_half_);
    for (std::size_t n = 0; n < n_out; ++n) {
      const long long pos = static_cast<long long>(n) * down_;
      const long base = static_cast<long>(pos / up_);
      const long phase = static_cast<long>(pos % up_);
      std::span<const double> taps;
      if (!table_.empty()) {
        taps = std::span<const double>(table_).subspan(static_cast<std::size_t>(phase) * width, width);
      } else {
        scratch.resize(width);
        fill_phase(static_cast<double>(phase) / static_cast<double>(up_), scratch);
        taps = scratch;
      }
      // taps[j] weights input[base - taps_half_ + 1 + j]
      const long first = base - taps_half_ + 1;
      const long lo = std::max<long>(0, -first);
      const long hi = std::min<long>(static_cast<long>(width), n_in - first);
      double acc = 0.0;
      for (long j = lo; j < hi; ++j) acc += taps[static_cast<std::size_t>(j)] * input[static_cast<std::size_t>(first + j)];
      out[n] = acc;
    }
    return out;
  }

 private:
  static double bessel_i0(double x) {
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum;
  }

  // Taps for an output instant `frac` input samples past an integer position.
  void fill_phase(double frac, std::span<double> taps) const {
    const double norm = bessel_i0(kKaiserBeta);
    double sum = 0.0;
    for (std::size_t j = 0; j < taps.size(); ++j) {
      const double x = static_cast<double>(taps_half_ - 1 - static_cast<long>(j)) + frac;
      double h = 0.0;
      if (std::abs(x) < half_width_) {
        const double arg = 2.0 * cutoff_ * x;
        const double sinc =
            arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
        const double r = x / half_width_;
        h = 2.0 * cutoff_ * sinc * bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / norm;
      }
      taps[j] = h;
      sum += h;
    }
    // Unity DC gain in every phase.
    for (double& t : taps) t /= sum;
  }

  int source_rate_;
  int target_rate_;
  long up_ = 1;
  long down_ = 1;
  double scale_ = 1.0;
  double cutoff_ = 0.5;
  double half_width_ = 0.0;
  long taps_half_ = 0;
  std::vector<double> table_;
};

inline AudioSignal resample(const AudioSignal& signal, int target_rate) {
  if (target_rate <= 0) throw DataError("resample: target rate must be positive");
  if (signal.sample_rate <= 0) throw DataError("resample: source rate must be positive");
  if (target_rate == signal.sample_rate) return signal;
  Resampler resampler(signal.sample_rate, target_rate);
  return AudioSignal{resampler.process(signal.samples), target_rate};
}

struct MixResult {
  AudioSignal mixture;
  double noise_gain = 1.0;    // g applied to the noise segment before summation
  double output_scale = 1.0;  // uniform rescale applied afterwards to avoid clipping (1 = none)
  std::size_t noise_offset = 0;
};

// Noise samples starting at `offset`, wrapping circularly, `length` long.
inline std::vector<double> noise_segment(const AudioSignal& noise, std::size_t offset,
                                         std::size_t length) {
  detail::require_signal(noise, "noise");
  std::vector<double> segment(length);
  const std::size_t n = noise.samples.size();
  std::size_t idx = offset % n;
  for (std::size_t i = 0; i < length; ++i) {
    segment[i] = noise.samples[idx];
    if (++idx == n) idx = 0;
  }
  return segment;
}

// speech + gain * noise_segment, followed by the anti-clipping rescale.
inline MixResult mix_with_gain(const AudioSignal& speech, const AudioSignal& noise, double gain,
                               std::size_t noise_offset) {
  detail::require_signal(speech, "speech");
  detail::require_signal(noise, "noise");
  if (speech.sample_rate != noise.sample_rate) {
    throw DataError("mix: sample-rate mismatch (" + std::to_string(speech.sample_rate) + " vs " +
                    std::to_string(noise.sample_rate) + " Hz)");
  }
  const auto segment = noise_segment(noise, noise_offset, speech.size());
  MixResult result;
  result.noise_gain = gain;
  result.noise_offset = noise_offset % noise.size();
  result.mixture.sample_rate = speech.sample_rate;
  result.mixture.samples.resize(speech.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < speech.size(); ++i) {
    const double v = speech.samples[i] + gain * segment[i];
    result.mixture.samples[i] = v;
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 1.0) {
    result.output_scale = 0.999 / peak;
    for (double& v : result.mixture.samples) v *= result.output_scale;
  }
  return result;
}

// Adds noise so that 20*log10(rms(speech) / rms(g * segment)) == snr_db, with
// both RMS values taken over the full utterance.
inline MixResult mix_at_snr(const AudioSignal& speech, const AudioSignal& noise,
                            const NoiseCondition& condition, std::size_t noise_offset) {
  detail::require_signal(speech, "speech");
  detail::require_signal(noise, "noise");
  if (!std::isfinite(condition.snr_db)) throw DataError("mix: SNR must be finite");
  if (speech.sample_rate != noise.sample_rate) {
    throw DataError("mix: sample-rate mismatch (" + std::to_string(speech.sample_rate) + " vs " +
                    std::to_string(noise.sample_rate) + " Hz)");
  }
  const double speech_rms = rms(speech);
  const double noise_rms = rms(noise_segment(noise, noise_offset, speech.size()));
  if (speech_rms == 0.0) throw DataError("mix: speech has zero RMS");
  if (noise_rms == 0.0) throw DataError("mix: noise segment has zero RMS");
  const double gain = speech_rms / noise_rms * std::pow(10.0, -condition.snr_db / 20.0);
  return mix_with_gain(speech, noise, gain, noise_offset);
}

}  // namespace lexnoise

#endif  // LEXNOISE_AUDIO_HPP_
