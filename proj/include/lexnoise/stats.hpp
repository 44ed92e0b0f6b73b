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

#ifndef LEXNOISE_STATS_HPP_
#define LEXNOISE_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "lexnoise/error.hpp"

namespace lexnoise::stats {

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw Error("incomplete beta: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// Two-sided tail probability P(|T| >= |t|) for Student's t with df degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw Error("student t: degrees of freedom must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw DataError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

struct TTestResult {
  double mean_difference = 0.0;
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

// Paired two-sided t-test on first[i] - second[i]. A zero-variance sample
// gives t = 0, p = 1 when the mean difference is zero and |t| = inf, p = 0
// otherwise.
inline TTestResult paired_t_test(std::span<const double> first, std::span<const double> second) {
  if (first.size() != second.size()) throw DataError("paired t-test: samples differ in size");
  if (first.size() < 2) throw DataError("paired t-test: need at least 2 pairs");
  std::vector<double> d(first.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = first[i] - second[i];
  TTestResult r;
  r.n = d.size();
  r.df = static_cast<double>(d.size() - 1);
  r.mean_difference = mean(d);
  double ss = 0.0;
  for (double v : d) ss += (v - r.mean_difference) * (v - r.mean_difference);
  const double se = std::sqrt(ss / r.df / static_cast<double>(d.size()));
  if (se == 0.0) {
    if (r.mean_difference == 0.0) {
      r.t = 0.0;
      r.p = 1.0;
    } else {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
      r.p = 0.0;
    }
    return r;
  }
  r.t = r.mean_difference / se;
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

// Average ranks (ties share the mean rank), 1-based.
inline std::vector<double> ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DataError("correlation: need two equal samples of size >= 2");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

// Tukey's five-number summary (min, lower hinge, median, upper hinge, max).
struct FiveNumber {
  double min = 0, lower_hinge = 0, median = 0, upper_hinge = 0, max = 0;
};

inline FiveNumber five_number(std::vector<double> xs) {
  if (xs.empty()) throw DataError("five-number summary of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  const double n4 = std::floor((n + 3.0) / 2.0) / 2.0;
  const double depth[5] = {1.0, n4, (n + 1.0) / 2.0, n + 1.0 - n4, n};
  double out[5];
  for (int i = 0; i < 5; ++i) {
    const auto lo = static_cast<std::size_t>(std::floor(depth[i])) - 1;
    const auto hi = static_cast<std::size_t>(std::ceil(depth[i])) - 1;
    out[i] = 0.5 * (xs[lo] + xs[hi]);
  }
  return {out[0], out[1], out[2], out[3], out[4]};
}

}  // namespace lexnoise::stats

#endif  // LEXNOISE_STATS_HPP_
