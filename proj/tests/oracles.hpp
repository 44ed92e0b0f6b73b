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

#ifndef LEXNOISE_TESTS_ORACLES_HPP_
#define LEXNOISE_TESTS_ORACLES_HPP_

// Reference computations used to check the library. They favor plain,
// slow, high-precision formulations over anything the library does.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lexnoise::testing {

// I_x(a, b) from the hypergeometric power series
//   I_x(a,b) = x^a (1-x)^b / (a B(a,b)) * (1 + sum_n B(a+1, n+1)/B(a+b, n+1) x^(n+1))
// evaluated in long double; the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) keeps x <= 1/2.
inline long double incomplete_beta_series(long double a, long double b, long double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  if (x > 0.5L) return 1.0L - incomplete_beta_series(b, a, 1.0L - x);
  const long double log_front =
      a * std::log(x) + b * std::log1p(-x) - std::log(a) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  // Successive terms differ by the factor (a+b+n)/(a+1+n) * x.
  long double sum = 0, term = 1;
  for (int n = 0; n < 100000; ++n) {
    sum += term;
    term *= (a + b + n) / (a + 1 + n) * x;
    if (term < 1e-22L * sum) break;
  }
  return std::exp(log_front) * sum;
}

inline double t_two_sided_p_oracle(double t, double df) {
  return static_cast<double>(incomplete_beta_series(df / 2.0L, 0.5L, df / (df + static_cast<long double>(t) * t)));
}

struct NormalEquationFit {
  std::vector<long double> beta;
  std::vector<long double> se;
  long double rss = 0;
};

// Solves (X'X) b = X'y by Gauss-Jordan elimination with partial pivoting in
// long double; X gets a leading column of ones.
inline NormalEquationFit normal_equations(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t k = x.empty() ? 1 : x[0].size() + 1;
  auto row = [&](std::size_t i, std::size_t j) -> long double { return j == 0 ? 1.0L : x[i][j - 1]; };
  // Augmented [X'X | I | X'y]
  std::vector<std::vector<long double>> m(k, std::vector<long double>(2 * k + 1, 0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t i = 0; i < n; ++i) m[a][b] += row(i, a) * row(i, b);
    }
    m[a][k + a] = 1;
    for (std::size_t i = 0; i < n; ++i) m[a][2 * k] += row(i, a) * y[i];
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    }
    std::swap(m[c], m[piv]);
    if (m[c][c] == 0) throw std::runtime_error("singular normal equations");
    const long double inv = 1.0L / m[c][c];
    for (auto& v : m[c]) v *= inv;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const long double f = m[r][c];
      for (std::size_t j = 0; j < m[r].size(); ++j) m[r][j] -= f * m[c][j];
    }
  }
  NormalEquationFit fit;
  for (std::size_t a = 0; a < k; ++a) fit.beta.push_back(m[a][2 * k]);
  for (std::size_t i = 0; i < n; ++i) {
    long double pred = 0;
    for (std::size_t a = 0; a < k; ++a) pred += row(i, a) * fit.beta[a];
    fit.rss += (y[i] - pred) * (y[i] - pred);
  }
  const long double sigma2 = fit.rss / static_cast<long double>(n - k);
  for (std::size_t a = 0; a < k; ++a) fit.se.push_back(std::sqrt(sigma2 * m[a][k + a]));
  return fit;
}

}  // namespace lexnoise::testing

#endif  // LEXNOISE_TESTS_ORACLES_HPP_
