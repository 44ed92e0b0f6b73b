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

#ifndef LEXNOISE_REGRESSION_HPP_
#define LEXNOISE_REGRESSION_HPP_

// Ordinary least squares with coefficient inference, AIC, and greedy
// AIC-stepwise term selection.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lexnoise/csv.hpp"
#include "lexnoise/error.hpp"
#include "lexnoise/stats.hpp"

namespace lexnoise::regression {

inline constexpr std::string_view kInterceptName = "(Intercept)";

struct DesignMatrix {
  std::vector<std::string> predictors;  // one name per column of x
  Eigen::MatrixXd x;                    // n x p, intercept is implicit
  Eigen::VectorXd y;
  std::string response = "y";

  std::size_t rows() const { return static_cast<std::size_t>(y.size()); }

  DesignMatrix subset(const std::vector<std::size_t>& columns) const {
    DesignMatrix out;
    out.response = response;
    out.y = y;
    out.x.resize(x.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
      out.x.col(static_cast<Eigen::Index>(j)) = x.col(static_cast<Eigen::Index>(columns[j]));
      out.predictors.push_back(predictors.at(columns[j]));
    }
    return out;
  }
};

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double t_value = 0.0;
  double p_value = 1.0;
};

struct AicScore {
  double value = 0.0;
  bool zero_rss = false;  // value is -inf
};

// n*ln(RSS/n) + 2k, k counting every estimated coefficient including the intercept.
inline AicScore aic(std::size_t n, double rss, std::size_t k) {
  if (n == 0) throw Error("aic: no observations");
  if (rss < 0.0) throw Error("aic: negative RSS");
  if (rss == 0.0) return {-std::numeric_limits<double>::infinity(), true};
  const double nn = static_cast<double>(n);
  return {nn * std::log(rss / nn) + 2.0 * static_cast<double>(k), false};
}

struct FitResult {
  std::string response;
  std::vector<std::string> predictors;     // excludes the intercept
  std::vector<Coefficient> coefficients;   // intercept first, then predictors in order
  std::size_t n = 0;
  std::size_t df_residual = 0;
  double rss = 0.0;
  double sigma = 0.0;  // residual standard error
  AicScore aic;
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;

  std::size_t parameter_count() const { return coefficients.size(); }

  const Coefficient* find(std::string_view name) const {
    for (const auto& c : coefficients) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

inline AicScore aic(const FitResult& fit) { return aic(fit.n, fit.rss, fit.parameter_count()); }

// Relative threshold on |R_jj| / |R_00| below which a column counts as dependent.
inline constexpr double kRankThreshold = 1e-10;

inline FitResult ols_fit(const DesignMatrix& design) {
  const auto n = static_cast<Eigen::Index>(design.rows());
  const auto p = design.x.cols();
  const Eigen::Index k = p + 1;
  if (design.x.rows() != n) throw DataError("ols: predictor and response row counts differ");
  if (static_cast<std::size_t>(p) != design.predictors.size()) throw DataError("ols: predictor names do not match columns");
  if (n <= k) {
    throw DataError("ols: insufficient rows (" + std::to_string(n) + " observations for " +
                    std::to_string(k) + " coefficients)");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (design.x.col(j).maxCoeff() == design.x.col(j).minCoeff()) {
      throw RankDeficiencyError("ols: column '" + design.predictors[static_cast<std::size_t>(j)] +
                                "' is constant (collinear with the intercept)");
    }
  }

  Eigen::MatrixXd X(n, k);
  X.col(0).setOnes();
  X.rightCols(p) = design.x;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < k) {
    const auto& perm = qr.colsPermutation().indices();
    std::string names;
    for (Eigen::Index i = qr.rank(); i < k; ++i) {
      const auto col = perm(i);
      if (!names.empty()) names += ", ";
      names += col == 0 ? std::string(kInterceptName) : design.predictors[static_cast<std::size_t>(col - 1)];
    }
    throw RankDeficiencyError("ols: rank-deficient design; linearly dependent column(s): " + names);
  }

  const Eigen::VectorXd beta = qr.solve(design.y);
  FitResult fit;
  fit.response = design.response;
  fit.predictors = design.predictors;
  fit.n = static_cast<std::size_t>(n);
  fit.df_residual = static_cast<std::size_t>(n - k);
  fit.fitted = X * beta;
  fit.residuals = design.y - fit.fitted;
  fit.rss = fit.residuals.squaredNorm();
  const double sigma2 = fit.rss / static_cast<double>(fit.df_residual);
  fit.sigma = std::sqrt(sigma2);

  // (X'X)^-1 = P R^-1 R^-T P'
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.template triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd unscaled_perm = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation().indices();
  Eigen::VectorXd diag(k);
  for (Eigen::Index i = 0; i < k; ++i) diag(perm(i)) = unscaled_perm(i, i);

  const double df = static_cast<double>(fit.df_residual);
  for (Eigen::Index j = 0; j < k; ++j) {
    Coefficient c;
    c.name = j == 0 ? std::string(kInterceptName) : design.predictors[static_cast<std::size_t>(j - 1)];
    c.estimate = beta(j);
    c.std_error = std::sqrt(sigma2 * diag(j));
    c.t_value = c.estimate / c.std_error;
    c.p_value = stats::student_t_two_sided_p(c.t_value, df);
    fit.coefficients.push_back(std::move(c));
  }
  fit.aic = aic(fit);
  return fit;
}

enum class Direction { kNone, kBackward, kBoth };

inline Direction parse_direction(std::string_view s) {
  if (s == "none") return Direction::kNone;
  if (s == "backward") return Direction::kBackward;
  if (s == "both") return Direction::kBoth;
  throw DataError("unknown stepwise direction '" + std::string(s) + "' (expected none, backward or both)");
}

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kNone: return "none";
    case Direction::kBackward: return "backward";
    case Direction::kBoth: return "both";
  }
  return "none";
}

struct Candidate {
  std::string move;  // "<none>", "- term" or "+ term"
  double aic = 0.0;
};

struct Step {
  std::vector<std::string> terms;     // model at the start of the step
  double aic = 0.0;                   // AIC of that model
  std::vector<Candidate> candidates;  // in column order, <none> first
  std::string chosen;                 // "<none>" when the search stops
};

struct StepwiseResult {
  FitResult fit;
  std::vector<Step> trace;
  Direction direction = Direction::kBackward;
};

// AIC moves closer than this count as ties.
inline constexpr double kAicTieTolerance = 1e-9;

// Greedy AIC descent from the full model. The intercept is always kept.
inline StepwiseResult stepwise_select(const DesignMatrix& design, Direction direction) {
  StepwiseResult result;
  result.direction = direction;
  const std::size_t p = design.predictors.size();
  std::vector<bool> active(p, true);
  auto columns = [&](const std::vector<bool>& mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < p; ++j) {
      if (mask[j]) cols.push_back(j);
    }
    return cols;
  };

  FitResult current = ols_fit(design);
  if (direction == Direction::kNone) {
    result.fit = std::move(current);
    return result;
  }
  for (;;) {
    Step step;
    step.terms = current.predictors;
    step.aic = current.aic.value;
    step.candidates.push_back({"<none>", current.aic.value});

    std::size_t best_col = p;
    bool best_is_add = false;
    double best_aic = std::numeric_limits<double>::infinity();
    std::vector<FitResult> fits(p);
    for (std::size_t j = 0; j < p; ++j) {
      const bool drop = active[j];
      if (!drop && direction != Direction::kBoth) continue;
      auto mask = active;
      mask[j] = !mask[j];
      fits[j] = ols_fit(design.subset(columns(mask)));
      const double value = fits[j].aic.value;
      step.candidates.push_back({(drop ? "- " : "+ ") + design.predictors[j], value});
      // Columns are visited in order, so a tie goes to the later one.
      const bool tie = std::abs(value - best_aic) <= kAicTieTolerance;
      if (best_col == p || value < best_aic - kAicTieTolerance || tie) {
        best_col = j;
        best_aic = value;
        best_is_add = !drop;
      }
    }

    const bool improves = best_col != p && best_aic < current.aic.value - kAicTieTolerance;
    if (!improves) {
      step.chosen = "<none>";
      result.trace.push_back(std::move(step));
      break;
    }
    step.chosen = (best_is_add ? "+ " : "- ") + design.predictors[best_col];
    result.trace.push_back(std::move(step));
    active[best_col] = !active[best_col];
    current = std::move(fits[best_col]);
  }
  result.fit = std::move(current);
  return result;
}

// Significance marks at the 0.05 / 0.01 / 0.001 thresholds.
inline std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

// Coefficient table: term, estimate, SE, t value, p-value.
inline std::string format_table(const FitResult& fit) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "" << std::right << std::setw(10) << "Estimate" << std::setw(10)
      << "SE" << std::setw(10) << "t value" << std::setw(10) << "p-value" << '\n';
  out << std::fixed;
  for (const auto& c : fit.coefficients) {
    out << std::left << std::setw(16) << c.name << std::right << std::setprecision(3) << std::setw(10)
        << c.estimate << std::setw(10) << c.std_error << std::setw(10) << c.t_value << std::setw(10)
        << c.p_value;
    const auto stars = significance_stars(c.p_value);
    if (!stars.empty()) out << ' ' << stars;
    out << '\n';
  }
  out << std::setprecision(4) << "n = " << fit.n << ", residual df = " << fit.df_residual
      << ", RSS = " << fit.rss << ", AIC = " << fit.aic.value << '\n';
  return out.str();
}

// Builds a design from CSV columns. Every row must carry a numeric value in
// each used column.
inline DesignMatrix design_from_table(const csv::Table& table, const std::string& response,
                                      const std::vector<std::string>& predictors) {
  const auto response_col = table.find_column(response);
  if (!response_col) throw DataError(table.source + ": response column '" + response + "' not found");
  std::vector<std::size_t> cols;
  for (const auto& name : predictors) {
    const auto c = table.find_column(name);
    if (!c) throw DataError(table.source + ": predictor column '" + name + "' not found");
    cols.push_back(*c);
  }
  DesignMatrix d;
  d.response = response;
  d.predictors = predictors;
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  d.x.resize(n, static_cast<Eigen::Index>(cols.size()));
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    d.y(i) = csv::parse_double(table.rows[r][*response_col], table, r, response);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      d.x(i, static_cast<Eigen::Index>(j)) = csv::parse_double(table.rows[r][cols[j]], table, r, predictors[j]);
    }
  }
  return d;
}

}  // namespace lexnoise::regression

#endif  // LEXNOISE_REGRESSION_HPP_
