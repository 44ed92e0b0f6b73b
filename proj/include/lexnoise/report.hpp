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

#ifndef LEXNOISE_REPORT_HPP_
#define LEXNOISE_REPORT_HPP_

// Per-condition summary of an experiment: mean HRS and diff.HRS, paired
// tests between conditions, a diff.HRS histogram, and five-number summaries
// of HRS_min / HRS_max.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexnoise/analysis.hpp"
#include "lexnoise/csv.hpp"
#include "lexnoise/stats.hpp"

namespace lexnoise::report {

inline constexpr int kHistogramBins = 10;  // width 0.1 over [0, 1]
inline constexpr double kThresholds[] = {0.2, 0.4, 0.6, 0.8};

struct ConditionReport {
  analysis::ConditionSummary summary;
  std::vector<std::size_t> histogram;            // kHistogramBins counts of diff.HRS
  std::vector<std::size_t> exceedances;          // pairs with diff.HRS >= each threshold
  std::optional<stats::FiveNumber> hrs_min;
  std::optional<stats::FiveNumber> hrs_max;
};

struct ConditionTest {
  NoiseCondition first;
  NoiseCondition second;
  stats::TTestResult diff_hrs;
};

struct Report {
  std::vector<ConditionReport> conditions;
  std::vector<ConditionTest> tests;
  std::vector<nlohmann::json> fits;
};

// Bin index of a diff.HRS value; values on a bin edge (within 1e-9) go up.
inline std::size_t histogram_bin(double diff) {
  const auto bin = static_cast<long>(std::floor(diff * kHistogramBins + 1e-9));
  return static_cast<std::size_t>(std::clamp<long>(bin, 0, kHistogramBins - 1));
}

inline Report build_report(const std::vector<analysis::StimulusScore>& scores,
                           const std::vector<analysis::PairComparison>& comparisons,
                           std::vector<nlohmann::json> fits = {}) {
  std::set<NoiseCondition> conditions;
  for (const auto& s : scores) conditions.insert(s.condition);
  for (const auto& c : comparisons) conditions.insert(c.condition);
  if (conditions.empty()) throw DataError("report: no scores or comparisons");

  Report r;
  r.fits = std::move(fits);
  for (const auto& cond : conditions) {
    ConditionReport cr;
    cr.summary = analysis::summarize_condition(scores, comparisons, cond);
    cr.histogram.assign(kHistogramBins, 0);
    cr.exceedances.assign(std::size(kThresholds), 0);
    std::vector<double> lo, hi;
    for (const auto& c : comparisons) {
      if (!(c.condition == cond)) continue;
      ++cr.histogram[histogram_bin(c.diff_hrs)];
      for (std::size_t t = 0; t < std::size(kThresholds); ++t) {
        if (c.diff_hrs >= kThresholds[t] - 1e-9) ++cr.exceedances[t];
      }
      lo.push_back(c.hrs_min);
      hi.push_back(c.hrs_max);
    }
    if (!lo.empty()) {
      cr.hrs_min = stats::five_number(lo);
      cr.hrs_max = stats::five_number(hi);
    }
    r.conditions.push_back(std::move(cr));
  }
  const std::vector<NoiseCondition> ordered(conditions.begin(), conditions.end());
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      try {
        r.tests.push_back({ordered[j], ordered[i], analysis::compare_conditions(comparisons, ordered[j], ordered[i])});
      } catch (const DataError&) {
        // fewer than two shared pairs: no test for this combination
      }
    }
  }
  return r;
}

inline std::string condition_label(const NoiseCondition& c) {
  std::string s = "SNR " + csv::format_double(c.snr_db);
  if (!c.noise_id.empty()) s += " (" + c.noise_id + ")";
  return s;
}

inline void write_text(std::ostream& out, const Report& r) {
  out << std::fixed << std::setprecision(4);
  out << "Per-condition summary\n";
  out << std::left << std::setw(24) << "condition" << std::right << std::setw(10) << "stimuli" << std::setw(10)
      << "mean.HRS" << std::setw(8) << "pairs" << std::setw(11) << "diff.HRS" << std::setw(10) << "HRS.min"
      << std::setw(10) << "HRS.max" << '\n';
  for (const auto& c : r.conditions) {
    const auto& s = c.summary;
    out << std::left << std::setw(24) << condition_label(s.condition) << std::right << std::setw(10) << s.n_stimuli
        << std::setw(10) << s.mean_hrs << std::setw(8) << s.n_pairs << std::setw(11) << s.mean_diff_hrs
        << std::setw(10) << s.mean_hrs_min << std::setw(10) << s.mean_hrs_max << '\n';
  }
  if (!r.tests.empty()) {
    out << "\nPaired t-tests on diff.HRS (first - second)\n";
    for (const auto& t : r.tests) {
      out << condition_label(t.first) << " vs " << condition_label(t.second) << ": mean diff "
          << t.diff_hrs.mean_difference << ", t = " << t.diff_hrs.t << ", df = " << std::setprecision(0)
          << t.diff_hrs.df << std::setprecision(4) << ", p = " << t.diff_hrs.p << '\n';
    }
  }
  out << "\ndiff.HRS histogram (bin width 0.1)\n";
  for (const auto& c : r.conditions) {
    out << std::left << std::setw(24) << condition_label(c.summary.condition) << std::right;
    for (auto n : c.histogram) out << std::setw(5) << n;
    out << '\n';
  }
  out << "\nPairs with diff.HRS >=";
  for (double t : kThresholds) out << ' ' << std::setprecision(1) << t;
  out << std::setprecision(4) << '\n';
  for (const auto& c : r.conditions) {
    out << std::left << std::setw(24) << condition_label(c.summary.condition) << std::right;
    for (auto n : c.exceedances) out << std::setw(5) << n;
    out << '\n';
  }
  out << "\nFive-number summaries (min, lower hinge, median, upper hinge, max)\n";
  for (const auto& c : r.conditions) {
    if (!c.hrs_min) continue;
    auto row = [&](const char* name, const stats::FiveNumber& f) {
      out << std::left << std::setw(24) << condition_label(c.summary.condition) << std::setw(9) << name
          << std::right << std::setw(8) << f.min << std::setw(8) << f.lower_hinge << std::setw(8) << f.median
          << std::setw(8) << f.upper_hinge << std::setw(8) << f.max << '\n';
    };
    row("HRS.min", *c.hrs_min);
    row("HRS.max", *c.hrs_max);
  }
  for (const auto& fit : r.fits) {
    out << "\nModel for " << fit.value("response", std::string("?")) << " (n = " << fit.value("n", 0)
        << ", AIC = " << fit.value("aic", 0.0) << ")\n";
    for (const auto& c : fit.at("coefficients")) {
      out << "  " << std::left << std::setw(16) << c.at("name").get<std::string>() << std::right << std::setw(10)
          << c.at("estimate").get<double>() << std::setw(10) << c.at("std_error").get<double>() << std::setw(10)
          << c.at("p_value").get<double>() << '\n';
    }
  }
}

// Long-format CSV: section, condition_snr_db, noise_id, key, value.
inline void write_csv(std::ostream& out, const Report& r) {
  csv::write_row(out, {"section", "condition_snr_db", "noise_id", "key", "value"});
  auto row = [&](const std::string& section, const NoiseCondition& c, const std::string& key, double v) {
    csv::write_row(out, {section, csv::format_double(c.snr_db), c.noise_id, key, csv::format_double(v)});
  };
  for (const auto& c : r.conditions) {
    const auto& s = c.summary;
    row("summary", s.condition, "n_stimuli", static_cast<double>(s.n_stimuli));
    row("summary", s.condition, "mean_hrs", s.mean_hrs);
    row("summary", s.condition, "n_pairs", static_cast<double>(s.n_pairs));
    row("summary", s.condition, "mean_diff_hrs", s.mean_diff_hrs);
    row("summary", s.condition, "mean_hrs_min", s.mean_hrs_min);
    row("summary", s.condition, "mean_hrs_max", s.mean_hrs_max);
    for (std::size_t b = 0; b < c.histogram.size(); ++b) {
      std::ostringstream key;
      key << std::fixed << std::setprecision(1) << "[" << b / 10.0 << "," << (b + 1) / 10.0
          << (b + 1 == c.histogram.size() ? "]" : ")");
      row("histogram", s.condition, key.str(), static_cast<double>(c.histogram[b]));
    }
    for (std::size_t t = 0; t < c.exceedances.size(); ++t) {
      row("exceedance", s.condition, ">=" + csv::format_double(kThresholds[t]), static_cast<double>(c.exceedances[t]));
    }
    if (c.hrs_min) {
      for (const auto& [name, f] : {std::pair{"hrs_min", *c.hrs_min}, std::pair{"hrs_max", *c.hrs_max}}) {
        row("fivenum", s.condition, std::string(name) + ".min", f.min);
        row("fivenum", s.condition, std::string(name) + ".lower_hinge", f.lower_hinge);
        row("fivenum", s.condition, std::string(name) + ".median", f.median);
        row("fivenum", s.condition, std::string(name) + ".upper_hinge", f.upper_hinge);
        row("fivenum", s.condition, std::string(name) + ".max", f.max);
      }
    }
  }
  for (const auto& t : r.tests) {
    const std::string key = "vs SNR " + csv::format_double(t.second.snr_db);
    row("ttest", t.first, key + " mean_difference", t.diff_hrs.mean_difference);
    row("ttest", t.first, key + " t", t.diff_hrs.t);
    row("ttest", t.first, key + " df", t.diff_hrs.df);
    row("ttest", t.first, key + " p", t.diff_hrs.p);
  }
}

}  // namespace lexnoise::report

#endif  // LEXNOISE_REPORT_HPP_
