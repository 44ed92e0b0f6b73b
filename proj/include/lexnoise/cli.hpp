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

#ifndef LEXNOISE_CLI_HPP_
#define LEXNOISE_CLI_HPP_

// Subcommand dispatch for the `lexnoise` tool.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexnoise/analysis.hpp"
#include "lexnoise/audio.hpp"
#include "lexnoise/csv.hpp"
#include "lexnoise/error.hpp"
#include "lexnoise/lexicon.hpp"
#include "lexnoise/ngram.hpp"
#include "lexnoise/regression.hpp"
#include "lexnoise/report.hpp"
#include "lexnoise/selector.hpp"
#include "lexnoise/stoi.hpp"

namespace lexnoise::cli {

inline constexpr const char* kLexiconEnv = "LEXNOISE_LEXICON";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Noise offset drawn from a seeded 64-bit Mersenne Twister; reproducible
// across platforms.
inline std::size_t noise_offset_from_seed(std::uint64_t seed, std::size_t noise_length) {
  std::mt19937_64 rng(seed);
  return static_cast<std::size_t>(rng() % noise_length);
}

inline nlohmann::json fit_to_json(const regression::StepwiseResult& result,
                                  const std::vector<std::string>& initial_predictors) {
  const auto& fit = result.fit;
  nlohmann::json j;
  j["response"] = fit.response;
  j["initial_predictors"] = initial_predictors;
  j["predictors"] = fit.predictors;
  j["n"] = fit.n;
  j["df_residual"] = fit.df_residual;
  j["rss"] = fit.rss;
  j["sigma"] = fit.sigma;
  j["aic"] = fit.aic.value;
  j["aic_zero_rss"] = fit.aic.zero_rss;
  j["coefficients"] = nlohmann::json::array();
  for (const auto& c : fit.coefficients) {
    j["coefficients"].push_back({{"name", c.name},
                                 {"estimate", c.estimate},
                                 {"std_error", c.std_error},
                                 {"t_value", c.t_value},
                                 {"p_value", c.p_value},
                                 {"stars", regression::significance_stars(c.p_value)}});
  }
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& step : result.trace) {
    nlohmann::json s;
    s["terms"] = step.terms;
    s["aic"] = step.aic;
    s["chosen"] = step.chosen;
    s["candidates"] = nlohmann::json::array();
    for (const auto& c : step.candidates) s["candidates"].push_back({{"move", c.move}, {"aic", c.aic}});
    trace.push_back(std::move(s));
  }
  j["selection"] = {{"direction", std::string(regression::to_string(result.direction))}, {"trace", trace}};
  return j;
}

// Audio manifest: pair_id, word, clean_path, noisy_path, span_start, span_end
// and an optional condition_snr_db filter column. Relative paths resolve
// against the manifest's directory.
inline std::map<std::string, selector::AudioByWord> load_audio_manifest(const std::string& path,
                                                                         std::optional<double> snr) {
  const auto table = csv::read_file(path);
  const auto c_pair = table.column("pair_id");
  const auto c_word = table.column("word");
  const auto c_clean = table.column("clean_path");
  const auto c_noisy = table.column("noisy_path");
  const auto c_start = table.column("span_start");
  const auto c_end = table.column("span_end");
  const auto c_snr = table.find_column("condition_snr_db");
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).string();
  };
  std::map<std::string, selector::AudioByWord> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (c_snr && snr && !row[*c_snr].empty() &&
        csv::parse_double(row[*c_snr], table, r, "condition_snr_db") != *snr) {
      continue;
    }
    selector::WordAudio audio;
    audio.clean = load_wav(resolve(row[c_clean]));
    audio.noisy = load_wav(resolve(row[c_noisy]));
    const double start = csv::parse_double(row[c_start], table, r, "span_start");
    const double end = csv::parse_double(row[c_end], table, r, "span_end");
    if (start < 0 || end <= start) table.fail(r, "invalid span");
    audio.span_start = static_cast<std::size_t>(start);
    audio.span_end = static_cast<std::size_t>(end);
    const std::string word = text::to_lower(text::trim(row[c_word]));
    if (!out[row[c_pair]].emplace(word, std::move(audio)).second) {
      table.fail(r, "duplicate audio entry for pair '" + row[c_pair] + "', word '" + word + "'");
    }
  }
  return out;
}

namespace detail {

inline std::string opt_to_string(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw DataError(path + ": cannot open for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

inline std::string default_lexicon() {
  const char* env = std::getenv(kLexiconEnv);
  return env ? std::string(env) : std::string();
}

inline std::string fixed4(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto t = text::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace detail

struct FeatureInputs {
  std::string pairs;
  std::string lexicon = detail::default_lexicon();
  std::string lm;
  std::string audio_manifest;
  double snr = 0.0;
  std::string noise_id;
};

inline void add_feature_inputs(CLI::App* cmd, FeatureInputs& in) {
  cmd->add_option("--pairs", in.pairs, "Synonym pairs CSV")->required();
  cmd->add_option("--lexicon", in.lexicon, std::string("Pronouncing dictionary (default: $") + kLexiconEnv + ")");
  cmd->add_option("--lm", in.lm, "n-gram model file from train-lm")->required();
  cmd->add_option("--audio-manifest", in.audio_manifest, "Audio manifest CSV");
  cmd->add_option("--snr", in.snr, "Noise condition SNR in dB")->required();
  cmd->add_option("--noise-id", in.noise_id, "Noise source label");
}

struct LoadedInputs {
  std::vector<SynonymPairRecord> pairs;
  PronunciationLexicon lexicon;
  lm::NgramModel lm;
  std::map<std::string, selector::AudioByWord> audio;
};

inline LoadedInputs load_inputs(const FeatureInputs& in) {
  if (in.lexicon.empty()) {
    throw DataError(std::string("no lexicon given (use --lexicon or set ") + kLexiconEnv + ")");
  }
  LoadedInputs out{load_pairs(in.pairs), load_lexicon(in.lexicon), lm::load_model(in.lm), {}};
  if (!in.audio_manifest.empty()) out.audio = load_audio_manifest(in.audio_manifest, in.snr);
  return out;
}

inline const selector::AudioByWord* audio_for(const LoadedInputs& in, const std::string& pair_id) {
  auto it = in.audio.find(pair_id);
  return it == in.audio.end() ? nullptr : &it->second;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise-robust synonym selection: mixing, STOI, language-model and lexicon features, "
               "HRS analysis, regression and selection."};
  app.name("lexnoise");
  app.require_subcommand(1);

  // mix
  struct {
    std::string speech, noise, output, noise_id, encoding = "pcm16";
    double snr = 0.0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> offset;
  } mix;
  auto* mix_cmd = app.add_subcommand("mix", "Mix speech with noise at an exact SNR");
  mix_cmd->add_option("--speech", mix.speech, "Clean speech WAV")->required();
  mix_cmd->add_option("--noise", mix.noise, "Noise WAV (resampled to the speech rate if needed)")->required();
  mix_cmd->add_option("--snr", mix.snr, "Target SNR in dB")->required();
  mix_cmd->add_option("--seed", mix.seed, "Seed for the noise segment offset");
  mix_cmd->add_option("--offset", mix.offset, "Explicit noise offset in samples (overrides --seed)");
  mix_cmd->add_option("--noise-id", mix.noise_id, "Noise label (default: noise file stem)");
  mix_cmd->add_option("--encoding", mix.encoding, "Output encoding")->check(CLI::IsMember({"pcm16", "float32"}));
  mix_cmd->add_option("--out", mix.output, "Output WAV")->required();

  // stoi
  struct {
    std::string clean, degraded;
  } stoi_args;
  auto* stoi_cmd = app.add_subcommand("stoi", "Compute STOI between a clean and a degraded WAV");
  stoi_cmd->add_option("--clean", stoi_args.clean, "Clean reference WAV")->required();
  stoi_cmd->add_option("--degraded", stoi_args.degraded, "Degraded WAV")->required();

  // train-lm
  struct {
    std::string corpus, output;
    int order = 3;
    double discount = 0.75;
    int min_count = 2;
  } train;
  auto* train_cmd = app.add_subcommand("train-lm", "Train an interpolated Kneser-Ney n-gram model");
  train_cmd->add_option("--corpus", train.corpus, "UTF-8 text, one utterance per line")->required();
  train_cmd->add_option("--order", train.order, "n-gram order")->check(CLI::PositiveNumber);
  train_cmd->add_option("--discount", train.discount, "Absolute discount in (0, 1)");
  train_cmd->add_option("--min-count", train.min_count, "Words seen fewer times become <unk>")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--out", train.output, "Model file")->required();

  // features
  FeatureInputs feat_in;
  struct {
    std::string comparisons, output;
    bool per_word = false;
  } feat;
  auto* feat_cmd = app.add_subcommand("features", "Emit the feature CSV consumed by fit");
  add_feature_inputs(feat_cmd, feat_in);
  feat_cmd->add_option("--comparisons", feat.comparisons,
                       "Comparisons CSV from analyze-hrs; sets the observed winner and adds diff.HRS");
  feat_cmd->add_flag("--per-word", feat.per_word, "One row per word (log.prob, ph.len, STOI, HRS)");
  feat_cmd->add_option("--out", feat.output, "Output CSV (default: stdout)");

  // analyze-hrs
  struct {
    std::string responses, pairs, lexicon = detail::default_lexicon(), mode = "in_context";
    std::string scores_out = "scores.csv", comparisons_out = "comparisons.csv";
  } hrs;
  auto* hrs_cmd = app.add_subcommand("analyze-hrs", "Score listener transcripts and compare synonym pairs");
  hrs_cmd->add_option("--responses", hrs.responses, "Responses CSV")->required();
  hrs_cmd->add_option("--pairs", hrs.pairs, "Synonym pairs CSV")->required();
  hrs_cmd->add_option("--lexicon", hrs.lexicon, std::string("Pronouncing dictionary (default: $") + kLexiconEnv + ")");
  hrs_cmd->add_option("--mode", hrs.mode, "Judging mode")->check(CLI::IsMember({"single_word", "in_context"}));
  hrs_cmd->add_option("--scores-out", hrs.scores_out, "Per-stimulus HRS CSV");
  hrs_cmd->add_option("--comparisons-out", hrs.comparisons_out, "Per-pair comparison CSV");

  // fit
  struct {
    std::string features, response = "diff.HRS", predictors, direction = "backward", json_out, model_out, label;
    std::optional<double> snr, band_min, band_max;
  } fit;
  auto* fit_cmd = app.add_subcommand("fit", "OLS fit with optional AIC-stepwise selection");
  fit_cmd->add_option("--features", fit.features, "Feature CSV")->required();
  fit_cmd->add_option("--response", fit.response, "Response column");
  fit_cmd->add_option("--predictors", fit.predictors, "Comma-separated predictor columns (default: all six)");
  fit_cmd->add_option("--direction", fit.direction, "Stepwise direction")
      ->check(CLI::IsMember({"none", "backward", "both"}));
  fit_cmd->add_option("--snr", fit.snr, "Only use rows with this condition_snr_db");
  fit_cmd->add_option("--json", fit.json_out, "Write the JSON fit report here");
  fit_cmd->add_option("--model-out", fit.model_out, "Write the selected model as a models JSON list");
  fit_cmd->add_option("--band-min", fit.band_min, "Lower SNR bound for --model-out (default: -inf)");
  fit_cmd->add_option("--band-max", fit.band_max, "Upper SNR bound for --model-out (default: +inf)");
  fit_cmd->add_option("--label", fit.label, "Label stored with --model-out");

  // select
  FeatureInputs sel_in;
  struct {
    std::vector<std::string> models;
    std::string output;
  } sel;
  auto* sel_cmd = app.add_subcommand("select", "Choose the more noise-robust synonym of each pair");
  add_feature_inputs(sel_cmd, sel_in);
  sel_cmd->add_option("--models", sel.models, "Models JSON file(s) (default: built-in canonical models)");
  sel_cmd->add_option("--out", sel.output, "Decisions CSV (default: stdout)");

  // report
  struct {
    std::string scores, comparisons, format = "text", output;
    std::vector<std::string> fits;
  } rep;
  auto* rep_cmd = app.add_subcommand("report", "Summarize HRS scores, pair comparisons and fits");
  rep_cmd->add_option("--scores", rep.scores, "Scores CSV from analyze-hrs")->required();
  rep_cmd->add_option("--comparisons", rep.comparisons, "Comparisons CSV from analyze-hrs")->required();
  rep_cmd->add_option("--fit", rep.fits, "JSON fit report(s) from fit");
  rep_cmd->add_option("--format", rep.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  rep_cmd->add_option("--out", rep.output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help("", CLI::AppFormatMode::Normal);
    // help for the selected subcommand, if any
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (*mix_cmd) {
      const AudioSignal speech = load_wav(mix.speech);
      AudioSignal noise = load_wav(mix.noise);
      if (noise.sample_rate != speech.sample_rate) noise = resample(noise, speech.sample_rate);
      const std::size_t offset = mix.offset ? *mix.offset : noise_offset_from_seed(mix.seed, noise.size());
      NoiseCondition cond{mix.snr, mix.noise_id.empty() ? std::filesystem::path(mix.noise).stem().string()
                                                        : mix.noise_id};
      const auto result = mix_at_snr(speech, noise, cond, offset);
      save_wav(mix.output, result.mixture, mix.encoding == "pcm16" ? WavEncoding::kPcm16 : WavEncoding::kFloat32);
      out << "noise_id=" << cond.noise_id << "\n"
          << "snr_db=" << csv::format_double(cond.snr_db) << "\n"
          << "noise_offset=" << result.noise_offset << "\n"
          << "noise_gain=" << csv::format_double(result.noise_gain) << "\n"
          << "output_scale=" << csv::format_double(result.output_scale) << "\n";
    } else if (*stoi_cmd) {
      const double score = stoi::compute_stoi(load_wav(stoi_args.clean), load_wav(stoi_args.degraded));
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", score);
      out << buf << "\n";
    } else if (*train_cmd) {
      const auto model = lm::train(lm::read_corpus(train.corpus), train.order, train.discount, train.min_count);
      lm::save_model(model, train.output);
      out << "order=" << model.order() << "\nvocab=" << model.vocab().size()
          << "\nngrams=" << model.counts().counts.size() << "\n";
    } else if (*feat_cmd) {
      const auto in = load_inputs(feat_in);
      std::vector<analysis::PairComparison> comparisons;
      if (!feat.comparisons.empty()) comparisons = analysis::parse_comparisons(csv::read_file(feat.comparisons));
      auto find_comparison = [&](const std::string& pair_id) -> const analysis::PairComparison* {
        for (const auto& c : comparisons) {
          if (c.pair_id == pair_id && c.condition.snr_db == feat_in.snr &&
              (feat_in.noise_id.empty() || c.condition.noise_id == feat_in.noise_id)) {
            return &c;
          }
        }
        return nullptr;
      };
      detail::OutputFile file(feat.output, out);
      auto& o = file.get();
      const std::string snr = csv::format_double(feat_in.snr);
      if (feat.per_word) {
        csv::write_row(o, {"pair_id", "condition_snr_db", "word", "log.prob", "ph.len", "STOI", "HRS", "log_base"});
      } else {
        csv::write_row(o, {"pair_id", "condition_snr_db", "winner", "alternative", "log.prob", "diff.log.prob",
                           "ph.len", "diff.ph.len", "STOI", "diff.STOI", "diff.HRS", "log_base"});
      }
      for (const auto& pair : in.pairs) {
        const auto* comp = comparisons.empty() ? nullptr : find_comparison(pair.pair_id);
        if (!comparisons.empty() && !comp) {
          err << "warning: no comparison for pair '" << pair.pair_id << "' at SNR " << snr << "; skipped\n";
          continue;
        }
        const auto* audio = audio_for(in, pair.pair_id);
        if (feat.per_word) {
          for (const auto& [word, hrs] : {std::pair{pair.word_a, comp ? std::optional(comp->hrs_a) : std::nullopt},
                                          std::pair{pair.word_b, comp ? std::optional(comp->hrs_b) : std::nullopt}}) {
            const auto f = selector::word_features(pair, word, in.lm, in.lexicon, audio);
            csv::write_row(o, {pair.pair_id, snr, word, csv::format_double(f.log_prob), csv::format_double(f.ph_len),
                               detail::opt_to_string(f.stoi), detail::opt_to_string(hrs), "e"});
          }
          continue;
        }
        std::string winner = pair.word_a, alternative = pair.word_b;
        if (comp && comp->winner == pair.word_b) std::swap(winner, alternative);
        const auto f = selector::extract_features(pair, {winner, alternative}, in.lm, in.lexicon, audio);
        csv::write_row(o, {pair.pair_id, snr, winner, alternative, csv::format_double(f.log_prob),
                           csv::format_double(f.diff_log_prob), csv::format_double(f.ph_len),
                           csv::format_double(f.diff_ph_len), detail::opt_to_string(f.stoi),
                           detail::opt_to_string(f.diff_stoi), comp ? csv::format_double(comp->diff_hrs) : "",
                           "e"});
      }
    } else if (*hrs_cmd) {
      if (hrs.lexicon.empty()) {
        throw DataError(std::string("no lexicon given (use --lexicon or set ") + kLexiconEnv + ")");
      }
      const auto lexicon = load_lexicon(hrs.lexicon);
      const auto pairs = load_pairs(hrs.pairs);
      const auto records = analysis::load_responses(hrs.responses);
      const auto scores = analysis::compute_hrs(records, lexicon, analysis::parse_mode(hrs.mode));
      const auto comparisons = analysis::compare_pairs(scores, pairs);
      {
        detail::OutputFile f(hrs.scores_out, out);
        analysis::write_scores(f.get(), scores);
      }
      {
        detail::OutputFile f(hrs.comparisons_out, out);
        analysis::write_comparisons(f.get(), comparisons);
      }
      if (!hrs.scores_out.empty() && hrs.scores_out != "-" && !hrs.comparisons_out.empty() &&
          hrs.comparisons_out != "-") {
        out << "stimuli=" << scores.size() << "\ncomparisons=" << comparisons.size() << "\n";
      }
    } else if (*fit_cmd) {
      auto table = csv::read_file(fit.features);
      if (!table.find_column(fit.response)) {
        throw DataError(fit.features + ": response column '" + fit.response + "' not found");
      }
      if (fit.snr) {
        const auto c = table.column("condition_snr_db");
        csv::Table filtered = table;
        filtered.rows.clear();
        filtered.row_lines.clear();
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
          if (csv::parse_double(table.rows[r][c], table, r, "condition_snr_db") == *fit.snr) {
            filtered.rows.push_back(table.rows[r]);
            filtered.row_lines.push_back(table.row_lines[r]);
          }
        }
        table = std::move(filtered);
      }
      std::vector<std::string> predictors = detail::split_list(fit.predictors);
      if (predictors.empty()) predictors.assign(selector::kFeatureNames.begin(), selector::kFeatureNames.end());
      const auto design = regression::design_from_table(table, fit.response, predictors);
      const auto result = regression::stepwise_select(design, regression::parse_direction(fit.direction));
      out << regression::format_table(result.fit);
      if (!result.trace.empty()) {
        out << "\nSelection (" << regression::to_string(result.direction) << ")\n";
        for (std::size_t i = 0; i < result.trace.size(); ++i) {
          const auto& step = result.trace[i];
          out << "step " << i + 1 << ": AIC " << detail::fixed4(step.aic) << ", chosen " << step.chosen << "\n";
          for (const auto& c : step.candidates) {
            out << "  " << std::left << std::setw(20) << c.move << std::right << std::setw(12) << detail::fixed4(c.aic)
                << "\n";
          }
        }
      }
      if (!fit.json_out.empty()) {
        detail::OutputFile f(fit.json_out, out);
        f.get() << fit_to_json(result, predictors).dump(2) << "\n";
      }
      if (!fit.model_out.empty()) {
        selector::SnrBand band;
        if (fit.band_min) band.min = *fit.band_min;
        if (fit.band_max) band.max = *fit.band_max;
        nlohmann::json models = nlohmann::json::array();
        models.push_back(selector::to_json(selector::model_from_fit(result.fit, band, fit.label)));
        detail::OutputFile f(fit.model_out, out);
        f.get() << models.dump(2) << "\n";
      }
    } else if (*sel_cmd) {
      const auto in = load_inputs(sel_in);
      std::vector<selector::ConditionModel> models;
      if (sel.models.empty()) {
        models = selector::canonical_models();
      } else {
        for (const auto& path : sel.models) {
          auto m = selector::load_models(path);
          models.insert(models.end(), m.begin(), m.end());
        }
      }
      const selector::ModelSet set(std::move(models));
      const NoiseCondition cond{sel_in.snr, sel_in.noise_id};
      detail::OutputFile file(sel.output, out);
      auto& o = file.get();
      csv::write_row(o, {"pair_id", "condition_snr_db", "chosen", "alternative", "predicted_gain", "tie",
                         "prediction_a", "prediction_b", "log.prob", "diff.log.prob", "ph.len", "diff.ph.len", "STOI",
                         "diff.STOI", "model"});
      for (const auto& pair : in.pairs) {
        const auto d = selector::choose(pair, audio_for(in, pair.pair_id), cond, set, in.lm, in.lexicon);
        const auto& f = d.chosen == pair.word_a ? d.features_a : d.features_b;
        csv::write_row(o, {d.pair_id, csv::format_double(cond.snr_db), d.chosen, d.alternative,
                           csv::format_double(d.predicted_gain), d.tie ? "true" : "false",
                           csv::format_double(d.prediction_a), csv::format_double(d.prediction_b),
                           csv::format_double(f.log_prob), csv::format_double(f.diff_log_prob),
                           csv::format_double(f.ph_len), csv::format_double(f.diff_ph_len),
                           detail::opt_to_string(f.stoi), detail::opt_to_string(f.diff_stoi), d.model->label});
      }
    } else if (*rep_cmd) {
      const auto scores = analysis::parse_scores(csv::read_file(rep.scores));
      const auto comparisons = analysis::parse_comparisons(csv::read_file(rep.comparisons));
      std::vector<nlohmann::json> fits;
      for (const auto& path : rep.fits) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open fit report '" + path + "'");
        try {
          fits.push_back(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
          throw DataError(path + ": invalid JSON: " + e.what());
        }
      }
      const auto r = report::build_report(scores, comparisons, std::move(fits));
      detail::OutputFile file(rep.output, out);
      if (rep.format == "csv") {
        report::write_csv(file.get(), r);
      } else {
        report::write_text(file.get(), r);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace lexnoise::cli

#endif  // LEXNOISE_CLI_HPP_
