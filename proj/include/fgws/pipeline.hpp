//
// Copyright 2026 The FGWS Authors
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
//

// End-to-end orchestration: train, attack, tune, detect and report, with
// every intermediate result persisted under the output directory.

#ifndef FGWS_PIPELINE_HPP_
#define FGWS_PIPELINE_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fgws/attacks.hpp"
#include "fgws/classifier.hpp"
#include "fgws/corpus.hpp"
#include "fgws/detector.hpp"
#include "fgws/error.hpp"
#include "fgws/json_io.hpp"
#include "fgws/language_model.hpp"
#include "fgws/lexicon.hpp"
#include "fgws/report.hpp"
#include "fgws/stats.hpp"
#include "fgws/util.hpp"

namespace fgws {

namespace fs = std::filesystem;

struct DataPaths {
  std::string train;
  std::string validation;
  std::string test;
  std::string embeddings;
  std::string synonyms;
  std::string stopwords;  // optional
};

struct AttackSettings {
  std::vector<AttackKind> kinds = {AttackKind::kRandom, AttackKind::kPrioritized,
                                   AttackKind::kGenetic, AttackKind::kPwws};
  // Number of test sequences to attack; 0 attacks the whole test split.
  std::size_t test_subset = 0;
  AttackConfig base;
};

struct DetectorSettings {
  std::vector<int> q_grid = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  double fpr_budget = 0.10;
  std::optional<std::size_t> k_override;
  bool retune_gamma = true;
  double fixed_gamma = 0.0;
  // "all" or "non-stopword".
  std::string percentile_universe = "all";
};

struct StatsSettings {
  std::size_t resamples = 10000;
  double prior_scale = kDefaultPriorScale;
  std::vector<double> budgets = {0.01, 0.05, 0.10, 0.20};
  bool successful_only = false;
  double histogram_bin_width = 1.0;
};

struct RunConfig {
  DataPaths data;
  std::string output_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  int num_classes = 0;
  DistanceMetric metric = DistanceMetric::kEuclidean;
  TrainOptions model;
  AttackSettings attacks;
  DetectorSettings detector;
  StatsSettings stats;
  // Normalized config with paths as written; hashed into the manifest.
  nlohmann::json normalized;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                const std::set<std::string>& allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw DataError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw DataError("config: unknown key '" + where + "." + key + "'");
    }
  }
}

template <typename T>
void read_opt(const nlohmann::json& obj, const char* key, T& out) {
  if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<T>();
}

inline std::string resolve_path(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

inline std::string metric_name(DistanceMetric m) {
  return m == DistanceMetric::kCosine ? "cosine" : "euclidean";
}

inline DistanceMetric parse_metric(const std::string& s) {
  if (s == "euclidean") return DistanceMetric::kEuclidean;
  if (s == "cosine") return DistanceMetric::kCosine;
  throw DataError("config: unknown metric '" + s + "'");
}

}  // namespace detail

inline nlohmann::json run_config_to_json(const RunConfig& c,
                                         const DataPaths& paths) {
  nlohmann::json kinds = nlohmann::json::array();
  for (auto k : c.attacks.kinds) kinds.push_back(attack_name(k));
  const auto& a = c.attacks.base;
  return {
      {"seed", c.seed},
      {"threads", c.threads},
      {"output_dir", c.output_dir},
      {"data",
       {{"train", paths.train},
        {"validation", paths.validation},
        {"test", paths.test},
        {"embeddings", paths.embeddings},
        {"synonyms", paths.synonyms},
        {"stopwords", paths.stopwords},
        {"num_classes", c.num_classes},
        {"metric", detail::metric_name(c.metric)}}},
      {"model",
       {{"family", c.model.family},
        {"learning_rate", c.model.learning_rate},
        {"iterations", c.model.iterations},
        {"l2", c.model.l2}}},
      {"attacks",
       {{"kinds", kinds},
        {"test_subset", c.attacks.test_subset},
        {"max_replace_fraction", a.max_replace_fraction},
        {"restrict_stopwords", a.restrict_stopwords},
        {"population_size", a.population_size},
        {"num_generations", a.num_generations},
        {"embedding_distance_bound", a.embedding_distance_bound},
        {"num_neighbors", a.num_neighbors},
        {"lm_window", a.lm_window},
        {"lm_top_k", a.lm_top_k},
        {"equifrequent_band", a.equifrequent_band
                                  ? nlohmann::json(*a.equifrequent_band)
                                  : nlohmann::json(nullptr)}}},
      {"detector",
       {{"q_grid", c.detector.q_grid},
        {"fpr_budget", c.detector.fpr_budget},
        {"k_override", c.detector.k_override
                           ? nlohmann::json(*c.detector.k_override)
                           : nlohmann::json(nullptr)},
        {"retune_gamma", c.detector.retune_gamma},
        {"fixed_gamma", c.detector.fixed_gamma},
        {"percentile_universe", c.detector.percentile_universe}}},
      {"stats",
       {{"resamples", c.stats.resamples},
        {"prior_scale", c.stats.prior_scale},
        {"budgets", c.stats.budgets},
        {"successful_only", c.stats.successful_only},
        {"histogram_bin_width", c.stats.histogram_bin_width}}}};
}

// Parses a run config. Relative paths resolve against `base_dir`.
inline RunConfig run_config_from_json(const nlohmann::json& j,
                                      const fs::path& base_dir) {
  using detail::read_opt;
  RunConfig c;
  try {
    detail::reject_unknown_keys(
        j, {"seed", "threads", "output_dir", "data", "model", "attacks",
            "detector", "stats"},
        "config");
    const bool seed_ok =
        j.contains("seed") &&
        (j.at("seed").is_number_unsigned() ||
         (j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() >= 0));
    if (!seed_ok) {
      throw DataError("config: 'seed' is required (non-negative integer)");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
    read_opt(j, "threads", c.threads);
    read_opt(j, "output_dir", c.output_dir);
    if (c.output_dir.empty()) c.output_dir = "out";

    DataPaths raw;
    if (!j.contains("data")) throw DataError("config: 'data' is required");
    const auto& d = j.at("data");
    detail::reject_unknown_keys(d,
                                {"train", "validation", "test", "embeddings",
                                 "synonyms", "stopwords", "num_classes",
                                 "metric"},
                                "data");
    read_opt(d, "train", raw.train);
    read_opt(d, "validation", raw.validation);
    read_opt(d, "test", raw.test);
    read_opt(d, "embeddings", raw.embeddings);
    read_opt(d, "synonyms", raw.synonyms);
    read_opt(d, "stopwords", raw.stopwords);
    read_opt(d, "num_classes", c.num_classes);
    std::string metric = "euclidean";
    read_opt(d, "metric", metric);
    c.metric = detail::parse_metric(metric);

    if (j.contains("model")) {
      const auto& m = j.at("model");
      detail::reject_unknown_keys(
          m, {"family", "learning_rate", "iterations", "l2"}, "model");
      read_opt(m, "family", c.model.family);
      read_opt(m, "learning_rate", c.model.learning_rate);
      read_opt(m, "iterations", c.model.iterations);
      read_opt(m, "l2", c.model.l2);
    }
    if (j.contains("attacks")) {
      const auto& a = j.at("attacks");
      detail::reject_unknown_keys(
          a,
          {"kinds", "test_subset", "max_replace_fraction", "restrict_stopwords",
           "population_size", "num_generations", "embedding_distance_bound",
           "num_neighbors", "lm_window", "lm_top_k", "equifrequent_band"},
          "attacks");
      if (a.contains("kinds")) {
        c.attacks.kinds.clear();
        for (const auto& k : a.at("kinds")) {
          c.attacks.kinds.push_back(parse_attack_kind(k.get<std::string>()));
        }
      }
      auto& b = c.attacks.base;
      read_opt(a, "test_subset", c.attacks.test_subset);
      read_opt(a, "max_replace_fraction", b.max_replace_fraction);
      read_opt(a, "restrict_stopwords", b.restrict_stopwords);
      read_opt(a, "population_size", b.population_size);
      read_opt(a, "num_generations", b.num_generations);
      read_opt(a, "embedding_distance_bound", b.embedding_distance_bound);
      read_opt(a, "num_neighbors", b.num_neighbors);
      read_opt(a, "lm_window", b.lm_window);
      read_opt(a, "lm_top_k", b.lm_top_k);
      if (a.contains("equifrequent_band") && !a.at("equifrequent_band").is_null()) {
        b.equifrequent_band = a.at("equifrequent_band").get<double>();
      }
    }
    if (j.contains("detector")) {
      const auto& dd = j.at("detector");
      detail::reject_unknown_keys(dd,
                                  {"q_grid", "fpr_budget", "k_override",
                                   "retune_gamma", "fixed_gamma",
                                   "percentile_universe"},
                                  "detector");
      read_opt(dd, "q_grid", c.detector.q_grid);
      read_opt(dd, "fpr_budget", c.detector.fpr_budget);
      if (dd.contains("k_override") && !dd.at("k_override").is_null()) {
        c.detector.k_override = dd.at("k_override").get<std::size_t>();
      }
      read_opt(dd, "retune_gamma", c.detector.retune_gamma);
      read_opt(dd, "fixed_gamma", c.detector.fixed_gamma);
      read_opt(dd, "percentile_universe", c.detector.percentile_universe);
    }
    if (j.contains("stats")) {
      const auto& s = j.at("stats");
      detail::reject_unknown_keys(s,
                                  {"resamples", "prior_scale", "budgets",
                                   "successful_only", "histogram_bin_width"},
                                  "stats");
      read_opt(s, "resamples", c.stats.resamples);
      read_opt(s, "prior_scale", c.stats.prior_scale);
      read_opt(s, "budgets", c.stats.budgets);
      read_opt(s, "successful_only", c.stats.successful_only);
      read_opt(s, "histogram_bin_width", c.stats.histogram_bin_width);
    }
    c.normalized = run_config_to_json(c, raw);
    c.data = {detail::resolve_path(base_dir, raw.train),
              detail::resolve_path(base_dir, raw.validation),
              detail::resolve_path(base_dir, raw.test),
              detail::resolve_path(base_dir, raw.embeddings),
              detail::resolve_path(base_dir, raw.synonyms),
              detail::resolve_path(base_dir, raw.stopwords)};
    c.output_dir = detail::resolve_path(base_dir, c.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  const nlohmann::json j = read_json(path);
  return run_config_from_json(j, fs::path(path).parent_path());
}

// Checks every knob and that each required input file exists.
inline void validate_run_config(const RunConfig& c) {
  const std::pair<const char*, const std::string*> required[] = {
      {"train", &c.data.train},           {"validation", &c.data.validation},
      {"test", &c.data.test},             {"embeddings", &c.data.embeddings},
      {"synonyms", &c.data.synonyms}};
  for (const auto& [name, path] : required) {
    if (path->empty()) {
      throw DataError(std::string("config: data.") + name + " is required");
    }
    if (!fs::exists(*path)) {
      throw DataError(std::string("config: data.") + name +
                      " does not exist: " + *path);
    }
  }
  if (!c.data.stopwords.empty() && !fs::exists(c.data.stopwords)) {
    throw DataError("config: data.stopwords does not exist: " + c.data.stopwords);
  }
  try {
    c.attacks.base.validate();
  } catch (const UsageError& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  if (c.attacks.kinds.empty()) throw DataError("config: no attacks selected");
  if (c.detector.q_grid.empty()) throw DataError("config: empty q_grid");
  for (int q : c.detector.q_grid) {
    if (q < 0 || q > 100) throw DataError("config: q_grid values must be in [0, 100]");
  }
  if (!(c.detector.fpr_budget > 0.0 && c.detector.fpr_budget < 1.0)) {
    throw DataError("config: fpr_budget must be in (0, 1)");
  }
  if (c.detector.percentile_universe != "all" &&
      c.detector.percentile_universe != "non-stopword") {
    throw DataError("config: percentile_universe must be all or non-stopword");
  }
  if (c.stats.resamples == 0) throw DataError("config: resamples must be >= 1");
  if (!(c.stats.prior_scale > 0.0)) throw DataError("config: prior_scale must be > 0");
  if (!std::is_sorted(c.stats.budgets.begin(), c.stats.budgets.end())) {
    throw DataError("config: stats.budgets must be sorted ascending");
  }
  if (c.model.family != "naive-bayes" && c.model.family != "logreg-bow") {
    throw DataError("config: unknown model family '" + c.model.family + "'");
  }
}

// Loaded inputs shared by the stages.
struct Workspace {
  Corpus train;
  Corpus validation;
  Corpus test;
  FrequencyTable table;
  Lexicons lexicons;
  std::set<std::string> stopwords;
  std::unique_ptr<KneserNeyTrigram> lm;
  std::unique_ptr<Model> model;
  std::size_t k = 1;

  AttackResources resources(DistanceMetric metric) const {
    AttackResources r;
    r.model = model.get();
    r.synonyms = &lexicons.synonyms;
    r.embeddings = &lexicons.embeddings;
    r.lm = lm.get();
    r.table = &table;
    r.metric = metric;
    return r;
  }
};

inline Workspace load_workspace(const RunConfig& c) {
  Workspace w;
  w.train = load_corpus(c.data.train, Split::kTrain, c.num_classes);
  const int classes = w.train.num_classes;
  w.validation = load_corpus(c.data.validation, Split::kValidation, classes);
  w.test = load_corpus(c.data.test, Split::kTest, classes);
  w.table = build_frequency_table(w.train);
  w.lexicons.synonyms = load_synonyms(c.data.synonyms);
  w.lexicons.embeddings = load_embeddings(c.data.embeddings);
  w.lexicons.metric = c.metric;
  if (!c.data.stopwords.empty()) w.stopwords = load_stopwords(c.data.stopwords);
  w.k = c.detector.k_override
            ? *c.detector.k_override
            : mean_synonym_count(w.lexicons.synonyms, w.train);
  return w;
}

inline AttackConfig attack_config_for(const RunConfig& c, const Workspace& w,
                                      AttackKind kind) {
  AttackConfig a = c.attacks.base;
  a.kind = kind;
  a.seed = c.seed;
  a.stopwords = w.stopwords;
  return a;
}

inline std::function<bool(const std::string&)> percentile_universe(
    const RunConfig& c, const Workspace& w) {
  if (c.detector.percentile_universe == "non-stopword") {
    const auto* stop = &w.stopwords;
    return [stop](const std::string& word) { return stop->count(word) == 0; };
  }
  return {};
}

struct ArtifactEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string config_hash;
  std::vector<ArtifactEntry> artifacts;
  std::vector<std::pair<std::string, double>> timings;
  std::string failed_stage;
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json arts = nlohmann::json::array();
  for (const auto& a : m.artifacts) {
    arts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  }
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& [stage, seconds] : m.timings) {
    timings.push_back({{"stage", stage}, {"seconds", seconds}});
  }
  nlohmann::json j{{"config_hash", m.config_hash},
                   {"artifacts", arts},
                   {"timings", timings}};
  j["failed_stage"] =
      m.failed_stage.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.failed_stage);
  return j;
}

inline std::string config_hash(const RunConfig& c) {
  return sha256_hex(c.normalized.dump());
}

// Writes `contents` under `dir` and records its hash.
inline void write_artifact(const std::string& dir, const std::string& name,
                           const std::string& contents, RunManifest* manifest) {
  write_file((fs::path(dir) / name).string(), contents);
  if (manifest) {
    manifest->artifacts.push_back({name, sha256_hex(contents), contents.size()});
  }
}

inline void apply_gamma(std::vector<DetectionResult>& results, double gamma) {
  for (auto& r : results) r.flagged = r.score > gamma;
}

inline std::vector<Sequence> successful_adversarial(
    const std::vector<AttackResult>& results) {
  std::vector<Sequence> out;
  for (const auto& r : results) {
    if (r.status == AttackStatus::kAttacked && r.success) {
      out.push_back(r.perturbed);
    }
  }
  return out;
}

inline std::string campaign_file(AttackKind k) {
  return "campaign_" + attack_name(k) + ".jsonl";
}

inline std::string detection_file(DetectionMethod m, const std::string& what) {
  return "detect_" + method_name(m) + "_" + what + ".jsonl";
}

struct Report {
  std::vector<FreqStatsRow> frequency;
  std::vector<DetectionRow> detection;
  std::vector<SweepSeries> sweep;
  double clean_accuracy = 0.0;
  double transformed_accuracy = 0.0;
  double unperturbed_delta = 0.0;
  nlohmann::json json;
};

namespace detail {

inline double label_accuracy(const std::vector<DetectionResult>& d,
                             bool restored) {
  if (d.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t ok = 0;
  for (const auto& r : d) {
    ok += (restored ? r.restored_label : r.predicted_label) == r.label;
  }
  return 100.0 * static_cast<double>(ok) / static_cast<double>(d.size());
}

}  // namespace detail

// Accuracy change (percentage points) caused by the FGWS transform on clean
// data, recomputed from persisted clean-test detections.
inline double unperturbed_effect(const std::vector<DetectionResult>& clean) {
  return detail::label_accuracy(clean, true) - detail::label_accuracy(clean, false);
}

// Accuracy change (percentage points) after transforming every test
// sequence with FGWS.
inline double unperturbed_effect(const Model& model, const Corpus& test,
                                 const DetectorConfig& config,
                                 const FrequencyTable& table,
                                 const Lexicons& lexicons, int threads = 1) {
  return unperturbed_effect(detect_all(model, test.sequences,
                                       DetectionMethod::kFgws, config, table,
                                       lexicons, threads));
}

// Recomputes every report number from the artifacts in `dir` and writes the
// CSV/SVG/JSON report files there.
inline Report build_report(const std::string& dir, const RunConfig& c,
                           RunManifest* manifest = nullptr) {
  auto path = [&](const std::string& name) {
    return (fs::path(dir) / name).string();
  };
  Report rep;
  const TuningResult tuning = tuning_from_json(read_json(path("tuning.json")));
  const nlohmann::json tuning_json = read_json(path("tuning.json"));

  std::map<DetectionMethod, std::vector<DetectionResult>> clean_test;
  for (auto m : {DetectionMethod::kFgws, DetectionMethod::kNws}) {
    clean_test[m] = read_detections(path(detection_file(m, "clean_test")));
  }
  const auto clean_val_fgws = read_detections(
      path(detection_file(DetectionMethod::kFgws, "clean_validation")));
  const auto clean_val_scores = detection_scores(clean_val_fgws);

  nlohmann::json freq_json = nlohmann::json::array();
  nlohmann::json det_json = nlohmann::json::array();
  nlohmann::json sweep_json = nlohmann::json::array();
  nlohmann::json hist_json = nlohmann::json::array();
  std::size_t idempotency_violations = 0, fgws_substitutions = 0;

  for (AttackKind kind : c.attacks.kinds) {
    const std::string name = attack_name(kind);
    AttackCampaign campaign;
    campaign.kind = kind;
    campaign.results = read_attack_results(path(campaign_file(kind)));
    summarize_campaign(campaign);

    const FrequencySamples samples =
        frequency_samples(campaign.results, c.stats.successful_only);
    if (samples.replaced.size() >= 2) {
      rep.frequency.push_back(frequency_analysis(
          campaign.results, name, c.stats.successful_only, c.stats.prior_scale));
      freq_json.push_back(to_json(rep.frequency.back()));
    }
    const auto bins = frequency_histogram(samples.replaced, samples.substituted,
                                          c.stats.histogram_bin_width);
    write_artifact(dir, "histogram_" + name + ".csv", histogram_csv(bins),
                   manifest);
    write_artifact(dir, "histogram_" + name + ".svg",
                   histogram_svg(bins, name + ": replaced vs substituted"),
                   manifest);
    hist_json.push_back({{"attack", name},
                         {"csv", "histogram_" + name + ".csv"},
                         {"svg", "histogram_" + name + ".svg"}});

    for (auto m : {DetectionMethod::kFgws, DetectionMethod::kNws}) {
      const auto adv = read_detections(path(detection_file(m, name)));
      DetectionRow row{name, method_name(m), {}};
      if (!adv.empty()) {
        row.metrics = bootstrap_eval(flags_of(adv), flags_of(clean_test[m]),
                                     c.stats.resamples, c.seed, c.threads);
      } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.metrics.tpr = row.metrics.fpr = nan;
        row.metrics.precision = row.metrics.f1 = nan;
      }
      row.metrics.restored_accuracy = restored_accuracy(adv);
      row.metrics.after_attack_accuracy = 100.0 * campaign.after_attack_accuracy;
      nlohmann::json dj = to_json(row.metrics);
      dj["attack"] = name;
      dj["method"] = method_name(m);
      dj["successful_adversarial"] = adv.size();
      det_json.push_back(dj);
      rep.detection.push_back(row);

      if (m == DetectionMethod::kFgws) {
        for (const auto& d : adv) {
          for (const auto& s : d.substitutions) {
            ++fgws_substitutions;
            if (std::log(static_cast<double>(s.substituted_count)) <
                tuning.best_delta) {
              ++idempotency_violations;
            }
          }
        }
        if (!adv.empty()) {
          SweepSeries series{name, fpr_sweep(clean_val_scores,
                                             detection_scores(adv),
                                             c.stats.budgets)};
          for (const auto& p : series.points) {
            sweep_json.push_back({{"attack", name},
                                  {"budget", p.budget},
                                  {"gamma", p.gamma},
                                  {"tpr", p.tpr}});
          }
          rep.sweep.push_back(std::move(series));
        }
      }
    }
  }
  const auto& clean_fgws = clean_test[DetectionMethod::kFgws];
  rep.clean_accuracy = detail::label_accuracy(clean_fgws, false);
  rep.transformed_accuracy = detail::label_accuracy(clean_fgws, true);
  rep.unperturbed_delta = unperturbed_effect(clean_fgws);

  write_artifact(dir, "freq_stats.csv", freq_stats_csv(rep.frequency), manifest);
  write_artifact(dir, "detection.csv", detection_csv(rep.detection), manifest);
  write_artifact(dir, "sweep.csv", sweep_csv(rep.sweep), manifest);
  write_artifact(dir, "sweep.svg", sweep_svg(rep.sweep), manifest);

  rep.json = {
      {"schema", "fgws.report/1"},
      {"tpr_averaging", "fixed adversarial set (not resampled)"},
      {"bootstrap", {{"resamples", c.stats.resamples}, {"seed", c.seed}}},
      {"tuning",
       {{"q", tuning.best_q},
        {"delta", tuning.best_delta},
        {"gamma", tuning.best_gamma},
        {"nws_gamma", tuning_json.value("nws_gamma", 0.0)},
        {"k", tuning.k}}},
      {"frequency", freq_json},
      {"detection", det_json},
      {"sweep", sweep_json},
      {"histograms", hist_json},
      {"unperturbed",
       {{"clean_accuracy", number_or_null(rep.clean_accuracy)},
        {"transformed_accuracy", number_or_null(rep.transformed_accuracy)},
        {"delta", number_or_null(rep.unperturbed_delta)}}},
      {"idempotency",
       {{"substitutions", fgws_substitutions},
        {"below_delta", idempotency_violations}}}};
  write_artifact(dir, "report.json", rep.json.dump(2) + "\n", manifest);
  return rep;
}

namespace detail {

template <typename Fn>
void run_stage(const std::string& name, RunManifest& manifest,
               const std::string& dir, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  auto fail = [&](const std::string& what, bool data) {
    manifest.failed_stage = name;
    write_file((fs::path(dir) / "manifest.json").string(),
               to_json(manifest).dump(2) + "\n");
    return StageError(name, what, data);
  };
  try {
    fn();
  } catch (const StageError&) {
    throw;
  } catch (const DataError& e) {
    throw fail(e.what(), true);
  } catch (const std::exception& e) {
    throw fail(e.what(), false);
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  manifest.timings.emplace_back(name, dt.count());
}

}  // namespace detail

// Progress callback; receives one line per completed step.
using ProgressFn = std::function<void(const std::string&)>;

inline RunManifest run_all(const RunConfig& c, const ProgressFn& progress = {}) {
  validate_run_config(c);
  auto log = [&](const std::string& msg) {
    if (progress) progress(msg);
  };
  const std::string dir = c.output_dir;
  fs::create_directories(dir);
  RunManifest manifest;
  manifest.config_hash = config_hash(c);
  Workspace w;
  const int threads = c.threads;

  detail::run_stage("load", manifest, dir, [&] {
    w = load_workspace(c);
    log("loaded " + std::to_string(w.train.size()) + " train, " +
        std::to_string(w.validation.size()) + " validation, " +
        std::to_string(w.test.size()) + " test sequences");
  });
  detail::run_stage("train", manifest, dir, [&] {
    TrainOptions opts = c.model;
    opts.seed = c.seed;
    w.model = train(w.train, opts);
    write_artifact(dir, "model.json", model_to_json(*w.model).dump() + "\n",
                   &manifest);
    log("trained " + w.model->family() + ", test accuracy " +
        fixed(100.0 * accuracy(*w.model, w.test), 2) + "%");
  });

  const std::vector<Sequence> subset =
      sample_subset(w.test, c.attacks.test_subset, c.seed);
  std::map<AttackKind, std::vector<AttackResult>> campaigns;
  for (AttackKind kind : c.attacks.kinds) {
    detail::run_stage("attack:" + attack_name(kind), manifest, dir, [&] {
      if (kind == AttackKind::kGenetic && !w.lm) {
        w.lm = std::make_unique<KneserNeyTrigram>(w.train);
      }
      const AttackCampaign campaign = run_campaign(
          w.resources(c.metric), subset, attack_config_for(c, w, kind), threads);
      write_artifact(dir, campaign_file(kind), to_jsonl(campaign.results),
                     &manifest);
      write_artifact(dir, "campaign_" + attack_name(kind) + "_summary.json",
                     campaign_summary_json(campaign).dump(2) + "\n", &manifest);
      campaigns[kind] = campaign.results;
      log(attack_name(kind) + ": after-attack accuracy " +
          fixed(100.0 * campaign.after_attack_accuracy, 2) + "% (" +
          std::to_string(campaign.successful) + " successful)");
    });
  }

  TuningResult tuning;
  double nws_gamma = 0.0;
  detail::run_stage("tune", manifest, dir, [&] {
    const AttackCampaign val = run_campaign(
        w.resources(c.metric), w.validation.sequences,
        attack_config_for(c, w, AttackKind::kPrioritized), threads);
    write_artifact(dir, "campaign_validation_prioritized.jsonl",
                   to_jsonl(val.results), &manifest);
    TuningOptions opts;
    opts.q_grid = c.detector.q_grid;
    opts.fpr_budget = c.detector.fpr_budget;
    opts.retune_gamma = c.detector.retune_gamma;
    opts.fixed_gamma = c.detector.fixed_gamma;
    opts.eligible = percentile_universe(c, w);
    tuning = tune_delta_on(*w.model, w.validation.sequences,
                           successful_adversarial(val.results), w.table,
                           w.lexicons, w.k, opts, threads);
    DetectorConfig nws_cfg;
    nws_cfg.k = w.k;
    nws_cfg.seed = c.seed;
    const auto nws_val =
        detect_all(*w.model, w.validation.sequences, DetectionMethod::kNws,
                   nws_cfg, w.table, w.lexicons, threads);
    nws_gamma = threshold_for_budget(detection_scores(nws_val),
                                     c.detector.fpr_budget);
    nlohmann::json tj = to_json(tuning);
    tj["nws_gamma"] = nws_gamma;
    tj["fpr_budget"] = c.detector.fpr_budget;
    write_artifact(dir, "tuning.json", tj.dump(2) + "\n", &manifest);
    log("tuned q=" + std::to_string(tuning.best_q) + " delta=" +
        fixed(tuning.best_delta) + " gamma=" + fixed(tuning.best_gamma) +
        " K=" + std::to_string(w.k));
  });

  detail::run_stage("detect", manifest, dir, [&] {
    DetectorConfig fgws_cfg;
    fgws_cfg.delta = {tuning.best_delta, tuning.best_q};
    fgws_cfg.gamma = tuning.best_gamma;
    fgws_cfg.k = w.k;
    fgws_cfg.seed = c.seed;
    DetectorConfig nws_cfg = fgws_cfg;
    nws_cfg.gamma = nws_gamma;
    for (auto m : {DetectionMethod::kFgws, DetectionMethod::kNws}) {
      const DetectorConfig& cfg = m == DetectionMethod::kFgws ? fgws_cfg : nws_cfg;
      auto run = [&](const std::vector<Sequence>& seqs, const std::string& what) {
        write_artifact(dir, detection_file(m, what),
                       to_jsonl(detect_all(*w.model, seqs, m, cfg, w.table,
                                           w.lexicons, threads)),
                       &manifest);
      };
      run(subset, "clean_test");
      run(w.validation.sequences, "clean_validation");
      for (AttackKind kind : c.attacks.kinds) {
        run(successful_adversarial(campaigns[kind]), attack_name(kind));
      }
    }
    log("detection complete");
  });

  detail::run_stage("report", manifest, dir, [&] {
    const Report rep = build_report(dir, c, &manifest);
    log("report written; unperturbed accuracy delta " +
        fixed(rep.unperturbed_delta, 2) + " points");
  });
  write_file((fs::path(dir) / "manifest.json").string(),
             to_json(manifest).dump(2) + "\n");
  return manifest;
}

}  // namespace fgws

#endif  // FGWS_PIPELINE_HPP_
