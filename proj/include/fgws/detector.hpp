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

// FGWS detection and restoration, the NWS baseline, and delta/gamma tuning.

#ifndef FGWS_DETECTOR_HPP_
#define FGWS_DETECTOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fgws/attacks.hpp"
#include "fgws/classifier.hpp"
#include "fgws/corpus.hpp"
#include "fgws/error.hpp"
#include "fgws/lexicon.hpp"
#include "fgws/util.hpp"

namespace fgws {

enum class DetectionMethod { kFgws, kNws };

inline std::string method_name(DetectionMethod m) {
  return m == DetectionMethod::kFgws ? "fgws" : "nws";
}

inline DetectionMethod parse_method(const std::string& name) {
  if (name == "fgws") return DetectionMethod::kFgws;
  if (name == "nws") return DetectionMethod::kNws;
  throw UsageError("unknown method '" + name + "' (expected fgws or nws)");
}

struct DetectorConfig {
  FrequencyThreshold delta;
  double gamma = 0.0;
  std::size_t k = 1;
  double fpr_budget = 0.10;
  // Seed for the NWS random choices.
  std::uint64_t seed = 0;

  void validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      throw UsageError("gamma must be in [0, 1]");
    }
    if (!(fpr_budget > 0.0 && fpr_budget < 1.0)) {
      throw UsageError("fpr_budget must be in (0, 1)");
    }
  }
};

struct Transformed {
  std::vector<std::string> tokens;
  std::vector<int> eligible_positions;
  std::vector<Substitution> substitutions;
};

// X_E = {i : phi(x_i) < delta}; each eligible x_i becomes the most frequent
// w in S(x_i) (lexicographically smallest on ties) when phi(w) > phi(x_i).
inline Transformed fgws_transform(const std::vector<std::string>& tokens,
                                  const FrequencyTable& table,
                                  const Lexicons& lexicons, std::size_t k,
                                  double delta) {
  Transformed out{tokens, {}, {}};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& x = tokens[i];
    const double phi_x = table.phi(x);
    if (!(phi_x < delta)) continue;
    out.eligible_positions.push_back(static_cast<int>(i));
    const CandidateSet set = candidate_set(x, lexicons, k);
    const std::string* best = nullptr;
    double best_phi = -1.0;
    for (const auto& w : set.candidates) {
      const double phi_w = table.phi(w);
      if (phi_w > best_phi || (phi_w == best_phi && w < *best)) {
        best_phi = phi_w;
        best = &w;
      }
    }
    if (best && best_phi > phi_x) {
      out.tokens[i] = *best;
      out.substitutions.push_back({static_cast<int>(i), x, *best,
                                   table.count(x), table.count(*best)});
    }
  }
  return out;
}

// Each OOV token is replaced by a uniformly chosen in-vocabulary member of
// S(x); OOV tokens without one are left alone.
inline Transformed nws_transform(const std::vector<std::string>& tokens,
                                 const FrequencyTable& table,
                                 const Lexicons& lexicons, std::size_t k,
                                 Rng& rng) {
  Transformed out{tokens, {}, {}};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& x = tokens[i];
    if (table.contains(x)) continue;
    out.eligible_positions.push_back(static_cast<int>(i));
    std::vector<std::string> pool;
    for (auto& w : candidate_set(x, lexicons, k).candidates) {
      if (table.contains(w)) pool.push_back(std::move(w));
    }
    if (pool.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::string& w = pool[pick(rng)];
    out.tokens[i] = w;
    out.substitutions.push_back({static_cast<int>(i), x, w, 0, table.count(w)});
  }
  return out;
}

struct DetectionResult {
  DetectionMethod method = DetectionMethod::kFgws;
  int id = 0;
  // Ground-truth label of the source sequence.
  int label = 0;
  std::vector<std::string> input;
  std::vector<std::string> transformed;
  std::vector<int> eligible_positions;
  std::vector<Substitution> substitutions;
  int predicted_label = 0;
  double confidence_before = 0.0;
  double confidence_after = 0.0;
  double score = 0.0;
  bool flagged = false;
  int restored_label = 0;
};

// Scores X against its transform X': f(X)_y - f(X')_y with y = f*(X).
inline DetectionResult detect(const Model& model, const Sequence& seq,
                              DetectionMethod method,
                              const DetectorConfig& config,
                              const FrequencyTable& table,
                              const Lexicons& lexicons) {
  if (seq.tokens.empty()) throw UsageError("cannot detect on an empty sequence");
  DetectionResult r;
  r.method = method;
  r.id = seq.id;
  r.label = seq.label;
  r.input = seq.tokens;
  Transformed t;
  if (method == DetectionMethod::kFgws) {
    t = fgws_transform(seq.tokens, table, lexicons, config.k,
                       config.delta.delta);
  } else {
    Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(seq.id));
    t = nws_transform(seq.tokens, table, lexicons, config.k, rng);
  }
  r.transformed = std::move(t.tokens);
  r.eligible_positions = std::move(t.eligible_positions);
  r.substitutions = std::move(t.substitutions);
  const Prediction before = model.predict(r.input);
  r.predicted_label = before.label;
  r.confidence_before = before.probabilities[before.label];
  const Prediction after = model.predict(r.transformed);
  r.confidence_after = after.probabilities[before.label];
  r.score = r.confidence_before - r.confidence_after;
  r.flagged = r.score > config.gamma;
  r.restored_label = after.label;
  return r;
}

inline DetectionResult fgws_detect(const Model& model, const Sequence& seq,
                                   const DetectorConfig& config,
                                   const FrequencyTable& table,
                                   const Lexicons& lexicons) {
  return detect(model, seq, DetectionMethod::kFgws, config, table, lexicons);
}

inline std::vector<DetectionResult> detect_all(
    const Model& model, const std::vector<Sequence>& sequences,
    DetectionMethod method, const DetectorConfig& config,
    const FrequencyTable& table, const Lexicons& lexicons, int threads = 1) {
  std::vector<DetectionResult> out(sequences.size());
  parallel_for(sequences.size(), threads, [&](std::size_t i) {
    out[i] = detect(model, sequences[i], method, config, table, lexicons);
  });
  return out;
}

// Smallest candidate threshold g with #{s > g} <= floor(budget * n); the
// candidates are the scores themselves and one value just below the minimum.
inline double gamma_for_budget(std::vector<double> scores, double budget) {
  if (scores.empty()) throw UsageError("no scores to derive gamma from");
  if (!(budget >= 0.0)) throw UsageError("fpr budget must be >= 0");
  std::sort(scores.begin(), scores.end());
  const std::size_t n = scores.size();
  const auto allowed = static_cast<std::size_t>(
      std::floor(budget * static_cast<double>(n) + 1e-9));
  if (allowed >= n) {
    return std::nextafter(scores.front(), -std::numeric_limits<double>::infinity());
  }
  // Scores strictly above scores[j] are those past its last duplicate.
  for (std::size_t j = 0; j < n; ++j) {
    if (j + 1 < n && scores[j + 1] == scores[j]) continue;
    if (n - (j + 1) <= allowed) return scores[j];
  }
  return scores.back();
}

// Threshold for a budget in the sweep sense: the quantile rule, clamped into
// [0, 1] unless the budget admits every clean sequence.
inline double threshold_for_budget(const std::vector<double>& scores,
                                   double budget) {
  const double g = gamma_for_budget(scores, budget);
  if (budget >= 1.0) return g;
  return std::clamp(g, 0.0, 1.0);
}

inline std::vector<double> detection_scores(
    const std::vector<DetectionResult>& results) {
  std::vector<double> s;
  s.reserve(results.size());
  for (const auto& r : results) s.push_back(r.score);
  return s;
}

inline double tune_gamma(const Model& model,
                         const std::vector<Sequence>& clean_validation,
                         const FrequencyThreshold& delta,
                         const FrequencyTable& table, const Lexicons& lexicons,
                         std::size_t k, double fpr_budget, int threads = 1) {
  if (!(fpr_budget > 0.0 && fpr_budget < 1.0)) {
    throw UsageError("fpr_budget must be in (0, 1)");
  }
  DetectorConfig cfg;
  cfg.delta = delta;
  cfg.k = k;
  const auto results = detect_all(model, clean_validation,
                                  DetectionMethod::kFgws, cfg, table, lexicons,
                                  threads);
  return threshold_for_budget(detection_scores(results), fpr_budget);
}

struct TuningRow {
  int q = 0;
  double delta = 0.0;
  double gamma = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double f1 = 0.0;
};

struct TuningResult {
  std::vector<TuningRow> rows;
  int best_q = 0;
  double best_delta = 0.0;
  double best_gamma = 0.0;
  std::size_t k = 0;
  std::size_t adversarial_count = 0;
  std::size_t clean_count = 0;
  bool gamma_retuned = true;
};

struct TuningOptions {
  std::vector<int> q_grid = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  double fpr_budget = 0.10;
  // When false, `fixed_gamma` is used at every q.
  bool retune_gamma = true;
  double fixed_gamma = 0.0;
  // Vocabulary types eligible for the percentile (all when empty).
  std::function<bool(const std::string&)> eligible;
};

// F1 at class balance: precision = TPR / (TPR + FPR).
inline double balanced_f1(double tpr, double fpr) {
  if (tpr + fpr <= 0.0) return 0.0;
  const double precision = tpr / (tpr + fpr);
  if (precision + tpr <= 0.0) return 0.0;
  return 2.0 * precision * tpr / (precision + tpr);
}

// Highest F1; the smallest q wins ties.
inline std::size_t select_best_row(const std::vector<TuningRow>& rows) {
  if (rows.empty()) throw UsageError("empty tuning grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].f1 > rows[best].f1 ||
        (rows[i].f1 == rows[best].f1 && rows[i].q < rows[best].q)) {
      best = i;
    }
  }
  return best;
}

// Grid search over the percentile q given precomputed clean and adversarial
// validation sequences.
inline TuningResult tune_delta_on(const Model& model,
                                  const std::vector<Sequence>& clean,
                                  const std::vector<Sequence>& adversarial,
                                  const FrequencyTable& table,
                                  const Lexicons& lexicons, std::size_t k,
                                  const TuningOptions& options,
                                  int threads = 1) {
  if (clean.empty()) throw DataError("validation corpus is empty");
  if (adversarial.empty()) {
    throw DataError(
        "the Prioritized attack produced no successful adversarial examples on "
        "the validation set; use a weaker model or a larger validation set");
  }
  if (options.q_grid.empty()) throw UsageError("empty q grid");
  if (!(options.fpr_budget > 0.0 && options.fpr_budget < 1.0)) {
    throw UsageError("fpr_budget must be in (0, 1)");
  }
  std::vector<int> grid = options.q_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  TuningResult result;
  result.k = k;
  result.adversarial_count = adversarial.size();
  result.clean_count = clean.size();
  result.gamma_retuned = options.retune_gamma;
  result.rows.resize(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    TuningRow& row = result.rows[gi];
    row.q = grid[gi];
    DetectorConfig cfg;
    cfg.delta = percentile_threshold(table, row.q, options.eligible);
    cfg.k = k;
    row.delta = cfg.delta.delta;
    const auto clean_res = detect_all(model, clean, DetectionMethod::kFgws,
                                      cfg, table, lexicons, threads);
    const auto adv_res = detect_all(model, adversarial, DetectionMethod::kFgws,
                                    cfg, table, lexicons, threads);
    row.gamma = options.retune_gamma
                    ? threshold_for_budget(detection_scores(clean_res),
                                           options.fpr_budget)
                    : options.fixed_gamma;
    std::size_t fp = 0, tp = 0;
    for (const auto& r : clean_res) fp += r.score > row.gamma;
    for (const auto& r : adv_res) tp += r.score > row.gamma;
    row.tpr = static_cast<double>(tp) / static_cast<double>(adv_res.size());
    row.fpr = static_cast<double>(fp) / static_cast<double>(clean_res.size());
    row.f1 = balanced_f1(row.tpr, row.fpr);
  }
  const auto& best = result.rows[select_best_row(result.rows)];
  result.best_q = best.q;
  result.best_delta = best.delta;
  result.best_gamma = best.gamma;
  return result;
}

// Runs Prioritized once over the validation corpus, then searches q.
inline TuningResult tune_delta(const AttackResources& resources,
                               const Corpus& validation,
                               const AttackConfig& attack_config,
                               const Lexicons& lexicons, std::size_t k,
                               const TuningOptions& options, int threads = 1) {
  if (validation.empty()) throw DataError("validation corpus is empty");
  AttackConfig cfg = attack_config;
  cfg.kind = AttackKind::kPrioritized;
  const AttackCampaign campaign =
      run_campaign(resources, validation.sequences, cfg, threads);
  std::vector<Sequence> adversarial;
  for (const auto& r : campaign.results) {
    if (r.success) adversarial.push_back(r.perturbed);
  }
  return tune_delta_on(*resources.model, validation.sequences, adversarial,
                       *resources.table, lexicons, k, options, threads);
}

}  // namespace fgws

#endif  // FGWS_DETECTOR_HPP_
