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

// JSON and JSON-lines encodings of attack, detection and tuning results.

#ifndef FGWS_JSON_IO_HPP_
#define FGWS_JSON_IO_HPP_

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fgws/attacks.hpp"
#include "fgws/detector.hpp"
#include "fgws/error.hpp"
#include "fgws/stats.hpp"

namespace fgws {

using nlohmann::json;

inline json to_json(const Substitution& s) {
  return json{{"position", s.position},
              {"replaced", s.replaced},
              {"substituted", s.substituted},
              {"replaced_count", s.replaced_count},
              {"substituted_count", s.substituted_count}};
}

inline Substitution substitution_from_json(const json& j) {
  Substitution s;
  s.position = j.at("position").get<int>();
  s.replaced = j.at("replaced").get<std::string>();
  s.substituted = j.at("substituted").get<std::string>();
  s.replaced_count = j.at("replaced_count").get<std::int64_t>();
  s.substituted_count = j.at("substituted_count").get<std::int64_t>();
  return s;
}

inline json substitutions_json(const std::vector<Substitution>& subs) {
  json arr = json::array();
  for (const auto& s : subs) arr.push_back(to_json(s));
  return arr;
}

inline std::vector<Substitution> substitutions_from_json(const json& j) {
  std::vector<Substitution> out;
  for (const auto& s : j) out.push_back(substitution_from_json(s));
  return out;
}

inline json to_json(const AttackResult& r) {
  return json{{"attack", attack_name(r.kind)},
              {"id", r.original.id},
              {"label", r.original.label},
              {"original", r.original.tokens},
              {"perturbed", r.perturbed.tokens},
              {"substitutions", substitutions_json(r.substitutions)},
              {"status", status_name(r.status)},
              {"success", r.success},
              {"confidence_before", r.confidence_before},
              {"confidence_after", r.confidence_after},
              {"queries", r.queries},
              {"generations", r.generations},
              {"crossovers", r.crossovers}};
}

inline AttackResult attack_result_from_json(const json& j) {
  AttackResult r;
  r.kind = parse_attack_kind(j.at("attack").get<std::string>());
  r.original.id = j.at("id").get<int>();
  r.original.label = j.at("label").get<int>();
  r.original.tokens = j.at("original").get<std::vector<std::string>>();
  r.perturbed.id = r.original.id;
  r.perturbed.label = r.original.label;
  r.perturbed.tokens = j.at("perturbed").get<std::vector<std::string>>();
  r.substitutions = substitutions_from_json(j.at("substitutions"));
  r.status = parse_status(j.at("status").get<std::string>());
  r.success = j.at("success").get<bool>();
  r.confidence_before = j.at("confidence_before").get<double>();
  r.confidence_after = j.at("confidence_after").get<double>();
  r.queries = j.at("queries").get<std::int64_t>();
  r.generations = j.at("generations").get<int>();
  r.crossovers = j.at("crossovers").get<int>();
  return r;
}

inline json to_json(const DetectionResult& d) {
  return json{{"method", method_name(d.method)},
              {"id", d.id},
              {"label", d.label},
              {"input", d.input},
              {"transformed", d.transformed},
              {"eligible_positions", d.eligible_positions},
              {"substitutions", substitutions_json(d.substitutions)},
              {"predicted_label", d.predicted_label},
              {"confidence_before", d.confidence_before},
              {"confidence_after", d.confidence_after},
              {"score", d.score},
              {"flagged", d.flagged},
              {"restored_label", d.restored_label}};
}

inline DetectionResult detection_from_json(const json& j) {
  DetectionResult d;
  d.method = parse_method(j.at("method").get<std::string>());
  d.id = j.at("id").get<int>();
  d.label = j.at("label").get<int>();
  d.input = j.at("input").get<std::vector<std::string>>();
  d.transformed = j.at("transformed").get<std::vector<std::string>>();
  d.eligible_positions = j.at("eligible_positions").get<std::vector<int>>();
  d.substitutions = substitutions_from_json(j.at("substitutions"));
  d.predicted_label = j.at("predicted_label").get<int>();
  d.confidence_before = j.at("confidence_before").get<double>();
  d.confidence_after = j.at("confidence_after").get<double>();
  d.score = j.at("score").get<double>();
  d.flagged = j.at("flagged").get<bool>();
  d.restored_label = j.at("restored_label").get<int>();
  return d;
}

inline json campaign_summary_json(const AttackCampaign& c) {
  return json{{"attack", attack_name(c.kind)},
              {"sequences", c.results.size()},
              {"attacked", c.attacked},
              {"successful", c.successful},
              {"skipped", c.skipped},
              {"clean_accuracy", 100.0 * c.clean_accuracy},
              {"after_attack_accuracy", 100.0 * c.after_attack_accuracy},
              {"total_queries", c.total_queries}};
}

inline json to_json(const TuningResult& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back(json{{"q", r.q},
                        {"delta", r.delta},
                        {"gamma", r.gamma},
                        {"tpr", r.tpr},
                        {"fpr", r.fpr},
                        {"f1", r.f1}});
  }
  return json{{"grid", rows},
              {"best_q", t.best_q},
              {"best_delta", t.best_delta},
              {"best_gamma", t.best_gamma},
              {"k", t.k},
              {"adversarial_count", t.adversarial_count},
              {"clean_count", t.clean_count},
              {"gamma_retuned", t.gamma_retuned}};
}

inline TuningResult tuning_from_json(const json& j) {
  TuningResult t;
  for (const auto& r : j.at("grid")) {
    t.rows.push_back({r.at("q").get<int>(), r.at("delta").get<double>(),
                      r.at("gamma").get<double>(), r.at("tpr").get<double>(),
                      r.at("fpr").get<double>(), r.at("f1").get<double>()});
  }
  t.best_q = j.at("best_q").get<int>();
  t.best_delta = j.at("best_delta").get<double>();
  t.best_gamma = j.at("best_gamma").get<double>();
  t.k = j.at("k").get<std::size_t>();
  t.adversarial_count = j.at("adversarial_count").get<std::size_t>();
  t.clean_count = j.at("clean_count").get<std::size_t>();
  t.gamma_retuned = j.at("gamma_retuned").get<bool>();
  return t;
}

inline json bayes_json(const std::optional<BayesFactor>& bf) {
  if (!bf) return nullptr;
  return json{{"log10_bf10", bf->log10_bf10},
              {"t", bf->t},
              {"df", bf->df},
              {"effective_n", bf->effective_n},
              {"relative_error", bf->quadrature_error}};
}

inline json to_json(const SampleSummary& s) {
  json j{{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}};
  j["d"] = s.d ? json(*s.d) : json(nullptr);
  j["bf10"] = bayes_json(s.bf);
  return j;
}

inline json to_json(const FreqStatsRow& row) {
  return json{{"attack", row.attack},
              {"pairs", row.pairs},
              {"replaced", to_json(row.replaced)},
              {"substituted", to_json(row.substituted)},
              {"non_oov", to_json(row.non_oov)}};
}

// NaN becomes null.
inline json number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

inline json to_json(const DetectionMetrics& m) {
  return json{{"tpr", number_or_null(m.tpr)},
              {"fpr", number_or_null(m.fpr)},
              {"precision", number_or_null(m.precision)},
              {"f1", number_or_null(m.f1)},
              {"restored_accuracy", number_or_null(m.restored_accuracy)},
              {"after_attack_accuracy", number_or_null(m.after_attack_accuracy)}};
}

// One compact JSON document per line.
template <typename T>
std::string to_jsonl(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    out += to_json(item).dump();
    out += '\n';
  }
  return out;
}

inline std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return out;
}

inline std::vector<AttackResult> read_attack_results(const std::string& path) {
  std::vector<AttackResult> out;
  for (const auto& j : read_jsonl(path)) {
    try {
      out.push_back(attack_result_from_json(j));
    } catch (const json::exception& e) {
      throw DataError(path + ": malformed attack result: " + e.what());
    }
  }
  return out;
}

inline std::vector<DetectionResult> read_detections(const std::string& path) {
  std::vector<DetectionResult> out;
  for (const auto& j : read_jsonl(path)) {
    try {
      out.push_back(detection_from_json(j));
    } catch (const json::exception& e) {
      throw DataError(path + ": malformed detection: " + e.what());
    }
  }
  return out;
}

inline json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace fgws

#endif  // FGWS_JSON_IO_HPP_
