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

// Word-substitution attacks: Random, Prioritized, Genetic and PWWS, sharing
// the replacement cap, stopword and equifrequent constraints.

#ifndef FGWS_ATTACKS_HPP_
#define FGWS_ATTACKS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "fgws/classifier.hpp"
#include "fgws/corpus.hpp"
#include "fgws/error.hpp"
#include "fgws/language_model.hpp"
#include "fgws/lexicon.hpp"
#include "fgws/util.hpp"

namespace fgws {

enum class AttackKind { kRandom, kPrioritized, kGenetic, kPwws };

inline constexpr AttackKind kAllAttacks[] = {
    AttackKind::kRandom, AttackKind::kPrioritized, AttackKind::kGenetic,
    AttackKind::kPwws};

inline std::string attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kRandom:
      return "random";
    case AttackKind::kPrioritized:
      return "prioritized";
    case AttackKind::kGenetic:
      return "genetic";
    case AttackKind::kPwws:
      return "pwws";
  }
  return "unknown";
}

inline AttackKind parse_attack_kind(const std::string& name) {
  for (AttackKind k : kAllAttacks) {
    if (attack_name(k) == name) return k;
  }
  throw UsageError("unknown attack '" + name +
                   "' (expected random, prioritized, genetic or pwws)");
}

// Token reserved for "word removed" in saliency computations. It can never
// appear in a tokenized corpus because '<' is split off as punctuation.
inline const std::string kUnknownToken = "<unk>";

struct AttackConfig {
  AttackKind kind = AttackKind::kPwws;
  double max_replace_fraction = 0.20;
  std::set<std::string> stopwords;
  // Applies to Random, Prioritized and PWWS; Genetic always skips stopwords.
  bool restrict_stopwords = true;
  std::uint64_t seed = 0;
  // Genetic search.
  int population_size = 60;
  int num_generations = 20;
  double embedding_distance_bound = 0.5;
  int num_neighbors = 8;
  int lm_window = 5;
  int lm_top_k = 4;
  // Half-width of the allowed |phi(w) - phi(x)| band; disabled when empty.
  std::optional<double> equifrequent_band;

  void validate() const {
    if (!(max_replace_fraction > 0.0 && max_replace_fraction <= 1.0)) {
      throw UsageError("max_replace_fraction must be in (0, 1]");
    }
    if (population_size < 2) throw UsageError("population_size must be >= 2");
    if (num_generations < 1) throw UsageError("num_generations must be >= 1");
    if (num_neighbors < 1 || lm_top_k < 1 || lm_window < 0) {
      throw UsageError("invalid genetic neighbor/LM settings");
    }
    if (!(embedding_distance_bound > 0.0)) {
      throw UsageError("embedding_distance_bound must be positive");
    }
    if (equifrequent_band && !(*equifrequent_band >= 0.0)) {
      throw UsageError("equifrequent band must be >= 0");
    }
  }
};

struct Substitution {
  int position = 0;
  std::string replaced;
  std::string substituted;
  // Training-set counts of both words (0 for out-of-vocabulary).
  std::int64_t replaced_count = 0;
  std::int64_t substituted_count = 0;

  bool operator==(const Substitution&) const = default;
};

enum class AttackStatus {
  kAttacked,       // f*(X) = y; the attack ran
  kMisclassified,  // already wrong; not attacked
  kSkipped,        // excluded from evaluation (too short for the LM window)
};

inline std::string status_name(AttackStatus s) {
  switch (s) {
    case AttackStatus::kAttacked:
      return "attacked";
    case AttackStatus::kMisclassified:
      return "misclassified";
    case AttackStatus::kSkipped:
      return "skipped";
  }
  return "unknown";
}

inline AttackStatus parse_status(const std::string& s) {
  if (s == "attacked") return AttackStatus::kAttacked;
  if (s == "misclassified") return AttackStatus::kMisclassified;
  if (s == "skipped") return AttackStatus::kSkipped;
  throw DataError("unknown attack status '" + s + "'");
}

struct AttackResult {
  AttackKind kind = AttackKind::kRandom;
  Sequence original;
  Sequence perturbed;
  std::vector<Substitution> substitutions;
  AttackStatus status = AttackStatus::kAttacked;
  bool success = false;
  double confidence_before = 0.0;
  double confidence_after = 0.0;
  std::int64_t queries = 0;
  int generations = 0;
  int crossovers = 0;
};

// Everything an attack may consult. `lm` and `embeddings` are only needed by
// the genetic attack.
struct AttackResources {
  const Model* model = nullptr;
  const SynonymLexicon* synonyms = nullptr;
  const EmbeddingSpace* embeddings = nullptr;
  const KneserNeyTrigram* lm = nullptr;
  const FrequencyTable* table = nullptr;
  DistanceMetric metric = DistanceMetric::kEuclidean;
};

// Keeps candidates w with |phi(w) - phi(x)| <= band.
inline std::vector<std::string> equifrequent_filter(
    const std::vector<std::string>& candidates, const std::string& source,
    const FrequencyTable& table, double band) {
  if (!(band >= 0.0)) throw UsageError("equifrequent band must be >= 0");
  const double phi_x = table.phi(source);
  std::vector<std::string> kept;
  for (const auto& w : candidates) {
    if (std::fabs(table.phi(w) - phi_x) <= band) kept.push_back(w);
  }
  return kept;
}

// floor(fraction * n), at least 1.
inline std::size_t replacement_cap(std::size_t n, double fraction) {
  const auto cap =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  return std::max<std::size_t>(1, cap);
}

namespace detail {

// Model wrapper that counts queries for one attack invocation.
class CountingModel {
 public:
  explicit CountingModel(const Model& model) : model_(model) {}

  Prediction predict(const std::vector<std::string>& tokens) {
    ++queries_;
    return model_.predict(tokens);
  }
  double confidence(const std::vector<std::string>& tokens, int label) {
    return predict(tokens).probabilities[label];
  }
  std::int64_t queries() const { return queries_; }

 private:
  const Model& model_;
  std::int64_t queries_ = 0;
};

inline void check_resources(const AttackResources& r, bool needs_synonyms) {
  if (!r.model || !r.table) throw UsageError("attack needs a model and table");
  if (needs_synonyms && !r.synonyms) {
    throw UsageError("attack needs a synonym lexicon");
  }
}

inline std::vector<std::string> synonym_candidates(const AttackResources& r,
                                                   const AttackConfig& config,
                                                   const std::string& word) {
  if (config.restrict_stopwords && config.stopwords.count(word)) return {};
  const auto& syns = r.synonyms->synonyms(word);
  if (config.equifrequent_band) {
    return equifrequent_filter(syns, word, *r.table, *config.equifrequent_band);
  }
  return syns;
}

inline AttackResult begin_result(const AttackConfig& config,
                                 const Sequence& seq) {
  AttackResult result;
  result.kind = config.kind;
  result.original = seq;
  result.perturbed = seq;
  return result;
}

inline void finish_result(const AttackResources& r, AttackResult& result,
                          CountingModel& counter) {
  const auto& orig = result.original.tokens;
  const auto& pert = result.perturbed.tokens;
  result.substitutions.clear();
  for (std::size_t i = 0; i < orig.size(); ++i) {
    if (orig[i] == pert[i]) continue;
    result.substitutions.push_back({static_cast<int>(i), orig[i], pert[i],
                                    r.table->count(orig[i]),
                                    r.table->count(pert[i])});
  }
  const Prediction after = counter.predict(pert);
  result.confidence_after = after.probabilities[result.original.label];
  result.success = after.label != result.original.label;
  result.queries = counter.queries();
}

}  // namespace detail

// Confidence drop on class y when each word in turn is replaced by the
// reserved unknown token: S_i = f(X)_y - f(X with x_i -> <unk>)_y.
inline std::vector<double> word_saliency(const Model& model,
                                         const std::vector<std::string>& tokens,
                                         int label) {
  const double base = model.predict(tokens).probabilities.at(label);
  std::vector<double> saliency(tokens.size());
  std::vector<std::string> work = tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    work[i] = kUnknownToken;
    saliency[i] = base - model.predict(work).probabilities[label];
    work[i] = tokens[i];
  }
  return saliency;
}

inline AttackResult attack_random(const AttackResources& r, const Sequence& seq,
                                  const AttackConfig& config, Rng& rng) {
  detail::check_resources(r, true);
  detail::CountingModel counter(*r.model);
  AttackResult result = detail::begin_result(config, seq);
  const int y = seq.label;
  result.confidence_before = counter.confidence(seq.tokens, y);

  std::vector<std::vector<std::string>> candidates(seq.tokens.size());
  std::vector<int> positions;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    candidates[i] = detail::synonym_candidates(r, config, seq.tokens[i]);
    if (!candidates[i].empty()) positions.push_back(static_cast<int>(i));
  }
  std::shuffle(positions.begin(), positions.end(), rng);
  const std::size_t cap =
      replacement_cap(seq.tokens.size(), config.max_replace_fraction);
  auto& current = result.perturbed.tokens;
  std::size_t applied = 0;
  for (int pos : positions) {
    if (applied >= cap) break;
    const auto& cands = candidates[pos];
    std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
    current[pos] = cands[pick(rng)];
    ++applied;
    if (counter.predict(current).label != y) break;
  }
  detail::finish_result(r, result, counter);
  return result;
}

inline AttackResult attack_prioritized(const AttackResources& r,
                                       const Sequence& seq,
                                       const AttackConfig& config, Rng& rng) {
  detail::check_resources(r, true);
  detail::CountingModel counter(*r.model);
  AttackResult result = detail::begin_result(config, seq);
  const int y = seq.label;
  double current_conf = counter.confidence(seq.tokens, y);
  result.confidence_before = current_conf;

  std::vector<std::vector<std::string>> candidates(seq.tokens.size());
  std::vector<int> positions;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    candidates[i] = detail::synonym_candidates(r, config, seq.tokens[i]);
    if (!candidates[i].empty()) positions.push_back(static_cast<int>(i));
  }
  std::shuffle(positions.begin(), positions.end(), rng);
  const std::size_t cap =
      replacement_cap(seq.tokens.size(), config.max_replace_fraction);
  auto& current = result.perturbed.tokens;
  std::size_t applied = 0;
  for (int pos : positions) {
    if (applied >= cap) break;
    const std::string original_word = current[pos];
    double best_drop = 0.0;
    const std::string* best = nullptr;
    Prediction best_pred;
    for (const auto& w : candidates[pos]) {
      current[pos] = w;
      Prediction p = counter.predict(current);
      const double drop = current_conf - p.probabilities[y];
      if (drop > best_drop) {
        best_drop = drop;
        best = &w;
        best_pred = std::move(p);
      }
    }
    if (best == nullptr) {
      current[pos] = original_word;
      continue;
    }
    current[pos] = *best;
    current_conf = best_pred.probabilities[y];
    ++applied;
    if (best_pred.label != y) break;
  }
  detail::finish_result(r, result, counter);
  return result;
}

// Probability weighted word saliency: rank positions by
// softmax(S)_i * dP_i and substitute greedily until the label flips. Not
// subject to the replacement cap.
inline AttackResult attack_pwws(const AttackResources& r, const Sequence& seq,
                                const AttackConfig& config) {
  detail::check_resources(r, true);
  detail::CountingModel counter(*r.model);
  AttackResult result = detail::begin_result(config, seq);
  const int y = seq.label;
  const auto& tokens = seq.tokens;
  const double base = counter.confidence(tokens, y);
  result.confidence_before = base;

  std::vector<double> saliency(tokens.size());
  {
    std::vector<std::string> work = tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      work[i] = kUnknownToken;
      saliency[i] = base - counter.confidence(work, y);
      work[i] = tokens[i];
    }
  }
  const std::vector<double> weights = softmax(saliency);

  struct Ranked {
    int position;
    double score;
    std::string word;
  };
  std::vector<Ranked> ranked;
  std::vector<std::string> work = tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto cands = detail::synonym_candidates(r, config, tokens[i]);
    double best_drop = 0.0;
    const std::string* best = nullptr;
    for (const auto& w : cands) {
      work[i] = w;
      const double drop = base - counter.confidence(work, y);
      if (drop > best_drop) {
        best_drop = drop;
        best = &w;
      }
    }
    work[i] = tokens[i];
    if (best) {
      ranked.push_back({static_cast<int>(i), weights[i] * best_drop, *best});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) {
                     return a.score > b.score;
                   });
  auto& current = result.perturbed.tokens;
  for (const auto& item : ranked) {
    current[item.position] = item.word;
    if (counter.predict(current).label != y) break;
  }
  detail::finish_result(r, result, counter);
  return result;
}

// Uniform crossover: each position is copied from one parent at random.
inline std::vector<std::string> crossover(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b,
                                          Rng& rng) {
  if (a.size() != b.size()) throw UsageError("crossover of unequal lengths");
  std::bernoulli_distribution coin(0.5);
  std::vector<std::string> child(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) child[i] = coin(rng) ? a[i] : b[i];
  return child;
}

namespace detail {

class GeneticSearch {
 public:
  GeneticSearch(const AttackResources& r, const AttackConfig& config,
                const Sequence& seq, CountingModel& counter, Rng& rng)
      : r_(r),
        config_(config),
        original_(seq.tokens),
        label_(seq.label),
        counter_(counter),
        rng_(rng),
        cap_(replacement_cap(seq.tokens.size(), config.max_replace_fraction)),
        neighbors_(seq.tokens.size()) {
    for (std::size_t i = 0; i < original_.size(); ++i) {
      const auto& word = original_[i];
      if (config.stopwords.count(word) || !r.embeddings->contains(word)) {
        continue;
      }
      std::vector<std::string> cands;
      for (auto& n : nearest_neighbors_with_distance(
               *r.embeddings, word, config.num_neighbors, r.metric)) {
        if (n.distance <= config.embedding_distance_bound) {
          cands.push_back(std::move(n.word));
        }
      }
      if (config.equifrequent_band) {
        cands = equifrequent_filter(cands, word, *r.table,
                                    *config.equifrequent_band);
      }
      if (!cands.empty()) {
        neighbors_[i] = std::move(cands);
        eligible_.push_back(static_cast<int>(i));
      }
    }
  }

  bool has_eligible() const { return !eligible_.empty(); }

  double fitness(const std::vector<std::string>& x, int* label = nullptr) {
    const Prediction p = counter_.predict(x);
    if (label) *label = p.label;
    return 1.0 - p.probabilities[label_];
  }

  std::size_t modifications(const std::vector<std::string>& x) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) n += x[i] != original_[i];
    return n;
  }

  // Replaces one unmodified eligible word by the LM-filtered embedding
  // neighbor that maximizes the fitness.
  std::vector<std::string> perturb(std::vector<std::string> x) {
    if (modifications(x) >= cap_) return x;
    std::vector<int> open;
    for (int p : eligible_) {
      if (x[p] == original_[p]) open.push_back(p);
    }
    if (open.empty()) return x;
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const int pos = open[pick(rng_)];
    const auto& cands = neighbors_[pos];

    std::vector<std::pair<double, std::string>> scored;
    scored.reserve(cands.size());
    for (const auto& w : cands) {
      x[pos] = w;
      const double lp =
          r_.lm ? r_.lm->window_log_perplexity_around(x, pos, config_.lm_window)
                : 0.0;
      scored.emplace_back(lp, w);
    }
    std::sort(scored.begin(), scored.end());
    if (scored.size() > static_cast<std::size_t>(config_.lm_top_k)) {
      scored.resize(config_.lm_top_k);
    }
    double best_fit = -1.0;
    std::string best;
    for (const auto& [lp, w] : scored) {
      x[pos] = w;
      const double f = fitness(x);
      if (f > best_fit) {
        best_fit = f;
        best = w;
      }
    }
    x[pos] = best;
    return x;
  }

  void enforce_cap(std::vector<std::string>& x) {
    std::vector<int> modified;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != original_[i]) modified.push_back(static_cast<int>(i));
    }
    std::shuffle(modified.begin(), modified.end(), rng_);
    while (modified.size() > cap_) {
      x[modified.back()] = original_[modified.back()];
      modified.pop_back();
    }
  }

  std::size_t pick_parent(const std::vector<double>& fitness) {
    const double total = std::accumulate(fitness.begin(), fitness.end(), 0.0);
    if (!(total > 0.0)) {
      std::uniform_int_distribution<std::size_t> u(0, fitness.size() - 1);
      return u(rng_);
    }
    std::uniform_real_distribution<double> u(0.0, total);
    const double target = u(rng_);
    double acc = 0.0;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
      acc += fitness[i];
      if (target < acc) return i;
    }
    return fitness.size() - 1;
  }

  const std::vector<std::string>& original() const { return original_; }

 private:
  const AttackResources& r_;
  const AttackConfig& config_;
  const std::vector<std::string>& original_;
  int label_;
  CountingModel& counter_;
  Rng& rng_;
  std::size_t cap_;
  std::vector<std::vector<std::string>> neighbors_;
  std::vector<int> eligible_;
};

}  // namespace detail

// Population-based search over embedding-neighbor substitutions with
// elitism, fitness-proportional crossover and Perturb mutations.
inline AttackResult attack_genetic(const AttackResources& r,
                                   const Sequence& seq,
                                   const AttackConfig& config, Rng& rng) {
  if (!r.model || !r.table || !r.embeddings) {
    throw UsageError("genetic attack needs a model, table and embeddings");
  }
  detail::CountingModel counter(*r.model);
  AttackResult result = detail::begin_result(config, seq);
  const int y = seq.label;
  result.confidence_before = counter.confidence(seq.tokens, y);
  if (seq.tokens.size() < 2) {
    result.status = AttackStatus::kSkipped;
    detail::finish_result(r, result, counter);
    return result;
  }
  detail::GeneticSearch search(r, config, seq, counter, rng);
  if (!search.has_eligible()) {
    detail::finish_result(r, result, counter);
    return result;
  }

  const auto pop_size = static_cast<std::size_t>(config.population_size);
  std::vector<std::vector<std::string>> population;
  population.reserve(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    population.push_back(search.perturb(seq.tokens));
  }
  std::vector<std::string> best = seq.tokens;
  for (int gen = 0; gen < config.num_generations; ++gen) {
    result.generations = gen + 1;
    std::vector<double> fitness(pop_size);
    std::vector<int> labels(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
      fitness[i] = search.fitness(population[i], &labels[i]);
    }
    const std::size_t elite = static_cast<std::size_t>(
        std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
    best = population[elite];
    if (labels[elite] != y) break;
    if (gen + 1 == config.num_generations) break;

    std::vector<std::vector<std::string>> next;
    next.reserve(pop_size);
    next.push_back(population[elite]);
    for (std::size_t i = 1; i < pop_size; ++i) {
      const auto& a = population[search.pick_parent(fitness)];
      const auto& b = population[search.pick_parent(fitness)];
      auto child = crossover(a, b, rng);
      ++result.crossovers;
      search.enforce_cap(child);
      next.push_back(search.perturb(std::move(child)));
    }
    population = std::move(next);
  }
  result.perturbed.tokens = std::move(best);
  detail::finish_result(r, result, counter);
  return result;
}

// Dispatches on config.kind. The caller guarantees f*(X) = y.
inline AttackResult run_attack(const AttackResources& r, const Sequence& seq,
                               const AttackConfig& config, Rng& rng) {
  switch (config.kind) {
    case AttackKind::kRandom:
      return attack_random(r, seq, config, rng);
    case AttackKind::kPrioritized:
      return attack_prioritized(r, seq, config, rng);
    case AttackKind::kGenetic:
      return attack_genetic(r, seq, config, rng);
    case AttackKind::kPwws:
      return attack_pwws(r, seq, config);
  }
  throw UsageError("unknown attack kind");
}

struct AttackCampaign {
  AttackKind kind = AttackKind::kRandom;
  std::vector<AttackResult> results;
  double clean_accuracy = 0.0;
  double after_attack_accuracy = 0.0;
  std::size_t attacked = 0;
  std::size_t successful = 0;
  std::size_t skipped = 0;
  std::int64_t total_queries = 0;
};

// Recomputes the summary fields from `results`.
inline void summarize_campaign(AttackCampaign& campaign) {
  std::size_t evaluated = 0, correct_before = 0, correct_after = 0;
  campaign.attacked = campaign.successful = campaign.skipped = 0;
  campaign.total_queries = 0;
  for (const auto& res : campaign.results) {
    campaign.total_queries += res.queries;
    if (res.status == AttackStatus::kSkipped) {
      ++campaign.skipped;
      continue;
    }
    ++evaluated;
    if (res.status == AttackStatus::kAttacked) {
      ++campaign.attacked;
      ++correct_before;
      if (res.success) {
        ++campaign.successful;
      } else {
        ++correct_after;
      }
    }
  }
  const double denom = evaluated ? static_cast<double>(evaluated) : 1.0;
  campaign.clean_accuracy = static_cast<double>(correct_before) / denom;
  campaign.after_attack_accuracy = static_cast<double>(correct_after) / denom;
}

// Seeded subset of `n` sequences (all when n is 0 or >= size), in id order.
inline std::vector<Sequence> sample_subset(const Corpus& corpus, std::size_t n,
                                           std::uint64_t seed) {
  if (n == 0 || n >= corpus.size()) return corpus.sequences;
  std::vector<std::size_t> idx(corpus.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng = make_rng(seed, 0x5eb5e7);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<Sequence> out;
  out.reserve(n);
  for (auto i : idx) out.push_back(corpus.sequences[i]);
  return out;
}

// Attacks every correctly classified sequence. Each sequence draws from its
// own RNG stream keyed by (seed, id), so results do not depend on `threads`.
inline AttackCampaign run_campaign(const AttackResources& r,
                                   const std::vector<Sequence>& sequences,
                                   const AttackConfig& config,
                                   int threads = 1) {
  config.validate();
  if (!r.model) throw UsageError("campaign needs a model");
  AttackCampaign campaign;
  campaign.kind = config.kind;
  campaign.results.resize(sequences.size());
  parallel_for(sequences.size(), threads, [&](std::size_t i) {
    const Sequence& seq = sequences[i];
    const Prediction p = r.model->predict(seq);
    if (p.label != seq.label) {
      AttackResult res;
      res.kind = config.kind;
      res.original = seq;
      res.perturbed = seq;
      res.status = AttackStatus::kMisclassified;
      res.confidence_before = res.confidence_after = p.probabilities[seq.label];
      res.queries = 1;
      campaign.results[i] = std::move(res);
      return;
    }
    Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(seq.id));
    campaign.results[i] = run_attack(r, seq, config, rng);
  });
  summarize_campaign(campaign);
  return campaign;
}

}  // namespace fgws

#endif  // FGWS_ATTACKS_HPP_
