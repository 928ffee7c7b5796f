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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "helpers.hpp"

namespace fgws {
namespace {

using testing::ScriptedModel;

Sequence seq_of(const std::string& text, int label = 1, int id = 0) {
  return Sequence{tokenize(text), label, id};
}

ScriptedModel linear_model(std::map<std::string, double> weights,
                           double bias = 0.0) {
  return ScriptedModel(2, [weights, bias](TokenSpan tokens) {
    double s = bias;
    for (const auto& t : tokens) {
      auto it = weights.find(t);
      if (it != weights.end()) s += it->second;
    }
    const double p = 1.0 / (1.0 + std::exp(-s));
    return std::vector<double>{1.0 - p, p};
  });
}

struct Fixture {
  Corpus train;
  FrequencyTable table;
  Lexicons lex;
  Fixture() {
    const std::string dir = testing::data_dir() + "/fixture/";
    train = load_corpus(dir + "train.tsv", Split::kTrain);
    table = build_frequency_table(train);
    lex.synonyms = load_synonyms(dir + "synonyms.tsv");
    lex.embeddings = load_embeddings(dir + "embeddings.txt");
  }
};

TEST(FgwsTransform, ReplacesRareWordsWithMostFrequentSynonym) {
  const Fixture f;
  const auto x = tokenize("a impertinent odoriferous and playful romantic comedy");
  const auto t = fgws_transform(x, f.table, f.lex, 0, 2.0);
  EXPECT_EQ(t.tokens,
            tokenize("a smart sweet and playful romantic comedy"));
  ASSERT_EQ(t.substitutions.size(), 2u);
  EXPECT_EQ(t.substitutions[0].replaced, "impertinent");
  EXPECT_EQ(t.substitutions[0].replaced_count, 0);
  EXPECT_NEAR(f.table.phi("smart"), 5.69, 0.005);
  EXPECT_NEAR(f.table.phi("odoriferous"), 1.79, 0.005);
  EXPECT_NEAR(f.table.phi("sweet"), 5.77, 0.005);
  EXPECT_EQ(t.eligible_positions, (std::vector<int>{1, 2}));

  const auto y = tokenize("a cunning blending of fact and fabrication");
  EXPECT_EQ(fgws_transform(y, f.table, f.lex, 0, 2.0).tokens,
            tokenize("a smart blend of fact and fiction"));
  // The nearest embedding neighbor sits in the same synset.
  EXPECT_EQ(fgws_transform(y, f.table, f.lex, 1, 2.0).tokens,
            tokenize("a smart blend of fact and fiction"));
}

TEST(FgwsTransform, ThresholdBelowEveryWordIsIdentity) {
  const Fixture f;
  const auto x = tokenize("a impertinent odoriferous and playful romantic comedy");
  const auto t = fgws_transform(x, f.table, f.lex, 2, 0.0);
  EXPECT_EQ(t.tokens, x);
  EXPECT_TRUE(t.eligible_positions.empty());
  EXPECT_TRUE(t.substitutions.empty());
}

TEST(FgwsTransform, TiesGoToLexicographicallySmallestCandidate) {
  Lexicons lex;
  lex.synonyms.add("rare", {"zeta", "beta", "alpha2", "gamma"});
  lex.embeddings.add("rare", {0.0});
  const FrequencyTable table(std::unordered_map<std::string, std::int64_t>{
      {"rare", 1}, {"zeta", 50}, {"beta", 50}, {"alpha2", 10}, {"gamma", 50}});
  const auto t = fgws_transform({"rare"}, table, lex, 0, 100.0);
  EXPECT_EQ(t.tokens[0], "beta");
}

TEST(FgwsTransform, KeepsWordWhenNoCandidateIsMoreFrequent) {
  Lexicons lex;
  lex.synonyms.add("mid", {"low", "same"});
  const FrequencyTable table(std::unordered_map<std::string, std::int64_t>{
      {"mid", 20}, {"low", 3}, {"same", 20}});
  const auto t = fgws_transform({"mid"}, table, lex, 0, 100.0);
  EXPECT_EQ(t.tokens[0], "mid");
  EXPECT_EQ(t.eligible_positions.size(), 1u);
  EXPECT_TRUE(t.substitutions.empty());
}

struct RandomWorld {
  std::vector<std::string> words;
  FrequencyTable table;
  Lexicons lex;
};

// 30-word table with random counts (a few words OOV), random synonym lists
// and random 3-d embeddings.
RandomWorld random_world(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomWorld w;
  std::unordered_map<std::string, std::int64_t> counts;
  std::uniform_int_distribution<int> count(1, 40);
  std::bernoulli_distribution oov(0.2);
  for (int i = 0; i < 30; ++i) {
    w.words.push_back("w" + std::to_string(i));
    if (!oov(rng)) counts[w.words.back()] = count(rng);
  }
  w.table = FrequencyTable(counts);
  std::uniform_int_distribution<int> pick(0, 29), nsyn(0, 4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto& word : w.words) {
    std::vector<std::string> syns;
    for (int j = nsyn(rng); j > 0; --j) syns.push_back(w.words[pick(rng)]);
    w.lex.synonyms.add(word, syns);
    w.lex.embeddings.add(word, {g(rng), g(rng), g(rng)});
  }
  return w;
}

// Per-position re-derivation of the substitution rule.
std::vector<std::string> transform_oracle(const RandomWorld& w,
                                          const std::vector<std::string>& x,
                                          std::size_t k, double delta) {
  auto out = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double phi_x = w.table.count(x[i]) ? std::log(w.table.count(x[i])) : 0.0;
    if (phi_x >= delta) continue;
    auto cands = candidate_set(x[i], w.lex, k).candidates;
    std::sort(cands.begin(), cands.end());
    std::string best;
    double best_phi = -1.0;
    for (const auto& c : cands) {
      const double p = w.table.count(c) ? std::log(w.table.count(c)) : 0.0;
      if (p > best_phi) {
        best_phi = p;
        best = c;
      }
    }
    if (!best.empty() && best_phi > phi_x) out[i] = best;
  }
  return out;
}

TEST(FgwsTransform, MatchesPerPositionOracleOnRandomInputs) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, 29), kdist(0, 3);
  std::uniform_real_distribution<double> ddist(0.0, 4.0);
  for (int world = 0; world < 10; ++world) {
    const RandomWorld w = random_world(1000 + world);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::string> x(8);
      for (auto& t : x) t = w.words[pick(rng)];
      const std::size_t k = kdist(rng);
      const double delta = ddist(rng);
      const auto t = fgws_transform(x, w.table, w.lex, k, delta);
      ASSERT_EQ(t.tokens, transform_oracle(w, x, k, delta));
      for (const auto& s : t.substitutions) {
        EXPECT_GT(w.table.phi(s.substituted), w.table.phi(s.replaced));
        EXPECT_TRUE(std::count(t.eligible_positions.begin(),
                               t.eligible_positions.end(), s.position));
      }
    }
  }
}

TEST(FgwsTransform, EligibleSetGrowsWithDelta) {
  const RandomWorld w = random_world(5);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 29);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> x(8);
    for (auto& t : x) t = w.words[pick(rng)];
    std::vector<int> prev;
    for (double d = 0.0; d <= 4.0; d += 0.25) {
      const auto e = fgws_transform(x, w.table, w.lex, 1, d).eligible_positions;
      EXPECT_TRUE(std::includes(e.begin(), e.end(), prev.begin(), prev.end()));
      prev = e;
    }
  }
}

TEST(FgwsTransform, IdempotentWhenSubstitutesClearTheThreshold) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 29);
  int checked = 0;
  for (int world = 0; world < 5; ++world) {
    const RandomWorld w = random_world(50 + world);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::string> x(8);
      for (auto& t : x) t = w.words[pick(rng)];
      const double delta = 2.0;
      const auto once = fgws_transform(x, w.table, w.lex, 1, delta);
      const bool clear = std::all_of(
          once.substitutions.begin(), once.substitutions.end(),
          [&](const Substitution& s) { return w.table.phi(s.substituted) >= delta; });
      if (!clear) continue;
      ++checked;
      EXPECT_EQ(fgws_transform(once.tokens, w.table, w.lex, 1, delta).tokens,
                once.tokens);
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Detect, ScoreMatchesHandComputation) {
  Lexicons lex;
  lex.synonyms.add("meh", {"good"});
  const FrequencyTable table(std::unordered_map<std::string, std::int64_t>{
      {"good", 100}, {"meh", 2}, {"movie", 50}});
  const auto model = linear_model({{"good", 2.0}, {"meh", -1.0}}, 0.5);
  DetectorConfig cfg;
  cfg.delta.delta = 1.0;
  cfg.gamma = 0.5;
  const auto r = fgws_detect(model, seq_of("meh movie", 1, 3), cfg, table, lex);
  // Before: sigmoid(-0.5) -> class 0 with 1 - sigmoid(-0.5).
  const double before = 1.0 - 1.0 / (1.0 + std::exp(0.5));
  const double after = 1.0 - 1.0 / (1.0 + std::exp(-2.5));
  EXPECT_EQ(r.predicted_label, 0);
  EXPECT_NEAR(r.confidence_before, before, 1e-12);
  EXPECT_NEAR(r.confidence_after, after, 1e-12);
  EXPECT_NEAR(r.score, before - after, 1e-12);
  EXPECT_EQ(r.flagged, r.score > 0.5);
  EXPECT_EQ(r.restored_label, 1);
  EXPECT_EQ(r.id, 3);
  EXPECT_EQ(r.transformed, tokenize("good movie"));
}

TEST(Detect, UnchangedInputScoresZero) {
  const Fixture f;
  const auto model = linear_model({{"smart", 1.0}});
  DetectorConfig cfg;
  cfg.delta.delta = 0.0;
  cfg.gamma = 0.0;
  const auto r =
      fgws_detect(model, seq_of("a smart comedy"), cfg, f.table, f.lex);
  EXPECT_EQ(r.score, 0.0);
  EXPECT_FALSE(r.flagged);
  EXPECT_THROW(fgws_detect(model, Sequence{}, cfg, f.table, f.lex), UsageError);
}

TEST(Detect, RestoresTheAdversarialExample) {
  const Fixture f;
  // Scripted after the worked example: negative 56.3% on the attack,
  // positive 99.9% once the rare words are restored.
  const ScriptedModel model(2, [](TokenSpan x) {
    const bool adv = std::find(x.begin(), x.end(), "impertinent") != x.end();
    return adv ? std::vector<double>{0.563, 0.437}
               : std::vector<double>{0.001, 0.999};
  });
  DetectorConfig cfg;
  cfg.delta = percentile_threshold(f.table, 90);
  cfg.gamma = 0.56;
  const Sequence x =
      seq_of("a impertinent odoriferous and playful romantic comedy", 1);
  const auto r = fgws_detect(model, x, cfg, f.table, f.lex);
  EXPECT_NEAR(r.score, 0.562, 1e-9);
  EXPECT_TRUE(r.flagged);
  EXPECT_EQ(r.predicted_label, 0);
  EXPECT_EQ(r.restored_label, 1);
  cfg.gamma = 0.57;
  EXPECT_FALSE(fgws_detect(model, x, cfg, f.table, f.lex).flagged);
}

TEST(Detect, RaisingGammaNeverFlagsMore) {
  const RandomWorld w = random_world(8);
  std::map<std::string, double> weights;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto& word : w.words) weights[word] = g(rng);
  const auto model = linear_model(weights);
  std::uniform_int_distribution<int> pick(0, 29);
  std::vector<Sequence> seqs;
  for (int i = 0; i < 100; ++i) {
    Sequence s{std::vector<std::string>(8), 0, i};
    for (auto& t : s.tokens) t = w.words[pick(rng)];
    seqs.push_back(s);
  }
  DetectorConfig cfg;
  cfg.delta.delta = 2.5;
  std::size_t prev = seqs.size() + 1;
  for (double gamma = 0.0; gamma <= 1.0; gamma += 0.05) {
    cfg.gamma = gamma;
    const auto res = detect_all(model, seqs, DetectionMethod::kFgws, cfg,
                                w.table, w.lex, 2);
    const auto flagged = static_cast<std::size_t>(
        std::count_if(res.begin(), res.end(),
                      [](const DetectionResult& r) { return r.flagged; }));
    EXPECT_LE(flagged, prev);
    prev = flagged;
    for (const auto& r : res) EXPECT_EQ(r.flagged, r.score > gamma);
  }
}

TEST(NwsTransform, FollowsReplacementRules) {
  Lexicons lex;
  lex.synonyms.add("oov1", {"known", "oov2", "other"});
  lex.synonyms.add("oov3", {"oov2"});
  lex.synonyms.add("known", {"other"});
  const FrequencyTable table(std::unordered_map<std::string, std::int64_t>{
      {"known", 3}, {"other", 7}});
  Rng rng = make_rng(0, 0);
  const std::vector<std::string> in_vocab{"known", "other"};
  EXPECT_EQ(nws_transform(in_vocab, table, lex, 0, rng).tokens, in_vocab);
  const auto t = nws_transform({"oov1", "oov3", "known"}, table, lex, 0, rng);
  EXPECT_TRUE(t.tokens[0] == "known" || t.tokens[0] == "other");
  EXPECT_EQ(t.tokens[1], "oov3");
  EXPECT_EQ(t.tokens[2], "known");
  EXPECT_EQ(t.eligible_positions, (std::vector<int>{0, 1}));
}

TEST(NwsTransform, SeededReplayIsIdentical) {
  const RandomWorld w = random_world(21);
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> pick(0, 29);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> x(8);
    for (auto& t : x) t = w.words[pick(rng)];
    Rng a = make_rng(4, trial), b = make_rng(4, trial);
    EXPECT_EQ(nws_transform(x, w.table, w.lex, 2, a).tokens,
              nws_transform(x, w.table, w.lex, 2, b).tokens);
  }
}

TEST(GammaForBudget, QuantileExamples) {
  std::vector<double> tenths;
  for (int i = 1; i <= 10; ++i) tenths.push_back(i / 10.0);
  EXPECT_DOUBLE_EQ(gamma_for_budget(tenths, 0.10), 0.9);
  EXPECT_DOUBLE_EQ(gamma_for_budget(tenths, 0.20), 0.8);
  EXPECT_DOUBLE_EQ(gamma_for_budget(tenths, 0.05), 1.0);
  EXPECT_EQ(gamma_for_budget(std::vector<double>(20, 0.0), 0.10), 0.0);
  EXPECT_LT(gamma_for_budget(tenths, 1.0), 0.1);
  EXPECT_THROW(gamma_for_budget({}, 0.1), UsageError);
}

TEST(GammaForBudget, CountingOracleOnRandomScores) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 200), level(0, 20);
  std::uniform_real_distribution<double> budget(0.01, 0.5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> s(size(rng));
    // Coarse levels force ties.
    for (auto& v : s) v = level(rng) / 20.0 - 0.25;
    const double b = budget(rng);
    const double g = gamma_for_budget(s, b);
    const auto above = [&](double t) {
      return static_cast<std::size_t>(
          std::count_if(s.begin(), s.end(), [&](double v) { return v > t; }));
    };
    const auto allowed =
        static_cast<std::size_t>(std::floor(b * double(s.size()) + 1e-9));
    EXPECT_LE(above(g), allowed);
    // No smaller observed score also satisfies the budget.
    for (double v : s) {
      if (v < g) {
        EXPECT_GT(above(v), allowed);
      }
    }
    const double clamped = threshold_for_budget(s, b);
    EXPECT_GE(clamped, 0.0);
    EXPECT_LE(clamped, 1.0);
  }
}

// Adversarial inputs carry the OOV word "zz", which the model reads as
// negative; its synonym "top" restores the positive reading.
struct TuningWorld {
  FrequencyTable table{std::unordered_map<std::string, std::int64_t>{
      {"top", 90}, {"film", 40}, {"plot", 12}, {"cast", 6}, {"set", 2}}};
  Lexicons lex;
  ScriptedModel model{2, [](TokenSpan x) {
                        const bool adv =
                            std::find(x.begin(), x.end(), "zz") != x.end();
                        return adv ? std::vector<double>{0.9, 0.1}
                                   : std::vector<double>{0.1, 0.9};
                      }};
  std::vector<Sequence> clean, adversarial;
  TuningWorld() {
    lex.synonyms.add("zz", {"top"});
    for (int i = 0; i < 10; ++i) {
      clean.push_back(seq_of("film plot cast set", 1, i));
      adversarial.push_back(seq_of("film zz cast", 1, 100 + i));
    }
  }
};

TEST(TuneDelta, PerfectDetectorPicksSmallestQ) {
  const TuningWorld w;
  const auto r = tune_delta_on(w.model, w.clean, w.adversarial, w.table, w.lex,
                               1, TuningOptions{});
  ASSERT_EQ(r.rows.size(), 11u);
  for (const auto& row : r.rows) EXPECT_DOUBLE_EQ(row.f1, 1.0);
  EXPECT_EQ(r.best_q, 0);
  EXPECT_DOUBLE_EQ(r.best_gamma, 0.0);
}

TEST(TuneDelta, SingleValueGridReturnsThatValue) {
  const TuningWorld w;
  TuningOptions opts;
  opts.q_grid = {70, 70};
  const auto r =
      tune_delta_on(w.model, w.clean, w.adversarial, w.table, w.lex, 1, opts);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.best_q, 70);
  EXPECT_DOUBLE_EQ(r.best_delta, percentile_threshold(w.table, 70).delta);
}

TEST(TuneDelta, RefusesEmptyAdversarialSet) {
  const TuningWorld w;
  EXPECT_THROW(
      tune_delta_on(w.model, w.clean, {}, w.table, w.lex, 1, TuningOptions{}),
      DataError);
}

TEST(TuneDelta, MatchesExhaustiveGridScan) {
  const RandomWorld w = random_world(77);
  std::map<std::string, double> weights;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto& word : w.words) weights[word] = g(rng);
  const auto model = linear_model(weights);
  std::uniform_int_distribution<int> pick(0, 29);
  std::vector<Sequence> clean, adv;
  for (int i = 0; i < 60; ++i) {
    Sequence s{std::vector<std::string>(8), 0, i};
    for (auto& t : s.tokens) t = w.words[pick(rng)];
    (i % 2 ? adv : clean).push_back(s);
  }
  TuningOptions opts;
  opts.fpr_budget = 0.2;
  const auto r = tune_delta_on(model, clean, adv, w.table, w.lex, 2, opts, 3);

  double best_f1 = -1.0;
  int best_q = -1;
  for (int q = 0; q <= 100; q += 10) {
    std::vector<double> phis;
    for (const auto& [word, c] : w.table.counts()) phis.push_back(std::log(c));
    std::sort(phis.begin(), phis.end());
    const std::size_t rank = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(q * phis.size() / 100.0)));
    DetectorConfig cfg;
    cfg.delta.delta = phis[rank - 1];
    cfg.k = 2;
    std::vector<double> cs, as;
    for (const auto& s : clean) {
      const auto t = transform_oracle(w, s.tokens, 2, cfg.delta.delta);
      const auto p = model.predict(s.tokens);
      cs.push_back(p.probabilities[p.label] -
                   model.predict_proba(t)[p.label]);
    }
    for (const auto& s : adv) {
      const auto t = transform_oracle(w, s.tokens, 2, cfg.delta.delta);
      const auto p = model.predict(s.tokens);
      as.push_back(p.probabilities[p.label] -
                   model.predict_proba(t)[p.label]);
    }
    // Smallest observed score with at most 20% of clean scores above it.
    auto sorted = cs;
    std::sort(sorted.begin(), sorted.end());
    double gamma = sorted.back();
    for (double cand : sorted) {
      const auto over = std::count_if(cs.begin(), cs.end(),
                                      [&](double v) { return v > cand; });
      if (over <= static_cast<long>(0.2 * cs.size() + 1e-9)) {
        gamma = cand;
        break;
      }
    }
    gamma = std::clamp(gamma, 0.0, 1.0);
    const double tp = std::count_if(as.begin(), as.end(),
                                    [&](double v) { return v > gamma; });
    const double fp = std::count_if(cs.begin(), cs.end(),
                                    [&](double v) { return v > gamma; });
    const double tpr = tp / as.size(), fpr = fp / cs.size();
    const double prec = tpr + fpr > 0 ? tpr / (tpr + fpr) : 0.0;
    const double f1 = prec + tpr > 0 ? 2 * prec * tpr / (prec + tpr) : 0.0;
    const auto& row = r.rows[q / 10];
    EXPECT_NEAR(row.delta, cfg.delta.delta, 1e-12) << q;
    EXPECT_NEAR(row.gamma, gamma, 1e-12) << q;
    EXPECT_NEAR(row.f1, f1, 1e-12) << q;
    if (f1 > best_f1 + 1e-15) {
      best_f1 = f1;
      best_q = q;
    }
  }
  EXPECT_EQ(r.best_q, best_q);
}

TEST(BalancedF1, Values) {
  EXPECT_DOUBLE_EQ(balanced_f1(1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(balanced_f1(0.0, 0.0), 0.0);
  // Flag everything: precision 1/2, recall 1.
  EXPECT_NEAR(balanced_f1(1.0, 1.0), 2.0 / 3.0, 1e-12);
}

TEST(MethodNames, RoundTrip) {
  EXPECT_EQ(parse_method("fgws"), DetectionMethod::kFgws);
  EXPECT_EQ(parse_method(method_name(DetectionMethod::kNws)),
            DetectionMethod::kNws);
  EXPECT_THROW(parse_method("disp"), UsageError);
}

}  // namespace
}  // namespace fgws
