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

#include <cmath>
#include <set>

#include "helpers.hpp"

namespace fgws {
namespace {

Corpus lm_corpus() {
  return testing::make_corpus(Split::kTrain, {{0, "the cat sat on the mat"},
                                              {0, "the dog sat on the log"},
                                              {1, "a cat saw a dog"},
                                              {1, "the cat ran"}});
}

std::set<std::string> outcomes(const Corpus& c) {
  std::set<std::string> v{KneserNeyTrigram::kEos};
  for (const auto& s : c.sequences) v.insert(s.tokens.begin(), s.tokens.end());
  return v;
}

TEST(KneserNey, DistributionsSumToOneIncludingUnseenMass) {
  const Corpus c = lm_corpus();
  const KneserNeyTrigram lm(c);
  const auto vocab = outcomes(c);
  EXPECT_EQ(lm.vocabulary_size(), vocab.size());
  const std::pair<std::string, std::string> histories[] = {
      {"<s>", "<s>"}, {"<s>", "the"}, {"the", "cat"}, {"sat", "on"},
      {"a", "dog"},   {"zzz", "cat"}, {"zzz", "yyy"}};
  for (const auto& [u, v] : histories) {
    double total = lm.prob(u, v, "never-seen-word");
    for (const auto& w : vocab) total += lm.prob(u, v, w);
    EXPECT_NEAR(total, 1.0, 1e-12) << u << " " << v;
  }
}

TEST(KneserNey, SeenContinuationsBeatUnseen) {
  const KneserNeyTrigram lm(lm_corpus());
  EXPECT_GT(lm.prob("the", "cat", "sat"), lm.prob("the", "cat", "mat"));
  EXPECT_GT(lm.prob("sat", "on", "the"), lm.prob("sat", "on", "dog"));
  EXPECT_GT(lm.prob("x", "y", "the"), lm.prob("x", "y", "qqq"));
}

TEST(KneserNey, WindowPerplexityIsMeanNegativeLogProb) {
  const KneserNeyTrigram lm(lm_corpus());
  const std::vector<std::string> x{"the", "cat", "sat", "on"};
  const double expected =
      -(lm.log_prob("<s>", "the", "cat") + lm.log_prob("the", "cat", "sat")) /
      2.0;
  EXPECT_NEAR(lm.window_log_perplexity(x, 1, 2), expected, 1e-12);
  EXPECT_NEAR(lm.window_log_perplexity_around(x, 0, 1),
              lm.window_log_perplexity(x, 0, 1), 1e-12);
  EXPECT_LT(lm.window_log_perplexity(x, 0, 3),
            lm.window_log_perplexity({"the", "cat", "log", "on"}, 0, 3));
  EXPECT_THROW(lm.window_log_perplexity(x, 2, 1), UsageError);
  EXPECT_THROW(lm.window_log_perplexity(x, 0, 4), UsageError);
}

TEST(KneserNey, RejectsBadDiscount) {
  EXPECT_THROW(KneserNeyTrigram(lm_corpus(), 0.0), UsageError);
  EXPECT_THROW(KneserNeyTrigram(lm_corpus(), 1.0), UsageError);
}

}  // namespace
}  // namespace fgws
