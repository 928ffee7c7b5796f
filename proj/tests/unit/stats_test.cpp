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
#include <numbers>
#include <numeric>
#include <random>

#include "helpers.hpp"

namespace fgws {
namespace {

// Rescales `z` so its mean and sample SD are exactly `mu` and `sigma`.
std::vector<double> with_moments(std::vector<double> z, double mu,
                                 double sigma) {
  const double n = static_cast<double>(z.size());
  const double m = std::accumulate(z.begin(), z.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : z) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / (n - 1.0));
  for (double& v : z) v = mu + sigma * (v - m) / sd;
  return z;
}

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed,
                                  double mu = 0.0, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(mu, sigma);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

// Textbook two-pass formula, written without the library helpers.
double d_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  auto mean = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / x.size();
  };
  auto ss = [&](const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s;
  };
  const double sp = std::sqrt((ss(a) + ss(b)) / (a.size() + b.size() - 2.0));
  return (mean(a) - mean(b)) / sp;
}

TEST(CohensD, ConstructedMomentsGiveExpectedEffect) {
  const auto a = with_moments(normal_sample(40, 1), 7.6, 2.5);
  const auto b = with_moments(normal_sample(40, 2), 3.4, 2.8);
  EXPECT_NEAR(cohens_d(a, b), 1.58, 0.01);
  EXPECT_NEAR(cohens_d(a, b), 4.2 / std::sqrt((2.5 * 2.5 + 2.8 * 2.8) / 2.0),
              1e-12);
}

TEST(CohensD, IdenticalSamplesGiveZero) {
  const auto a = normal_sample(10, 3);
  EXPECT_EQ(cohens_d(a, a), 0.0);
}

TEST(CohensD, MatchesIndependentFormula) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> size(2, 300);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = normal_sample(size(rng), 10 + trial, 1.0, 2.0);
    const auto b = normal_sample(size(rng), 900 + trial, -0.5, 1.0);
    EXPECT_NEAR(cohens_d(a, b), d_oracle(a, b), 1e-10);
  }
}

TEST(CohensD, SymmetryAndInvariances) {
  const auto a = normal_sample(30, 5, 1.0, 1.0);
  const auto b = normal_sample(25, 6, 0.0, 2.0);
  const double d = cohens_d(a, b);
  EXPECT_NEAR(cohens_d(b, a), -d, 1e-12);
  auto shift = [](std::vector<double> x, double c, double s) {
    for (double& v : x) v = v * s + c;
    return x;
  };
  EXPECT_NEAR(cohens_d(shift(a, 17.0, 1.0), shift(b, 17.0, 1.0)), d, 1e-10);
  EXPECT_NEAR(cohens_d(shift(a, 0.0, 3.5), shift(b, 0.0, 3.5)), d, 1e-10);
}

TEST(CohensD, Errors) {
  EXPECT_THROW(cohens_d({1.0}, {1.0, 2.0}), UsageError);
  EXPECT_THROW(cohens_d({1.0, 1.0}, {2.0, 2.0}), DataError);
}

// log10 BF10 by a 10^6-point trapezoid rule over u = ln g in [-40, 60].
double log10_bf_trapezoid(double t, double na, double nb, double r) {
  const double nu = na + nb - 2.0, n = na * nb / (na + nb);
  auto log_integrand = [&](double u) {
    const double g = std::exp(u);
    const double base = 1.0 + n * g;
    // Prior density of g (inverse gamma(1/2, r^2/2)) times the Jacobian g.
    const double log_prior = std::log(r / std::sqrt(2.0 * std::numbers::pi)) -
                             1.5 * u - r * r / (2.0 * g) + u;
    return -0.5 * std::log(base) -
           (nu + 1.0) / 2.0 * std::log(1.0 + t * t / (base * nu)) + log_prior;
  };
  const int m = 1000000;
  const double lo = -40.0, hi = 60.0, h = (hi - lo) / (m - 1);
  std::vector<double> v(m);
  double peak = -INFINITY;
  for (int i = 0; i < m; ++i) {
    v[i] = log_integrand(lo + i * h);
    peak = std::max(peak, v[i]);
  }
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    s += (i == 0 || i == m - 1 ? 0.5 : 1.0) * std::exp(v[i] - peak);
  }
  const double log_alt = peak + std::log(s * h);
  const double log_null = -(nu + 1.0) / 2.0 * std::log(1.0 + t * t / nu);
  return (log_alt - log_null) / std::log(10.0);
}

TEST(BayesFactor, MatchesTrapezoidOracle) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> size(10, 500);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const auto a = normal_sample(size(rng), 70 + trial, shift(rng));
    const auto b = normal_sample(size(rng), 170 + trial);
    const auto bf = bayes_factor(a, b);
    const double oracle = log10_bf_trapezoid(
        bf.t, double(a.size()), double(b.size()), kDefaultPriorScale);
    EXPECT_NEAR(bf.log10_bf10, oracle, 0.01 * std::fabs(oracle) + 1e-9)
        << "t=" << bf.t;
    EXPECT_LT(bf.quadrature_error, 1e-6);
  }
}

TEST(BayesFactor, ZeroEffectFavorsTheNull) {
  for (double n : {5.0, 20.0, 200.0}) {
    const auto bf = bayes_factor_from_t(0.0, n, n);
    EXPECT_LT(bf.bf10, 1.0);
    EXPECT_LT(bf.log10_bf10, 0.0);
  }
  const std::vector<double> a{1.0, 2.0, 3.0}, b{3.0, 2.0, 1.0};
  EXPECT_LT(bayes_factor(a, b).bf10, 1.0);
}

TEST(BayesFactor, GrowsWithEvidenceAndSurvivesOverflow) {
  const auto small = bayes_factor_from_t(2.0, 50, 50);
  const auto large = bayes_factor_from_t(6.0, 50, 50);
  EXPECT_GT(large.log10_bf10, small.log10_bf10);
  const auto huge = bayes_factor_from_t(400.0, 5000, 5000);
  EXPECT_GT(huge.log10_bf10, 1000.0);
  EXPECT_TRUE(std::isinf(huge.bf10));
}

TEST(BayesFactor, AffineInvariant) {
  const auto a = normal_sample(40, 8, 0.6);
  const auto b = normal_sample(35, 9);
  auto affine = [](std::vector<double> x) {
    for (double& v : x) v = 3.0 * v - 11.0;
    return x;
  };
  EXPECT_NEAR(bayes_factor(a, b).log10_bf10,
              bayes_factor(affine(a), affine(b)).log10_bf10, 1e-8);
}

TEST(BayesFactor, Errors) {
  EXPECT_THROW(bayes_factor_from_t(1.0, 1, 10), UsageError);
  EXPECT_THROW(bayes_factor_from_t(1.0, 10, 10, 0.0), UsageError);
  EXPECT_THROW(bayes_factor_from_t(NAN, 10, 10), NumericalError);
}

AttackResult with_pairs(std::vector<std::pair<std::int64_t, std::int64_t>> pairs,
                        bool success = true,
                        AttackStatus status = AttackStatus::kAttacked) {
  AttackResult r;
  r.status = status;
  r.success = success;
  int pos = 0;
  for (const auto& [x, w] : pairs) {
    r.substitutions.push_back({pos++, "x", "w", x, w});
  }
  return r;
}

TEST(FrequencyAnalysis, FourPairsByHand) {
  const std::vector<AttackResult> results{
      with_pairs({{100, 5}, {50, 0}}), with_pairs({{20, 2}}, false),
      with_pairs({{10, 1}}),
      // Neither of these contributes.
      with_pairs({{7, 7}}, false, AttackStatus::kMisclassified),
      with_pairs({{9, 9}}, false, AttackStatus::kSkipped)};
  const auto row = frequency_analysis(results, "toy");
  EXPECT_EQ(row.pairs, 4u);
  const double r1 = std::log(100.0), r2 = std::log(50.0), r3 = std::log(20.0),
               r4 = std::log(10.0);
  const double s1 = std::log(5.0), s3 = std::log(2.0);
  const double mr = (r1 + r2 + r3 + r4) / 4.0;
  const double ms = (s1 + 0.0 + s3 + 0.0) / 4.0;
  const double vr = ((r1 - mr) * (r1 - mr) + (r2 - mr) * (r2 - mr) +
                     (r3 - mr) * (r3 - mr) + (r4 - mr) * (r4 - mr)) / 3.0;
  const double vs = ((s1 - ms) * (s1 - ms) + ms * ms + (s3 - ms) * (s3 - ms) +
                     ms * ms) / 3.0;
  EXPECT_NEAR(row.replaced.mean, mr, 1e-12);
  EXPECT_NEAR(row.replaced.sd, std::sqrt(vr), 1e-12);
  EXPECT_NEAR(row.substituted.mean, ms, 1e-12);
  EXPECT_NEAR(row.substituted.sd, std::sqrt(vs), 1e-12);
  ASSERT_TRUE(row.substituted.d.has_value());
  EXPECT_NEAR(*row.substituted.d, (mr - ms) / std::sqrt((vr + vs) / 2.0), 1e-12);
  ASSERT_TRUE(row.substituted.bf.has_value());
  // Non-OOV keeps substitutions seen in training: 5, 2 and 1.
  EXPECT_EQ(row.non_oov.n, 3u);
  EXPECT_NEAR(row.non_oov.mean, (s1 + s3) / 3.0, 1e-12);
  EXPECT_TRUE(row.non_oov.d.has_value());

  const auto only = frequency_analysis(results, "toy", true);
  EXPECT_EQ(only.pairs, 3u);
}

TEST(FrequencyAnalysis, EqualFrequenciesGiveZeroEffect) {
  const std::vector<AttackResult> results{
      with_pairs({{12, 12}, {300, 300}}), with_pairs({{4, 4}, {40, 40}})};
  const auto row = frequency_analysis(results, "beta0");
  ASSERT_TRUE(row.substituted.d.has_value());
  EXPECT_EQ(*row.substituted.d, 0.0);
  EXPECT_LT(row.substituted.bf->bf10, 1.0);
  EXPECT_GT(row.replaced.sd, 0.0);
}

TEST(FrequencyAnalysis, TooFewPairsIsAnError) {
  EXPECT_THROW(frequency_analysis({with_pairs({{3, 1}})}, "x"), DataError);
}

TEST(Bootstrap, PerfectDetector) {
  const std::vector<bool> adv(40, true), clean(60, false);
  for (std::size_t n : {1u, 10u, 1000u}) {
    const auto m = bootstrap_eval(adv, clean, n, 3);
    EXPECT_DOUBLE_EQ(m.tpr, 100.0);
    EXPECT_DOUBLE_EQ(m.fpr, 0.0);
    EXPECT_DOUBLE_EQ(m.f1, 100.0);
  }
}

TEST(Bootstrap, FlagEverything) {
  const std::vector<bool> adv(25, true), clean(70, true);
  const auto m = bootstrap_eval(adv, clean, 500, 1);
  EXPECT_DOUBLE_EQ(m.tpr, 100.0);
  EXPECT_DOUBLE_EQ(m.fpr, 100.0);
  EXPECT_NEAR(m.precision, 50.0, 1e-9);
  EXPECT_NEAR(m.f1, 2.0 * 50.0 * 100.0 / 150.0, 1e-9);
}

TEST(Bootstrap, TprIsFixedAndF1IsSeedStable) {
  std::vector<bool> adv, clean;
  for (int i = 0; i < 30; ++i) adv.push_back(i % 5 != 0);
  for (int i = 0; i < 50; ++i) clean.push_back(i % 7 == 0);
  const auto a = bootstrap_eval(adv, clean, 10000, 1);
  const auto b = bootstrap_eval(adv, clean, 10000, 2);
  const auto c = bootstrap_eval(adv, clean, 17, 3);
  EXPECT_DOUBLE_EQ(a.tpr, 80.0);
  EXPECT_DOUBLE_EQ(b.tpr, 80.0);
  EXPECT_DOUBLE_EQ(c.tpr, 80.0);
  EXPECT_NEAR(a.f1, b.f1, 0.5);
  // Expected FPR is the clean flag rate, 8/50.
  EXPECT_NEAR(a.fpr, 16.0, 0.5);
}

TEST(Bootstrap, DeterministicAcrossThreads) {
  std::vector<bool> adv(33), clean(41);
  for (std::size_t i = 0; i < adv.size(); ++i) adv[i] = i % 3 != 0;
  for (std::size_t i = 0; i < clean.size(); ++i) clean[i] = i % 4 == 0;
  const auto a = bootstrap_eval(adv, clean, 2000, 9, 1);
  const auto b = bootstrap_eval(adv, clean, 2000, 9, 4);
  EXPECT_EQ(a.f1, b.f1);
  EXPECT_EQ(a.fpr, b.fpr);
  EXPECT_THROW(bootstrap_eval({}, clean, 10, 1), UsageError);
  EXPECT_THROW(bootstrap_eval(adv, clean, 0, 1), UsageError);
}

DetectionResult detection(int label, int restored) {
  DetectionResult d;
  d.label = label;
  d.restored_label = restored;
  return d;
}

TEST(RestoredAccuracy, CountsRecoveredLabels) {
  EXPECT_DOUBLE_EQ(restored_accuracy({detection(1, 1), detection(0, 0)}), 100.0);
  // An identity transform leaves successful examples misclassified.
  EXPECT_DOUBLE_EQ(restored_accuracy({detection(1, 0), detection(0, 1)}), 0.0);
  EXPECT_DOUBLE_EQ(restored_accuracy({detection(1, 1), detection(0, 1),
                                      detection(1, 1), detection(1, 0)}),
                   50.0);
  EXPECT_TRUE(std::isnan(restored_accuracy({})));
}

TEST(FprSweep, DegenerateBudgets) {
  const std::vector<double> clean(10, 0.0);
  const std::vector<double> adv{0.0, 0.2, 0.5, 0.9};
  const auto zero = fpr_sweep(clean, adv, {0.0});
  EXPECT_EQ(zero[0].gamma, 0.0);
  EXPECT_DOUBLE_EQ(zero[0].tpr, 75.0);
  const std::vector<double> spread{0.05, 0.1, 0.3};
  const auto all = fpr_sweep(spread, {0.06, 0.01, 0.2}, {1.0});
  EXPECT_LT(all[0].gamma, 0.05);
  EXPECT_DOUBLE_EQ(all[0].tpr, 200.0 / 3.0);
  EXPECT_THROW(fpr_sweep(clean, adv, {0.1, 0.05}), UsageError);
}

TEST(FprSweep, MonotoneOnRandomScores) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.2, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> clean(100), adv(80);
    for (auto& v : clean) v = u(rng) * 0.3;
    for (auto& v : adv) v = u(rng);
    const auto curve = fpr_sweep(clean, adv, {0.01, 0.05, 0.10, 0.2, 0.5});
    for (std::size_t i = 1; i < curve.size(); ++i) {
      EXPECT_GE(curve[i].tpr, curve[i - 1].tpr);
      EXPECT_LE(curve[i].gamma, curve[i - 1].gamma);
    }
  }
}

TEST(Histogram, BinsBothSamples) {
  const auto h = frequency_histogram({0.0, 0.5, 2.2, 2.9}, {1.0, 3.0}, 1.0);
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0].replaced, 2u);
  EXPECT_EQ(h[1].substituted, 1u);
  EXPECT_EQ(h[2].replaced, 2u);
  EXPECT_EQ(h[3].substituted, 1u);
  EXPECT_DOUBLE_EQ(h[3].lower, 3.0);
  EXPECT_THROW(frequency_histogram({1.0}, {1.0}, 0.0), UsageError);
}

}  // namespace
}  // namespace fgws
