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

// Effect sizes, JZS Bayes factors, frequency analysis of substitutions,
// bootstrap detection metrics and the FPR sweep.

#ifndef FGWS_STATS_HPP_
#define FGWS_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fgws/attacks.hpp"
#include "fgws/detector.hpp"
#include "fgws/error.hpp"
#include "fgws/util.hpp"

namespace fgws {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  // Sample variance (n - 1 denominator); 0 when n < 2.
  double variance = 0.0;
  double sd() const { return std::sqrt(variance); }
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  m.n = x.size();
  if (m.n == 0) return m;
  double sum = 0.0;
  for (double v : x) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n < 2) return m;
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.variance = ss / static_cast<double>(m.n - 1);
  return m;
}

inline double pooled_variance(const Moments& a, const Moments& b) {
  return ((a.n - 1) * a.variance + (b.n - 1) * b.variance) /
         static_cast<double>(a.n + b.n - 2);
}

inline double cohens_d(const std::vector<double>& a,
                       const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw UsageError("cohens_d needs at least 2 values per sample");
  }
  const Moments ma = moments(a), mb = moments(b);
  const double pooled = pooled_variance(ma, mb);
  if (!(pooled > 0.0)) throw DataError("cohens_d: zero pooled variance");
  return (ma.mean - mb.mean) / std::sqrt(pooled);
}

inline constexpr double kDefaultPriorScale = 0.70710678118654752440;

struct BayesFactor {
  double log10_bf10 = 0.0;
  // exp of the above; +inf when it overflows.
  double bf10 = 1.0;
  double t = 0.0;
  double df = 0.0;
  double effective_n = 0.0;
  double quadrature_error = 0.0;
};

namespace detail {

// Log of the JZS integrand over u = ln g (the Jacobian g is folded in).
inline double jzs_log_integrand(double u, double t, double nu, double n_eff,
                                double r) {
  const double g = std::exp(u);
  const double a = 1.0 + n_eff * g;
  return -0.5 * std::log(a) -
         0.5 * (nu + 1.0) * std::log1p(t * t / (a * nu)) + std::log(r) -
         0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * u - r * r / (2.0 * g);
}

}  // namespace detail

// Two-sample JZS Bayes factor with a Cauchy(0, r) prior on effect size,
// integrated over the inverse-gamma mixing variable g in the log domain.
inline BayesFactor bayes_factor_from_t(double t, double na, double nb,
                                       double r = kDefaultPriorScale) {
  if (na < 2 || nb < 2) throw UsageError("bayes_factor needs sizes >= 2");
  if (!(r > 0.0)) throw UsageError("prior scale r must be positive");
  if (!std::isfinite(t)) throw NumericalError("bayes_factor: t is not finite");
  BayesFactor bf;
  bf.t = t;
  bf.df = na + nb - 2.0;
  bf.effective_n = na * nb / (na + nb);
  const double nu = bf.df, n_eff = bf.effective_n;
  auto log_f = [&](double u) {
    return detail::jzs_log_integrand(u, t, nu, n_eff, r);
  };

  // Locate the peak on a coarse grid, then bracket where the integrand has
  // fallen by exp(-60) relative to it.
  constexpr double kLo = -60.0, kHi = 80.0, kStep = 0.05;
  double peak_u = kLo, peak = -std::numeric_limits<double>::infinity();
  for (double u = kLo; u <= kHi; u += kStep) {
    const double v = log_f(u);
    if (v > peak) {
      peak = v;
      peak_u = u;
    }
  }
  if (!std::isfinite(peak)) {
    throw NumericalError("bayes_factor: integrand has no finite peak");
  }
  constexpr double kDrop = 60.0;
  double lo = peak_u, hi = peak_u;
  while (lo > kLo - 200.0 && log_f(lo) > peak - kDrop) lo -= 0.25;
  while (hi < kHi + 400.0 && log_f(hi) > peak - kDrop) hi += 0.25;

  auto f = [&](double u) { return std::exp(log_f(u) - peak); };
  double error = 0.0;
  double integral = 0.0;
  // Integrate in unit-width panels so narrow peaks are not missed.
  for (double a = lo; a < hi; a += 1.0) {
    double panel_error = 0.0;
    const double b = std::min(a + 1.0, hi);
    integral += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 12, 1e-12, &panel_error);
    error += panel_error;
  }
  if (!(integral > 0.0) || !std::isfinite(integral) ||
      error > 1e-6 * integral) {
    std::ostringstream msg;
    msg << "bayes_factor: quadrature did not converge (integral=" << integral
        << ", error=" << error << ", t=" << t << ", df=" << nu << ", range=["
        << lo << ", " << hi << "])";
    throw NumericalError(msg.str());
  }
  const double log_null = -0.5 * (nu + 1.0) * std::log1p(t * t / nu);
  const double log_bf = peak + std::log(integral) - log_null;
  bf.log10_bf10 = log_bf / std::numbers::ln10;
  bf.bf10 = std::exp(log_bf);
  bf.quadrature_error = error / integral;
  return bf;
}

inline double t_statistic(const std::vector<double>& a,
                          const std::vector<double>& b) {
  const Moments ma = moments(a), mb = moments(b);
  const double pooled = pooled_variance(ma, mb);
  if (!(pooled > 0.0)) throw DataError("t statistic: zero pooled variance");
  const double se = std::sqrt(pooled * (1.0 / ma.n + 1.0 / mb.n));
  return (ma.mean - mb.mean) / se;
}

inline BayesFactor bayes_factor(const std::vector<double>& a,
                                const std::vector<double>& b,
                                double r = kDefaultPriorScale) {
  if (a.size() < 2 || b.size() < 2) {
    throw UsageError("bayes_factor needs at least 2 values per sample");
  }
  return bayes_factor_from_t(t_statistic(a, b), static_cast<double>(a.size()),
                             static_cast<double>(b.size()), r);
}

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  // Effect size and Bayes factor against the replaced-word sample; empty
  // when undefined (too few values or zero variance).
  std::optional<double> d;
  std::optional<BayesFactor> bf;
};

struct FreqStatsRow {
  std::string attack;
  std::size_t pairs = 0;
  SampleSummary replaced;
  SampleSummary substituted;
  SampleSummary non_oov;
};

struct FrequencySamples {
  std::vector<double> replaced;
  std::vector<double> substituted;
  std::vector<double> non_oov;
};

inline FrequencySamples frequency_samples(
    const std::vector<AttackResult>& results, bool successful_only = false) {
  FrequencySamples s;
  for (const auto& r : results) {
    if (r.status != AttackStatus::kAttacked) continue;
    if (successful_only && !r.success) continue;
    for (const auto& sub : r.substitutions) {
      const double phi_x =
          sub.replaced_count > 0 ? std::log(double(sub.replaced_count)) : 0.0;
      const double phi_w = sub.substituted_count > 0
                               ? std::log(double(sub.substituted_count))
                               : 0.0;
      s.replaced.push_back(phi_x);
      s.substituted.push_back(phi_w);
      if (sub.substituted_count >= 1) s.non_oov.push_back(phi_w);
    }
  }
  return s;
}

namespace detail {

inline SampleSummary summarize_against(const std::vector<double>& sample,
                                       const std::vector<double>& reference,
                                       double r) {
  SampleSummary s;
  const Moments m = moments(sample);
  s.n = m.n;
  s.mean = m.mean;
  s.sd = m.sd();
  if (sample.size() >= 2 && reference.size() >= 2 &&
      pooled_variance(moments(reference), m) > 0.0) {
    s.d = cohens_d(reference, sample);
    s.bf = bayes_factor(reference, sample, r);
  }
  return s;
}

}  // namespace detail

// Replaced-vs-substituted log-frequency comparison pooled over every applied
// substitution of the campaign. Effect sizes are replaced minus substituted.
inline FreqStatsRow frequency_analysis(const std::vector<AttackResult>& results,
                                       const std::string& attack,
                                       bool successful_only = false,
                                       double r = kDefaultPriorScale) {
  const FrequencySamples s = frequency_samples(results, successful_only);
  if (s.replaced.size() < 2) {
    throw DataError("frequency_analysis needs at least 2 substitution pairs (" +
                    attack + " has " + std::to_string(s.replaced.size()) + ")");
  }
  FreqStatsRow row;
  row.attack = attack;
  row.pairs = s.replaced.size();
  const Moments mr = moments(s.replaced);
  row.replaced.n = mr.n;
  row.replaced.mean = mr.mean;
  row.replaced.sd = mr.sd();
  row.substituted = detail::summarize_against(s.substituted, s.replaced, r);
  row.non_oov = detail::summarize_against(s.non_oov, s.replaced, r);
  return row;
}

struct DetectionMetrics {
  double tpr = 0.0;
  double fpr = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double restored_accuracy = std::numeric_limits<double>::quiet_NaN();
  double after_attack_accuracy = std::numeric_limits<double>::quiet_NaN();
};

// Balanced bootstrap: each resample pairs the fixed adversarial set with
// |adv| clean detections drawn with replacement. Percentages.
inline DetectionMetrics bootstrap_eval(const std::vector<bool>& adv_flagged,
                                       const std::vector<bool>& clean_flagged,
                                       std::size_t n_resamples,
                                       std::uint64_t seed, int threads = 1) {
  if (adv_flagged.empty() || clean_flagged.empty()) {
    throw UsageError("bootstrap_eval needs non-empty detection lists");
  }
  if (n_resamples == 0) throw UsageError("bootstrap_eval needs >= 1 resample");
  const std::size_t n_adv = adv_flagged.size();
  const std::size_t tp = static_cast<std::size_t>(
      std::count(adv_flagged.begin(), adv_flagged.end(), true));
  const double recall = static_cast<double>(tp) / static_cast<double>(n_adv);

  std::vector<double> fpr(n_resamples), precision(n_resamples),
      f1(n_resamples);
  parallel_for(n_resamples, threads, [&](std::size_t i) {
    Rng rng = make_rng(seed, i);
    std::uniform_int_distribution<std::size_t> pick(0, clean_flagged.size() - 1);
    std::size_t fp = 0;
    for (std::size_t j = 0; j < n_adv; ++j) fp += clean_flagged[pick(rng)];
    fpr[i] = static_cast<double>(fp) / static_cast<double>(n_adv);
    precision[i] =
        tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    f1[i] = precision[i] + recall > 0.0
                ? 2.0 * precision[i] * recall / (precision[i] + recall)
                : 0.0;
  });
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  DetectionMetrics m;
  m.tpr = 100.0 * recall;
  m.fpr = 100.0 * mean(fpr);
  m.precision = 100.0 * mean(precision);
  m.f1 = 100.0 * mean(f1);
  return m;
}

inline std::vector<bool> flags_of(const std::vector<DetectionResult>& results) {
  std::vector<bool> f;
  f.reserve(results.size());
  for (const auto& r : results) f.push_back(r.flagged);
  return f;
}

// Percentage of detections whose restored label equals the ground truth.
inline double restored_accuracy(const std::vector<DetectionResult>& detections) {
  if (detections.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t ok = 0;
  for (const auto& d : detections) ok += d.restored_label == d.label;
  return 100.0 * static_cast<double>(ok) /
         static_cast<double>(detections.size());
}

struct SweepPoint {
  double budget = 0.0;
  double gamma = 0.0;
  double tpr = 0.0;  // percentage
};

// TPR on adversarial scores as gamma is re-derived from the clean scores for
// each budget.
inline std::vector<SweepPoint> fpr_sweep(const std::vector<double>& clean_scores,
                                         const std::vector<double>& adv_scores,
                                         const std::vector<double>& budgets) {
  if (!std::is_sorted(budgets.begin(), budgets.end())) {
    throw UsageError("fpr_sweep budgets must be sorted ascending");
  }
  if (adv_scores.empty()) throw UsageError("fpr_sweep needs adversarial scores");
  std::vector<SweepPoint> curve;
  for (double b : budgets) {
    SweepPoint p;
    p.budget = b;
    p.gamma = threshold_for_budget(clean_scores, b);
    std::size_t caught = 0;
    for (double s : adv_scores) caught += s > p.gamma;
    p.tpr = 100.0 * static_cast<double>(caught) /
            static_cast<double>(adv_scores.size());
    curve.push_back(p);
  }
  return curve;
}

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t replaced = 0;
  std::size_t substituted = 0;
};

// Paired histogram of replaced and substituted log frequencies.
inline std::vector<HistogramBin> frequency_histogram(
    const std::vector<double>& replaced, const std::vector<double>& substituted,
    double bin_width = 1.0) {
  if (!(bin_width > 0.0)) throw UsageError("bin width must be positive");
  double max_v = 0.0;
  for (double v : replaced) max_v = std::max(max_v, v);
  for (double v : substituted) max_v = std::max(max_v, v);
  const auto bins =
      static_cast<std::size_t>(std::floor(max_v / bin_width)) + 1;
  std::vector<HistogramBin> h(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h[i].lower = static_cast<double>(i) * bin_width;
    h[i].upper = static_cast<double>(i + 1) * bin_width;
  }
  auto index = [&](double v) {
    return std::min(bins - 1,
                    static_cast<std::size_t>(std::floor(std::max(0.0, v) / bin_width)));
  };
  for (double v : replaced) ++h[index(v)].replaced;
  for (double v : substituted) ++h[index(v)].substituted;
  return h;
}

}  // namespace fgws

#endif  // FGWS_STATS_HPP_
