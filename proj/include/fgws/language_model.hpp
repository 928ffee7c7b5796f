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

// Interpolated Kneser-Ney trigram language model, used to rank candidate
// substitutions by local fluency.

#ifndef FGWS_LANGUAGE_MODEL_HPP_
#define FGWS_LANGUAGE_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fgws/corpus.hpp"
#include "fgws/error.hpp"

namespace fgws {

class KneserNeyTrigram {
 public:
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";

  explicit KneserNeyTrigram(const Corpus& corpus, double discount = 0.75)
      : discount_(discount) {
    if (!(discount > 0.0 && discount < 1.0)) {
      throw UsageError("Kneser-Ney discount must be in (0, 1)");
    }
    std::unordered_set<std::string> bigram_seen;
    for (const auto& seq : corpus.sequences) {
      std::vector<std::string> padded{kBos, kBos};
      padded.insert(padded.end(), seq.tokens.begin(), seq.tokens.end());
      padded.emplace_back(kEos);
      for (std::size_t i = 2; i < padded.size(); ++i) {
        const std::string& u = padded[i - 2];
        const std::string& v = padded[i - 1];
        const std::string& w = padded[i];
        vocabulary_.insert(w);
        const std::string uv = key(u, v);
        const std::string uvw = key(uv, w);
        if (trigram_counts_[uvw]++ == 0) {
          ++history_types_[uv];
          // First time (u, v, w) is seen: w gains a new left context for
          // the bigram continuation count of (v, w).
          const std::string vw = key(v, w);
          if (continuation_bigram_[vw]++ == 0) {
            ++middle_types_[v];
            ++continuation_unigram_[w];
            ++total_bigram_types_;
          }
          ++middle_total_[v];
        }
        ++history_counts_[uv];
      }
    }
    if (total_bigram_types_ == 0) throw DataError("language model corpus is empty");
  }

  // log P(w | u, v) with natural log.
  double log_prob(const std::string& u, const std::string& v,
                  const std::string& w) const {
    return std::log(prob(u, v, w));
  }

  double prob(const std::string& u, const std::string& v,
              const std::string& w) const {
    const double lower = bigram_prob(v, w);
    const std::string uv = key(u, v);
    auto h = history_counts_.find(uv);
    if (h == history_counts_.end()) return lower;
    const double c_uv = static_cast<double>(h->second);
    const double c_uvw = static_cast<double>(lookup(trigram_counts_, key(uv, w)));
    const double types = static_cast<double>(lookup(history_types_, uv));
    return std::max(c_uvw - discount_, 0.0) / c_uv +
           discount_ * types / c_uv * lower;
  }

  // Mean negative log-probability of tokens[first..last] (inclusive) given
  // their true left context in `tokens`.
  double window_log_perplexity(const std::vector<std::string>& tokens,
                               std::size_t first, std::size_t last) const {
    if (tokens.empty() || first > last || last >= tokens.size()) {
      throw UsageError("invalid language model window");
    }
    double total = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
      const std::string& u = i >= 2 ? tokens[i - 2] : std::string(kBos);
      const std::string& v = i >= 1 ? tokens[i - 1] : std::string(kBos);
      total -= log_prob(u, v, tokens[i]);
    }
    return total / static_cast<double>(last - first + 1);
  }

  // Window of +-radius words around `position`, clipped to the sequence.
  double window_log_perplexity_around(const std::vector<std::string>& tokens,
                                      std::size_t position,
                                      std::size_t radius) const {
    const std::size_t first = position >= radius ? position - radius : 0;
    const std::size_t last = std::min(tokens.size() - 1, position + radius);
    return window_log_perplexity(tokens, first, last);
  }

  std::size_t vocabulary_size() const { return vocabulary_.size(); }

 private:
  static std::string key(const std::string& a, const std::string& b) {
    std::string k;
    k.reserve(a.size() + b.size() + 1);
    k.append(a);
    k.push_back('\x1f');
    k.append(b);
    return k;
  }
  template <typename Map>
  static std::int64_t lookup(const Map& map, const std::string& k) {
    auto it = map.find(k);
    return it == map.end() ? 0 : it->second;
  }

  // Continuation unigram interpolated with a uniform floor over V + 1
  // outcomes (the extra one stands for unseen words).
  double unigram_prob(const std::string& w) const {
    const double n = static_cast<double>(total_bigram_types_);
    const double cont = static_cast<double>(lookup(continuation_unigram_, w));
    const double v = static_cast<double>(continuation_unigram_.size());
    return std::max(cont - discount_, 0.0) / n +
           discount_ * v / n / (static_cast<double>(vocabulary_.size()) + 1.0);
  }

  double bigram_prob(const std::string& v, const std::string& w) const {
    const double lower = unigram_prob(w);
    auto m = middle_total_.find(v);
    if (m == middle_total_.end()) return lower;
    const double n_v = static_cast<double>(m->second);
    const double n_vw =
        static_cast<double>(lookup(continuation_bigram_, key(v, w)));
    const double types = static_cast<double>(lookup(middle_types_, v));
    return std::max(n_vw - discount_, 0.0) / n_v +
           discount_ * types / n_v * lower;
  }

  double discount_;
  std::unordered_set<std::string> vocabulary_;
  std::unordered_map<std::string, std::int64_t> trigram_counts_;
  std::unordered_map<std::string, std::int64_t> history_counts_;
  std::unordered_map<std::string, std::int64_t> history_types_;
  // N1+(. v w): distinct left contexts of the bigram (v, w).
  std::unordered_map<std::string, std::int64_t> continuation_bigram_;
  // N1+(. v .): sum over w of N1+(. v w).
  std::unordered_map<std::string, std::int64_t> middle_total_;
  // N1+(v w) counted over continuation bigrams: distinct w following v.
  std::unordered_map<std::string, std::int64_t> middle_types_;
  std::unordered_map<std::string, std::int64_t> continuation_unigram_;
  std::int64_t total_bigram_types_ = 0;
};

}  // namespace fgws

#endif  // FGWS_LANGUAGE_MODEL_HPP_
