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

// Substitution candidates: a flattened synonym lexicon, a static word
// embedding space with exhaustive nearest-neighbor search, and their union.

#ifndef FGWS_LEXICON_HPP_
#define FGWS_LEXICON_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fgws/corpus.hpp"
#include "fgws/error.hpp"

namespace fgws {

class SynonymLexicon {
 public:
  SynonymLexicon() = default;

  // Adds a headword. Self references and duplicates are dropped; the first
  // occurrence order is kept.
  void add(const std::string& word, const std::vector<std::string>& synonyms) {
    if (entries_.count(word)) throw DataError("duplicate headword: " + word);
    std::vector<std::string> kept;
    std::unordered_set<std::string> seen;
    for (const auto& s : synonyms) {
      if (s == word || !seen.insert(s).second) continue;
      kept.push_back(s);
    }
    entries_.emplace(word, std::move(kept));
  }

  // Total: unknown words have no synonyms.
  const std::vector<std::string>& synonyms(const std::string& word) const {
    static const std::vector<std::string> kEmpty;
    auto it = entries_.find(word);
    return it == entries_.end() ? kEmpty : it->second;
  }

  bool contains(const std::string& word) const {
    return entries_.count(word) != 0;
  }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

// Parses `word<TAB>syn1,syn2,...` lines.
inline SynonymLexicon load_synonyms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open synonym file: " + path);
  SynonymLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  auto valid_word = [](const std::string& w) {
    return !w.empty() && w.find_first_of(" \t,") == std::string::npos;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path, line_no, "expected 'word<TAB>syn1,syn2,...'");
    }
    const std::string head = line.substr(0, tab);
    if (!valid_word(head)) throw ParseError(path, line_no, "invalid headword");
    std::vector<std::string> synonyms;
    std::stringstream rest(line.substr(tab + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (!valid_word(item)) {
        throw ParseError(path, line_no, "invalid synonym '" + item + "'");
      }
      synonyms.push_back(item);
    }
    if (lexicon.contains(head)) {
      throw ParseError(path, line_no, "duplicate headword '" + head + "'");
    }
    lexicon.add(head, synonyms);
  }
  return lexicon;
}

enum class DistanceMetric { kEuclidean, kCosine };

struct Neighbor {
  std::string word;
  double distance = 0.0;
};

class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;
  explicit EmbeddingSpace(std::size_t dimension) : dimension_(dimension) {}

  void add(const std::string& word, const std::vector<double>& vector) {
    if (dimension_ == 0) dimension_ = vector.size();
    if (vector.size() != dimension_ || dimension_ == 0) {
      throw DataError("embedding for '" + word + "' has dimension " +
                      std::to_string(vector.size()) + ", expected " +
                      std::to_string(dimension_));
    }
    for (double v : vector) {
      if (!std::isfinite(v)) {
        throw DataError("non-finite embedding value for '" + word + "'");
      }
    }
    if (index_.count(word)) throw DataError("duplicate embedding: " + word);
    index_.emplace(word, words_.size());
    words_.push_back(word);
    data_.insert(data_.end(), vector.begin(), vector.end());
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  bool contains(const std::string& word) const {
    return index_.count(word) != 0;
  }
  const std::vector<std::string>& words() const { return words_; }

  // Pointer to the row of `word`, or nullptr when absent.
  const double* vector(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? nullptr : &data_[it->second * dimension_];
  }
  const double* row(std::size_t i) const { return &data_[i * dimension_]; }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Parses `word v1 v2 ... vd` lines (space separated decimals).
inline EmbeddingSpace load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);
  EmbeddingSpace space;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    values.clear();
    std::string token;
    while (fields >> token) {
      double v = 0.0;
      const char* end = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(token.data(), end, v);
      if (ec != std::errc() || ptr != end) {
        throw ParseError(path, line_no, "bad number '" + token + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) throw ParseError(path, line_no, "missing vector");
    try {
      space.add(word, values);
    } catch (const DataError& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  if (space.size() == 0) throw DataError("empty embedding file: " + path);
  return space;
}

namespace detail {

inline double distance(const double* a, const double* b, std::size_t d,
                       DistanceMetric metric) {
  if (metric == DistanceMetric::kEuclidean) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = a[i] - b[i];
      sum += diff * diff;
    }
    return std::sqrt(sum);
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / std::sqrt(na * nb);
}

}  // namespace detail

// The k words closest to `word` (excluding itself), ascending by distance with
// lexicographic tie-break. Exhaustive scan.
inline std::vector<Neighbor> nearest_neighbors_with_distance(
    const EmbeddingSpace& space, const std::string& word, std::size_t k,
    DistanceMetric metric = DistanceMetric::kEuclidean) {
  std::vector<Neighbor> out;
  const double* query = space.vector(word);
  if (query == nullptr || k == 0) return out;
  std::vector<Neighbor> all;
  all.reserve(space.size());
  const auto& words = space.words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i] == word) continue;
    all.push_back(
        {words[i], detail::distance(query, space.row(i), space.dimension(),
                                    metric)});
  }
  auto less = [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.word < b.word;
  };
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + take, all.end(), less);
  all.resize(take);
  return all;
}

inline std::vector<std::string> nearest_neighbors(
    const EmbeddingSpace& space, const std::string& word, std::size_t k,
    DistanceMetric metric = DistanceMetric::kEuclidean) {
  if (k == 0) throw UsageError("nearest_neighbors requires K >= 1");
  std::vector<std::string> out;
  for (auto& n : nearest_neighbors_with_distance(space, word, k, metric)) {
    out.push_back(std::move(n.word));
  }
  return out;
}

struct CandidateSet {
  std::string source_word;
  // Synonyms first (lexicon order), then embedding neighbors by distance.
  std::vector<std::string> candidates;
};

// Both candidate sources, bundled so callers pass them around together.
struct Lexicons {
  SynonymLexicon synonyms;
  EmbeddingSpace embeddings;
  DistanceMetric metric = DistanceMetric::kEuclidean;
};

// S(x) = synonyms(x) union kNN(x, K), without x and without duplicates.
inline CandidateSet candidate_set(const std::string& word,
                                  const SynonymLexicon& lexicon,
                                  const EmbeddingSpace& space, std::size_t k,
                                  DistanceMetric metric =
                                      DistanceMetric::kEuclidean) {
  CandidateSet set{word, {}};
  std::unordered_set<std::string> seen{word};
  for (const auto& s : lexicon.synonyms(word)) {
    if (seen.insert(s).second) set.candidates.push_back(s);
  }
  if (k > 0) {
    for (auto& n : nearest_neighbors_with_distance(space, word, k, metric)) {
      if (seen.insert(n.word).second) set.candidates.push_back(std::move(n.word));
    }
  }
  return set;
}

inline CandidateSet candidate_set(const std::string& word,
                                  const Lexicons& lexicons, std::size_t k) {
  return candidate_set(word, lexicons.synonyms, lexicons.embeddings, k,
                       lexicons.metric);
}

enum class SynonymAveraging { kPerType, kPerToken };

// K = round-half-up of the mean synonym count over the corpus' token types
// (or token occurrences), at least 1.
inline std::size_t mean_synonym_count(
    const SynonymLexicon& lexicon, const Corpus& corpus,
    SynonymAveraging averaging = SynonymAveraging::kPerType) {
  if (corpus.empty()) throw UsageError("mean_synonym_count on empty corpus");
  double total = 0.0;
  std::size_t n = 0;
  if (averaging == SynonymAveraging::kPerType) {
    std::unordered_set<std::string> types;
    for (const auto& seq : corpus.sequences) {
      types.insert(seq.tokens.begin(), seq.tokens.end());
    }
    for (const auto& t : types) total += lexicon.synonyms(t).size();
    n = types.size();
  } else {
    for (const auto& seq : corpus.sequences) {
      for (const auto& t : seq.tokens) total += lexicon.synonyms(t).size();
      n += seq.tokens.size();
    }
  }
  const double mean = total / static_cast<double>(n);
  const auto k = static_cast<std::size_t>(std::floor(mean + 0.5));
  return std::max<std::size_t>(1, k);
}

}  // namespace fgws

#endif  // FGWS_LEXICON_HPP_
