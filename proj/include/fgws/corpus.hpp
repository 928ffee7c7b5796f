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

// Labeled corpora, tokenization and the training-set log-frequency table.

#ifndef FGWS_CORPUS_HPP_
#define FGWS_CORPUS_HPP_

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fgws/error.hpp"
#include "fgws/util.hpp"

namespace fgws {

enum class Split { kTrain, kValidation, kTest };

inline std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

struct Sequence {
  std::vector<std::string> tokens;
  int label = 0;
  int id = 0;

  bool operator==(const Sequence&) const = default;
};

struct Corpus {
  Split split = Split::kTrain;
  std::vector<Sequence> sequences;
  int num_classes = 0;

  bool empty() const { return sequences.empty(); }
  std::size_t size() const { return sequences.size(); }
};

// Lowercases ASCII letters, isolates every ASCII punctuation character as its
// own token and splits on whitespace. Bytes >= 0x80 are kept as word
// characters so UTF-8 words survive intact.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      tokens.emplace_back(1, raw);
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : raw);
    }
  }
  flush();
  return tokens;
}

enum class CorpusFormat { kTsv };

// Reads `label<TAB>text` records. Blank lines are skipped; ids are assigned
// in file order starting at 0. When `num_classes` is 0 the class count is
// inferred as max(label) + 1 (at least 2).
inline Corpus load_corpus(const std::string& path, Split split,
                          int num_classes = 0,
                          CorpusFormat format = CorpusFormat::kTsv) {
  if (format != CorpusFormat::kTsv) throw UsageError("unsupported format");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus: " + path);
  Corpus corpus;
  corpus.split = split;
  std::string line;
  std::size_t line_no = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path, line_no, "expected 'label<TAB>text'");
    }
    int label = -1;
    const char* first = line.data();
    const char* last = line.data() + tab;
    auto [ptr, ec] = std::from_chars(first, last, label);
    if (ec != std::errc() || ptr != last || label < 0) {
      throw ParseError(path, line_no, "label is not a nonnegative integer");
    }
    Sequence seq;
    seq.tokens = tokenize(std::string_view(line).substr(tab + 1));
    if (seq.tokens.empty()) {
      throw ParseError(path, line_no, "text is empty after tokenization");
    }
    seq.label = label;
    seq.id = static_cast<int>(corpus.sequences.size());
    max_label = std::max(max_label, label);
    corpus.sequences.push_back(std::move(seq));
  }
  if (corpus.sequences.empty()) throw DataError("empty corpus: " + path);
  if (num_classes == 0) {
    num_classes = std::max(2, max_label + 1);
  } else if (max_label >= num_classes) {
    throw DataError(path + ": label " + std::to_string(max_label) +
                    " out of range for " + std::to_string(num_classes) +
                    " classes");
  }
  corpus.num_classes = num_classes;
  return corpus;
}

// One lowercase word per line; blank lines and '#' comments ignored.
inline std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    std::string word = line.substr(b, e - b + 1);
    for (char& ch : word) {
      const auto u = static_cast<unsigned char>(ch);
      if (u < 0x80) ch = static_cast<char>(std::tolower(u));
    }
    words.insert(std::move(word));
  }
  return words;
}

// Token counts of the training split and their natural logs. Words never seen
// in training have log frequency exactly 0, the same value as count-1 words.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  explicit FrequencyTable(std::unordered_map<std::string, std::int64_t> counts)
      : counts_(std::move(counts)) {
    log_freq_.reserve(counts_.size());
    for (const auto& [word, count] : counts_) {
      if (count < 1) throw DataError("frequency table count < 1 for " + word);
      log_freq_.emplace(word, std::log(static_cast<double>(count)));
    }
  }

  std::int64_t count(const std::string& word) const {
    auto it = counts_.find(word);
    return it == counts_.end() ? 0 : it->second;
  }

  double phi(const std::string& word) const {
    auto it = log_freq_.find(word);
    return it == log_freq_.end() ? 0.0 : it->second;
  }

  bool contains(const std::string& word) const {
    return counts_.count(word) != 0;
  }

  std::size_t size() const { return counts_.size(); }

  // Sorted list of distinct training words.
  std::vector<std::string> vocabulary() const {
    std::vector<std::string> words;
    words.reserve(counts_.size());
    for (const auto& entry : counts_) words.push_back(entry.first);
    std::sort(words.begin(), words.end());
    return words;
  }

  const std::unordered_map<std::string, std::int64_t>& counts() const {
    return counts_;
  }

 private:
  std::unordered_map<std::string, std::int64_t> counts_;
  std::unordered_map<std::string, double> log_freq_;
};

inline FrequencyTable build_frequency_table(const Corpus& corpus) {
  if (corpus.split != Split::kTrain) {
    throw UsageError("frequency table must be built from the train split, got " +
                     std::string(split_name(corpus.split)));
  }
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& seq : corpus.sequences) {
    for (const auto& token : seq.tokens) ++counts[token];
  }
  return FrequencyTable(std::move(counts));
}

// Hash of a sorted vocabulary list; identifies the training vocabulary a
// model was fit on.
inline std::string vocabulary_hash(const std::vector<std::string>& sorted_words) {
  std::string blob;
  for (const auto& w : sorted_words) {
    blob.append(w);
    blob.push_back('\n');
  }
  return sha256_hex(blob);
}

struct FrequencyThreshold {
  double delta = 0.0;
  int percentile_q = 0;
};

// Nearest-rank q-th percentile of {phi(w)} over the vocabulary types accepted
// by `eligible` (all types when empty).
inline FrequencyThreshold percentile_threshold(
    const FrequencyTable& table, int q,
    const std::function<bool(const std::string&)>& eligible = {}) {
  if (q < 0 || q > 100) throw UsageError("percentile q must be in [0, 100]");
  std::vector<double> values;
  values.reserve(table.size());
  for (const auto& [word, count] : table.counts()) {
    if (!eligible || eligible(word)) values.push_back(table.phi(word));
  }
  if (values.empty()) throw DataError("percentile of an empty vocabulary");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  // ceil(q * n / 100) in integer arithmetic, clamped to rank >= 1.
  std::size_t rank = (static_cast<std::size_t>(q) * n + 99) / 100;
  if (rank == 0) rank = 1;
  return FrequencyThreshold{values[rank - 1], q};
}

}  // namespace fgws

#endif  // FGWS_CORPUS_HPP_
