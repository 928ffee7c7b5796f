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

// The probabilistic classifier contract f(X) and two built-in bag-of-words
// models that satisfy it.

#ifndef FGWS_CLASSIFIER_HPP_
#define FGWS_CLASSIFIER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "fgws/corpus.hpp"
#include "fgws/error.hpp"

namespace fgws {

using TokenSpan = std::span<const std::string>;

struct Prediction {
  std::vector<double> probabilities;
  int label = 0;
};

// Index of the largest probability; the lowest index wins ties.
inline int argmax_label(const std::vector<double>& probabilities) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(probabilities.size()); ++c) {
    if (probabilities[c] > probabilities[best]) best = c;
  }
  return best;
}

// Numerically stable softmax of log-scores.
inline std::vector<double> softmax(const std::vector<double>& scores) {
  const double m = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

// Any classifier exposing class probabilities. Implementations must be
// immutable after construction so predict is safe to call concurrently.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string family() const = 0;
  virtual int num_classes() const = 0;
  // Sorted training vocabulary.
  virtual const std::vector<std::string>& vocabulary() const = 0;
  virtual std::vector<double> predict_proba(TokenSpan tokens) const = 0;
  virtual nlohmann::json parameters_json() const = 0;

  Prediction predict(TokenSpan tokens) const {
    if (tokens.empty()) throw UsageError("cannot classify an empty sequence");
    Prediction p;
    p.probabilities = predict_proba(tokens);
    p.label = argmax_label(p.probabilities);
    return p;
  }
  Prediction predict(const Sequence& seq) const { return predict(seq.tokens); }
};

// Multinomial naive Bayes with add-one smoothing. Tokens outside the training
// vocabulary are skipped.
class NaiveBayesModel final : public Model {
 public:
  NaiveBayesModel(int num_classes, std::vector<std::int64_t> class_docs,
                  std::unordered_map<std::string, std::vector<std::int64_t>>
                      word_counts)
      : num_classes_(num_classes),
        class_docs_(std::move(class_docs)),
        word_counts_(std::move(word_counts)) {
    if (static_cast<int>(class_docs_.size()) != num_classes_) {
      throw DataError("naive-bayes: class count mismatch");
    }
    class_tokens_.assign(num_classes_, 0);
    vocabulary_.reserve(word_counts_.size());
    for (const auto& [word, counts] : word_counts_) {
      if (static_cast<int>(counts.size()) != num_classes_) {
        throw DataError("naive-bayes: bad count vector for " + word);
      }
      for (int c = 0; c < num_classes_; ++c) class_tokens_[c] += counts[c];
      vocabulary_.push_back(word);
    }
    std::sort(vocabulary_.begin(), vocabulary_.end());
    std::int64_t total_docs = 0;
    for (auto d : class_docs_) total_docs += d;
    const double v = static_cast<double>(vocabulary_.size());
    log_prior_.resize(num_classes_);
    for (int c = 0; c < num_classes_; ++c) {
      log_prior_[c] = std::log(static_cast<double>(class_docs_[c]) /
                               static_cast<double>(total_docs));
    }
    for (const auto& [word, counts] : word_counts_) {
      std::vector<double> ll(num_classes_);
      for (int c = 0; c < num_classes_; ++c) {
        ll[c] = std::log((static_cast<double>(counts[c]) + 1.0) /
                         (static_cast<double>(class_tokens_[c]) + v));
      }
      log_likelihood_.emplace(word, std::move(ll));
    }
  }

  std::string family() const override { return "naive-bayes"; }
  int num_classes() const override { return num_classes_; }
  const std::vector<std::string>& vocabulary() const override {
    return vocabulary_;
  }

  std::vector<double> predict_proba(TokenSpan tokens) const override {
    std::vector<double> scores = log_prior_;
    for (const auto& t : tokens) {
      auto it = log_likelihood_.find(t);
      if (it == log_likelihood_.end()) continue;
      for (int c = 0; c < num_classes_; ++c) scores[c] += it->second[c];
    }
    return softmax(scores);
  }

  nlohmann::json parameters_json() const override {
    nlohmann::json words = nlohmann::json::object();
    for (const auto& w : vocabulary_) words[w] = word_counts_.at(w);
    return {{"class_docs", class_docs_}, {"word_counts", std::move(words)}};
  }

  const std::vector<double>& log_prior() const { return log_prior_; }
  const std::vector<double>* log_likelihood(const std::string& word) const {
    auto it = log_likelihood_.find(word);
    return it == log_likelihood_.end() ? nullptr : &it->second;
  }

 private:
  int num_classes_;
  std::vector<std::int64_t> class_docs_;
  std::vector<std::int64_t> class_tokens_;
  std::unordered_map<std::string, std::vector<std::int64_t>> word_counts_;
  std::vector<std::string> vocabulary_;
  std::vector<double> log_prior_;
  std::unordered_map<std::string, std::vector<double>> log_likelihood_;
};

// Softmax regression over bag-of-words counts. Unknown tokens contribute a
// zero feature.
class LogRegBowModel final : public Model {
 public:
  // `weights` is row-major num_classes x vocabulary.size().
  LogRegBowModel(int num_classes, std::vector<std::string> sorted_vocabulary,
                 std::vector<double> weights, std::vector<double> bias)
      : num_classes_(num_classes),
        vocabulary_(std::move(sorted_vocabulary)),
        weights_(std::move(weights)),
        bias_(std::move(bias)) {
    if (weights_.size() != vocabulary_.size() * num_classes_ ||
        static_cast<int>(bias_.size()) != num_classes_) {
      throw DataError("logreg-bow: parameter shape mismatch");
    }
    for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
      index_.emplace(vocabulary_[i], i);
    }
  }

  std::string family() const override { return "logreg-bow"; }
  int num_classes() const override { return num_classes_; }
  const std::vector<std::string>& vocabulary() const override {
    return vocabulary_;
  }

  std::vector<double> predict_proba(TokenSpan tokens) const override {
    std::vector<double> scores = bias_;
    const std::size_t v = vocabulary_.size();
    for (const auto& t : tokens) {
      auto it = index_.find(t);
      if (it == index_.end()) continue;
      for (int c = 0; c < num_classes_; ++c) {
        scores[c] += weights_[c * v + it->second];
      }
    }
    return softmax(scores);
  }

  nlohmann::json parameters_json() const override {
    return {{"weights", weights_}, {"bias", bias_}};
  }

 private:
  int num_classes_;
  std::vector<std::string> vocabulary_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TrainOptions {
  std::string family = "naive-bayes";
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 1e-3;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_trainable(const Corpus& corpus) {
  if (corpus.empty()) throw UsageError("cannot train on an empty corpus");
  std::vector<bool> seen(corpus.num_classes, false);
  int distinct = 0;
  for (const auto& s : corpus.sequences) {
    if (s.label < 0 || s.label >= corpus.num_classes) {
      throw DataError("label out of range in training corpus");
    }
    if (!seen[s.label]) {
      seen[s.label] = true;
      ++distinct;
    }
  }
  if (distinct < 2) throw DataError("training corpus has a single class");
}

}  // namespace detail

inline std::unique_ptr<NaiveBayesModel> train_naive_bayes(const Corpus& corpus) {
  detail::check_trainable(corpus);
  const int c = corpus.num_classes;
  std::vector<std::int64_t> docs(c, 0);
  std::unordered_map<std::string, std::vector<std::int64_t>> counts;
  for (const auto& s : corpus.sequences) {
    ++docs[s.label];
    for (const auto& t : s.tokens) {
      auto& v = counts[t];
      if (v.empty()) v.assign(c, 0);
      ++v[s.label];
    }
  }
  return std::make_unique<NaiveBayesModel>(c, std::move(docs),
                                           std::move(counts));
}

// Full-batch objective for the bag-of-words softmax regression:
//   L(W, b) = mean_i -log softmax(W x_i + b)_{y_i} + (l2 / 2) ||W||^2
// Parameters are flattened as [W row-major (C x V), b (C)].
class LogRegObjective {
 public:
  LogRegObjective(const Corpus& corpus, std::vector<std::string> vocabulary,
                  double l2)
      : num_classes_(corpus.num_classes),
        vocabulary_(std::move(vocabulary)),
        l2_(l2) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
      index.emplace(vocabulary_[i], i);
    }
    for (const auto& s : corpus.sequences) {
      std::unordered_map<std::size_t, double> bag;
      for (const auto& t : s.tokens) {
        auto it = index.find(t);
        if (it != index.end()) bag[it->second] += 1.0;
      }
      Row row;
      row.label = s.label;
      row.features.assign(bag.begin(), bag.end());
      std::sort(row.features.begin(), row.features.end());
      rows_.push_back(std::move(row));
    }
  }

  std::size_t num_parameters() const {
    return num_classes_ * (vocabulary_.size() + 1);
  }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  int num_classes() const { return num_classes_; }

  // Returns the loss; writes the gradient when `gradient` is non-null.
  double evaluate(const std::vector<double>& params,
                  std::vector<double>* gradient) const {
    const std::size_t v = vocabulary_.size();
    const std::size_t bias_offset = num_classes_ * v;
    if (gradient) gradient->assign(params.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(rows_.size());
    double loss = 0.0;
    std::vector<double> scores(num_classes_);
    for (const auto& row : rows_) {
      for (int c = 0; c < num_classes_; ++c) {
        double z = params[bias_offset + c];
        for (const auto& [j, x] : row.features) z += params[c * v + j] * x;
        scores[c] = z;
      }
      const double m = *std::max_element(scores.begin(), scores.end());
      double sum = 0.0;
      for (double s : scores) sum += std::exp(s - m);
      const double log_z = m + std::log(sum);
      loss += (log_z - scores[row.label]) * inv_n;
      if (!gradient) continue;
      for (int c = 0; c < num_classes_; ++c) {
        const double residual =
            (std::exp(scores[c] - log_z) - (c == row.label ? 1.0 : 0.0)) *
            inv_n;
        (*gradient)[bias_offset + c] += residual;
        for (const auto& [j, x] : row.features) {
          (*gradient)[c * v + j] += residual * x;
        }
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < bias_offset; ++i) {
      norm += params[i] * params[i];
      if (gradient) (*gradient)[i] += l2_ * params[i];
    }
    return loss + 0.5 * l2_ * norm;
  }

 private:
  struct Row {
    int label = 0;
    std::vector<std::pair<std::size_t, double>> features;
  };
  int num_classes_;
  std::vector<std::string> vocabulary_;
  double l2_;
  std::vector<Row> rows_;
};

// Gradient descent with a fixed step from zero initialization. The loss
// before each step is appended to `loss_history` when given.
inline std::unique_ptr<LogRegBowModel> train_logreg_bow(
    const Corpus& corpus, const TrainOptions& options,
    std::vector<double>* loss_history = nullptr) {
  detail::check_trainable(corpus);
  if (options.iterations < 0 || !(options.learning_rate > 0.0) ||
      options.l2 < 0.0) {
    throw UsageError("logreg-bow: invalid hyperparameters");
  }
  LogRegObjective objective(corpus,
                            build_frequency_table(corpus).vocabulary(),
                            options.l2);
  std::vector<double> params(objective.num_parameters(), 0.0);
  std::vector<double> grad;
  for (int it = 0; it < options.iterations; ++it) {
    const double loss = objective.evaluate(params, &grad);
    if (loss_history) loss_history->push_back(loss);
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i] -= options.learning_rate * grad[i];
    }
  }
  if (loss_history) loss_history->push_back(objective.evaluate(params, nullptr));
  const std::size_t v = objective.vocabulary().size();
  const int c = corpus.num_classes;
  std::vector<double> weights(params.begin(), params.begin() + c * v);
  std::vector<double> bias(params.begin() + c * v, params.end());
  return std::make_unique<LogRegBowModel>(c, objective.vocabulary(),
                                          std::move(weights), std::move(bias));
}

inline std::unique_ptr<Model> train(const Corpus& corpus,
                                    const TrainOptions& options) {
  if (corpus.split != Split::kTrain) {
    throw UsageError("models are trained on the train split");
  }
  if (options.family == "naive-bayes") return train_naive_bayes(corpus);
  if (options.family == "logreg-bow") return train_logreg_bow(corpus, options);
  throw UsageError("unknown model family '" + options.family +
                   "' (expected naive-bayes or logreg-bow)");
}

// Fraction of sequences whose predicted label equals the gold label.
inline double accuracy(const Model& model, const Corpus& corpus) {
  if (corpus.empty()) throw UsageError("accuracy of an empty corpus");
  std::size_t correct = 0;
  for (const auto& s : corpus.sequences) {
    if (model.predict(s).label == s.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

// Versioned JSON blob: family tag, vocabulary + its hash, parameters.
inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json model_to_json(const Model& model) {
  return {{"format", "fgws-model"},
          {"version", kModelFormatVersion},
          {"family", model.family()},
          {"num_classes", model.num_classes()},
          {"vocabulary_hash", vocabulary_hash(model.vocabulary())},
          {"vocabulary", model.vocabulary()},
          {"parameters", model.parameters_json()}};
}

// Rebuilds a model. Refuses blobs whose stored vocabulary does not hash to
// the recorded value, or whose hash differs from `expected_vocabulary_hash`.
inline std::unique_ptr<Model> model_from_json(
    const nlohmann::json& blob,
    const std::optional<std::string>& expected_vocabulary_hash = {}) {
  try {
    if (blob.at("format") != "fgws-model") {
      throw DataError("not an fgws model blob");
    }
    if (blob.at("version").get<int>() != kModelFormatVersion) {
      throw DataError("unsupported model format version");
    }
    const auto vocab = blob.at("vocabulary").get<std::vector<std::string>>();
    const auto stored_hash = blob.at("vocabulary_hash").get<std::string>();
    if (vocabulary_hash(vocab) != stored_hash) {
      throw DataError("model vocabulary does not match its stored hash");
    }
    if (expected_vocabulary_hash && *expected_vocabulary_hash != stored_hash) {
      throw DataError(
          "model vocabulary hash mismatch: model was trained on a different "
          "vocabulary");
    }
    const int c = blob.at("num_classes").get<int>();
    const auto& params = blob.at("parameters");
    const auto family = blob.at("family").get<std::string>();
    if (family == "naive-bayes") {
      auto docs = params.at("class_docs").get<std::vector<std::int64_t>>();
      std::unordered_map<std::string, std::vector<std::int64_t>> counts;
      for (const auto& [word, v] : params.at("word_counts").items()) {
        counts.emplace(word, v.get<std::vector<std::int64_t>>());
      }
      auto model = std::make_unique<NaiveBayesModel>(c, std::move(docs),
                                                     std::move(counts));
      if (model->vocabulary() != vocab) {
        throw DataError("naive-bayes vocabulary inconsistent with counts");
      }
      return model;
    }
    if (family == "logreg-bow") {
      return std::make_unique<LogRegBowModel>(
          c, vocab, params.at("weights").get<std::vector<double>>(),
          params.at("bias").get<std::vector<double>>());
    }
    throw DataError("unknown model family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model blob: ") + e.what());
  }
}

}  // namespace fgws

#endif  // FGWS_CLASSIFIER_HPP_
