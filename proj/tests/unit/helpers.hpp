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

#ifndef FGWS_TESTS_UNIT_HELPERS_HPP_
#define FGWS_TESTS_UNIT_HELPERS_HPP_

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fgws.hpp"

namespace fgws::testing {

// Fresh directory under the system temp dir, unique per test name.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fgws_unit_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string write_temp(const std::string& name,
                              const std::string& contents) {
  auto path = scratch_dir(name) / "file";
  write_file(path.string(), contents);
  return path.string();
}

inline Corpus make_corpus(Split split,
                          const std::vector<std::pair<int, std::string>>& rows) {
  Corpus c;
  c.split = split;
  int id = 0;
  int max_label = 1;
  for (const auto& [label, text] : rows) {
    c.sequences.push_back({tokenize(text), label, id++});
    max_label = std::max(max_label, label);
  }
  c.num_classes = max_label + 1;
  return c;
}

inline std::string data_dir() { return FGWS_DATA_DIR; }

// A tiny sentiment corpus where "good"/"bad" carry the label.
inline Corpus tiny_train() {
  return make_corpus(Split::kTrain, {{1, "a good movie"},
                                     {1, "good fun and good cast"},
                                     {1, "great good film"},
                                     {0, "a bad movie"},
                                     {0, "bad plot and bad cast"},
                                     {0, "awful bad film"}});
}

// Model exposing fixed probabilities keyed on the presence of words.
class ScriptedModel final : public Model {
 public:
  using Fn = std::function<std::vector<double>(TokenSpan)>;
  ScriptedModel(int classes, Fn fn) : classes_(classes), fn_(std::move(fn)) {}
  std::string family() const override { return "scripted"; }
  int num_classes() const override { return classes_; }
  const std::vector<std::string>& vocabulary() const override { return vocab_; }
  std::vector<double> predict_proba(TokenSpan tokens) const override {
    return fn_(tokens);
  }
  nlohmann::json parameters_json() const override { return {}; }

 private:
  int classes_;
  Fn fn_;
  std::vector<std::string> vocab_;
};

}  // namespace fgws::testing

#endif  // FGWS_TESTS_UNIT_HELPERS_HPP_
