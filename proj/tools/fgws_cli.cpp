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

// fgws: command-line front end for training, attacking, tuning, detecting
// and reporting. Results go to files, progress to stderr and a summary JSON
// document to stdout.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fgws.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kSummarySchema = "fgws.summary/1";

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

struct Globals {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string config;
  int threads = 0;
};

struct Overrides {
  std::string train, validation, test, embeddings, synonyms, stopwords;
};

void progress(const std::string& msg) { std::cerr << "[fgws] " << msg << '\n'; }

// Config from --config (if any) with path flags layered on top. Nothing is
// loaded yet.
fgws::RunConfig resolve_config(const Globals& g, const Overrides& o) {
  fgws::RunConfig c;
  if (!g.config.empty()) {
    c = fgws::load_run_config(g.config);
  } else {
    c = fgws::run_config_from_json(json{{"seed", std::uint64_t{0}}, {"data", json::object()}},
                                   fs::current_path());
  }
  auto set = [](std::string& dst, const std::string& src) {
    if (!src.empty()) dst = src;
  };
  set(c.data.train, o.train);
  set(c.data.validation, o.validation);
  set(c.data.test, o.test);
  set(c.data.embeddings, o.embeddings);
  set(c.data.synonyms, o.synonyms);
  set(c.data.stopwords, o.stopwords);
  if (g.seed_set) c.seed = g.seed;
  if (g.threads != 0) c.threads = g.threads;
  return c;
}

std::string require(const std::string& value, const char* what) {
  if (value.empty()) {
    throw fgws::UsageError(std::string("missing ") + what +
                           " (pass the flag or set it in --config)");
  }
  return value;
}

fgws::Corpus load_train(const fgws::RunConfig& c) {
  return fgws::load_corpus(require(c.data.train, "--train"), fgws::Split::kTrain,
                           c.num_classes);
}

fgws::Lexicons load_lexicons(const fgws::RunConfig& c, bool need_embeddings) {
  fgws::Lexicons lex;
  lex.synonyms = fgws::load_synonyms(require(c.data.synonyms, "--synonyms"));
  if (need_embeddings || !c.data.embeddings.empty()) {
    lex.embeddings =
        fgws::load_embeddings(require(c.data.embeddings, "--embeddings"));
  }
  lex.metric = c.metric;
  return lex;
}

std::set<std::string> load_stopwords(const fgws::RunConfig& c) {
  if (c.data.stopwords.empty()) return {};
  return fgws::load_stopwords(c.data.stopwords);
}

std::unique_ptr<fgws::Model> load_model(const std::string& path,
                                        const fgws::FrequencyTable* table) {
  std::optional<std::string> expected;
  if (table) expected = fgws::vocabulary_hash(table->vocabulary());
  return fgws::model_from_json(fgws::read_json(path), expected);
}

std::vector<fgws::Sequence> load_sequences(const std::string& path,
                                           int num_classes, bool all_results) {
  if (path.size() > 6 && path.substr(path.size() - 6) == ".jsonl") {
    std::vector<fgws::Sequence> out;
    for (const auto& r : fgws::read_attack_results(path)) {
      if (all_results || (r.status == fgws::AttackStatus::kAttacked && r.success)) {
        out.push_back(r.perturbed);
      }
    }
    return out;
  }
  return fgws::load_corpus(path, fgws::Split::kTest, num_classes).sequences;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw fgws::UsageError("not an integer list: " + s);
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw fgws::UsageError("not a number list: " + s);
    }
  }
  return out;
}

json summary(const std::string& command, const Globals& g,
             const fgws::RunConfig& c) {
  return json{{"schema", kSummarySchema},
              {"command", command},
              {"status", "ok"},
              {"seed", c.seed},
              {"threads", fgws::resolve_threads(g.threads ? g.threads : c.threads)},
              {"outputs", json::array()},
              {"metrics", json::object()}};
}

// ---- subcommands -----------------------------------------------------------

struct TrainArgs {
  std::string family, out;
  std::optional<double> learning_rate, l2;
  std::optional<int> iterations;
};

json cmd_train(const Globals& g, const Overrides& o, const TrainArgs& a) {
  fgws::RunConfig c = resolve_config(g, o);
  fgws::TrainOptions opts = c.model;
  if (!a.family.empty()) opts.family = a.family;
  if (a.learning_rate) opts.learning_rate = *a.learning_rate;
  if (a.l2) opts.l2 = *a.l2;
  if (a.iterations) opts.iterations = *a.iterations;
  opts.seed = c.seed;
  const fgws::Corpus train = load_train(c);
  progress("training " + opts.family + " on " + std::to_string(train.size()) +
           " sequences");
  const auto model = fgws::train(train, opts);
  fgws::write_file(a.out, fgws::model_to_json(*model).dump() + "\n");
  json s = summary("train", g, c);
  s["outputs"].push_back(a.out);
  s["metrics"] = {{"family", model->family()},
                  {"num_classes", model->num_classes()},
                  {"vocabulary_size", model->vocabulary().size()},
                  {"train_accuracy", 100.0 * fgws::accuracy(*model, train)}};
  return s;
}

struct AttackArgs {
  std::string attack, model, in, out, summary_out;
  std::size_t subset = 0;
  std::optional<double> band;
  bool no_stopword_filter = false;
};

json cmd_attack(const Globals& g, const Overrides& o, const AttackArgs& a) {
  fgws::RunConfig c = resolve_config(g, o);
  const fgws::AttackKind kind = fgws::parse_attack_kind(a.attack);
  const fgws::Corpus train = load_train(c);
  const fgws::FrequencyTable table = fgws::build_frequency_table(train);
  const auto model = load_model(a.model, &table);
  const fgws::Lexicons lex = load_lexicons(c, kind == fgws::AttackKind::kGenetic);
  std::unique_ptr<fgws::KneserNeyTrigram> lm;
  if (kind == fgws::AttackKind::kGenetic) {
    lm = std::make_unique<fgws::KneserNeyTrigram>(train);
  }
  fgws::AttackConfig cfg = c.attacks.base;
  cfg.kind = kind;
  cfg.seed = c.seed;
  cfg.stopwords = load_stopwords(c);
  if (a.band) cfg.equifrequent_band = *a.band;
  if (a.no_stopword_filter) cfg.restrict_stopwords = false;
  fgws::AttackResources res{model.get(), &lex.synonyms, &lex.embeddings, lm.get(),
                            &table, c.metric};
  fgws::Corpus input =
      fgws::load_corpus(a.in, fgws::Split::kTest, model->num_classes());
  const auto seqs = fgws::sample_subset(input, a.subset, c.seed);
  progress("running " + a.attack + " on " + std::to_string(seqs.size()) +
           " sequences");
  const fgws::AttackCampaign campaign =
      fgws::run_campaign(res, seqs, cfg, c.threads);
  fgws::write_file(a.out, fgws::to_jsonl(campaign.results));
  json s = summary("attack", g, c);
  s["outputs"].push_back(a.out);
  s["metrics"] = fgws::campaign_summary_json(campaign);
  if (!a.summary_out.empty()) {
    fgws::write_file(a.summary_out, s["metrics"].dump(2) + "\n");
    s["outputs"].push_back(a.summary_out);
  }
  return s;
}

struct TuneArgs {
  std::string model, out, q_grid;
  std::optional<double> fpr_budget, fixed_gamma;
  std::optional<std::size_t> k;
};

json cmd_tune(const Globals& g, const Overrides& o, const TuneArgs& a) {
  fgws::RunConfig c = resolve_config(g, o);
  const fgws::Corpus train = load_train(c);
  const fgws::FrequencyTable table = fgws::build_frequency_table(train);
  const auto model = load_model(a.model, &table);
  const fgws::Lexicons lex = load_lexicons(c, false);
  const fgws::Corpus validation =
      fgws::load_corpus(require(c.data.validation, "--validation"),
                        fgws::Split::kValidation, model->num_classes());
  fgws::AttackConfig cfg = c.attacks.base;
  cfg.seed = c.seed;
  cfg.stopwords = load_stopwords(c);
  fgws::AttackResources res{model.get(), &lex.synonyms, &lex.embeddings, nullptr,
                            &table, c.metric};
  fgws::TuningOptions opts;
  opts.q_grid = a.q_grid.empty() ? c.detector.q_grid : parse_int_list(a.q_grid);
  opts.fpr_budget = a.fpr_budget.value_or(c.detector.fpr_budget);
  if (a.fixed_gamma) {
    opts.retune_gamma = false;
    opts.fixed_gamma = *a.fixed_gamma;
  }
  const std::size_t k = a.k ? *a.k
                            : c.detector.k_override.value_or(
                                  fgws::mean_synonym_count(lex.synonyms, train));
  progress("tuning delta over " + std::to_string(opts.q_grid.size()) +
           " percentiles");
  const fgws::TuningResult t =
      fgws::tune_delta(res, validation, cfg, lex, k, opts, c.threads);
  json tj = fgws::to_json(t);
  tj["fpr_budget"] = opts.fpr_budget;
  fgws::write_file(a.out, tj.dump(2) + "\n");
  json s = summary("tune", g, c);
  s["outputs"].push_back(a.out);
  s["metrics"] = {{"q", t.best_q},
                  {"delta", t.best_delta},
                  {"gamma", t.best_gamma},
                  {"k", t.k},
                  {"adversarial_count", t.adversarial_count}};
  return s;
}

struct DetectArgs {
  std::string method = "fgws", model, in, out, tuning;
  std::optional<double> gamma, delta;
  std::optional<int> delta_q;
  std::optional<std::size_t> k;
  bool all_results = false;
};

json cmd_detect(const Globals& g, const Overrides& o, const DetectArgs& a) {
  fgws::RunConfig c = resolve_config(g, o);
  const fgws::DetectionMethod method = fgws::parse_method(a.method);
  const fgws::Corpus train = load_train(c);
  const fgws::FrequencyTable table = fgws::build_frequency_table(train);
  const auto model = load_model(a.model, &table);
  const fgws::Lexicons lex = load_lexicons(c, false);

  fgws::DetectorConfig cfg;
  cfg.seed = c.seed;
  std::optional<fgws::TuningResult> tuned;
  json tuning_json;
  if (!a.tuning.empty()) {
    tuning_json = fgws::read_json(a.tuning);
    tuned = fgws::tuning_from_json(tuning_json);
  }
  if (a.delta_q) {
    cfg.delta = fgws::percentile_threshold(table, *a.delta_q);
  } else if (a.delta) {
    cfg.delta = {*a.delta, -1};
  } else if (tuned) {
    cfg.delta = {tuned->best_delta, tuned->best_q};
  } else if (method == fgws::DetectionMethod::kFgws) {
    throw fgws::UsageError("fgws needs --delta-q, --delta or --tuning");
  }
  if (a.gamma) {
    cfg.gamma = *a.gamma;
  } else if (tuned) {
    cfg.gamma = method == fgws::DetectionMethod::kFgws
                    ? tuned->best_gamma
                    : tuning_json.value("nws_gamma", tuned->best_gamma);
  } else {
    throw fgws::UsageError("missing --gamma (or --tuning)");
  }
  cfg.k = a.k ? *a.k
              : tuned ? tuned->k
                      : c.detector.k_override.value_or(
                            fgws::mean_synonym_count(lex.synonyms, train));
  cfg.validate();
  const auto seqs = load_sequences(a.in, model->num_classes(), a.all_results);
  progress("running " + a.method + " detection on " +
           std::to_string(seqs.size()) + " sequences");
  const auto results =
      fgws::detect_all(*model, seqs, method, cfg, table, lex, c.threads);
  fgws::write_file(a.out, fgws::to_jsonl(results));
  std::size_t flagged = 0;
  for (const auto& r : results) flagged += r.flagged;
  json s = summary("detect", g, c);
  s["outputs"].push_back(a.out);
  s["metrics"] = {{"method", a.method},
                  {"sequences", results.size()},
                  {"flagged", flagged},
                  {"delta", cfg.delta.delta},
                  {"gamma", cfg.gamma},
                  {"k", cfg.k},
                  {"restored_accuracy",
                   fgws::number_or_null(fgws::restored_accuracy(results))}};
  return s;
}

json cmd_eval(const Globals& g, const Overrides& o, const std::string& run_dir) {
  fgws::RunConfig c = resolve_config(g, o);
  const std::string dir = run_dir.empty() ? c.output_dir : run_dir;
  progress("rebuilding report from " + dir);
  const fgws::Report rep = fgws::build_report(dir, c);
  json s = summary("eval", g, c);
  for (const char* f : {"report.json", "freq_stats.csv", "detection.csv",
                        "sweep.csv", "sweep.svg"}) {
    s["outputs"].push_back((fs::path(dir) / f).string());
  }
  s["metrics"] = {{"detection", rep.json["detection"]},
                  {"unperturbed", rep.json["unperturbed"]}};
  return s;
}

struct FreqArgs {
  std::vector<std::string> in;
  std::string out;
  bool successful_only = false;
  std::optional<double> prior_scale;
};

json cmd_freq_stats(const Globals& g, const Overrides& o, const FreqArgs& a) {
  fgws::RunConfig c = resolve_config(g, o);
  std::vector<fgws::FreqStatsRow> rows;
  json metrics = json::array();
  for (const auto& path : a.in) {
    const auto results = fgws::read_attack_results(path);
    if (results.empty()) throw fgws::DataError(path + ": no attack results");
    rows.push_back(fgws::frequency_analysis(
        results, fgws::attack_name(results.front().kind),
        a.successful_only || c.stats.successful_only,
        a.prior_scale.value_or(c.stats.prior_scale)));
    metrics.push_back(fgws::to_json(rows.back()));
  }
  fgws::write_file(a.out, fgws::freq_stats_csv(rows));
  json s = summary("freq-stats", g, c);
  s["outputs"].push_back(a.out);
  s["metrics"] = {{"rows", metrics}};
  return s;
}

struct SweepArgs {
  std::string clean, out_csv, out_svg, budgets;
  std::vector<std::string> adv;
};

json cmd_sweep(const Globals& g, const Overrides& o, const SweepArgs& a) {
  fgws::RunConfig c = resolve_config(g, o);
  const std::vector<double> budgets =
      a.budgets.empty() ? c.stats.budgets : parse_double_list(a.budgets);
  const auto clean = fgws::detection_scores(fgws::read_detections(a.clean));
  std::vector<fgws::SweepSeries> series;
  json metrics = json::array();
  for (const auto& path : a.adv) {
    const auto adv = fgws::read_detections(path);
    const std::string label = fs::path(path).stem().string();
    series.push_back({label, fgws::fpr_sweep(clean, fgws::detection_scores(adv),
                                             budgets)});
    for (const auto& p : series.back().points) {
      metrics.push_back({{"series", label},
                         {"budget", p.budget},
                         {"gamma", p.gamma},
                         {"tpr", p.tpr}});
    }
  }
  fgws::write_file(a.out_csv, fgws::sweep_csv(series));
  json s = summary("sweep", g, c);
  s["outputs"].push_back(a.out_csv);
  if (!a.out_svg.empty()) {
    fgws::write_file(a.out_svg, fgws::sweep_svg(series));
    s["outputs"].push_back(a.out_svg);
  }
  s["metrics"] = {{"points", metrics}};
  return s;
}

json cmd_run_all(const Globals& g, const Overrides& o, const std::string& out_dir) {
  if (g.config.empty()) throw fgws::UsageError("run-all requires --config");
  fgws::RunConfig c = resolve_config(g, o);
  if (!out_dir.empty()) c.output_dir = out_dir;
  const fgws::RunManifest m = fgws::run_all(c, progress);
  json s = summary("run-all", g, c);
  for (const auto& a : m.artifacts) {
    s["outputs"].push_back((fs::path(c.output_dir) / a.path).string());
  }
  s["outputs"].push_back((fs::path(c.output_dir) / "manifest.json").string());
  s["metrics"] = {{"config_hash", m.config_hash},
                  {"artifacts", m.artifacts.size()}};
  return s;
}

json error_summary(const std::string& command, int code, const std::string& what) {
  return json{{"schema", kSummarySchema},
              {"command", command.empty() ? "none" : command},
              {"status", "error"},
              {"exit_code", code},
              {"error", what}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fgws: word-substitution attacks and frequency-guided detection"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Overrides o;
  app.add_option("--config", g.config, "Run config JSON (paths, knobs, seed)");
  app.add_option_function<std::uint64_t>(
      "--seed",
      [&](const std::uint64_t& s) {
        g.seed = s;
        g.seed_set = true;
      },
      "Global seed (overrides the config)");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--train", o.train, "Training split TSV");
  app.add_option("--validation", o.validation, "Validation split TSV");
  app.add_option("--test", o.test, "Test split TSV");
  app.add_option("--embeddings", o.embeddings, "Embedding file (word v1 .. vd)");
  app.add_option("--synonyms", o.synonyms, "Synonym lexicon TSV");
  app.add_option("--stopwords", o.stopwords, "Stopword list");

  auto* train = app.add_subcommand("train", "Train a classifier");
  TrainArgs ta;
  train->add_option("--family", ta.family, "naive-bayes or logreg-bow");
  train->add_option("--out", ta.out, "Model JSON to write")->required();
  train->add_option("--learning-rate", ta.learning_rate);
  train->add_option("--l2", ta.l2);
  train->add_option("--iterations", ta.iterations);

  auto* attack = app.add_subcommand("attack", "Run an attack campaign");
  AttackArgs aa;
  attack->add_option("--attack", aa.attack, "random, prioritized, genetic or pwws")
      ->required();
  attack->add_option("--model", aa.model, "Model JSON")->required();
  attack->add_option("--in", aa.in, "Sequences to attack (TSV)")->required();
  attack->add_option("--out", aa.out, "JSON-lines results")->required();
  attack->add_option("--summary-out", aa.summary_out, "Campaign summary JSON");
  attack->add_option("--subset", aa.subset, "Seeded subset size (0 = all)");
  attack->add_option("--equifrequent-band", aa.band,
                     "Only allow substitutions with |phi(w)-phi(x)| <= band");
  attack->add_flag("--no-stopword-filter", aa.no_stopword_filter,
                   "Let Random/Prioritized/PWWS substitute stopwords");

  auto* tune = app.add_subcommand("tune", "Tune delta and gamma on validation");
  TuneArgs tu;
  tune->add_option("--model", tu.model, "Model JSON")->required();
  tune->add_option("--out", tu.out, "Tuning JSON to write")->required();
  tune->add_option("--q-grid", tu.q_grid, "Comma-separated percentiles");
  tune->add_option("--fpr-budget", tu.fpr_budget);
  tune->add_option("--fixed-gamma", tu.fixed_gamma,
                   "Use one gamma for every q instead of re-tuning");
  tune->add_option("--k", tu.k, "Embedding neighbors in S(x)");

  auto* detect = app.add_subcommand("detect", "Run FGWS or NWS detection");
  DetectArgs da;
  detect->add_option("--method", da.method, "fgws or nws");
  detect->add_option("--model", da.model, "Model JSON")->required();
  detect->add_option("--in", da.in,
                     "TSV sequences, or attack JSON-lines (successful results)")
      ->required();
  detect->add_option("--out", da.out, "JSON-lines detections")->required();
  detect->add_option("--tuning", da.tuning, "Tuning JSON for delta/gamma/K");
  detect->add_option("--gamma", da.gamma);
  detect->add_option("--delta", da.delta, "Frequency threshold (log count)");
  detect->add_option("--delta-q", da.delta_q, "Frequency threshold percentile");
  detect->add_option("--k", da.k, "Embedding neighbors in S(x)");
  detect->add_flag("--all-results", da.all_results,
                   "Use every attack result, not only successful ones");

  auto* eval = app.add_subcommand("eval", "Rebuild the report from a run directory");
  std::string run_dir;
  eval->add_option("--run-dir", run_dir, "Directory written by run-all");

  auto* freq = app.add_subcommand("freq-stats", "Replaced vs substituted frequencies");
  FreqArgs fa;
  freq->add_option("--in", fa.in, "Campaign JSON-lines files")->required();
  freq->add_option("--out", fa.out, "CSV to write")->required();
  freq->add_flag("--successful-only", fa.successful_only);
  freq->add_option("--prior-scale", fa.prior_scale, "Bayes factor prior scale r");

  auto* sweep = app.add_subcommand("sweep", "TPR across FPR budgets");
  SweepArgs sa;
  sweep->add_option("--clean", sa.clean, "Clean validation detections")->required();
  sweep->add_option("--adv", sa.adv, "Adversarial detections")->required();
  sweep->add_option("--budgets", sa.budgets, "Comma-separated budgets");
  sweep->add_option("--out-csv", sa.out_csv)->required();
  sweep->add_option("--out-svg", sa.out_svg);

  auto* run_all = app.add_subcommand("run-all", "Full pipeline from a config");
  std::string out_dir;
  run_all->add_option("--out-dir", out_dir, "Override the config's output_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    std::cout << error_summary("", kUsage, e.what()).dump() << '\n';
    return kUsage;
  }

  std::string command;
  int code = kOk;
  std::string what;
  try {
    json s;
    if (*train) {
      command = "train";
      s = cmd_train(g, o, ta);
    } else if (*attack) {
      command = "attack";
      s = cmd_attack(g, o, aa);
    } else if (*tune) {
      command = "tune";
      s = cmd_tune(g, o, tu);
    } else if (*detect) {
      command = "detect";
      s = cmd_detect(g, o, da);
    } else if (*eval) {
      command = "eval";
      s = cmd_eval(g, o, run_dir);
    } else if (*freq) {
      command = "freq-stats";
      s = cmd_freq_stats(g, o, fa);
    } else if (*sweep) {
      command = "sweep";
      s = cmd_sweep(g, o, sa);
    } else {
      command = "run-all";
      s = cmd_run_all(g, o, out_dir);
    }
    std::cout << s.dump() << '\n';
    return kOk;
  } catch (const fgws::UsageError& e) {
    code = kUsage;
    what = e.what();
  } catch (const fgws::DataError& e) {
    code = kData;
    what = e.what();
  } catch (const fgws::StageError& e) {
    code = e.data_error() ? kData : kRuntime;
    what = e.what();
  } catch (const std::exception& e) {
    code = kRuntime;
    what = e.what();
  }
  std::cerr << "error: " << what << '\n';
  std::cout << error_summary(command, code, what).dump() << '\n';
  return code;
}
