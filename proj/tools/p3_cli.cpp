// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// p3: command-line front end for the selection engine.
//
// Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 numerical
// failure (NotPSD), 4 trainer hook failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "p3/config.hpp"
#include "p3/dataset.hpp"
#include "p3/error.hpp"
#include "p3/fs.hpp"
#include "p3/manifest.hpp"
#include "p3/mock_scorer.hpp"
#include "p3/pipeline.hpp"
#include "p3/report.hpp"
#include "p3/simulate.hpp"

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cout << line << '\n';
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string epoch_line(const p3::SelectionManifest& m, size_t k) {
  std::ostringstream os;
  os << "epoch " << m.epoch << ": strategy=" << p3::to_string(m.strategy);
  if (m.lambda) os << " lambda=" << fmt(*m.lambda);
  if (m.percentile) os << " percentile=" << fmt(*m.percentile);
  os << " pool=" << m.pool_size << " kept=" << m.kept_size << " k=" << k
     << " selected=" << m.selected.size() << " expanded=" << (m.expanded ? "true" : "false")
     << " rank_fill=" << m.rank_fill << " jitter=" << fmt(m.jitter);
  return os.str();
}

fs::path require_out(const Globals& g) {
  if (g.out.empty()) throw UsageError("--out is required");
  return fs::path(g.out);
}

p3::RunConfig require_config(const Globals& g) {
  if (g.config.empty()) throw UsageError("--config is required");
  if (!fs::exists(g.config)) throw UsageError("config file not found: " + g.config);
  p3::RunConfig config;
  try {
    config = p3::load_config(g.config);
  } catch (const p3::Error& e) {
    throw UsageError(e.what());
  }
  if (g.seed) config.seed = *g.seed;
  return config;
}

fs::path state_dir_for(const fs::path& out) {
  if (const char* env = std::getenv("P3_STATE_DIR"); env && *env) return fs::path(env);
  return out / "state";
}

// ---- validate --------------------------------------------------------------

int cmd_validate(const Globals& g, const std::string& dataset_path,
                 const std::vector<std::string>& score_paths) {
  (void)g;
  size_t problems = 0;
  auto read = p3::read_dataset(dataset_path);
  for (const auto& issue : read.issues) {
    std::cout << p3::format_issue(dataset_path, issue) << '\n';
    ++problems;
  }
  std::optional<p3::Dataset> dataset;
  if (read.issues.empty()) {
    if (read.samples.empty()) {
      std::cout << fs::path(dataset_path).filename().string() << ": no samples\n";
      ++problems;
    } else {
      dataset.emplace(std::move(read.samples));
    }
  }

  size_t scored = 0;
  for (const auto& path : score_paths) {
    auto scores = p3::read_scores(path);
    for (const auto& issue : scores.issues) {
      std::cout << p3::format_issue(path, issue) << '\n';
      ++problems;
    }
    if (dataset) {
      for (const auto& issue : p3::check_scores_against(*dataset, scores, std::nullopt)) {
        std::cout << p3::format_issue(path, issue) << '\n';
        ++problems;
      }
    }
    scored += scores.records.size();
  }

  if (problems > 0) {
    std::cout << "FAILED: " << problems << " problem(s)\n";
    return static_cast<int>(p3::ExitStatus::kData);
  }
  std::cout << "OK N=" << dataset->size() << ", scored=" << scored << '\n';
  return 0;
}

// ---- select / baseline -----------------------------------------------------

int run_selection(const Globals& g, p3::RunConfig config, const std::string& dataset_path,
                  const std::string& scores_dir, std::optional<int> epoch,
                  const std::string& hook_command, bool diagnostics) {
  const fs::path out = require_out(g);
  config.validate();
  const p3::Dataset dataset = p3::load_dataset(dataset_path);

  std::optional<p3::DirectoryScoreSource> source;
  if (!scores_dir.empty()) source.emplace(scores_dir);
  p3::ScoreSource* src = source ? &*source : nullptr;

  p3::RunOptions options;
  options.manifest_dir = out / "manifests";
  options.state_dir = state_dir_for(out);
  options.kernel_diagnostics = diagnostics;

  p3::TrainerHook external;
  if (!hook_command.empty()) external = p3::external_command_hook(hook_command);
  auto hook = [&](const p3::SelectionManifest& m, const fs::path& path) {
    say(g, epoch_line(m, m.epoch == 0 ? config.warmup_k : config.k));
    if (external) external(m, path);
  };

  if (!epoch) {
    auto manifests = p3::run(dataset, src, config, hook, options);
    say(g, "wrote " + std::to_string(manifests.size()) + " manifest(s) to " +
               options.manifest_dir.string());
    return 0;
  }

  const int e = *epoch;
  if (e < 1 || e > config.epochs()) {
    throw UsageError("--epoch must lie in [1, " + std::to_string(config.epochs()) + "]");
  }
  p3::DirectoryLock lock(options.state_dir / "lock");
  p3::EpochState state;
  if (e == 1) {
    state.config_hash = p3::config_hash(config);
    if (config.warmup_k > 0) {
      auto warm = p3::warmup_select(dataset, config);
      hook(warm, p3::write_manifest(options.manifest_dir, warm));
    }
  } else {
    state = p3::load_state(options.state_dir);
    if (state.epoch != e - 1) {
      throw p3::Error(p3::ErrorCode::kMissingState,
                      "missing state: state is at epoch " + std::to_string(state.epoch) +
                          ", epoch " + std::to_string(e) + " needs epoch " +
                          std::to_string(e - 1));
    }
    if (state.config_hash != p3::config_hash(config)) {
      throw p3::Error(p3::ErrorCode::kSchemaError,
                      "state was written with a different config (hash " +
                          state.config_hash + ")");
    }
  }
  p3::run_epoch(dataset, src, config, state, hook, options);
  return 0;
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const Globals& g, const std::string& spec_path) {
  const fs::path out = require_out(g);
  if (spec_path.empty() || !fs::exists(spec_path)) {
    throw UsageError("spec file not found: " + spec_path);
  }
  p3::SynthSpec spec = p3::load_synth_spec(spec_path);
  if (g.seed) spec.run.seed = *g.seed;
  const auto result = p3::simulate(spec, out);
  say(g, p3::summary_header());
  for (const auto& s : result.epochs) say(g, p3::summary_row(s));
  return 0;
}

// ---- report ----------------------------------------------------------------

int cmd_report(const Globals& g, const std::string& manifest_dir,
               const std::string& scores_dir, const std::string& dataset_path) {
  auto manifests = p3::load_manifests(manifest_dir);
  std::erase_if(manifests, [](const auto& m) { return m.epoch < 1; });
  if (manifests.empty()) {
    throw p3::Error(p3::ErrorCode::kSchemaError, "no manifests in " + manifest_dir);
  }
  std::optional<p3::Dataset> dataset;
  if (!dataset_path.empty()) dataset = p3::load_dataset(dataset_path);

  std::ostringstream hist, div;
  hist << p3::histogram_header() << '\n';
  div << p3::diversity_header() << '\n';
  std::vector<std::pair<int, std::string>> embeddings;
  for (const auto& m : manifests) {
    const auto path = p3::scores_file(scores_dir, m.epoch);
    if (!fs::exists(path)) {
      throw p3::Error(p3::ErrorCode::kMissingEmbedding,
                      "no score file for epoch " + std::to_string(m.epoch) + ": " +
                          path.string());
    }
    const auto scores = p3::load_scores(path);
    const auto report = p3::diversity_report(m, scores, dataset ? &*dataset : nullptr);
    std::unordered_map<std::string, double> difficulty;
    for (const auto& r : scores) difficulty[r.sample_id] = p3::difficulty(r.action_probs);
    std::vector<double> values;
    for (const auto& item : m.selected) values.push_back(difficulty.at(item.sample_id));
    hist << p3::histogram_row("selected", m.epoch, p3::difficulty_histogram(values)) << '\n';
    div << p3::diversity_row(report) << '\n';
    embeddings.emplace_back(m.epoch, p3::embedding_table(report));
  }

  if (!g.quiet) std::cout << hist.str() << div.str();
  if (!g.out.empty()) {
    const fs::path out(g.out);
    p3::write_file_atomic(out / "histogram.tsv", hist.str());
    p3::write_file_atomic(out / "diversity.tsv", div.str());
    for (const auto& [epoch, table] : embeddings) {
      p3::write_file_atomic(out / ("embeddings.epoch" + std::to_string(epoch) + ".tsv"), table);
    }
  }
  return 0;
}

// ---- score-mock ------------------------------------------------------------

int cmd_score_mock(const Globals& g, const std::string& dataset_path, int epoch,
                   const std::string& manifest_dir, const p3::MockScorerOptions& base) {
  const fs::path out = require_out(g);
  if (epoch < 1) throw UsageError("--epoch must be >= 1");
  p3::MockScorerOptions options = base;
  if (g.seed) options.seed = *g.seed;
  const p3::Dataset dataset = p3::load_dataset(dataset_path);
  auto scorer = p3::MockScorer::from_dataset(dataset, options);
  if (!manifest_dir.empty() && fs::is_directory(manifest_dir)) {
    for (const auto& m : p3::load_manifests(manifest_dir)) {
      if (m.epoch < epoch) scorer.observe(m);
    }
  }
  const auto path = p3::scores_file(out, epoch);
  p3::write_scores(path, scorer.scores_for_epoch(epoch));
  say(g, "wrote " + std::to_string(dataset.size()) + " score record(s) to " + path.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p3: difficulty-paced, diversity-aware training data selection"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Run config (JSON)");
  app.add_option("--seed", g.seed, "Override the configured seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  // validate
  auto* validate = app.add_subcommand("validate", "Schema-check dataset and score files");
  std::string v_dataset;
  std::vector<std::string> v_scores;
  validate->add_option("--dataset", v_dataset, "dataset.jsonl")->required();
  validate->add_option("--scores", v_scores, "scores.epochE.jsonl (repeatable)");

  // select
  auto* select = app.add_subcommand("select", "Run p3 / spl_only selection");
  std::string s_dataset, s_scores, s_hook;
  std::optional<int> s_epoch;
  bool s_diag = false;
  select->add_option("--dataset", s_dataset, "dataset.jsonl")->required();
  select->add_option("--scores", s_scores, "Directory of scores.epochE.jsonl")->required();
  select->add_option("--epoch", s_epoch, "Run only this epoch (needs prior state)");
  select->add_option("--hook", s_hook, "Trainer command; receives the manifest path");
  select->add_flag("--diagnostics", s_diag, "Record kernel summary in manifests");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Run random / curriculum baselines");
  std::string b_dataset, b_scores, b_hook, b_strategy, b_metric;
  std::optional<int> b_epoch;
  baseline->add_option("--dataset", b_dataset, "dataset.jsonl")->required();
  baseline->add_option("--scores", b_scores, "Directory of scores.epochE.jsonl");
  baseline->add_option("--epoch", b_epoch, "Run only this epoch (needs prior state)");
  baseline->add_option("--strategy", b_strategy, "random|curriculum (overrides config)");
  baseline->add_option("--metric", b_metric,
                       "answer_rows|answer_length|question_length|level");
  baseline->add_option("--hook", b_hook, "Trainer command; receives the manifest path");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Synthetic learner simulation");
  std::string sim_spec;
  simulate->add_option("--spec", sim_spec, "Simulation spec (JSON)")->required();

  // report
  auto* report = app.add_subcommand("report", "Difficulty and diversity tables");
  std::string r_manifests, r_scores, r_dataset;
  report->add_option("--manifests", r_manifests, "Manifest directory")->required();
  report->add_option("--scores", r_scores, "Directory of scores.epochE.jsonl")->required();
  report->add_option("--dataset", r_dataset, "dataset.jsonl (for cluster labels)");

  // score-mock
  auto* score_mock = app.add_subcommand("score-mock", "Deterministic mock scorer");
  std::string m_dataset, m_manifests, m_segmentation = "lines";
  int m_epoch = 1;
  p3::MockScorerOptions m_options;
  score_mock->add_option("--dataset", m_dataset, "dataset.jsonl")->required();
  score_mock->add_option("--epoch", m_epoch, "Epoch to score")->required();
  score_mock->add_option("--manifests", m_manifests,
                         "Earlier manifests; each selection adds --eta");
  score_mock->add_option("--eta", m_options.eta, "Probability gain per selection");
  score_mock->add_option("--dim", m_options.dim, "Embedding dimension");
  score_mock->add_option("--segmentation", m_segmentation, "lines|steps|whole");
  score_mock->add_option("--model-tag", m_options.model_tag, "model_tag of the records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(p3::ExitStatus::kUsage);
  }

  try {
    if (*validate) return cmd_validate(g, v_dataset, v_scores);
    if (*select) {
      auto config = require_config(g);
      if (config.strategy != p3::Strategy::kP3 && config.strategy != p3::Strategy::kSplOnly) {
        throw UsageError("select runs p3 or spl_only; use `baseline` for " +
                         std::string(p3::to_string(config.strategy)));
      }
      return run_selection(g, config, s_dataset, s_scores, s_epoch, s_hook, s_diag);
    }
    if (*baseline) {
      auto config = require_config(g);
      try {
        if (!b_strategy.empty()) config.strategy = p3::parse_strategy(b_strategy);
        if (!b_metric.empty()) config.curriculum_metric = p3::parse_curriculum_metric(b_metric);
        config.validate();
      } catch (const p3::Error& e) {
        throw UsageError(e.what());
      }
      if (config.strategy != p3::Strategy::kRandom &&
          config.strategy != p3::Strategy::kCurriculum) {
        throw UsageError("baseline runs random or curriculum");
      }
      return run_selection(g, config, b_dataset, b_scores, b_epoch, b_hook, false);
    }
    if (*simulate) return cmd_simulate(g, sim_spec);
    if (*report) return cmd_report(g, r_manifests, r_scores, r_dataset);
    if (*score_mock) {
      try {
        m_options.segmentation = p3::parse_segmentation(m_segmentation);
      } catch (const p3::Error& e) {
        throw UsageError(e.what());
      }
      return cmd_score_mock(g, m_dataset, m_epoch, m_manifests, m_options);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return static_cast<int>(p3::ExitStatus::kUsage);
  } catch (const p3::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(p3::exit_status(e.code()));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(p3::ExitStatus::kData);
  }
  return static_cast<int>(p3::ExitStatus::kUsage);
}
