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

#include "p3/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "p3/error.hpp"
#include "p3/fs.hpp"
#include "p3/rng.hpp"

namespace p3 {

using json = nlohmann::ordered_json;

namespace {

std::vector<double> random_unit(std::mt19937_64& rng, size_t dim) {
  std::vector<double> v(dim);
  double sq = 0.0;
  for (double& x : v) {
    x = standard_normal(rng);
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
  return v;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Keeps every score set handed to the pipeline so the run can be summarized.
class RecordingSource : public ScoreSource {
 public:
  explicit RecordingSource(MockScorer& scorer) : scorer_(scorer) {}

  std::vector<ScoreRecord> scores_for_epoch(int epoch) override {
    auto records = scorer_.scores_for_epoch(epoch);
    seen_[epoch] = records;
    return records;
  }

  const std::vector<ScoreRecord>& at(int epoch) const { return seen_.at(epoch); }

 private:
  MockScorer& scorer_;
  std::map<int, std::vector<ScoreRecord>> seen_;
};

}  // namespace

void SynthSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidSpec, what); };
  if (n < 1) fail("n must be >= 1");
  if (dim < 1) fail("dim must be >= 1");
  if (clusters < 1 || clusters > n) fail("clusters must lie in [1, n]");
  if (!(eta >= 0.0)) fail("eta must be >= 0");
  if (!(cluster_noise >= 0.0)) fail("cluster_noise must be >= 0");
  if (!(ease_min > 0.0 && ease_min <= ease_max && ease_max <= 1.0)) {
    fail("need 0 < ease_min <= ease_max <= 1");
  }
  if (!(cluster_ease_spread >= 0.0)) fail("cluster_ease_spread must be >= 0");
  if (!(action_noise >= 0.0)) fail("action_noise must be >= 0");
  if (min_actions < 1 || min_actions > max_actions) {
    fail("need 1 <= min_actions <= max_actions");
  }
  if (run.k > n) fail("run.k exceeds n");
  try {
    run.validate();
  } catch (const Error& e) {
    fail(std::string("run: ") + e.what());
  }
}

SynthSpec parse_synth_spec(std::string_view json_text) {
  SynthSpec spec;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw Error(ErrorCode::kInvalidSpec, "spec must be a JSON object");
    static const std::set<std::string> kKeys = {
        "n", "dim", "clusters", "eta", "cluster_noise", "ease_min", "ease_max",
        "cluster_ease_spread", "action_noise", "min_actions", "max_actions",
        "data_seed", "run"};
    for (const auto& [key, _] : j.items()) {
      if (!kKeys.count(key)) throw Error(ErrorCode::kInvalidSpec, "unknown key '" + key + "'");
    }
    spec.n = j.value("n", spec.n);
    spec.dim = j.value("dim", spec.dim);
    spec.clusters = j.value("clusters", spec.clusters);
    spec.eta = j.value("eta", spec.eta);
    spec.cluster_noise = j.value("cluster_noise", spec.cluster_noise);
    spec.ease_min = j.value("ease_min", spec.ease_min);
    spec.ease_max = j.value("ease_max", spec.ease_max);
    spec.cluster_ease_spread = j.value("cluster_ease_spread", spec.cluster_ease_spread);
    spec.action_noise = j.value("action_noise", spec.action_noise);
    spec.min_actions = j.value("min_actions", spec.min_actions);
    spec.max_actions = j.value("max_actions", spec.max_actions);
    spec.data_seed = j.value("data_seed", spec.data_seed);
    spec.run = parse_config(j.contains("run") ? j.at("run").dump() : std::string("{}"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidSpec) throw;
    throw Error(ErrorCode::kInvalidSpec, e.what());
  }
  spec.validate();
  return spec;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  return parse_synth_spec(read_file(path));
}

SyntheticData synthesize(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(mix_seed(spec.data_seed, 0x53594e5448ULL));
  std::vector<std::vector<double>> centres;
  for (size_t c = 0; c < spec.clusters; ++c) centres.push_back(random_unit(rng, spec.dim));

  SyntheticData data;
  std::vector<Sample> samples;
  samples.reserve(spec.n);
  const double noise_scale = spec.cluster_noise / std::sqrt(static_cast<double>(spec.dim));
  for (size_t i = 0; i < spec.n; ++i) {
    const size_t c = static_cast<size_t>(uniform_below(rng, spec.clusters));
    std::vector<double> emb(spec.dim);
    double sq = 0.0;
    for (size_t d = 0; d < spec.dim; ++d) {
      emb[d] = centres[c][d] + noise_scale * standard_normal(rng);
      sq += emb[d] * emb[d];
    }
    const double norm = std::sqrt(sq);
    for (double& x : emb) x /= norm;

    const double offset =
        spec.clusters > 1
            ? spec.cluster_ease_spread *
                  (static_cast<double>(c) / static_cast<double>(spec.clusters - 1) - 0.5)
            : 0.0;
    const double ease =
        spec.ease_min + (spec.ease_max - spec.ease_min) * uniform_unit(rng) - offset;
    const size_t actions =
        spec.min_actions +
        static_cast<size_t>(uniform_below(rng, spec.max_actions - spec.min_actions + 1));

    MockLatent latent;
    std::string output;
    for (size_t a = 0; a < actions; ++a) {
      const double p = ease + spec.action_noise * standard_normal(rng);
      latent.base_action_probs.push_back(std::clamp(p, 0.02, 0.995));
      if (a) output += '\n';
      output += "step " + std::to_string(a + 1) + " of task " + std::to_string(i);
    }
    latent.embedding = std::move(emb);

    char id[32];
    std::snprintf(id, sizeof(id), "s%06zu", i);
    Sample s;
    s.id = id;
    s.instruction = "synthetic task " + std::to_string(i) + " from cluster " + std::to_string(c);
    s.output = std::move(output);
    s.meta["cluster"] = std::to_string(c);
    const double hardness = 1.0 - std::clamp(ease, 0.0, 1.0);
    s.meta["level"] = std::to_string(1 + std::min(4, static_cast<int>(hardness * 5.0)));
    latent.token_counts.question = 6;
    latent.token_counts.answer = static_cast<long>(actions * 5);

    samples.push_back(std::move(s));
    data.latents.push_back(std::move(latent));
    data.cluster.push_back(c);
  }
  data.dataset = Dataset(std::move(samples));
  return data;
}

SimulationResult simulate(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  SimulationResult result;
  result.data = synthesize(spec);
  const Dataset& dataset = result.data.dataset;

  std::vector<std::string> ids;
  for (const auto& s : dataset.samples()) ids.push_back(s.id);
  MockScorer scorer(ids, result.data.latents, spec.eta, "mock-sim");
  RecordingSource source(scorer);

  RunOptions options;
  const bool write = !out_dir.empty();
  if (write) {
    options.manifest_dir = out_dir / "manifests";
    options.state_dir = out_dir / "state";
  }
  auto hook = [&](const SelectionManifest& m, const std::filesystem::path&) {
    scorer.observe(m);
  };
  result.manifests = run(dataset, &source, spec.run, hook, options);

  for (const auto& r : source.at(1)) result.reference_difficulty.push_back(difficulty(r.action_probs));

  std::ostringstream hist, div, summary;
  hist << histogram_header() << '\n';
  div << diversity_header() << '\n';
  summary << summary_header() << '\n';
  for (const SelectionManifest& m : result.manifests) {
    if (m.epoch < 1) continue;
    const auto& scores = source.at(m.epoch);
    EpochSummary s;
    s.epoch = m.epoch;
    s.lambda = m.lambda.value_or(0.0);
    s.percentile = m.percentile.value_or(0.0);
    s.kept = m.kept_size;
    s.expanded = m.expanded;

    std::vector<double> pool_difficulty;
    pool_difficulty.reserve(scores.size());
    for (const auto& r : scores) pool_difficulty.push_back(difficulty(r.action_probs));
    std::vector<double> reference, selected;
    std::set<size_t> clusters;
    for (const auto& item : m.selected) {
      const size_t i = *dataset.find(item.sample_id);
      reference.push_back(result.reference_difficulty[i]);
      selected.push_back(pool_difficulty[i]);
      clusters.insert(result.data.cluster[i]);
    }
    s.median_reference_difficulty = median(reference);
    double sum = 0.0;
    for (double d : selected) sum += d;
    s.mean_selected_difficulty = selected.empty() ? 0.0 : sum / static_cast<double>(selected.size());
    s.clusters_covered = clusters.size();
    s.pool = difficulty_histogram(pool_difficulty);
    s.selected = difficulty_histogram(selected);

    const DiversityReport dr = diversity_report(m, scores, &dataset);
    s.mean_cosine = dr.mean_cosine;
    result.epochs.push_back(s);

    hist << histogram_row("pool", s.epoch, s.pool) << '\n'
         << histogram_row("selected", s.epoch, s.selected) << '\n';
    div << diversity_row(dr) << '\n';
    summary << summary_row(s) << '\n';
    if (write) write_scores(scores_file(out_dir / "scores", m.epoch), scores);
  }

  if (write) {
    write_dataset(out_dir / "dataset.jsonl", dataset);
    write_file_atomic(out_dir / "histogram.tsv", hist.str());
    write_file_atomic(out_dir / "diversity.tsv", div.str());
    write_file_atomic(out_dir / "summary.tsv", summary.str());
  }
  return result;
}

std::string summary_header() {
  return "epoch\tpercentile\tlambda\tkept\texpanded\tmedian_ref_difficulty\t"
         "mean_selected_difficulty\tmean_cosine\tclusters";
}

std::string summary_row(const EpochSummary& s) {
  return std::to_string(s.epoch) + "\t" + num(s.percentile) + "\t" + num(s.lambda) + "\t" +
         std::to_string(s.kept) + "\t" + (s.expanded ? "true" : "false") + "\t" +
         num(s.median_reference_difficulty) + "\t" + num(s.mean_selected_difficulty) + "\t" +
         num(s.mean_cosine) + "\t" + std::to_string(s.clusters_covered);
}

}  // namespace p3
