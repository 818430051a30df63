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

#include "p3/dataset.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "p3/error.hpp"
#include "p3/fs.hpp"

namespace p3 {

using json = nlohmann::ordered_json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return in;
}

bool blank_line(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string meta_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

Sample parse_sample(const json& j) {
  if (!j.is_object()) throw std::runtime_error("record is not an object");
  Sample s;
  s.id = j.at("id").get<std::string>();
  s.instruction = j.value("instruction", std::string());
  s.output = j.at("output").get<std::string>();
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw std::runtime_error("meta must be an object");
    for (const auto& [key, value] : it->items()) s.meta[key] = meta_value(value);
  }
  if (s.id.empty()) throw std::runtime_error("id is empty");
  if (s.output.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw std::runtime_error("output is empty");
  }
  return s;
}

ScoreRecord parse_score(const json& j) {
  if (!j.is_object()) throw std::runtime_error("record is not an object");
  ScoreRecord r;
  r.sample_id = j.at("sample_id").get<std::string>();
  r.epoch = j.at("epoch").get<int>();
  r.model_tag = j.value("model_tag", std::string());
  r.action_probs = j.at("action_probs").get<std::vector<double>>();
  r.embedding = j.at("embedding").get<std::vector<double>>();
  if (auto it = j.find("token_counts"); it != j.end() && !it->is_null()) {
    TokenCounts tc;
    tc.question = it->at("question").get<long>();
    tc.answer = it->at("answer").get<long>();
    r.token_counts = tc;
  }
  return r;
}

std::string join_ids(const std::vector<std::string>& ids, size_t limit = 10) {
  std::string out;
  for (size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

std::string describe(const std::vector<Issue>& issues,
                     const std::filesystem::path& path) {
  std::ostringstream os;
  os << issues.size() << " problem(s) in " << path.string();
  for (size_t i = 0; i < issues.size() && i < 20; ++i) {
    os << "\n  " << format_issue(path, issues[i]);
  }
  return os.str();
}

}  // namespace

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  index_.reserve(samples_.size());
  for (size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.id.empty()) {
      throw Error(ErrorCode::kSchemaError,
                  "sample " + std::to_string(i) + " has an empty id");
    }
    if (s.output.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw Error(ErrorCode::kSchemaError, "sample '" + s.id + "' has an empty output");
    }
    if (!index_.emplace(s.id, i).second) {
      throw Error(ErrorCode::kSchemaError, "duplicate sample id '" + s.id + "'");
    }
  }
}

std::optional<size_t> Dataset::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string format_issue(const std::filesystem::path& file, const Issue& issue) {
  std::string out = file.filename().string();
  if (issue.line > 0) out += ":" + std::to_string(issue.line);
  if (!issue.record.empty()) out += " [" + issue.record + "]";
  return out + ": " + issue.message;
}

DatasetRead read_dataset(const std::filesystem::path& path) {
  auto in = open_input(path);
  DatasetRead out;
  std::set<std::string> seen;
  std::string line;
  for (size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (blank_line(line)) continue;
    try {
      Sample s = parse_sample(json::parse(line));
      if (!seen.insert(s.id).second) {
        out.issues.push_back({lineno, s.id, "duplicate sample id"});
        continue;
      }
      out.samples.push_back(std::move(s));
    } catch (const std::exception& e) {
      out.issues.push_back({lineno, "", e.what()});
    }
  }
  return out;
}

ScoresRead read_scores(const std::filesystem::path& path) {
  auto in = open_input(path);
  ScoresRead out;
  std::string line;
  for (size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (blank_line(line)) continue;
    try {
      ScoreRecord r = parse_score(json::parse(line));
      if (auto problem = check_score_record(r); !problem.empty()) {
        out.issues.push_back({lineno, r.sample_id, problem});
        continue;
      }
      out.records.push_back(std::move(r));
      out.lines.push_back(lineno);
    } catch (const std::exception& e) {
      out.issues.push_back({lineno, "", e.what()});
    }
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path) {
  auto read = read_dataset(path);
  if (!read.issues.empty()) {
    throw Error(ErrorCode::kSchemaError, describe(read.issues, path));
  }
  if (read.samples.empty()) {
    throw Error(ErrorCode::kSchemaError, path.string() + " holds no samples");
  }
  return Dataset(std::move(read.samples));
}

std::vector<ScoreRecord> load_scores(const std::filesystem::path& path) {
  auto read = read_scores(path);
  if (!read.issues.empty()) {
    throw Error(ErrorCode::kSchemaError, describe(read.issues, path));
  }
  return std::move(read.records);
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ostringstream os;
  for (const Sample& s : dataset.samples()) {
    json j;
    j["id"] = s.id;
    j["instruction"] = s.instruction;
    j["output"] = s.output;
    json meta = json::object();
    for (const auto& [k, v] : s.meta) meta[k] = v;
    j["meta"] = std::move(meta);
    os << j.dump() << '\n';
  }
  write_file_atomic(path, os.str());
}

void write_scores(const std::filesystem::path& path,
                  const std::vector<ScoreRecord>& records) {
  std::ostringstream os;
  for (const ScoreRecord& r : records) {
    json j;
    j["sample_id"] = r.sample_id;
    j["epoch"] = r.epoch;
    j["model_tag"] = r.model_tag;
    j["action_probs"] = r.action_probs;
    if (r.token_counts) {
      j["token_counts"] = {{"question", r.token_counts->question},
                           {"answer", r.token_counts->answer}};
    }
    j["embedding"] = r.embedding;
    os << j.dump() << '\n';
  }
  write_file_atomic(path, os.str());
}

std::string check_score_record(const ScoreRecord& r) {
  if (r.sample_id.empty()) return "sample_id is empty";
  if (r.epoch < 1) return "epoch must be >= 1";
  if (r.action_probs.empty()) return "action_probs is empty";
  for (double p : r.action_probs) {
    if (!(p > 0.0 && p <= 1.0)) {
      return "action probability " + std::to_string(p) + " outside (0, 1]";
    }
  }
  if (r.embedding.empty()) return "embedding is empty";
  double sq = 0.0;
  for (double v : r.embedding) {
    if (!std::isfinite(v)) return "embedding has a non-finite entry";
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (std::abs(norm - 1.0) > kEmbeddingNormTolerance) {
    std::ostringstream os;
    os << "embedding norm " << norm << " is not 1 (tolerance "
       << kEmbeddingNormTolerance << ")";
    return os.str();
  }
  if (r.token_counts && (r.token_counts->question < 0 || r.token_counts->answer < 0)) {
    return "token_counts must be non-negative";
  }
  return {};
}

std::vector<Issue> check_scores_against(const Dataset& dataset,
                                        const ScoresRead& scores,
                                        std::optional<int> epoch) {
  std::vector<Issue> issues;
  std::set<std::string> seen;
  std::optional<size_t> dim;
  std::optional<int> file_epoch = epoch;
  for (size_t i = 0; i < scores.records.size(); ++i) {
    const ScoreRecord& r = scores.records[i];
    const size_t line = scores.lines.empty() ? 0 : scores.lines[i];
    if (!dataset.find(r.sample_id)) {
      issues.push_back({line, r.sample_id, "sample id not in dataset"});
    }
    if (!seen.insert(r.sample_id).second) {
      issues.push_back({line, r.sample_id, "duplicate score record"});
    }
    if (!dim) dim = r.embedding.size();
    if (r.embedding.size() != *dim) {
      issues.push_back({line, r.sample_id,
                        "embedding dimension " + std::to_string(r.embedding.size()) +
                            " differs from " + std::to_string(*dim)});
    }
    if (!file_epoch) file_epoch = r.epoch;
    if (r.epoch != *file_epoch) {
      issues.push_back({line, r.sample_id,
                        "epoch " + std::to_string(r.epoch) + " differs from " +
                            std::to_string(*file_epoch)});
    }
  }
  std::vector<std::string> missing;
  for (const Sample& s : dataset.samples()) {
    if (!seen.count(s.id)) missing.push_back(s.id);
  }
  if (!missing.empty()) {
    issues.push_back({0, "", "no scores for " + join_ids(missing)});
  }
  return issues;
}

std::vector<ScoreRecord> align_scores(const Dataset& dataset,
                                      std::vector<ScoreRecord> records,
                                      int epoch) {
  std::vector<std::optional<ScoreRecord>> slots(dataset.size());
  std::optional<size_t> dim;
  for (ScoreRecord& r : records) {
    auto pos = dataset.find(r.sample_id);
    if (!pos) {
      throw Error(ErrorCode::kSchemaError,
                  "score record for unknown sample '" + r.sample_id + "'");
    }
    if (r.epoch != epoch) {
      throw Error(ErrorCode::kSchemaError,
                  "score record for '" + r.sample_id + "' is for epoch " +
                      std::to_string(r.epoch) + ", expected " +
                      std::to_string(epoch));
    }
    if (slots[*pos]) {
      throw Error(ErrorCode::kSchemaError,
                  "duplicate score record for '" + r.sample_id + "'");
    }
    if (!dim) dim = r.embedding.size();
    if (r.embedding.size() != *dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding of '" + r.sample_id + "' has dimension " +
                      std::to_string(r.embedding.size()) + ", expected " +
                      std::to_string(*dim));
    }
    if (auto problem = check_score_record(r); !problem.empty()) {
      throw Error(ErrorCode::kSchemaError, "'" + r.sample_id + "': " + problem);
    }
    slots[*pos] = std::move(r);
  }
  std::vector<std::string> missing;
  std::vector<ScoreRecord> aligned;
  aligned.reserve(dataset.size());
  for (size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) {
      missing.push_back(dataset[i].id);
      continue;
    }
    aligned.push_back(std::move(*slots[i]));
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kMissingScores,
                "epoch " + std::to_string(epoch) + " has no scores for " +
                    join_ids(missing));
  }
  return aligned;
}

std::filesystem::path scores_file(const std::filesystem::path& dir, int epoch) {
  return dir / ("scores.epoch" + std::to_string(epoch) + ".jsonl");
}

}  // namespace p3
