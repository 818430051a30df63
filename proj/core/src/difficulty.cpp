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

#include "p3/difficulty.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "p3/error.hpp"

namespace p3 {
namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

std::vector<std::string_view> split_lines(std::string_view output) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= output.size()) {
    size_t end = output.find('\n', start);
    if (end == std::string_view::npos) end = output.size();
    std::string_view line = output.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> line_actions(std::string_view output) {
  std::vector<std::string> actions;
  for (std::string_view line : split_lines(output)) {
    if (!is_blank(line)) actions.emplace_back(line);
  }
  return actions;
}

// A block ends at a run of one or more whitespace-only lines.
std::vector<std::string> step_actions(std::string_view output) {
  std::vector<std::string> blocks;
  std::string current;
  bool open = false;
  for (std::string_view line : split_lines(output)) {
    if (is_blank(line)) {
      if (open) blocks.push_back(std::move(current));
      current.clear();
      open = false;
      continue;
    }
    if (open) current += '\n';
    current.append(line);
    open = true;
  }
  if (open) blocks.push_back(std::move(current));
  return blocks;
}

}  // namespace

std::string_view to_string(Segmentation s) {
  switch (s) {
    case Segmentation::kLines: return "lines";
    case Segmentation::kSteps: return "steps";
    case Segmentation::kWhole: return "whole";
  }
  return "lines";
}

Segmentation parse_segmentation(std::string_view name) {
  if (name == "lines") return Segmentation::kLines;
  if (name == "steps") return Segmentation::kSteps;
  if (name == "whole") return Segmentation::kWhole;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown segmentation '" + std::string(name) +
                  "' (expected lines|steps|whole)");
}

std::vector<std::string> segment_output(std::string_view output,
                                        Segmentation strategy) {
  if (is_blank(output)) {
    throw Error(ErrorCode::kEmptyOutput, "output is empty or whitespace-only");
  }
  switch (strategy) {
    case Segmentation::kWhole:
      return {std::string(output)};
    case Segmentation::kLines:
      return line_actions(output);
    case Segmentation::kSteps: {
      auto blocks = step_actions(output);
      if (blocks.size() == 1) {
        auto lines = line_actions(output);
        if (lines.size() >= 4) return lines;
      }
      return blocks;
    }
  }
  return {std::string(output)};
}

double action_probability(std::span<const double> token_logprobs) {
  if (token_logprobs.empty()) {
    throw Error(ErrorCode::kEmptyAction, "action has no token log-probabilities");
  }
  double sum = 0.0;
  for (double lp : token_logprobs) {
    if (!std::isfinite(lp) || lp > 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "token log-probability must be finite and <= 0, got " +
                      std::to_string(lp));
    }
    sum += lp;
  }
  const double mean = sum / static_cast<double>(token_logprobs.size());
  return std::max(std::exp(mean), kProbabilityFloor);
}

double difficulty(std::span<const double> action_probs) {
  if (action_probs.empty()) {
    throw Error(ErrorCode::kEmptyActionList, "sample has no actions");
  }
  double sum = 0.0;
  for (double p : action_probs) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "action probability must lie in (0, 1], got " +
                      std::to_string(p));
    }
    sum += std::max(p, kProbabilityFloor);
  }
  const double value = 1.0 - sum / static_cast<double>(action_probs.size());
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace p3
