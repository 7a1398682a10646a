// Copyright 2026 The CharGround Authors.
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

// Corpus-level evaluation, annotator agreement and dataset statistics, all
// producing an EvaluationReport.

#ifndef CHARGROUND_EVALUATION_HPP_
#define CHARGROUND_EVALUATION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "charground/model.hpp"

namespace charground {

struct MetricEntry {
  std::string name;
  std::optional<double> value;  // absent metrics stay absent, never 0
  bool integral = false;        // counts print without decimals

  bool operator==(const MetricEntry&) const = default;
};

struct ReportSection {
  std::string scope;  // "corpus" or a story id
  std::vector<MetricEntry> metrics;

  bool operator==(const ReportSection&) const = default;
};

struct EvaluationReport {
  std::string kind;  // "eval", "agreement" or "stats"
  std::vector<ReportSection> sections;

  /// nullptr when the scope or metric does not exist.
  const MetricEntry* find(std::string_view scope, std::string_view metric) const;
  bool operator==(const EvaluationReport&) const = default;
};

enum MetricSet : std::uint32_t {
  kMetricDetection = 1u << 0,
  kMetricBCubed = 1u << 1,
  kMetricExact = 1u << 2,
  kMetricGrounding = 1u << 3,
  kMetricPrecisionAtK = 1u << 4,
  kMetricPearson = 1u << 5,
  kMetricAll = (1u << 6) - 1,
};

/// Comma-separated names: detection, bcubed, exact, grounding, pk, pearson.
/// Throws a parameter error on unknown names.
std::uint32_t parse_metric_set(std::string_view text);

struct EvalOptions {
  std::uint32_t metrics = kMetricAll;
  std::vector<std::size_t> ks = {1, 3, 5};

  void validate() const;
};

/// Scores predictions against gold stories paired by story id. The first
/// section is the corpus aggregate (micro-averaged P/R, mean P@k and Pearson
/// over stories where defined), followed by one section per story in gold
/// order. Unpaired stories on either side are a data error.
EvaluationReport evaluate(std::span<const Prediction> predictions,
                          std::span<const AnnotatedStory> gold,
                          const EvalOptions& options = {});

/// Wraps a gold annotation as a prediction so gold can be scored against
/// itself or another annotator. Characters are the gold characters ordered
/// by stars.
Prediction prediction_from_gold(const AnnotatedStory& story);

/// Annotator B scored with annotator A as reference.
EvaluationReport agreement_report(std::span<const AnnotatedStory> a,
                                  std::span<const AnnotatedStory> b);

EvaluationReport dataset_stats(std::span<const AnnotatedStory> corpus);

/// Chain, link and character counts of one prediction.
EvaluationReport prediction_summary(const Prediction& prediction);

}  // namespace charground

#endif  // CHARGROUND_EVALUATION_HPP_
