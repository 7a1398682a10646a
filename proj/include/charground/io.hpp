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

// JSON and CSV file formats. Every JSON document carries "format_version": 1
// (a missing field is read as 1). Parsers throw kParse for malformed syntax
// and kSchema for missing or mistyped fields and model-invariant violations;
// file helpers throw kIo.
//
// Writers are deterministic: identical values give identical bytes.

#ifndef CHARGROUND_IO_HPP_
#define CHARGROUND_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "charground/evaluation.hpp"
#include "charground/model.hpp"
#include "charground/textchars.hpp"

namespace charground {

inline constexpr int kFormatVersion = 1;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Stories with optional gold annotation.
AnnotatedStory parse_story(std::string_view text);
std::string story_to_json(const AnnotatedStory& story);
AnnotatedStory load_story(const std::filesystem::path& path);
/// A single story file, or every *.json file of a directory in file-name
/// order.
std::vector<AnnotatedStory> load_corpus(const std::filesystem::path& path);

// Face and mention embeddings.
EmbeddingTable parse_embeddings(std::string_view text);
std::string embeddings_to_json(const EmbeddingTable& table);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// Chains from an external co-reference resolver.
ExternalCoref parse_external_coref(std::string_view text);
std::string external_coref_to_json(const ExternalCoref& coref);
ExternalCoref load_external_coref(const std::filesystem::path& path);

// Pipeline output for one story. Alignment and characters refer to chains by
// id; parsing rebuilds them and checks stored importances.
Prediction parse_prediction(std::string_view text);
std::string prediction_to_json(const Prediction& prediction);
Prediction load_prediction(const std::filesystem::path& path);
/// A single prediction file, or every *.json file of a directory.
std::vector<Prediction> load_predictions(const std::filesystem::path& path);

enum class ReportFormat { kStructured, kCsv };

/// Structured: JSON with full-precision values and null for absent ones.
/// CSV: "scope,metric,value" rows, values rounded to 4 decimals, counts as
/// integers, absent values as empty cells.
std::string report_to_string(const EvaluationReport& report, ReportFormat format);
void write_report(const EvaluationReport& report, const std::filesystem::path& path,
                  ReportFormat format);
/// Parses the structured form.
EvaluationReport parse_report(std::string_view text);

}  // namespace charground

#endif  // CHARGROUND_IO_HPP_
