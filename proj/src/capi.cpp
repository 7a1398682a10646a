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

#include "charground/charground.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "charground/error.hpp"
#include "charground/evaluation.hpp"
#include "charground/grounding.hpp"
#include "charground/io.hpp"
#include "charground/ranking.hpp"
#include "charground/textchars.hpp"
#include "charground/visualchars.hpp"

struct cg_story {
  charground::AnnotatedStory value;
};
struct cg_corpus {
  std::vector<cg_story> stories;
};
struct cg_lexicon {
  charground::CharacterLexicon value;
};
struct cg_embeddings {
  charground::EmbeddingTable value;
};
struct cg_prediction {
  charground::Prediction value;
};
struct cg_report {
  charground::EvaluationReport value;
};

namespace {

using charground::Error;
using charground::ErrorCode;

thread_local std::string g_last_error;

cg_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameter:
      return CG_ERR_PARAMETER;
    case ErrorCode::kData:
      return CG_ERR_DATA;
    case ErrorCode::kParse:
      return CG_ERR_PARSE;
    case ErrorCode::kSchema:
      return CG_ERR_SCHEMA;
    case ErrorCode::kIo:
      return CG_ERR_IO;
  }
  return CG_ERR_INTERNAL;
}

cg_status fail(cg_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `f`, translating exceptions into status codes.
template <typename F>
cg_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CG_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CG_ERR_INTERNAL, e.what());
  }
}

#define CG_REQUIRE(cond, what)                                \
  do {                                                        \
    if (!(cond)) return fail(CG_ERR_PARAMETER, (what));       \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void check_story_id(const cg_story& story, charground::Prediction& pred) {
  if (pred.story_id.empty()) pred.story_id = story.value.story_id;
  if (pred.story_id != story.value.story_id) {
    charground::throw_data("prediction for story " + pred.story_id +
                           " used with story " + story.value.story_id);
  }
}

void check_prediction(const cg_story& story, const charground::Prediction& pred) {
  const auto violations = charground::validate_prediction(pred, story.value);
  if (!violations.empty()) {
    charground::throw_data("story " + story.value.story_id + ": " + violations.front());
  }
}

charground::ClusteringConfig to_core(const cg_cluster_config& config) {
  charground::ClusteringConfig cfg;
  cfg.k_min = config.k_min;
  cfg.k_max = config.k_max;
  cfg.max_iterations = config.max_iterations;
  cfg.tolerance = config.tolerance;
  cfg.seed = config.seed;
  cfg.restarts = config.restarts;
  return cfg;
}

charground::ReportFormat to_format(cg_report_format format) {
  return format == CG_FORMAT_CSV ? charground::ReportFormat::kCsv
                                 : charground::ReportFormat::kStructured;
}

}  // namespace

extern "C" {

void cg_cluster_config_init(cg_cluster_config* config) {
  if (!config) return;
  const charground::ClusteringConfig d;
  config->k_min = d.k_min;
  config->k_max = d.k_max;
  config->max_iterations = d.max_iterations;
  config->tolerance = d.tolerance;
  config->seed = d.seed;
  config->restarts = d.restarts;
}

void cg_ground_config_init(cg_ground_config* config) {
  if (!config) return;
  const charground::GroundingConfig d;
  config->method = CG_METHOD_DIST;
  config->plural_threshold = d.plural_threshold;
  config->keep_zero = d.drop_zero_similarity ? 0 : 1;
}

void cg_eval_config_init(cg_eval_config* config) {
  if (!config) return;
  config->metrics = CG_METRIC_ALL;
  config->ks = nullptr;
  config->num_ks = 0;
}

cg_status cg_cluster_config_validate(const cg_cluster_config* config) {
  CG_REQUIRE(config, "null argument");
  return guard([&] { to_core(*config).validate(); });
}

const char* cg_version(void) { return "0.1.0"; }

const char* cg_status_string(cg_status status) {
  switch (status) {
    case CG_OK:
      return "ok";
    case CG_ERR_PARAMETER:
      return "parameter error";
    case CG_ERR_DATA:
      return "data error";
    case CG_ERR_PARSE:
      return "parse error";
    case CG_ERR_SCHEMA:
      return "schema error";
    case CG_ERR_IO:
      return "i/o error";
    case CG_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* cg_last_error(void) { return g_last_error.c_str(); }

void cg_string_free(char* s) { std::free(s); }

cg_status cg_parse_metrics(const char* names, uint32_t* out) {
  CG_REQUIRE(names && out, "null argument");
  return guard([&] { *out = charground::parse_metric_set(names); });
}

// --- stories ---------------------------------------------------------------

cg_status cg_story_load(const char* path, cg_story** out) {
  CG_REQUIRE(path && out, "null argument");
  return guard([&] { *out = new cg_story{charground::load_story(path)}; });
}

cg_status cg_story_parse(const char* json, cg_story** out) {
  CG_REQUIRE(json && out, "null argument");
  return guard([&] { *out = new cg_story{charground::parse_story(json)}; });
}

void cg_story_free(cg_story* story) { delete story; }

const char* cg_story_id(const cg_story* story) {
  return story ? story->value.story_id.c_str() : nullptr;
}

size_t cg_story_length(const cg_story* story) { return story ? story->value.length() : 0; }

int cg_story_has_gold(const cg_story* story) {
  return story && story->value.gold.has_value() ? 1 : 0;
}

cg_status cg_corpus_load(const char* path, cg_corpus** out) {
  CG_REQUIRE(path && out, "null argument");
  return guard([&] {
    auto corpus = std::make_unique<cg_corpus>();
    for (auto& s : charground::load_corpus(path)) corpus->stories.push_back({std::move(s)});
    *out = corpus.release();
  });
}

cg_status cg_corpus_create(cg_corpus** out) {
  CG_REQUIRE(out, "null argument");
  return guard([&] { *out = new cg_corpus(); });
}

cg_status cg_corpus_add(cg_corpus* corpus, const cg_story* story) {
  CG_REQUIRE(corpus && story, "null argument");
  return guard([&] { corpus->stories.push_back(*story); });
}

void cg_corpus_free(cg_corpus* corpus) { delete corpus; }

size_t cg_corpus_size(const cg_corpus* corpus) { return corpus ? corpus->stories.size() : 0; }

const cg_story* cg_corpus_get(const cg_corpus* corpus, size_t index) {
  if (!corpus || index >= corpus->stories.size()) return nullptr;
  return &corpus->stories[index];
}

// --- lexicon and embeddings ------------------------------------------------

cg_status cg_lexicon_load(const char* words_path, const char* group_words_path,
                          cg_lexicon** out) {
  CG_REQUIRE(words_path && group_words_path && out, "null argument");
  return guard([&] {
    *out = new cg_lexicon{charground::CharacterLexicon::load(words_path, group_words_path)};
  });
}

void cg_lexicon_free(cg_lexicon* lexicon) { delete lexicon; }

cg_status cg_embeddings_load(const char* path, cg_embeddings** out) {
  CG_REQUIRE(path && out, "null argument");
  return guard([&] { *out = new cg_embeddings{charground::load_embeddings(path)}; });
}

void cg_embeddings_free(cg_embeddings* embeddings) { delete embeddings; }

size_t cg_embeddings_dim(const cg_embeddings* embeddings) {
  return embeddings ? embeddings->value.dim : 0;
}

size_t cg_embeddings_num_faces(const cg_embeddings* embeddings) {
  return embeddings ? embeddings->value.faces.size() : 0;
}

// --- predictions -----------------------------------------------------------

cg_status cg_prediction_create(const cg_story* story, cg_prediction** out) {
  CG_REQUIRE(story && out, "null argument");
  return guard([&] {
    auto pred = std::make_unique<cg_prediction>();
    pred->value.story_id = story->value.story_id;
    *out = pred.release();
  });
}

cg_status cg_prediction_from_gold(const cg_story* story, cg_prediction** out) {
  CG_REQUIRE(story && out, "null argument");
  return guard([&] {
    *out = new cg_prediction{charground::prediction_from_gold(story->value)};
  });
}

cg_status cg_prediction_load(const char* path, cg_prediction** out) {
  CG_REQUIRE(path && out, "null argument");
  return guard([&] { *out = new cg_prediction{charground::load_prediction(path)}; });
}

cg_status cg_prediction_parse(const char* json, cg_prediction** out) {
  CG_REQUIRE(json && out, "null argument");
  return guard([&] { *out = new cg_prediction{charground::parse_prediction(json)}; });
}

cg_status cg_prediction_to_json(const cg_prediction* prediction, char** out) {
  CG_REQUIRE(prediction && out, "null argument");
  return guard([&] { *out = copy_string(charground::prediction_to_json(prediction->value)); });
}

cg_status cg_prediction_write(const cg_prediction* prediction, const char* path) {
  CG_REQUIRE(prediction && path, "null argument");
  return guard([&] {
    charground::write_file(path, charground::prediction_to_json(prediction->value));
  });
}

void cg_prediction_free(cg_prediction* prediction) { delete prediction; }

const char* cg_prediction_story_id(const cg_prediction* prediction) {
  return prediction ? prediction->value.story_id.c_str() : nullptr;
}

size_t cg_prediction_num_text_chains(const cg_prediction* prediction) {
  return prediction ? prediction->value.text_chains.size() : 0;
}

size_t cg_prediction_num_visual_chains(const cg_prediction* prediction) {
  return prediction ? prediction->value.visual_chains.size() : 0;
}

size_t cg_prediction_num_pairs(const cg_prediction* prediction) {
  if (!prediction || !prediction->value.alignment) return 0;
  return prediction->value.alignment->pairs.size();
}

size_t cg_prediction_num_characters(const cg_prediction* prediction) {
  return prediction ? prediction->value.characters.size() : 0;
}

const char* cg_prediction_character_id(const cg_prediction* prediction, size_t rank) {
  if (!prediction || rank >= prediction->value.characters.size()) return nullptr;
  return prediction->value.characters[rank].chain_id.c_str();
}

// --- stages ----------------------------------------------------------------

cg_status cg_detect_text(const cg_story* story, const cg_lexicon* lexicon,
                         const char* coref_path, cg_prediction* prediction) {
  CG_REQUIRE(story && lexicon && prediction, "null argument");
  return guard([&] {
    charground::Prediction& pred = prediction->value;
    check_story_id(*story, pred);
    std::vector<charground::TextChain> chains;
    if (coref_path) {
      const auto external = charground::load_external_coref(coref_path);
      chains = charground::ingest_external_coref(story->value, external, lexicon->value);
    } else {
      const auto mentions = charground::detect_mentions(story->value, lexicon->value);
      chains = charground::heuristic_coref(mentions);
    }
    pred.text_chains = std::move(chains);
    pred.alignment.reset();
    pred.ranking_modality.reset();
    pred.characters.clear();
  });
}

cg_status cg_cluster(const cg_story* story, const cg_embeddings* embeddings,
                     const cg_cluster_config* config, cg_prediction* prediction) {
  CG_REQUIRE(story && embeddings && config && prediction, "null argument");
  return guard([&] {
    charground::Prediction& pred = prediction->value;
    check_story_id(*story, pred);
    const charground::ClusteringConfig cfg = to_core(*config);
    cfg.validate();
    const auto faces = embeddings->value.face_instances();
    charground::Prediction next = pred;
    next.visual_chains = charground::cluster_faces(faces, cfg);
    next.alignment.reset();
    next.ranking_modality.reset();
    next.characters.clear();
    check_prediction(*story, next);
    pred = std::move(next);
  });
}

cg_status cg_ground(const cg_story* story, const cg_embeddings* embeddings,
                    const cg_ground_config* config, cg_prediction* prediction) {
  CG_REQUIRE(story && config && prediction, "null argument");
  CG_REQUIRE(config->method == CG_METHOD_DIST || config->method == CG_METHOD_EMBED,
             "unknown similarity method");
  return guard([&] {
    charground::Prediction& pred = prediction->value;
    check_story_id(*story, pred);
    check_prediction(*story, pred);
    charground::GroundingConfig cfg;
    cfg.method = config->method == CG_METHOD_EMBED ? charground::SimilarityMethod::kEmbedding
                                                   : charground::SimilarityMethod::kDistributional;
    cfg.plural_threshold = config->plural_threshold;
    cfg.drop_zero_similarity = config->keep_zero == 0;
    if (cfg.method == charground::SimilarityMethod::kEmbedding && !embeddings) {
      charground::throw_parameter("the embed method needs an embedding file");
    }
    pred.alignment = charground::ground(pred.text_chains, pred.visual_chains,
                                        story->value.length(),
                                        embeddings ? &embeddings->value : nullptr, cfg);
    pred.ranking_modality.reset();
    pred.characters.clear();
  });
}

cg_status cg_rank(cg_modality modality, cg_prediction* prediction) {
  CG_REQUIRE(prediction, "null argument");
  charground::Modality m;
  switch (modality) {
    case CG_MODALITY_TEXT:
      m = charground::Modality::kText;
      break;
    case CG_MODALITY_IMAGE:
      m = charground::Modality::kImage;
      break;
    case CG_MODALITY_MULTI:
      m = charground::Modality::kMulti;
      break;
    default:
      return fail(CG_ERR_PARAMETER, "unknown modality");
  }
  return guard([&] {
    charground::Prediction& pred = prediction->value;
    if (m == charground::Modality::kMulti && !pred.alignment) {
      charground::throw_parameter("multimodal ranking needs grounded chains; run ground first");
    }
    pred.characters = charground::build_characters(
        m, pred.text_chains, pred.visual_chains,
        pred.alignment ? &*pred.alignment : nullptr);
    pred.ranking_modality = m;
  });
}

// --- reports ---------------------------------------------------------------

cg_status cg_evaluate(const cg_prediction* const* predictions, size_t count,
                      const cg_corpus* gold, const cg_eval_config* config,
                      cg_report** out) {
  CG_REQUIRE((predictions || count == 0) && gold && config && out, "null argument");
  return guard([&] {
    std::vector<charground::Prediction> preds;
    for (size_t i = 0; i < count; ++i) {
      if (!predictions[i]) charground::throw_parameter("null prediction");
      preds.push_back(predictions[i]->value);
    }
    std::vector<charground::AnnotatedStory> stories;
    for (const cg_story& s : gold->stories) stories.push_back(s.value);
    charground::EvalOptions options;
    options.metrics = config->metrics;
    if (config->ks) options.ks.assign(config->ks, config->ks + config->num_ks);
    *out = new cg_report{charground::evaluate(preds, stories, options)};
  });
}

cg_status cg_agreement(const cg_corpus* a, const cg_corpus* b, cg_report** out) {
  CG_REQUIRE(a && b && out, "null argument");
  return guard([&] {
    std::vector<charground::AnnotatedStory> sa;
    std::vector<charground::AnnotatedStory> sb;
    for (const cg_story& s : a->stories) sa.push_back(s.value);
    for (const cg_story& s : b->stories) sb.push_back(s.value);
    *out = new cg_report{charground::agreement_report(sa, sb)};
  });
}

cg_status cg_stats(const cg_corpus* corpus, cg_report** out) {
  CG_REQUIRE(corpus && out, "null argument");
  return guard([&] {
    std::vector<charground::AnnotatedStory> stories;
    for (const cg_story& s : corpus->stories) stories.push_back(s.value);
    *out = new cg_report{charground::dataset_stats(stories)};
  });
}

cg_status cg_summary(const cg_prediction* prediction, cg_report** out) {
  CG_REQUIRE(prediction && out, "null argument");
  return guard([&] { *out = new cg_report{charground::prediction_summary(prediction->value)}; });
}

cg_status cg_report_load(const char* path, cg_report** out) {
  CG_REQUIRE(path && out, "null argument");
  return guard([&] {
    const std::string text = charground::read_file(path);
    *out = new cg_report{charground::parse_report(text)};
  });
}

cg_status cg_report_to_string(const cg_report* report, cg_report_format format, char** out) {
  CG_REQUIRE(report && out, "null argument");
  return guard([&] {
    *out = copy_string(charground::report_to_string(report->value, to_format(format)));
  });
}

cg_status cg_report_write(const cg_report* report, const char* path, cg_report_format format) {
  CG_REQUIRE(report && path, "null argument");
  return guard([&] { charground::write_report(report->value, path, to_format(format)); });
}

cg_status cg_report_get(const cg_report* report, const char* scope, const char* metric,
                        double* value, int* present) {
  CG_REQUIRE(report && scope && metric && value && present, "null argument");
  const charground::MetricEntry* entry = report->value.find(scope, metric);
  if (!entry) {
    return fail(CG_ERR_PARAMETER,
                std::string("no metric '") + metric + "' in scope '" + scope + "'");
  }
  *present = entry->value ? 1 : 0;
  *value = entry->value.value_or(0.0);
  g_last_error.clear();
  return CG_OK;
}

void cg_report_free(cg_report* report) { delete report; }

}  // extern "C"
