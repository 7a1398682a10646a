/*
 * Copyright 2026 The CharGround Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the character detection, grounding and ranking library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function (NULL is accepted). Every fallible function
 * returns a cg_status; on failure the output handle is left untouched and
 * cg_last_error() describes the problem for the calling thread.
 *
 * Strings returned through char** are heap-allocated and released with
 * cg_string_free.
 */

#ifndef CHARGROUND_CHARGROUND_H_
#define CHARGROUND_CHARGROUND_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CHARGROUND_BUILDING_LIBRARY)
#define CG_API __attribute__((visibility("default")))
#else
#define CG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cg_status {
  CG_OK = 0,
  CG_ERR_PARAMETER = 1, /* invalid argument or configuration */
  CG_ERR_DATA = 2,      /* inconsistent input data */
  CG_ERR_PARSE = 3,     /* malformed file syntax */
  CG_ERR_SCHEMA = 4,    /* schema or model-invariant violation */
  CG_ERR_IO = 5,        /* file system failure */
  CG_ERR_INTERNAL = 6
} cg_status;

typedef enum cg_method { CG_METHOD_DIST = 0, CG_METHOD_EMBED = 1 } cg_method;

typedef enum cg_modality {
  CG_MODALITY_TEXT = 0,
  CG_MODALITY_IMAGE = 1,
  CG_MODALITY_MULTI = 2
} cg_modality;

typedef enum cg_report_format {
  CG_FORMAT_JSON = 0,
  CG_FORMAT_CSV = 1
} cg_report_format;

enum {
  CG_METRIC_DETECTION = 1u << 0,
  CG_METRIC_BCUBED = 1u << 1,
  CG_METRIC_EXACT = 1u << 2,
  CG_METRIC_GROUNDING = 1u << 3,
  CG_METRIC_PK = 1u << 4,
  CG_METRIC_PEARSON = 1u << 5,
  CG_METRIC_ALL = (1u << 6) - 1
};

typedef struct cg_story cg_story;
typedef struct cg_corpus cg_corpus;
typedef struct cg_lexicon cg_lexicon;
typedef struct cg_embeddings cg_embeddings;
typedef struct cg_prediction cg_prediction;
typedef struct cg_report cg_report;

typedef struct cg_cluster_config {
  size_t k_min;
  size_t k_max;
  size_t max_iterations;
  double tolerance;
  uint64_t seed;
  size_t restarts;
} cg_cluster_config;

typedef struct cg_ground_config {
  cg_method method;
  double plural_threshold;
  int keep_zero; /* nonzero keeps Hungarian pairs with similarity 0 */
} cg_ground_config;

typedef struct cg_eval_config {
  uint32_t metrics; /* CG_METRIC_* bits */
  const size_t* ks; /* NULL selects 1, 3, 5 */
  size_t num_ks;
} cg_eval_config;

CG_API void cg_cluster_config_init(cg_cluster_config* config);
CG_API void cg_ground_config_init(cg_ground_config* config);
CG_API void cg_eval_config_init(cg_eval_config* config);
/* CG_ERR_PARAMETER when the configuration is unusable (e.g. k_min > k_max). */
CG_API cg_status cg_cluster_config_validate(const cg_cluster_config* config);

CG_API const char* cg_version(void);
CG_API const char* cg_status_string(cg_status status);
/* Message of the last failure on this thread; "" when none. */
CG_API const char* cg_last_error(void);
CG_API void cg_string_free(char* s);

/* Parses "detection,bcubed,..." into CG_METRIC_* bits. */
CG_API cg_status cg_parse_metrics(const char* names, uint32_t* out);

/* Stories. */
CG_API cg_status cg_story_load(const char* path, cg_story** out);
CG_API cg_status cg_story_parse(const char* json, cg_story** out);
CG_API void cg_story_free(cg_story* story);
CG_API const char* cg_story_id(const cg_story* story);
CG_API size_t cg_story_length(const cg_story* story);
CG_API int cg_story_has_gold(const cg_story* story);

/* A story file or a directory of *.json story files. */
CG_API cg_status cg_corpus_load(const char* path, cg_corpus** out);
CG_API cg_status cg_corpus_create(cg_corpus** out);
/* Appends a copy of `story`. */
CG_API cg_status cg_corpus_add(cg_corpus* corpus, const cg_story* story);
CG_API void cg_corpus_free(cg_corpus* corpus);
CG_API size_t cg_corpus_size(const cg_corpus* corpus);
/* Borrowed; valid while the corpus lives and is not modified. */
CG_API const cg_story* cg_corpus_get(const cg_corpus* corpus, size_t index);

/* Lexicon of character nouns and group words. */
CG_API cg_status cg_lexicon_load(const char* words_path, const char* group_words_path,
                                 cg_lexicon** out);
CG_API void cg_lexicon_free(cg_lexicon* lexicon);

/* Face and mention embeddings. */
CG_API cg_status cg_embeddings_load(const char* path, cg_embeddings** out);
CG_API void cg_embeddings_free(cg_embeddings* embeddings);
CG_API size_t cg_embeddings_dim(const cg_embeddings* embeddings);
CG_API size_t cg_embeddings_num_faces(const cg_embeddings* embeddings);

/* Predictions: the state passed between pipeline stages. */
CG_API cg_status cg_prediction_create(const cg_story* story, cg_prediction** out);
/* Gold chains, gold alignment and gold characters ordered by stars. */
CG_API cg_status cg_prediction_from_gold(const cg_story* story, cg_prediction** out);
CG_API cg_status cg_prediction_load(const char* path, cg_prediction** out);
CG_API cg_status cg_prediction_parse(const char* json, cg_prediction** out);
CG_API cg_status cg_prediction_to_json(const cg_prediction* prediction, char** out);
CG_API cg_status cg_prediction_write(const cg_prediction* prediction, const char* path);
CG_API void cg_prediction_free(cg_prediction* prediction);
CG_API const char* cg_prediction_story_id(const cg_prediction* prediction);
CG_API size_t cg_prediction_num_text_chains(const cg_prediction* prediction);
CG_API size_t cg_prediction_num_visual_chains(const cg_prediction* prediction);
CG_API size_t cg_prediction_num_pairs(const cg_prediction* prediction);
CG_API size_t cg_prediction_num_characters(const cg_prediction* prediction);
/* Borrowed chain id of the character at `rank`; NULL when out of range. */
CG_API const char* cg_prediction_character_id(const cg_prediction* prediction, size_t rank);

/* Pipeline stages. Each replaces its own output in `prediction` and clears
 * the outputs of later stages. */

/* Text chains; `coref_path` names an external co-reference file, NULL uses
 * the built-in heuristic resolver. */
CG_API cg_status cg_detect_text(const cg_story* story, const cg_lexicon* lexicon,
                                const char* coref_path, cg_prediction* prediction);
/* Visual chains from the faces of the embedding table. */
CG_API cg_status cg_cluster(const cg_story* story, const cg_embeddings* embeddings,
                            const cg_cluster_config* config, cg_prediction* prediction);
/* Alignment; `embeddings` may be NULL for the distributional method. */
CG_API cg_status cg_ground(const cg_story* story, const cg_embeddings* embeddings,
                           const cg_ground_config* config, cg_prediction* prediction);
/* Ranked characters; CG_MODALITY_MULTI requires a prior cg_ground. */
CG_API cg_status cg_rank(cg_modality modality, cg_prediction* prediction);

/* Reports. */
CG_API cg_status cg_evaluate(const cg_prediction* const* predictions, size_t count,
                             const cg_corpus* gold, const cg_eval_config* config,
                             cg_report** out);
/* Annotation `b` scored with annotation `a` as reference. */
CG_API cg_status cg_agreement(const cg_corpus* a, const cg_corpus* b, cg_report** out);
CG_API cg_status cg_stats(const cg_corpus* corpus, cg_report** out);
/* Chain and character counts of one prediction. */
CG_API cg_status cg_summary(const cg_prediction* prediction, cg_report** out);
CG_API cg_status cg_report_load(const char* path, cg_report** out);
CG_API cg_status cg_report_to_string(const cg_report* report, cg_report_format format,
                                     char** out);
CG_API cg_status cg_report_write(const cg_report* report, const char* path,
                                 cg_report_format format);
/* *present is 0 for an absent metric value. Unknown scope or metric is a
 * parameter error. */
CG_API cg_status cg_report_get(const cg_report* report, const char* scope,
                               const char* metric, double* value, int* present);
CG_API void cg_report_free(cg_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CHARGROUND_CHARGROUND_H_ */
