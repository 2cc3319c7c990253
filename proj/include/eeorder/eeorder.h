// Copyright 2026 The eeorder Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

// C interface to the eeorder toolkit. Every function returns an eeo_status;
// on failure eeo_last_error() describes the problem (per thread). Strings
// returned through char** are owned by the caller and released with
// eeo_string_free.

#ifndef EEORDER_EEORDER_H_
#define EEORDER_EEORDER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EEO_API __declspec(dllexport)
#else
#define EEO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eeo_status {
  EEO_OK = 0,
  EEO_INVALID_ARGUMENT = 1,
  EEO_IO = 2,
  EEO_FORMAT = 3,
  EEO_NO_PARSE = 4,
  EEO_OUT_OF_VOCABULARY = 5,
  EEO_LIMIT = 6,
  EEO_RUNTIME = 7
} eeo_status;

typedef enum eeo_class { EEO_ONSET = 0, EEO_RHYME = 1, EEO_TONE = 2 } eeo_class;

typedef enum eeo_tie_mode { EEO_TIE_EXPECTED_HALF = 0, EEO_TIE_RANDOM_COIN = 1 } eeo_tie_mode;

EEO_API const char* eeo_version(void);
EEO_API const char* eeo_last_error(void);
EEO_API void eeo_string_free(char* s);

/* Language profiles and syllables */

typedef struct eeo_profile eeo_profile;

// data_dir may be NULL (EEORDER_DATA, then the built-in data directory).
EEO_API eeo_status eeo_profile_open(const char* language, const char* data_dir,
                                    eeo_profile** out);
// Middle Chinese profile built from a readings table.
EEO_API eeo_status eeo_profile_open_mc(const char* readings_path, eeo_profile** out);
EEO_API void eeo_profile_free(eeo_profile* profile);
EEO_API eeo_status eeo_profile_inventory_size(const eeo_profile* profile, eeo_class cls,
                                              size_t* out);
EEO_API eeo_status eeo_profile_focal(const eeo_profile* profile, eeo_class* out);

#define EEO_SYMBOL_MAX 32

// Null constituents are empty strings.
typedef struct eeo_syllable {
  char onset[EEO_SYMBOL_MAX];
  char rhyme[EEO_SYMBOL_MAX];
  char tone[EEO_SYMBOL_MAX];
} eeo_syllable;

// EEO_NO_PARSE when the token is not a syllable of the inventory.
EEO_API eeo_status eeo_parse_syllable(const eeo_profile* profile, const char* token,
                                      eeo_syllable* out);
EEO_API eeo_status eeo_render_syllable(const eeo_profile* profile, const eeo_syllable* syl,
                                       char** out);

/* Scales */

typedef struct eeo_scale eeo_scale;

EEO_API eeo_status eeo_scale_load(const char* path, eeo_scale** out);
EEO_API eeo_status eeo_scale_save(const eeo_scale* scale, const char* path);
EEO_API eeo_status eeo_scale_to_string(const eeo_scale* scale, char** out);
EEO_API void eeo_scale_free(eeo_scale* scale);

// Scores the swap-augmented records ("ee" or "cc" list) against the scale.
EEO_API eeo_status eeo_scale_apply(const eeo_scale* scale, const eeo_profile* profile,
                                   const char* records_path, const char* format,
                                   uint64_t seed, eeo_tie_mode tie, double* accuracy,
                                   size_t* examples);
// Exhaustive search over the profile's focal symbols on the augmented records.
EEO_API eeo_status eeo_scale_search(const eeo_profile* profile, const char* records_path,
                                    const char* format, uint64_t seed, unsigned threads,
                                    eeo_scale** out, double* train_accuracy);
// Induction from a serialized tree bundle (tree + feature space).
EEO_API eeo_status eeo_scale_induce(const char* bundle_path, eeo_scale** out);

/* Classification experiments */

// Runs every row of a JSON experiment file. overrides_json (may be NULL) is
// merged over the file's top-level keys. When out_dir is given, report.csv,
// report.txt, report.json and (for tree rows) tree_<n>.json are written.
EEO_API eeo_status eeo_classify(const char* config_path, const char* overrides_json,
                                const char* out_dir, char** table);

/* Embeddings */

typedef struct eeo_embeddings eeo_embeddings;

typedef struct eeo_skipgram_params {
  size_t dim;
  size_t window;
  size_t negatives;
  size_t epochs;
  size_t min_count;
  double learning_rate;
  uint64_t seed;
} eeo_skipgram_params;

EEO_API void eeo_skipgram_defaults(eeo_skipgram_params* params);
EEO_API eeo_status eeo_embeddings_train(const char* corpus_path,
                                        const eeo_skipgram_params* params,
                                        eeo_embeddings** out);
// Binary format, or CSV when the path ends in ".csv".
EEO_API eeo_status eeo_embeddings_load(const char* path, eeo_embeddings** out);
EEO_API eeo_status eeo_embeddings_save(const eeo_embeddings* emb, const char* path);
EEO_API eeo_status eeo_embeddings_export_csv(const eeo_embeddings* emb, const char* path);
EEO_API eeo_status eeo_embeddings_size(const eeo_embeddings* emb, size_t* vocab, size_t* dim);
EEO_API eeo_status eeo_embeddings_cosine(const eeo_embeddings* emb, const char* w1,
                                         const char* w2, double* out);
// "word<TAB>cosine" lines, best first.
EEO_API eeo_status eeo_embeddings_neighbors(const eeo_embeddings* emb, const char* word,
                                            size_t k, char** out);
EEO_API void eeo_embeddings_free(eeo_embeddings* emb);

/* Tagging */

// Corpus files are either one tokenized sentence per line or the tagged
// two-column format (tags are then ignored). emb and scale may be NULL when
// their stage is off. The summary is JSON.
EEO_API eeo_status eeo_tag_baseline(const eeo_profile* profile, const char* corpus_path,
                                    const eeo_embeddings* emb, const eeo_scale* scale,
                                    const char* stages, double alpha, const char* out_path,
                                    char** summary);

typedef struct eeo_tagger eeo_tagger;

typedef struct eeo_tagger_params {
  double learning_rate;
  double l2;
  size_t max_epochs;
  size_t patience;
  double negative_share;
  int phoneme_features;
  uint64_t seed;
} eeo_tagger_params;

EEO_API void eeo_tagger_defaults(eeo_tagger_params* params);
// profile is required when phoneme_features is set.
EEO_API eeo_status eeo_tagger_train(const char* train_path, const char* dev_path,
                                    const eeo_tagger_params* params,
                                    const eeo_profile* profile, eeo_tagger** out);
EEO_API eeo_status eeo_tagger_save(const eeo_tagger* tagger, const char* path);
EEO_API eeo_status eeo_tagger_load(const char* path, const char* data_dir, eeo_tagger** out);
EEO_API eeo_status eeo_tagger_apply(const eeo_tagger* tagger, const char* corpus_path,
                                    const char* out_path, char** summary);
// Word vectors read off the tagger's word weights.
EEO_API eeo_status eeo_tagger_embeddings(const eeo_tagger* tagger, eeo_embeddings** out);
EEO_API void eeo_tagger_free(eeo_tagger* tagger);

// Metrics of a predicted against a gold tagged corpus. Any output pointer
// may be NULL.
EEO_API eeo_status eeo_tag_eval(const char* pred_path, const char* gold_path,
                                const char* label, char** json, char** table,
                                char** confusion_csv);
EEO_API eeo_status eeo_in_context_accuracy(size_t real_real, size_t fake_fake,
                                           size_t real_fake, size_t fake_real, double* out);

/* Corpus tools */

// catalog_path (may be NULL) lists EE keys, one per line; by default the
// corpus's own spans form the catalog.
EEO_API eeo_status eeo_swap_corpus(const char* tagged_path, const char* catalog_path,
                                   double swap_frac, uint64_t seed, const char* out_path,
                                   char** summary);
// Writes split<k>/{train,dev,test}.tags and the EE lists of each part.
EEO_API eeo_status eeo_split_corpus(const char* tagged_path, double train, double dev,
                                    double test, int n_splits, uint64_t seed,
                                    const char* out_dir, char** summary);
// Same/reversed order counts of test B-words in the training data. The
// corpus (may be NULL) supplies bigram counts.
EEO_API eeo_status eeo_overlap(const eeo_profile* profile, const char* train_records,
                               const char* test_records, const char* format,
                               const char* corpus_path, char** report);

// Writes the synthetic fixtures into out_dir; listing receives file names.
EEO_API eeo_status eeo_fixtures(const char* data_dir, uint64_t seed, const char* out_dir,
                                char** listing);

#ifdef __cplusplus
}
#endif

#endif  // EEORDER_EEORDER_H_
