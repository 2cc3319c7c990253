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

// Exercises the shared library through its C header only.

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "eeorder/eeorder.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

#define EXPECT_OK(call)                                                            \
  do {                                                                             \
    eeo_status st_ = (call);                                                       \
    if (st_ != EEO_OK) {                                                           \
      fprintf(stderr, "%s:%d: %s -> %d (%s)\n", __FILE__, __LINE__, #call, (int)st_, \
              eeo_last_error());                                                   \
      ++failures;                                                                  \
    }                                                                              \
  } while (0)

static char path_buf[4096];

static const char* in_dir(const char* dir, const char* name) {
  snprintf(path_buf, sizeof path_buf, "%s/%s", dir, name);
  return path_buf;
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: test_capi <scratch-dir>\n");
    return 2;
  }
  const char* dir = argv[1];
  char* s = NULL;

  EXPECT(strlen(eeo_version()) > 0);

  /* Profiles and syllables. */
  eeo_profile* hmong = NULL;
  EXPECT_OK(eeo_profile_open("hmong", NULL, &hmong));
  size_t n = 0;
  EXPECT_OK(eeo_profile_inventory_size(hmong, EEO_ONSET, &n));
  EXPECT(n == 58);
  eeo_class focal;
  EXPECT_OK(eeo_profile_focal(hmong, &focal));
  EXPECT(focal == EEO_TONE);
  eeo_syllable syl;
  EXPECT_OK(eeo_parse_syllable(hmong, "ntuj", &syl));
  EXPECT(strcmp(syl.onset, "nt") == 0 && strcmp(syl.rhyme, "u") == 0 && strcmp(syl.tone, "j") == 0);
  EXPECT(eeo_parse_syllable(hmong, "qqq9", &syl) == EEO_NO_PARSE);
  EXPECT(strlen(eeo_last_error()) > 0);
  EXPECT_OK(eeo_render_syllable(hmong, &syl, &s));
  EXPECT(s && strcmp(s, "ntuj") == 0);
  eeo_string_free(s);

  eeo_profile* bad = NULL;
  EXPECT(eeo_profile_open("klingon", NULL, &bad) == EEO_INVALID_ARGUMENT);
  EXPECT(bad == NULL);
  EXPECT(eeo_parse_syllable(NULL, "ntuj", &syl) == EEO_INVALID_ARGUMENT);

  /* Fixtures feed everything below. */
  EXPECT_OK(eeo_fixtures(NULL, 7, dir, &s));
  EXPECT(s && strstr(s, "hmong_tree.json") != NULL);
  eeo_string_free(s);

  eeo_scale* scale = NULL;
  EXPECT_OK(eeo_scale_induce(in_dir(dir, "hmong_tree.json"), &scale));
  EXPECT_OK(eeo_scale_to_string(scale, &s));
  EXPECT(s && strcmp(s, "j < b < m < v < s < g < \xE2\x88\x85") == 0);
  eeo_string_free(s);
  eeo_scale_free(scale);

  eeo_scale* planted = NULL;
  eeo_scale* found = NULL;
  double acc = 0.0;
  EXPECT_OK(eeo_scale_load(in_dir(dir, "planted.scale"), &planted));
  EXPECT_OK(eeo_scale_search(hmong, in_dir(dir, "planted_records.tsv"), "ee", 1, 2, &found, &acc));
  EXPECT(acc == 1.0);
  char *a = NULL, *b = NULL;
  EXPECT_OK(eeo_scale_to_string(planted, &a));
  EXPECT_OK(eeo_scale_to_string(found, &b));
  EXPECT(a && b && strcmp(a, b) == 0);
  eeo_string_free(a);
  eeo_string_free(b);
  EXPECT_OK(eeo_scale_apply(planted, hmong, in_dir(dir, "planted_records.tsv"), NULL, 3,
                            EEO_TIE_EXPECTED_HALF, &acc, &n));
  EXPECT(acc == 1.0 && n == 3000);
  eeo_scale_free(found);

  /* Classification writes its reports. */
  char table_dir[4096];
  snprintf(table_dir, sizeof table_dir, "%s/report", dir);
  EXPECT_OK(eeo_classify(in_dir(dir, "planted_rules_config.json"), "{\"seed\": 11}", table_dir, &s));
  EXPECT(s && strstr(s, "100.0%") != NULL);
  eeo_string_free(s);
  FILE* f = fopen(in_dir(table_dir, "report.csv"), "r");
  EXPECT(f != NULL);
  if (f) fclose(f);
  EXPECT(eeo_classify(in_dir(dir, "no_such.json"), NULL, NULL, &s) != EEO_OK);

  /* Embeddings. */
  eeo_skipgram_params sp;
  eeo_skipgram_defaults(&sp);
  EXPECT(sp.dim == 100 && sp.window == 5 && sp.negatives == 5);
  sp.dim = 20;
  sp.min_count = 1;
  eeo_embeddings* emb = NULL;
  EXPECT_OK(eeo_embeddings_train(in_dir(dir, "cooccurrence.txt"), &sp, &emb));
  double c = 0.0;
  EXPECT_OK(eeo_embeddings_cosine(emb, "p1", "p1", &c));
  EXPECT(fabs(c - 1.0) < 1e-9);
  EXPECT(eeo_embeddings_cosine(emb, "p1", "unknown-word", &c) == EEO_OUT_OF_VOCABULARY);
  EXPECT_OK(eeo_embeddings_neighbors(emb, "p1", 3, &s));
  EXPECT(s && strstr(s, "q1") != NULL);
  eeo_string_free(s);
  EXPECT_OK(eeo_embeddings_save(emb, in_dir(dir, "co.eewv")));
  eeo_embeddings* back = NULL;
  EXPECT_OK(eeo_embeddings_load(in_dir(dir, "co.eewv"), &back));
  size_t v = 0, d = 0;
  EXPECT_OK(eeo_embeddings_size(back, &v, &d));
  EXPECT(d == 20 && v > 0);
  eeo_embeddings_free(back);
  eeo_embeddings_free(emb);

  /* Baseline tagging and evaluation. */
  eeo_embeddings* pemb = NULL;
  eeo_scale* cscale = NULL;
  EXPECT_OK(eeo_embeddings_load(in_dir(dir, "planted_corpus.eewv"), &pemb));
  EXPECT_OK(eeo_scale_load(in_dir(dir, "planted_corpus.scale"), &cscale));
  char pred[4096];
  snprintf(pred, sizeof pred, "%s/pred_none.tags", dir);
  EXPECT_OK(eeo_tag_baseline(hmong, in_dir(dir, "planted_corpus.txt"), pemb, cscale, "none", 0.4, pred, &s));
  eeo_string_free(s);
  char *json = NULL, *table = NULL, *conf = NULL;
  EXPECT_OK(eeo_tag_eval(pred, in_dir(dir, "planted_corpus.tags"), "none", &json, &table, &conf));
  EXPECT(json && strstr(json, "\"recall\":1.0") != NULL);
  eeo_string_free(json);
  eeo_string_free(table);
  eeo_string_free(conf);
  EXPECT(eeo_tag_baseline(hmong, in_dir(dir, "planted_corpus.txt"), pemb, cscale, "bogus", 0.4, pred, &s) ==
         EEO_INVALID_ARGUMENT);
  eeo_embeddings_free(pemb);
  eeo_scale_free(cscale);

  /* Swap corpus and in-context accuracy. */
  char swapped[4096];
  snprintf(swapped, sizeof swapped, "%s/swapped.tags", dir);
  EXPECT_OK(eeo_swap_corpus(in_dir(dir, "planted_corpus.tags"), NULL, 0.5, 5, swapped, &s));
  eeo_string_free(s);
  EXPECT_OK(eeo_tag_eval(swapped, swapped, "self", &json, &table, &conf));
  EXPECT(json && strstr(json, "in_context_accuracy") != NULL);
  eeo_string_free(json);
  eeo_string_free(table);
  eeo_string_free(conf);
  double ica = 0.0;
  EXPECT_OK(eeo_in_context_accuracy(439, 447, 4, 0, &ica));
  EXPECT(fabs(100.0 * ica - 99.55) < 0.01);
  EXPECT(eeo_in_context_accuracy(0, 0, 0, 0, &ica) == EEO_INVALID_ARGUMENT);

  /* Splits and a small tagger. */
  char splits[4096];
  snprintf(splits, sizeof splits, "%s/splits", dir);
  EXPECT_OK(eeo_split_corpus(in_dir(dir, "planted_corpus.tags"), 0.8, 0.1, 0.1, 1, 3, splits, &s));
  eeo_string_free(s);
  eeo_tagger_params tp;
  eeo_tagger_defaults(&tp);
  EXPECT(tp.patience == 10);
  tp.max_epochs = 3;
  char train[4096], dev[4096];
  snprintf(train, sizeof train, "%s/split0/train.tags", splits);
  snprintf(dev, sizeof dev, "%s/split0/dev.tags", splits);
  eeo_tagger* tagger = NULL;
  EXPECT_OK(eeo_tagger_train(train, dev, &tp, NULL, &tagger));
  EXPECT_OK(eeo_tagger_save(tagger, in_dir(dir, "tagger.json")));
  eeo_tagger* loaded = NULL;
  EXPECT_OK(eeo_tagger_load(in_dir(dir, "tagger.json"), NULL, &loaded));
  snprintf(pred, sizeof pred, "%s/pred_tagger.tags", dir);
  EXPECT_OK(eeo_tagger_apply(loaded, dev, pred, &s));
  eeo_string_free(s);
  eeo_embeddings* wv = NULL;
  EXPECT_OK(eeo_tagger_embeddings(tagger, &wv));
  eeo_embeddings_free(wv);
  eeo_tagger_free(loaded);
  eeo_tagger_free(tagger);

  eeo_scale_free(planted);
  eeo_profile_free(hmong);
  eeo_string_free(NULL);

  if (failures) fprintf(stderr, "%d C API expectation(s) failed\n", failures);
  else printf("C API: all checks passed\n");
  return failures ? 1 : 0;
}
