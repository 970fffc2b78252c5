// Copyright 2026 The hbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

// Exercises the shared library through its C header only, compiled as C.

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "hbias/hbias.h"

static int failures = 0;

#define EXPECT(cond)                                                         \
    do {                                                                     \
        if (!(cond)) {                                                       \
            fprintf(stderr, "%s:%d: expected %s (last error: %s)\n", __FILE__, \
                    __LINE__, #cond, hbias_last_error());                    \
            ++failures;                                                      \
        }                                                                    \
    } while (0)

static int log_calls = 0;
static void count_lines(const char* line, void* user) {
    (void)line;
    ++*(int*)user;
}

static const char* kSizes = "{\"train\": 200, \"val\": 30, \"test\": 30, \"gen\": 30}";
static const char* kModel = "{\"cell\": \"GRU\", \"attention\": \"LOCATION\", \"embedding\": 8, \"hidden\": 8}";
static const char* kTraining = "{\"eval_interval\": 5, \"min_batches\": 10, \"max_batches\": 10}";

static void test_errors(void) {
    hbias_dataset* d = NULL;
    hbias_model* m = NULL;
    char* s = NULL;
    EXPECT(strcmp(hbias_status_name(HBIAS_OK), "ok") == 0);
    EXPECT(strlen(hbias_version()) > 0);

    EXPECT(hbias_dataset_generate(NULL, 1, NULL, &d) == HBIAS_ERR_INVALID_ARGUMENT);
    EXPECT(d == NULL);
    EXPECT(strlen(hbias_last_error()) > 0);
    EXPECT(hbias_dataset_generate("no-such-recipe", 1, NULL, &d) == HBIAS_ERR_CONFIG);
    EXPECT(hbias_dataset_generate("question", 1, "{\"train\": ", &d) == HBIAS_ERR_PARSE);
    EXPECT(hbias_dataset_load("/nonexistent/hbias", &d) != HBIAS_OK);

    EXPECT(hbias_model_create("{\"cell\": \"XYZ\"}", 1, &m) == HBIAS_ERR_CONFIG);
    EXPECT(hbias_model_create("{\"cell\": \"ON_LSTM\", \"hidden\": 10, \"chunk\": 3}", 1, &m) == HBIAS_ERR_CONFIG);
    EXPECT(hbias_model_load("/nonexistent/model.bin", &m) != HBIAS_OK);
    EXPECT(m == NULL);

    EXPECT(hbias_report("/tmp", "yaml", &s) != HBIAS_OK);
    EXPECT(hbias_sweep("no-such-experiment", "smoke", 1, "/tmp/x", 1, NULL, NULL, &s) == HBIAS_ERR_CONFIG);

    // Freeing NULL is a no-op.
    hbias_dataset_free(NULL);
    hbias_model_free(NULL);
    hbias_string_free(NULL);
}

static void test_round_trip(const char* dir) {
    char data_dir[512], ckpt[512], preds[512];
    snprintf(data_dir, sizeof data_dir, "%s/data", dir);
    snprintf(ckpt, sizeof ckpt, "%s/model.bin", dir);
    snprintf(preds, sizeof preds, "%s/gen_predictions.tsv", dir);

    hbias_dataset* d = NULL;
    EXPECT(hbias_dataset_generate("question", 7, kSizes, &d) == HBIAS_OK);
    size_t n = 0;
    EXPECT(hbias_dataset_size(d, "train", &n) == HBIAS_OK && n == 200);
    EXPECT(hbias_dataset_size(d, "gen", &n) == HBIAS_OK && n == 30);
    EXPECT(hbias_dataset_size(d, "bogus", &n) == HBIAS_ERR_INVALID_ARGUMENT);
    EXPECT(hbias_dataset_save(d, data_dir) == HBIAS_OK);
    hbias_dataset* d2 = NULL;
    EXPECT(hbias_dataset_load(data_dir, &d2) == HBIAS_OK);
    char *info1 = NULL, *info2 = NULL;
    EXPECT(hbias_dataset_info(d, &info1) == HBIAS_OK);
    EXPECT(hbias_dataset_info(d2, &info2) == HBIAS_OK);
    EXPECT(info1 && info2 && strcmp(info1, info2) == 0);
    hbias_string_free(info1);
    hbias_string_free(info2);

    hbias_model* m = NULL;
    EXPECT(hbias_model_create(kModel, 3, &m) == HBIAS_OK);
    char* log = NULL;
    EXPECT(hbias_model_train(m, d2, kTraining, 3, count_lines, &log_calls, &log) == HBIAS_OK);
    EXPECT(log_calls > 0);
    EXPECT(log && strstr(log, "max-batches-cap") != NULL);
    hbias_string_free(log);

    char* metrics = NULL;
    EXPECT(hbias_model_evaluate(m, d2, 1, preds, &metrics) == HBIAS_OK);
    EXPECT(metrics && strstr(metrics, "gen_first_word_acc") != NULL);
    FILE* f = fopen(preds, "r");
    EXPECT(f != NULL);
    if (f) fclose(f);

    char *out1 = NULL, *out2 = NULL, *cfg = NULL;
    const char* input = "the yak does read . quest";
    EXPECT(hbias_model_predict(m, input, &out1) == HBIAS_OK);
    EXPECT(hbias_model_predict(m, "the yak does glorp . quest", &out2) == HBIAS_ERR_CONTRACT);
    EXPECT(hbias_model_save(m, ckpt) == HBIAS_OK);
    hbias_model* m2 = NULL;
    EXPECT(hbias_model_load(ckpt, &m2) == HBIAS_OK);
    EXPECT(hbias_model_predict(m2, input, &out2) == HBIAS_OK);
    EXPECT(out1 && out2 && strcmp(out1, out2) == 0);
    EXPECT(hbias_model_config(m2, &cfg) == HBIAS_OK);
    EXPECT(cfg && strstr(cfg, "LOCATION") != NULL);

    // Same seed, same weights: evaluation is reproducible across a reload.
    char* metrics2 = NULL;
    EXPECT(hbias_model_evaluate(m2, d2, 2, NULL, &metrics2) == HBIAS_OK);
    EXPECT(metrics && metrics2 && strcmp(metrics, metrics2) == 0);

    hbias_string_free(out1);
    hbias_string_free(out2);
    hbias_string_free(cfg);
    hbias_string_free(metrics);
    hbias_string_free(metrics2);
    hbias_model_free(m);
    hbias_model_free(m2);
    hbias_dataset_free(d);
    hbias_dataset_free(d2);
}

static void test_tree_predict_refused(void) {
    hbias_model* m = NULL;
    char* out = NULL;
    EXPECT(hbias_model_create("{\"cell\": \"GRU\", \"encoder\": \"TREE\", \"decoder\": \"TREE\", \"embedding\": 8, "
                              "\"hidden\": 8}",
                              1, &m) == HBIAS_OK);
    EXPECT(hbias_model_predict(m, "the yak does read . quest", &out) == HBIAS_ERR_CONTRACT);
    hbias_model_free(m);
}

static void test_catalog(void) {
    char* ids = NULL;
    EXPECT(hbias_catalog(&ids) == HBIAS_OK);
    EXPECT(ids && strstr(ids, "question-seq") != NULL);
    hbias_string_free(ids);
    unsigned w = 0;
    EXPECT(hbias_default_workers(&w) == HBIAS_OK && w >= 1);
}

int main(int argc, char** argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s SCRATCH_DIR\n", argv[0]);
        return 2;
    }
    test_errors();
    test_catalog();
    test_tree_predict_refused();
    test_round_trip(argv[1]);
    if (failures) fprintf(stderr, "%d check(s) failed\n", failures);
    else printf("all C API checks passed\n");
    return failures ? 1 : 0;
}
