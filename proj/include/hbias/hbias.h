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

/* C interface to the hbias library. Objects are opaque handles; every
 * fallible call returns an hbias_status and leaves a message for
 * hbias_last_error(). Strings returned through char** are owned by the
 * caller and released with hbias_string_free. Handles are not
 * synchronized: use one handle per thread, except that a model may be
 * evaluated from several threads at once. */

#ifndef HBIAS_HBIAS_H
#define HBIAS_HBIAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HBIAS_API __declspec(dllexport)
#else
#define HBIAS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hbias_status {
    HBIAS_OK = 0,
    HBIAS_ERR_INVALID_ARGUMENT = 1, /* null handle or pointer, bad enum text */
    HBIAS_ERR_CONTRACT = 2,         /* precondition broken (missing tree, shape) */
    HBIAS_ERR_NUMERIC = 3,          /* NaN or infinity during training */
    HBIAS_ERR_PARSE = 4,            /* malformed file or text */
    HBIAS_ERR_CAPACITY = 5,         /* dataset filters cannot fill a split */
    HBIAS_ERR_CONFIG = 6,           /* invalid configuration */
    HBIAS_ERR_IO = 7,               /* file system or other library error */
    HBIAS_ERR_INTERNAL = 8
} hbias_status;

typedef struct hbias_dataset hbias_dataset;
typedef struct hbias_model hbias_model;

/* Progress callback; `line` is valid for the duration of the call. */
typedef void (*hbias_log_fn)(const char* line, void* user);

HBIAS_API const char* hbias_version(void);
HBIAS_API const char* hbias_status_name(hbias_status status);
/* Message of the last failure on the calling thread ("" if none). */
HBIAS_API const char* hbias_last_error(void);
HBIAS_API void hbias_string_free(char* s);

/* Datasets. `sizes_json` may be NULL (full-size splits) or an object with
 * any of "train", "val", "test", "gen". */
HBIAS_API hbias_status hbias_dataset_generate(const char* recipe, uint64_t seed, const char* sizes_json,
                                              hbias_dataset** out);
HBIAS_API hbias_status hbias_dataset_load(const char* dir, hbias_dataset** out);
HBIAS_API hbias_status hbias_dataset_save(const hbias_dataset* data, const char* dir);
/* split: "train", "val", "test" or "gen". */
HBIAS_API hbias_status hbias_dataset_size(const hbias_dataset* data, const char* split, size_t* out);
/* Recipe, seed, sizes and structure flags as JSON. */
HBIAS_API hbias_status hbias_dataset_info(const hbias_dataset* data, char** json_out);
HBIAS_API void hbias_dataset_free(hbias_dataset* data);

/* Models. `config_json` is a model config object; missing keys take
 * their defaults. */
HBIAS_API hbias_status hbias_model_create(const char* config_json, uint64_t seed, hbias_model** out);
HBIAS_API hbias_status hbias_model_load(const char* checkpoint, hbias_model** out);
HBIAS_API hbias_status hbias_model_save(const hbias_model* model, const char* checkpoint);
HBIAS_API hbias_status hbias_model_config(const hbias_model* model, char** json_out);
/* Trains in place. `training_json` may be NULL for defaults; its "seed"
 * key is replaced by `seed`. On HBIAS_ERR_NUMERIC the log is still
 * returned. */
HBIAS_API hbias_status hbias_model_train(hbias_model* model, const hbias_dataset* data, const char* training_json,
                                         uint64_t seed, hbias_log_fn log, void* user, char** log_json_out);
/* Decodes test and generalization splits on `workers` threads (0 means
 * the default worker count) and returns the metrics as JSON. Writes the
 * per-example generalization dump when `predictions_path` is not NULL. */
HBIAS_API hbias_status hbias_model_evaluate(const hbias_model* model, const hbias_dataset* data, unsigned workers,
                                            const char* predictions_path, char** metrics_json_out);
/* Greedy decode of space-separated input tokens (task token last).
 * Sequential decoders only. */
HBIAS_API hbias_status hbias_model_predict(const hbias_model* model, const char* input, char** output);
HBIAS_API void hbias_model_free(hbias_model* model);

/* Experiments. */
HBIAS_API hbias_status hbias_catalog(char** json_out);
/* Worker count from HBIAS_WORKERS or the hardware. */
HBIAS_API hbias_status hbias_default_workers(unsigned* out);
/* Runs or resumes a catalog sweep under `out_dir`. workers == 0 uses
 * hbias_default_workers. Individual run failures do not fail the call;
 * the summary JSON lists them. */
HBIAS_API hbias_status hbias_sweep(const char* experiment, const char* profile, unsigned seeds, const char* out_dir,
                                   unsigned workers, hbias_log_fn log, void* user, char** summary_json_out);
/* format: "csv", "json" or "markdown". `dir` is a sweep directory or a
 * directory of sweep directories. */
HBIAS_API hbias_status hbias_report(const char* dir, const char* format, char** text_out);

#ifdef __cplusplus
}
#endif

#endif /* HBIAS_HBIAS_H */
