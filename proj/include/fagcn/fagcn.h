/*
Copyright 2026 The fagcn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

/*
 * C interface to the feature-attention GCN library.
 *
 * Objects are opaque handles created by fagcn_*_load / fagcn_train and
 * released with the matching *_free function. Every fallible call returns a
 * fagcn_status; on failure fagcn_last_error() describes the problem. Strings
 * handed out through char** parameters are NUL-terminated, heap allocated
 * and must be released with fagcn_string_free().
 *
 * A model or dataset handle may be shared between threads for read-only
 * calls except fagcn_evaluate and fagcn_export_attention, which must not run
 * concurrently on the same model.
 */

#ifndef FAGCN_FAGCN_H
#define FAGCN_FAGCN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FAGCN_BUILDING_LIBRARY)
#    define FAGCN_API __declspec(dllexport)
#  else
#    define FAGCN_API __declspec(dllimport)
#  endif
#else
#  define FAGCN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes for the command-line tool. */
typedef enum fagcn_status {
  FAGCN_OK = 0,
  FAGCN_ERR_INTERNAL = 1,
  FAGCN_ERR_INPUT = 2,   /* bad config or arguments, unreadable file, unknown id */
  FAGCN_ERR_DATA = 3,    /* malformed data, shape mismatch, corrupt checkpoint */
  FAGCN_ERR_NUMERIC = 4  /* non-finite loss or gradient */
} fagcn_status;

typedef struct fagcn_dataset fagcn_dataset;
typedef struct fagcn_model fagcn_model;

typedef void (*fagcn_epoch_callback)(size_t epoch, double loss, void* user_data);

FAGCN_API const char* fagcn_version(void);

/* Message for the last failed call on this thread; "" if none. */
FAGCN_API const char* fagcn_last_error(void);

FAGCN_API void fagcn_string_free(char* s);

/* Validates an experiment config and returns its canonical JSON form. */
FAGCN_API fagcn_status fagcn_config_canonical(const char* config_json, char** out_json);

/* Hex SHA-256 of a file's bytes. */
FAGCN_API fagcn_status fagcn_file_digest(const char* path, char** out_hex);

/* ---- datasets ---------------------------------------------------------- */

FAGCN_API fagcn_status fagcn_dataset_load(const char* edges_path, const char* content_path,
                                          fagcn_dataset** out);

/* Loads data using the model's label list, so class ids match training. */
FAGCN_API fagcn_status fagcn_dataset_load_for_model(const fagcn_model* model,
                                                    const char* edges_path,
                                                    const char* content_path,
                                                    fagcn_dataset** out);

FAGCN_API void fagcn_dataset_free(fagcn_dataset* ds);

FAGCN_API size_t fagcn_dataset_num_nodes(const fagcn_dataset* ds);
FAGCN_API size_t fagcn_dataset_num_edges(const fagcn_dataset* ds);
FAGCN_API size_t fagcn_dataset_vocab_size(const fagcn_dataset* ds);
FAGCN_API size_t fagcn_dataset_num_classes(const fagcn_dataset* ds);
/* Edge lines dropped because an endpoint is absent from the content file. */
FAGCN_API size_t fagcn_dataset_skipped_edges(const fagcn_dataset* ds);

/* Hex SHA-256 of the node contents the config trains on (noise applied). */
FAGCN_API fagcn_status fagcn_dataset_content_digest(const fagcn_dataset* ds,
                                                    const char* config_json, char** out_hex);

/* ---- models ------------------------------------------------------------ */

/* Draws the split, trains and evaluates on the held-out nodes. `progress`
   may be NULL. */
FAGCN_API fagcn_status fagcn_train(const char* config_json, const fagcn_dataset* ds,
                                   fagcn_epoch_callback progress, void* user_data,
                                   fagcn_model** out);

FAGCN_API void fagcn_model_free(fagcn_model* model);

FAGCN_API fagcn_status fagcn_model_save(const fagcn_model* model, const char* path);
FAGCN_API fagcn_status fagcn_model_load(const char* path, fagcn_model** out);

FAGCN_API fagcn_status fagcn_model_config(const fagcn_model* model, char** out_json);

/* "epoch,loss" CSV of a model trained in this process (header only for
   loaded checkpoints). */
FAGCN_API fagcn_status fagcn_model_history_csv(const fagcn_model* model, char** out_csv);

/* Held-out accuracy measured right after training; 0 for loaded checkpoints. */
FAGCN_API double fagcn_model_test_accuracy(const fagcn_model* model);
FAGCN_API double fagcn_model_train_accuracy(const fagcn_model* model);
FAGCN_API double fagcn_model_train_seconds(const fagcn_model* model);

/* Accuracy on the test nodes of the split drawn from `split_seed`. */
FAGCN_API fagcn_status fagcn_evaluate(const fagcn_model* model, const fagcn_dataset* ds,
                                      uint64_t split_seed, double* accuracy);

/* JSON record of the attention weights the node puts on each neighbour's tokens. */
FAGCN_API fagcn_status fagcn_export_attention(const fagcn_model* model, const fagcn_dataset* ds,
                                              const char* node_id, char** out_json);

/* ---- experiments ------------------------------------------------------- */

/* Runs a sweep description (axis, values, variants, seeds) over `ds` and
   returns the results table as CSV. */
FAGCN_API fagcn_status fagcn_sweep(const char* config_json, const char* sweep_json,
                                   const fagcn_dataset* ds, unsigned threads, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* FAGCN_FAGCN_H */
