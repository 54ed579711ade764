#ifndef MTR_H
#define MTR_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum MtrStatus {
  MTR_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MTR_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MTR_INVALID_UTF8 = 2,
  /**
   * The operation failed; `mtr_last_error` has the message.
   */
  MTR_ERROR = 3,
} MtrStatus;

/**
 * An immutable, loaded dataset.
 */
typedef struct MtrDataset MtrDataset;

/**
 * A trained multi-target model.
 */
typedef struct MtrTrainedModel MtrTrainedModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent `MtrError` on this thread. Valid until the
 * next failing call on the same thread; never null.
 */
const char *mtr_last_error(void);

/**
 * Load an ARFF or CSV dataset whose trailing `target_count` attributes are
 * the regression targets. On success, `*out` owns the dataset; release it
 * with `mtr_dataset_free`.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MtrStatus mtr_dataset_load(const char *path, uintptr_t target_count, struct MtrDataset **out);

/**
 * Row count, or 0 for a null handle.
 */
uintptr_t mtr_dataset_rows(const struct MtrDataset *dataset);

/**
 * Feature count, or 0 for a null handle.
 */
uintptr_t mtr_dataset_features(const struct MtrDataset *dataset);

/**
 * Target count, or 0 for a null handle.
 */
uintptr_t mtr_dataset_targets(const struct MtrDataset *dataset);

/**
 * Release a dataset. Null is a no-op.
 *
 * # Safety
 * `dataset` must come from `mtr_dataset_load` and not be freed twice.
 */
void mtr_dataset_free(struct MtrDataset *dataset);

/**
 * Train `method` (one of "mean", "st", "mts", "mtsc", "rc", "rcc", "erc",
 * "ercc") on `dataset`. `trees` is the bagging ensemble size,
 * `internal_folds` the fold count used by the corrected variants, and
 * `chains` the requested chain count for the chain ensembles.
 *
 * # Safety
 * All pointers must be valid; `method` must be NUL-terminated.
 */
enum MtrStatus mtr_train(const struct MtrDataset *dataset,
                         const char *method,
                         uintptr_t trees,
                         uintptr_t internal_folds,
                         uintptr_t chains,
                         uint64_t seed,
                         struct MtrTrainedModel **out);

/**
 * Feature width the model expects, or 0 for a null handle.
 */
uintptr_t mtr_model_features(const struct MtrTrainedModel *model);

/**
 * Number of targets the model predicts, or 0 for a null handle.
 */
uintptr_t mtr_model_targets(const struct MtrTrainedModel *model);

/**
 * Predict one row. `features` holds `feature_count` values in dataset
 * column order; `predictions` receives `mtr_model_targets(model)` values.
 *
 * # Safety
 * `features` and `predictions` must point to buffers of the stated sizes.
 */
enum MtrStatus mtr_model_predict(const struct MtrTrainedModel *model,
                                 const double *features,
                                 uintptr_t feature_count,
                                 double *predictions);

/**
 * Serialize a model to a file.
 *
 * # Safety
 * `model` must be a live handle and `path` NUL-terminated.
 */
enum MtrStatus mtr_model_save(const struct MtrTrainedModel *model, const char *path);

/**
 * Load a model saved by `mtr_model_save`.
 *
 * # Safety
 * `path` must be NUL-terminated and `out` valid.
 */
enum MtrStatus mtr_model_load(const char *path, struct MtrTrainedModel **out);

/**
 * Release a model. Null is a no-op.
 *
 * # Safety
 * `model` must come from this library and not be freed twice.
 */
void mtr_model_free(struct MtrTrainedModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MTR_H */
