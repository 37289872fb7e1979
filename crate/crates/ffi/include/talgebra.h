/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef TALGEBRA_H
#define TALGEBRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum TalgebraStatus {
  TALGEBRA_STATUS_OK = 0,
  TALGEBRA_STATUS_INVALID_ARGUMENT = 1,
  TALGEBRA_STATUS_NUMERIC_DOMAIN = 2,
  TALGEBRA_STATUS_FORMAT = 3,
  TALGEBRA_STATUS_IO = 4,
  TALGEBRA_STATUS_NULL_POINTER = 5,
  TALGEBRA_STATUS_PANIC = 6,
} TalgebraStatus;

// Compound-image extension applied to each pixel.
typedef enum TalgebraStrategy {
  // No extension; `param` is ignored.
  TALGEBRA_STRATEGY_PLAIN = 0,
  // Nested 3x3 neighborhoods; `param` is the number of reuses.
  TALGEBRA_STRATEGY_NESTED = 1,
  // One `param x param` window (odd, at least 3).
  TALGEBRA_STRATEGY_WINDOW = 2,
} TalgebraStrategy;

// Opaque fitted model. Release with [`talgebra_tpca_free`].
typedef struct TalgebraTpcaModel TalgebraTpcaModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call on the same thread.
const char *talgebra_last_error(void);

// Library version as a static NUL-terminated string.
const char *talgebra_version(void);

// Fits a model on `count` t-vectors of `dim` entries with t-scalar shape
// `dims[0..order]`. `re`/`im` hold `count * dim * M` values, one t-vector
// after another. `threads == 0` selects the default thread count.
//
// # Safety
// Pointers must be valid for the lengths implied by the arguments.
enum TalgebraStatus talgebra_tpca_fit(const size_t *dims,
                                      size_t order,
                                      size_t dim,
                                      size_t count,
                                      const double *re,
                                      const double *im,
                                      size_t threads,
                                      struct TalgebraTpcaModel **out);

// Releases a model. Null is accepted.
//
// # Safety
// `model` must come from this library and not be used afterwards.
void talgebra_tpca_free(struct TalgebraTpcaModel *model);

// Feature t-vector of one query (`dim * M` values each in and out).
//
// # Safety
// Buffers must hold `dim * M` values; `im` and `out_im` may be null.
enum TalgebraStatus talgebra_tpca_transform(const struct TalgebraTpcaModel *model,
                                            const double *re,
                                            const double *im,
                                            double *out_re,
                                            double *out_im);

// Reconstruction from the leading `d` feature entries.
//
// # Safety
// Buffers must hold `dim * M` values; `im` and `out_im` may be null.
enum TalgebraStatus talgebra_tpca_reconstruct(const struct TalgebraTpcaModel *model,
                                              const double *feature_re,
                                              const double *feature_im,
                                              size_t d,
                                              double *out_re,
                                              double *out_im);

// Length `D` of the t-vectors the model accepts.
//
// # Safety
// `model` and `out` must be valid.
enum TalgebraStatus talgebra_tpca_dim(const struct TalgebraTpcaModel *model, size_t *out);

// Number of training t-vectors.
//
// # Safety
// `model` and `out` must be valid.
enum TalgebraStatus talgebra_tpca_training_count(const struct TalgebraTpcaModel *model,
                                                 size_t *out);

// Whether the model was fitted on real data (1) or not (0).
//
// # Safety
// `model` and `out` must be valid.
enum TalgebraStatus talgebra_tpca_is_real(const struct TalgebraTpcaModel *model, int32_t *out);

// T-scalar shape. Writes the order to `order`, and the dimensions to
// `dims` when `capacity` is large enough (`dims` may be null to query the
// order only).
//
// # Safety
// `dims` must hold `capacity` values when non-null.
enum TalgebraStatus talgebra_tpca_shape(const struct TalgebraTpcaModel *model,
                                        size_t *dims,
                                        size_t capacity,
                                        size_t *order);

// Writes the model to a file.
//
// # Safety
// `path` must be a NUL-terminated UTF-8 string.
enum TalgebraStatus talgebra_tpca_save(const struct TalgebraTpcaModel *model, const char *path);

// Reads a model written by [`talgebra_tpca_save`].
//
// # Safety
// `path` must be a NUL-terminated UTF-8 string and `out` valid.
enum TalgebraStatus talgebra_tpca_load(const char *path, struct TalgebraTpcaModel **out);

// Peak signal-to-noise ratio in dB of `y` against `x` (`len` values each).
// Identical inputs give +infinity.
//
// # Safety
// `x` and `y` must hold `len` values; `out` must be valid.
enum TalgebraStatus talgebra_psnr(const double *x,
                                  const double *y,
                                  size_t len,
                                  double max_value,
                                  double *out);

// Number of t-scalar elements `M` produced by a strategy.
//
// # Safety
// `out` must be valid.
enum TalgebraStatus talgebra_compound_slice_count(uint32_t kind, size_t param, size_t *out);

// Compound t-vector of a row-major `rows x cols` image: `rows * cols * M`
// real values in raw t-vector layout, entries in column-major pixel order.
//
// # Safety
// `pixels` must hold `rows * cols` values and `out` `out_len` values.
enum TalgebraStatus talgebra_compound_extend(const double *pixels,
                                             size_t rows,
                                             size_t cols,
                                             uint32_t kind,
                                             size_t param,
                                             double *out,
                                             size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TALGEBRA_H */
