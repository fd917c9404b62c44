#ifndef DRESSED_AUGER_H
#define DRESSED_AUGER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum DaStatus {
  DaStatus_Ok = 0,
  DaStatus_NullPointer = 1,
  DaStatus_InvalidUtf8 = 2,
  DaStatus_Config = 3,
  DaStatus_Numerical = 4,
  DaStatus_Io = 5,
  DaStatus_BufferTooSmall = 6,
  DaStatus_Panic = 7,
} DaStatus;

/**
 * Run configuration.
 */
typedef struct DaConfig DaConfig;

/**
 * θ = 0 electron spectrum with its asymmetry.
 */
typedef struct DaSpectrum DaSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the
 * next call into this library from the same thread.
 */
const char *da_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *da_version(void);

/**
 * Default configuration (1500 nm dressing, 1.4e16 W/cm² x rays).
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum DaStatus da_config_default(struct DaConfig **out);

/**
 * Parse a TOML configuration.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` valid for writing.
 */
enum DaStatus da_config_from_toml(const char *text, struct DaConfig **out);

/**
 * Load a shipped preset by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` valid for writing.
 */
enum DaStatus da_config_preset(const char *name, struct DaConfig **out);

/**
 * Set a numeric key given as a dotted path, e.g. `"xray.delay_fs"`.
 * Integer keys accept integral values. The configuration is unchanged on
 * failure.
 *
 * # Safety
 * `cfg` must come from this library; `key` must be a NUL-terminated string.
 */
enum DaStatus da_config_set(struct DaConfig *cfg, const char *key, double value);

/**
 * Read a numeric key.
 *
 * # Safety
 * `cfg` must come from this library; `key` NUL-terminated; `out` writable.
 */
enum DaStatus da_config_get(const struct DaConfig *cfg, const char *key, double *out);

/**
 * # Safety
 * `cfg` must come from this library or be NULL; it is invalid afterwards.
 */
void da_config_free(struct DaConfig *cfg);

/**
 * Compute the θ = 0 spectrum for `cfg`.
 *
 * # Safety
 * `cfg` must come from this library; `out` valid for writing.
 */
enum DaStatus da_spectrum_forward(const struct DaConfig *cfg, struct DaSpectrum **out);

/**
 * Number of energy samples.
 *
 * # Safety
 * `spectrum` must come from this library.
 */
uintptr_t da_spectrum_len(const struct DaSpectrum *spectrum);

/**
 * Copy energies (eV) and densities (per eV per sr) into caller buffers of
 * length `capacity`.
 *
 * # Safety
 * `spectrum` must come from this library; both buffers hold `capacity` doubles.
 */
enum DaStatus da_spectrum_copy(const struct DaSpectrum *spectrum,
                               double *energies,
                               double *density,
                               uintptr_t capacity);

/**
 * Asymmetry about the channel energy.
 *
 * # Safety
 * `spectrum` must come from this library; `out` writable.
 */
enum DaStatus da_spectrum_asymmetry(const struct DaSpectrum *spectrum, double *out);

/**
 * # Safety
 * `spectrum` must come from this library or be NULL; it is invalid afterwards.
 */
void da_spectrum_free(struct DaSpectrum *spectrum);

/**
 * Bessel function of the first kind `J_n(x)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum DaStatus da_bessel_jn(int64_t n, double x, double *out);

/**
 * Asymmetry of a sampled spectrum about `e_ref`.
 *
 * # Safety
 * `energies` and `density` must each hold `len` doubles; `out` writable.
 */
enum DaStatus da_asymmetry(const double *energies,
                           const double *density,
                           uintptr_t len,
                           double e_ref,
                           double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRESSED_AUGER_H */
