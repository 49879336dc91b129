/* Copyright 2026 The scipnn Authors
 * Licensed under the Apache License, Version 2.0
 *
 * C interface to the scipnn library. All functions return a status code;
 * on failure scipnn_last_error() describes the problem for the calling
 * thread. Handles are opaque and owned by the caller.
 */
#ifndef SCIPNN_SCIPNN_H
#define SCIPNN_SCIPNN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SCIPNN_API __attribute__((visibility("default")))
#else
#define SCIPNN_API
#endif

typedef enum scipnn_status {
  SCIPNN_OK = 0,
  SCIPNN_ERR_SHAPE = 1,
  SCIPNN_ERR_NUMERICAL = 2,
  SCIPNN_ERR_VALIDATION = 3,
  SCIPNN_ERR_INDEX = 4,
  SCIPNN_ERR_FORMAT = 5,
  SCIPNN_ERR_IO = 6,
  SCIPNN_ERR_CONFIG = 7,
  SCIPNN_ERR_DIVERGENCE = 8,
  SCIPNN_ERR_ARGUMENT = 9,
  SCIPNN_ERR_INTERNAL = 10
} scipnn_status;

typedef struct scipnn_network scipnn_network;
typedef struct scipnn_command scipnn_command;

typedef struct scipnn_network_info {
  size_t width;
  size_t depth;
  size_t classes;
  size_t phase_count;
  double sparsity;
  double mean_phase_rad;
  double static_power_mw;
  double nominal_accuracy;
} scipnn_network_info;

SCIPNN_API const char* scipnn_version(void);
SCIPNN_API const char* scipnn_last_error(void);
SCIPNN_API const char* scipnn_status_name(scipnn_status status);

/* Networks. A network loaded from a checkpoint carries its pruning masks. */
SCIPNN_API scipnn_status scipnn_network_random(size_t width, size_t depth, size_t classes, uint64_t seed,
                                               double beta, scipnn_network** out);
SCIPNN_API scipnn_status scipnn_network_load(const char* path, scipnn_network** out);
SCIPNN_API scipnn_status scipnn_network_save(const scipnn_network* net, const char* path);
SCIPNN_API void scipnn_network_free(scipnn_network* net);
SCIPNN_API scipnn_status scipnn_network_get_info(const scipnn_network* net, scipnn_network_info* info);
/* features: 2*width doubles (re, im interleaved). log_probs: `classes` doubles. */
SCIPNN_API scipnn_status scipnn_network_forward(const scipnn_network* net, const double* features, size_t len,
                                                double* log_probs, size_t classes);

/* Batch commands: "train", "prune", "noise", "study", "report". */
SCIPNN_API scipnn_status scipnn_command_create(const char* name, scipnn_command** out);
SCIPNN_API void scipnn_command_free(scipnn_command* cmd);
SCIPNN_API scipnn_status scipnn_command_set_config(scipnn_command* cmd, const char* path);
SCIPNN_API scipnn_status scipnn_command_add_checkpoint(scipnn_command* cmd, const char* path);
SCIPNN_API scipnn_status scipnn_command_set_out_dir(scipnn_command* cmd, const char* path);
SCIPNN_API scipnn_status scipnn_command_set_seed(scipnn_command* cmd, uint64_t seed);
SCIPNN_API scipnn_status scipnn_command_run(scipnn_command* cmd);
/* Summary line of the last successful run ("key=value ..."); valid until the
 * command is run again or freed. */
SCIPNN_API const char* scipnn_command_summary(const scipnn_command* cmd);

#ifdef __cplusplus
}
#endif

#endif /* SCIPNN_SCIPNN_H */
