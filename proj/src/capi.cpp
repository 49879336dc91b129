// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/scipnn.h"

#include <exception>
#include <memory>
#include <new>
#include <string>

#include "scipnn/analysis.hpp"
#include "scipnn/checkpoint.hpp"
#include "scipnn/commands.hpp"
#include "scipnn/engine.hpp"
#include "scipnn/error.hpp"

struct scipnn_network {
  scipnn::Checkpoint ck;
};

struct scipnn_command {
  std::string name;
  scipnn::CommandOptions opt;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

scipnn_status status_of(scipnn::ErrorKind k) {
  using scipnn::ErrorKind;
  switch (k) {
    case ErrorKind::Shape: return SCIPNN_ERR_SHAPE;
    case ErrorKind::Numerical: return SCIPNN_ERR_NUMERICAL;
    case ErrorKind::Validation: return SCIPNN_ERR_VALIDATION;
    case ErrorKind::Index: return SCIPNN_ERR_INDEX;
    case ErrorKind::Format: return SCIPNN_ERR_FORMAT;
    case ErrorKind::Io: return SCIPNN_ERR_IO;
    case ErrorKind::Config: return SCIPNN_ERR_CONFIG;
    case ErrorKind::Divergence: return SCIPNN_ERR_DIVERGENCE;
  }
  return SCIPNN_ERR_INTERNAL;
}

template <typename F>
scipnn_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SCIPNN_OK;
  } catch (const scipnn::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SCIPNN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SCIPNN_ERR_INTERNAL;
  }
}

scipnn_status argument_error(const char* what) {
  g_last_error = what;
  return SCIPNN_ERR_ARGUMENT;
}

}  // namespace

extern "C" {

const char* scipnn_version(void) { return "0.1.0"; }

const char* scipnn_last_error(void) { return g_last_error.c_str(); }

const char* scipnn_status_name(scipnn_status s) {
  switch (s) {
    case SCIPNN_OK: return "ok";
    case SCIPNN_ERR_SHAPE: return "shape error";
    case SCIPNN_ERR_NUMERICAL: return "numerical error";
    case SCIPNN_ERR_VALIDATION: return "validation error";
    case SCIPNN_ERR_INDEX: return "index error";
    case SCIPNN_ERR_FORMAT: return "format error";
    case SCIPNN_ERR_IO: return "I/O error";
    case SCIPNN_ERR_CONFIG: return "configuration error";
    case SCIPNN_ERR_DIVERGENCE: return "divergence";
    case SCIPNN_ERR_ARGUMENT: return "invalid argument";
    case SCIPNN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

scipnn_status scipnn_network_random(size_t width, size_t depth, size_t classes, uint64_t seed, double beta,
                                    scipnn_network** out) {
  if (!out) return argument_error("out must not be null");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<scipnn_network>();
    h->ck.network = scipnn::Network::random(width, depth, classes, seed, beta);
    h->ck.state = scipnn::PruneState::snapshot(h->ck.network);
    h->ck.seeds = {{"network", seed}};
    *out = h.release();
  });
}

scipnn_status scipnn_network_load(const char* path, scipnn_network** out) {
  if (!path || !out) return argument_error("path and out must not be null");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<scipnn_network>();
    h->ck = scipnn::load_checkpoint(path);
    *out = h.release();
  });
}

scipnn_status scipnn_network_save(const scipnn_network* net, const char* path) {
  if (!net || !path) return argument_error("net and path must not be null");
  return guarded([&] { scipnn::save_checkpoint(path, net->ck); });
}

void scipnn_network_free(scipnn_network* net) { delete net; }

scipnn_status scipnn_network_get_info(const scipnn_network* net, scipnn_network_info* info) {
  if (!net || !info) return argument_error("net and info must not be null");
  return guarded([&] {
    const auto& n = net->ck.network;
    const auto& m = net->ck.state.masks;
    *info = {n.width(),
             n.depth(),
             n.class_count(),
             n.phase_count(),
             scipnn::ps_sparsity(n, m),
             scipnn::mean_phase(n, m),
             scipnn::static_power(n, m),
             net->ck.nominal_accuracy};
  });
}

scipnn_status scipnn_network_forward(const scipnn_network* net, const double* features, size_t len,
                                     double* log_probs, size_t classes) {
  if (!net || !features || !log_probs) return argument_error("arguments must not be null");
  const auto& n = net->ck.network;
  if (len != 2 * n.width()) return argument_error("features must hold 2 * width doubles");
  if (classes != n.class_count()) return argument_error("log_probs must hold one entry per class");
  return guarded([&] {
    scipnn::CVector x(n.width());
    for (size_t i = 0; i < x.size(); ++i) x[i] = {features[2 * i], features[2 * i + 1]};
    const auto lp = scipnn::Engine(n).log_probs(x);
    for (size_t i = 0; i < classes; ++i) log_probs[i] = lp[i];
  });
}

scipnn_status scipnn_command_create(const char* name, scipnn_command** out) {
  if (!name || !out) return argument_error("name and out must not be null");
  *out = nullptr;
  const std::string n = name;
  if (n != "train" && n != "prune" && n != "noise" && n != "study" && n != "report") {
    g_last_error = "unknown command '" + n + "'";
    return SCIPNN_ERR_ARGUMENT;
  }
  return guarded([&] { *out = new scipnn_command{n, {}, {}}; });
}

void scipnn_command_free(scipnn_command* cmd) { delete cmd; }

scipnn_status scipnn_command_set_config(scipnn_command* cmd, const char* path) {
  if (!cmd || !path) return argument_error("cmd and path must not be null");
  cmd->opt.config_path = path;
  return SCIPNN_OK;
}

scipnn_status scipnn_command_add_checkpoint(scipnn_command* cmd, const char* path) {
  if (!cmd || !path) return argument_error("cmd and path must not be null");
  return guarded([&] { cmd->opt.checkpoints.emplace_back(path); });
}

scipnn_status scipnn_command_set_out_dir(scipnn_command* cmd, const char* path) {
  if (!cmd || !path) return argument_error("cmd and path must not be null");
  cmd->opt.out_dir = path;
  return SCIPNN_OK;
}

scipnn_status scipnn_command_set_seed(scipnn_command* cmd, uint64_t seed) {
  if (!cmd) return argument_error("cmd must not be null");
  cmd->opt.seed_override = seed;
  return SCIPNN_OK;
}

scipnn_status scipnn_command_run(scipnn_command* cmd) {
  if (!cmd) return argument_error("cmd must not be null");
  return guarded([&] { cmd->summary = scipnn::run_command(cmd->name, cmd->opt).line(); });
}

const char* scipnn_command_summary(const scipnn_command* cmd) { return cmd ? cmd->summary.c_str() : ""; }

}  // extern "C"
