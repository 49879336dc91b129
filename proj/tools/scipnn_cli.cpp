// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scipnn/scipnn.h"

namespace {

// Exit codes: 0 success, 1 runtime failure, 2 missing or unreadable files,
// 3 invalid configuration or arguments.
int exit_code(scipnn_status s) {
  switch (s) {
    case SCIPNN_OK: return 0;
    case SCIPNN_ERR_IO: return 2;
    case SCIPNN_ERR_CONFIG:
    case SCIPNN_ERR_ARGUMENT:
    case SCIPNN_ERR_VALIDATION: return 3;
    default: return 1;
  }
}

struct Args {
  std::string config;
  std::vector<std::string> checkpoints;
  std::string out_dir;
  std::uint64_t seed = 0;
};

int run(const std::string& name, const Args& a, bool seed_given) {
  scipnn_command* cmd = nullptr;
  scipnn_status s = scipnn_command_create(name.c_str(), &cmd);
  if (s == SCIPNN_OK) s = scipnn_command_set_config(cmd, a.config.c_str());
  for (const auto& c : a.checkpoints)
    if (s == SCIPNN_OK) s = scipnn_command_add_checkpoint(cmd, c.c_str());
  if (s == SCIPNN_OK && !a.out_dir.empty()) s = scipnn_command_set_out_dir(cmd, a.out_dir.c_str());
  if (s == SCIPNN_OK && seed_given) s = scipnn_command_set_seed(cmd, a.seed);
  if (s == SCIPNN_OK) s = scipnn_command_run(cmd);
  if (s == SCIPNN_OK) {
    std::cout << scipnn_command_summary(cmd) << std::endl;
  } else {
    std::cerr << "scipnn " << name << ": " << scipnn_status_name(s) << ": " << scipnn_last_error() << '\n';
  }
  scipnn_command_free(cmd);
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and pruning laboratory for coherent photonic neural networks"};
  app.set_version_flag("--version", std::string(scipnn_version()));
  app.require_subcommand(1);

  Args args;
  struct Spec {
    const char* name;
    const char* help;
    bool checkpoint;
    bool multi;
  };
  const Spec specs[] = {
      {"train", "Train a network and write checkpoint.scpn and train_curves.csv", false, false},
      {"prune", "Prune a trained checkpoint; writes history.csv, best.scpn, final.scpn, phase_histogram.csv", true, false},
      {"noise", "Phase-noise Monte Carlo sweep over one or more checkpoints; writes noise.csv", true, true},
      {"study", "Unitary vs phase-shifter sparsity study; writes study.csv", false, false},
      {"report", "Per-layer phase-shifter report for a checkpoint; writes report.csv", true, false},
  };
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts;
  for (const Spec& sp : specs) {
    CLI::App* sub = app.add_subcommand(sp.name, sp.help);
    sub->add_option("--config", args.config, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
    if (sp.checkpoint) {
      auto* o = sub->add_option("--checkpoint", args.checkpoints, sp.multi ? "Checkpoint (repeatable; the first is the reference)" : "Checkpoint")
                    ->required();
      if (!sp.multi) o->expected(1);
    }
    sub->add_option("--out-dir", args.out_dir, "Output directory (overrides the config)");
    seed_opts.push_back(sub->add_option("--seed-override", args.seed, "Replace every seed in the config"));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return 0;
    // A config path that does not exist is a missing-file error.
    return e.get_name() == "ValidationError" ? 2 : 3;
  }
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) return run(specs[i].name, args, seed_opts[i]->count() > 0);
  return 3;
}
