// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_COMMANDS_HPP
#define SCIPNN_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scipnn {

struct CommandOptions {
  std::string config_path;
  std::vector<std::string> checkpoints;
  std::string out_dir;  // overrides output_dir from the config when set
  std::optional<std::uint64_t> seed_override;
};

struct CommandSummary {
  std::vector<std::pair<std::string, std::string>> fields;

  void add(const std::string& key, const std::string& value) { fields.emplace_back(key, value); }
  void add(const std::string& key, double value);
  void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }
  // "key=value key=value ..."
  std::string line() const;
};

// train: writes checkpoint.scpn and train_curves.csv.
CommandSummary cmd_train(const CommandOptions& opt);
// prune: writes history.csv, best.scpn, final.scpn and phase_histogram.csv.
CommandSummary cmd_prune(const CommandOptions& opt);
// noise: writes noise.csv for one or more checkpoints.
CommandSummary cmd_noise(const CommandOptions& opt);
// study: writes study.csv (unitary sparsity scatter).
CommandSummary cmd_study(const CommandOptions& opt);
// report: writes report.csv with per-layer phase counts of one checkpoint.
CommandSummary cmd_report(const CommandOptions& opt);

CommandSummary run_command(const std::string& name, const CommandOptions& opt);

}  // namespace scipnn

#endif  // SCIPNN_COMMANDS_HPP
