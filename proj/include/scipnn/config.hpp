// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_CONFIG_HPP
#define SCIPNN_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scipnn/analysis.hpp"
#include "scipnn/data.hpp"
#include "scipnn/pruning.hpp"
#include "scipnn/training.hpp"

namespace scipnn {

struct DatasetConfig {
  enum class Kind { Mnist, Synthetic } kind = Kind::Synthetic;
  // MNIST directory; empty means $SCIPNN_MNIST_DIR.
  std::string mnist_dir;
  FeatureOptions features;
  // Synthetic blobs.
  std::size_t n_per_class = 100;
  double noise = 0.1;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct NetworkConfig {
  std::size_t width = 16;
  std::size_t depth = 3;
  std::size_t classes = 10;
  double beta_init = 2.0;
  std::uint64_t seed = 0;
};

struct NoiseSweepConfig {
  std::vector<double> sigma_ps = {0.0};
  std::size_t iterations = 1000;
  std::size_t eval_limit = 0;  // test samples per evaluation; 0 = all
  std::uint64_t seed = 0;
  bool perturb_pruned = false;
};

struct StudyConfig {
  std::size_t samples = 10000;
  std::size_t n = 16;
  double eps = 1e-3;
  bool identity_first = false;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  NetworkConfig network;
  TrainConfig train;
  PruneConfig prune;
  NoiseSweepConfig noise;
  StudyConfig study;
  PowerModel power;
  std::string output_dir = "out";

  // Sets every seed in the config to `seed`.
  void override_seed(std::uint64_t seed);
  void validate() const;
};

// Parses JSON text. Unknown keys and type mismatches are Config errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

SplitDataset load_dataset(const DatasetConfig& cfg, std::size_t width, std::size_t classes);

}  // namespace scipnn

#endif  // SCIPNN_CONFIG_HPP
