// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_TRAINING_HPP
#define SCIPNN_TRAINING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scipnn/autograd.hpp"
#include "scipnn/model.hpp"
#include "scipnn/sample.hpp"

namespace scipnn {

enum class Optimizer { Sgd, Adam };

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  Optimizer optimizer = Optimizer::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool train_beta = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainReport {
  std::vector<double> loss_curve;      // mean training loss per epoch
  std::vector<double> accuracy_curve;  // test accuracy after each epoch
  std::size_t steps = 0;
};

// Trains `net` in place. Masked phases are held at exactly zero. On a
// non-finite loss the network is left at its last finite state and an
// Error of kind Divergence naming the epoch and step is thrown.
TrainReport train(Network& net, const MaskSet& masks, const SplitDataset& data,
                  const TrainConfig& cfg);

// Fraction of samples whose largest class intensity (lowest index on ties)
// matches the label. Returns 0 for an empty dataset.
double evaluate(const Network& net, std::span<const Sample> data);

}  // namespace scipnn

#endif  // SCIPNN_TRAINING_HPP
