// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_PRUNING_HPP
#define SCIPNN_PRUNING_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "scipnn/analysis.hpp"
#include "scipnn/autograd.hpp"
#include "scipnn/model.hpp"
#include "scipnn/sample.hpp"
#include "scipnn/training.hpp"

namespace scipnn {

enum class PruneMethod { BaselineOneShot, BaselineIterative, LthLayerwise, LthGlobal };
enum class PruneScope { Layerwise, Global };

struct HistoryRow {
  std::size_t round = 0;
  double sparsity = 0.0;
  double accuracy = 0.0;  // NaN for a round whose retraining diverged
  double mean_phase = 0.0;
  double static_power = 0.0;
  bool operator==(const HistoryRow&) const = default;
};

struct PruneState {
  std::vector<std::vector<double>> initial_phases;
  std::vector<double> initial_betas;
  MaskSet masks;
  std::size_t round = 0;
  std::vector<HistoryRow> history;

  // Snapshot of `net` with every phase active. Take it before training.
  static PruneState snapshot(const Network& net);
  void check(const Network& net) const;
};

struct PruneConfig {
  PruneMethod method = PruneMethod::LthLayerwise;
  double alpha = 1.0;
  std::vector<double> k_schedule = {10.0};  // percent per round; the last value repeats
  double max_accuracy_loss = 0.05;          // absolute accuracy, e.g. 0.05 = 5 points
  double min_sparsity = 1.0;
  std::size_t r_max = 10;
  std::size_t iterative_steps = 10;
  bool reset_beta = true;
  TrainConfig retrain;
  PowerModel power;

  void validate() const;
};

// alpha times the population standard deviation of the non-zero phase angles
// of a layer, each taken in (-pi, pi]. Returns nullopt (and warns) with fewer
// than two of them.
std::optional<double> layer_threshold(std::span<const double> phases, double alpha);

// Prunes every active phase whose circular magnitude is below its layer's
// threshold. Returns the number of phases pruned.
std::size_t prune_below(Network& net, MaskSet& masks, std::span<const double> thresholds);

// Selects the bottom k percent of active phases by circular magnitude
// (nearest rank, ties at the cut included), per layer or across the network,
// keeping at least one active phase per layer. Returns the selection as a
// mask of phases to prune.
MaskSet select_bottom_k(const Network& net, const MaskSet& masks, double k, PruneScope scope);

// One lottery-ticket round: prune the bottom k percent, then reset the
// survivors (and optionally beta) to the snapshot. Appends a history row whose
// accuracy is NaN until the caller evaluates the retrained network.
void lth_prune_round(Network& net, PruneState& state, double k, PruneScope scope,
                     bool reset_beta = true, const PowerModel& pm = {});

HistoryRow measure(const Network& net, const MaskSet& masks, std::size_t round, double accuracy,
                   const PowerModel& pm);

struct PruneOutcome {
  PruneState state;
  Network final_network;
  Network best_network;
  MaskSet best_masks;
  std::size_t best_row = 0;  // index into state.history
  double untrained_accuracy = 0.0;
  bool failed = false;       // a retraining step diverged
};

// Magnitude baseline on a trained network. Row 0 of the history is the input
// network; each prune + fine-tune cycle appends one row.
PruneOutcome baseline_prune(const Network& net, const PruneState& state, const SplitDataset& data,
                            const PruneConfig& cfg);

// Lottery-ticket loop on a trained network whose state holds the pre-training
// snapshot. Row 0 is the input network; each round appends the retrained
// result. Stops at r_max rounds, once sparsity reaches min_sparsity, or when
// retraining diverges.
PruneOutcome lth_run(const Network& net, const PruneState& state, const SplitDataset& data,
                     const PruneConfig& cfg);

PruneOutcome run_pruning(const Network& net, const PruneState& state, const SplitDataset& data,
                         const PruneConfig& cfg);

// Fraction of each layer's phases that are pruned.
std::vector<double> layer_pruned_fractions(const MaskSet& masks);

}  // namespace scipnn

#endif  // SCIPNN_PRUNING_HPP
