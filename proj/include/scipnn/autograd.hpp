// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_AUTOGRAD_HPP
#define SCIPNN_AUTOGRAD_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scipnn/model.hpp"
#include "scipnn/sample.hpp"

namespace scipnn {

/// Per-layer binary masks aligned with PhotonicLayer::phase_vector ordering.
/// 1 = active, 0 = pruned (phase held at exactly 0).
struct MaskSet {
  std::vector<std::vector<std::uint8_t>> bits;

  static MaskSet all_active(const Network& net);
  bool active(std::size_t layer, std::size_t index) const { return bits[layer][index] != 0; }
  std::size_t active_count() const;
  std::size_t active_count(std::size_t layer) const;
  std::size_t total_count() const;
  /// Shape error if the masks do not line up with the network.
  void check(const Network& net) const;
  bool operator==(const MaskSet&) const = default;
};

/// Sets every masked phase to exactly 0. Idempotent.
void apply_masks(Network& net, const MaskSet& masks);

struct GradientSet {
  std::vector<std::vector<double>> phases;  // aligned with MaskSet
  std::vector<double> beta;                 // one per layer
};

struct BackwardResult {
  double loss = 0.0;  // batch mean cross-entropy
  GradientSet grad;
};

/// Gradient of the batch-mean cross-entropy with respect to every phase and
/// beta. Complex fields are differentiated as (Re, Im) pairs; the adjoint of a
/// field carries dL/dRe + i dL/dIm. Masked entries come out exactly 0.
BackwardResult backward(const Network& net, const MaskSet& masks, std::span<const Sample> batch);

/// Batch-mean loss without gradients.
double mean_loss(const Network& net, std::span<const Sample> batch);

struct PhaseIndex {
  std::size_t layer;
  std::size_t index;
};

/// Central differences (L(p+h) - L(p-h)) / 2h at the given phase slots;
/// masked slots report 0 like backward does.
std::vector<double> finite_diff_gradient(const Network& net, const MaskSet& masks,
                                         std::span<const Sample> batch, double h,
                                         std::span<const PhaseIndex> indices);

}  // namespace scipnn

#endif  // SCIPNN_AUTOGRAD_HPP
