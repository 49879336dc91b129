// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_ENGINE_HPP
#define SCIPNN_ENGINE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "scipnn/linalg.hpp"
#include "scipnn/model.hpp"

namespace scipnn {

// Network with every transfer coefficient precomputed. Building one costs a
// few thousand sin/cos calls; evaluating a sample is then pure 2x2 algebra.

struct CompiledMzi {
  std::size_t port;
  cplx t00, t01, t10, t11;
  cplx g;  // i e^{i theta/2}
  cplx e;  // e^{i phi}
  double s, c;  // sin(theta/2), cos(theta/2)
};

struct CompiledMesh {
  std::vector<CompiledMzi> mzis;
  std::vector<cplx> screen;

  explicit CompiledMesh(const MeshProgram& m);
  void apply(std::span<cplx> field) const;
  /// Also records the (top, bottom) input of every MZI, 2 entries per MZI.
  void apply(std::span<cplx> field, std::span<cplx> mzi_inputs) const;
};

struct CompiledLayer {
  CompiledMesh v;
  std::vector<double> amp;    // attenuator amplitudes
  std::vector<double> slope;  // their derivatives in sigma_theta
  CompiledMesh u;
  double beta;

  explicit CompiledLayer(const PhotonicLayer& layer);
};

/// Intermediate fields of one layer for one sample, kept for backprop.
struct LayerCache {
  CVector input;
  CVector v_inputs;  // per-MZI inputs in the V mesh
  CVector v_out;
  CVector u_inputs;
  CVector u_out;     // U mesh output before beta
  CVector pre;       // beta * u_out
  CVector post;      // activation(pre); empty for the last layer
};

class Engine {
 public:
  explicit Engine(const Network& net);

  std::size_t width() const { return width_; }
  std::size_t class_count() const { return class_count_; }
  std::span<const CompiledLayer> layers() const { return layers_; }

  /// Output field of the last layer. With caches, fills one entry per layer
  /// and throws a numerical error naming the first layer whose output is not
  /// finite.
  CVector forward(std::span<const cplx> x, std::vector<LayerCache>* caches = nullptr) const;
  std::vector<double> log_probs(std::span<const cplx> x) const;
  /// Argmax of the class intensities, ties toward the lowest index.
  std::size_t predict(std::span<const cplx> x) const;

 private:
  std::vector<CompiledLayer> layers_;
  std::size_t width_;
  std::size_t class_count_;
};

}  // namespace scipnn

#endif  // SCIPNN_ENGINE_HPP
