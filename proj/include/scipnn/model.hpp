// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_MODEL_HPP
#define SCIPNN_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scipnn/linalg.hpp"
#include "scipnn/mesh.hpp"

namespace scipnn {

/// Role of one entry of a layer's phase vector.
enum class PhaseKind : std::uint8_t { Theta, Phi, Sigma, Screen };

/// One linear layer W = U Sigma V^H realized optically: the V^H mesh, one
/// attenuator MZI per channel (amplitude |cos(sigma_theta/2)|), the U mesh and
/// a scalar gain beta.
struct PhotonicLayer {
  MeshProgram v_mesh;
  std::vector<double> sigma_thetas;
  MeshProgram u_mesh;
  double beta = 1.0;

  std::size_t width() const { return sigma_thetas.size(); }
  std::size_t phase_count() const;
  /// v_mesh phases, then sigma_thetas, then u_mesh phases.
  std::vector<double> phase_vector() const;
  void set_phase_vector(std::span<const double> phases);
  void validate() const;
  bool operator==(const PhotonicLayer&) const = default;
};

/// PhaseKind of every slot of a layer phase vector of the given width.
std::vector<PhaseKind> layer_phase_kinds(std::size_t width);

/// Same-width photonic layers; the first class_count output intensities of
/// the last layer are the class scores. Hidden layers are followed by the
/// modulus-softplus activation, the last layer by intensity detection.
class Network {
 public:
  Network() = default;
  Network(std::vector<PhotonicLayer> layers, std::size_t class_count);

  /// Every phase uniform in [0, 2pi), beta = beta_init.
  static Network random(std::size_t width, std::size_t depth, std::size_t class_count,
                        std::uint64_t seed, double beta_init);

  std::size_t width() const { return layers_.front().width(); }
  std::size_t depth() const { return layers_.size(); }
  std::size_t class_count() const { return class_count_; }
  std::size_t phase_count() const;

  std::span<const PhotonicLayer> layers() const { return layers_; }
  PhotonicLayer& layer(std::size_t i) { return layers_.at(i); }
  const PhotonicLayer& layer(std::size_t i) const { return layers_.at(i); }

  std::vector<std::vector<double>> phases() const;
  void set_phases(const std::vector<std::vector<double>>& phases);
  std::vector<double> betas() const;
  void set_betas(std::span<const double> betas);

  bool operator==(const Network&) const = default;

 private:
  std::vector<PhotonicLayer> layers_;
  std::size_t class_count_ = 0;
};

/// Amplitude |cos(sigma/2)| of a diagonal attenuator. Taking the modulus keeps
/// it 2pi-periodic, so a phase wrapping through 0 does not flip the channel sign.
inline double attenuator_amplitude(double sigma) { return std::abs(std::cos(sigma / 2.0)); }
/// d amplitude / d sigma; the kink at sigma = pi takes the left-hand slope.
inline double attenuator_slope(double sigma) {
  const double s = -0.5 * std::sin(sigma / 2.0);
  return std::cos(sigma / 2.0) < 0.0 ? -s : s;
}

/// beta * U * diag(|cos(sigma/2)|) * V^H * x.
CVector layer_forward(const PhotonicLayer& layer, std::span<const cplx> x);

/// Modulus softplus with phase retention: softplus(|z|) z/|z|, and the real
/// value ln 2 at the origin.
cplx activate(cplx z);
CVector activation(std::span<const cplx> z);

inline double softplus(double t) {
  return t > 30.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

/// Log-softmax over the first class_count intensities |y_i|^2.
std::vector<double> readout(std::span<const cplx> y, std::size_t class_count);

/// -logp[label]; index error when label is out of range.
double loss(std::span<const double> logp, std::size_t label);

/// Builds a layer that realizes w exactly: SVD, Clements meshes for U and
/// V^H, beta = largest singular value, sigma_theta_i = 2 acos(s_i / beta).
PhotonicLayer from_weight_matrix(const ComplexMatrix& w, std::size_t width);

/// Effective weight matrix of a layer (for inspection and tests).
ComplexMatrix layer_matrix(const PhotonicLayer& layer);

struct ForwardTrace {
  std::vector<CVector> pre_activations;   // layer outputs
  std::vector<CVector> post_activations;  // activation outputs (hidden layers)
  std::vector<double> log_probs;
};

ForwardTrace forward(const Network& net, std::span<const cplx> x);

}  // namespace scipnn

#endif  // SCIPNN_MODEL_HPP
