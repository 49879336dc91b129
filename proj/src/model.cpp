// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scipnn/engine.hpp"
#include "scipnn/error.hpp"
#include "scipnn/rng.hpp"

namespace scipnn {

namespace {
constexpr double kOriginGuard = 1e-12;
}

std::size_t PhotonicLayer::phase_count() const {
  return v_mesh.phase_count() + sigma_thetas.size() + u_mesh.phase_count();
}

std::vector<double> PhotonicLayer::phase_vector() const {
  std::vector<double> v = v_mesh.phase_vector();
  v.insert(v.end(), sigma_thetas.begin(), sigma_thetas.end());
  const std::vector<double> u = u_mesh.phase_vector();
  v.insert(v.end(), u.begin(), u.end());
  return v;
}

void PhotonicLayer::set_phase_vector(std::span<const double> phases) {
  if (phases.size() != phase_count()) {
    fail(ErrorKind::Shape, "layer phase vector length " + std::to_string(phases.size()) + " != " +
                               std::to_string(phase_count()));
  }
  const std::size_t nv = v_mesh.phase_count();
  const std::size_t ns = sigma_thetas.size();
  v_mesh.set_phase_vector(phases.subspan(0, nv));
  for (std::size_t i = 0; i < ns; ++i) sigma_thetas[i] = canonical_phase(phases[nv + i]);
  u_mesh.set_phase_vector(phases.subspan(nv + ns));
}

void PhotonicLayer::validate() const {
  const std::size_t w = width();
  if (w == 0 || v_mesh.ports() != w || u_mesh.ports() != w) {
    fail(ErrorKind::Shape, "layer meshes and sigma attenuators disagree on width");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) fail(ErrorKind::Validation, "layer beta must be positive and finite");
  for (double s : sigma_thetas)
    if (!std::isfinite(s)) fail(ErrorKind::Validation, "sigma phase is not finite");
}

std::vector<PhaseKind> layer_phase_kinds(std::size_t width) {
  std::vector<PhaseKind> kinds;
  const std::size_t mzis = width * (width - 1) / 2;
  auto mesh = [&] {
    for (std::size_t i = 0; i < mzis; ++i) {
      kinds.push_back(PhaseKind::Theta);
      kinds.push_back(PhaseKind::Phi);
    }
    kinds.insert(kinds.end(), width, PhaseKind::Screen);
  };
  mesh();
  kinds.insert(kinds.end(), width, PhaseKind::Sigma);
  mesh();
  return kinds;
}

Network::Network(std::vector<PhotonicLayer> layers, std::size_t class_count)
    : layers_(std::move(layers)), class_count_(class_count) {
  if (layers_.empty()) fail(ErrorKind::Shape, "network needs at least one layer");
  for (const PhotonicLayer& l : layers_) {
    l.validate();
    if (l.width() != layers_.front().width()) fail(ErrorKind::Shape, "all layers must share one width");
  }
  if (class_count_ == 0 || class_count_ > width()) {
    fail(ErrorKind::Shape, "class count " + std::to_string(class_count_) + " does not fit width " +
                               std::to_string(width()));
  }
}

Network Network::random(std::size_t width, std::size_t depth, std::size_t class_count,
                        std::uint64_t seed, double beta_init) {
  Rng rng(derive_seed(seed, 0x494E4954ULL));
  std::vector<PhotonicLayer> layers;
  for (std::size_t l = 0; l < depth; ++l) {
    PhotonicLayer layer{MeshProgram(width), std::vector<double>(width, 0.0), MeshProgram(width), beta_init};
    std::vector<double> phases(layer.phase_count());
    for (double& p : phases) p = rng.uniform(0.0, kTwoPi);
    layer.set_phase_vector(phases);
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers), class_count);
}

std::size_t Network::phase_count() const {
  std::size_t n = 0;
  for (const PhotonicLayer& l : layers_) n += l.phase_count();
  return n;
}

std::vector<std::vector<double>> Network::phases() const {
  std::vector<std::vector<double>> out;
  for (const PhotonicLayer& l : layers_) out.push_back(l.phase_vector());
  return out;
}

void Network::set_phases(const std::vector<std::vector<double>>& phases) {
  if (phases.size() != layers_.size()) fail(ErrorKind::Shape, "phase set has the wrong layer count");
  for (std::size_t i = 0; i < layers_.size(); ++i) layers_[i].set_phase_vector(phases[i]);
}

std::vector<double> Network::betas() const {
  std::vector<double> b;
  for (const PhotonicLayer& l : layers_) b.push_back(l.beta);
  return b;
}

void Network::set_betas(std::span<const double> betas) {
  if (betas.size() != layers_.size()) fail(ErrorKind::Shape, "beta list has the wrong layer count");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!(betas[i] > 0.0) || !std::isfinite(betas[i])) fail(ErrorKind::Validation, "beta must be positive and finite");
    layers_[i].beta = betas[i];
  }
}

CVector layer_forward(const PhotonicLayer& layer, std::span<const cplx> x) {
  if (x.size() != layer.width()) {
    fail(ErrorKind::Shape, "layer input length " + std::to_string(x.size()) + " != width " +
                               std::to_string(layer.width()));
  }
  const CompiledLayer c(layer);
  CVector field(x.begin(), x.end());
  c.v.apply(field);
  for (std::size_t i = 0; i < field.size(); ++i) field[i] *= c.amp[i];
  c.u.apply(field);
  for (cplx& z : field) z *= c.beta;
  return field;
}

cplx activate(cplx z) {
  const double r = std::abs(z);
  if (r <= kOriginGuard) return {softplus(0.0), 0.0};
  return softplus(r) * (z / r);
}

CVector activation(std::span<const cplx> z) {
  CVector out(z.size());
  std::transform(z.begin(), z.end(), out.begin(), activate);
  return out;
}

std::vector<double> readout(std::span<const cplx> y, std::size_t class_count) {
  if (class_count == 0 || class_count > y.size()) {
    fail(ErrorKind::Shape, "readout of " + std::to_string(class_count) + " classes from " +
                               std::to_string(y.size()) + " ports");
  }
  std::vector<double> logp(class_count);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < class_count; ++i) {
    logp[i] = std::norm(y[i]);
    top = std::max(top, logp[i]);
  }
  double sum = 0.0;
  for (double v : logp) sum += std::exp(v - top);
  const double lse = top + std::log(sum);
  for (double& v : logp) v -= lse;
  return logp;
}

double loss(std::span<const double> logp, std::size_t label) {
  if (label >= logp.size()) {
    fail(ErrorKind::Index, "label " + std::to_string(label) + " out of range for " +
                               std::to_string(logp.size()) + " classes");
  }
  return -logp[label];
}

PhotonicLayer from_weight_matrix(const ComplexMatrix& w, std::size_t width) {
  if (w.rows() != width || w.cols() != width) {
    fail(ErrorKind::Shape, "weight matrix must be " + std::to_string(width) + "x" + std::to_string(width));
  }
  const SvdResult f = svd(w);
  const double top = f.singular_values.front();
  const double beta = top > 0.0 ? top : 1.0;
  std::vector<double> sigma(width);
  for (std::size_t i = 0; i < width; ++i) {
    const double ratio = std::clamp(f.singular_values[i] / beta, 0.0, 1.0);
    sigma[i] = canonical_phase(2.0 * std::acos(ratio));
  }
  PhotonicLayer layer{clements_decompose(f.v_h), std::move(sigma), clements_decompose(f.u), beta};
  layer.validate();
  return layer;
}

ComplexMatrix layer_matrix(const PhotonicLayer& layer) {
  const std::size_t w = layer.width();
  CVector amp(w);
  for (std::size_t i = 0; i < w; ++i) amp[i] = layer.beta * attenuator_amplitude(layer.sigma_thetas[i]);
  return matmul(matmul(mesh_unitary(layer.u_mesh), ComplexMatrix::diagonal(amp)), mesh_unitary(layer.v_mesh));
}

ForwardTrace forward(const Network& net, std::span<const cplx> x) {
  const Engine engine(net);
  std::vector<LayerCache> caches;
  const CVector out = engine.forward(x, &caches);
  ForwardTrace trace;
  for (const LayerCache& c : caches) {
    trace.pre_activations.push_back(c.pre);
    trace.post_activations.push_back(c.post);
  }
  trace.log_probs = readout(out, net.class_count());
  return trace;
}

}  // namespace scipnn
