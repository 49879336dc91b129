// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/engine.hpp"

#include <cmath>

#include "scipnn/error.hpp"

namespace scipnn {

namespace {

bool all_finite(std::span<const cplx> v) {
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

CompiledMesh::CompiledMesh(const MeshProgram& m) {
  mzis.reserve(m.mzis().size());
  for (const MziSite& site : m.mzis()) {
    CompiledMzi z;
    z.port = site.top_port;
    z.s = std::sin(site.phases.theta / 2.0);
    z.c = std::cos(site.phases.theta / 2.0);
    z.g = cplx(0.0, 1.0) * std::polar(1.0, site.phases.theta / 2.0);
    z.e = std::polar(1.0, site.phases.phi);
    z.t00 = z.g * z.e * z.s;
    z.t01 = z.g * z.c;
    z.t10 = z.g * z.e * z.c;
    z.t11 = -z.g * z.s;
    mzis.push_back(z);
  }
  for (double w : m.output_phases()) screen.push_back(std::polar(1.0, w));
}

void CompiledMesh::apply(std::span<cplx> field) const {
  for (const CompiledMzi& z : mzis) {
    const cplx a = field[z.port], b = field[z.port + 1];
    field[z.port] = z.t00 * a + z.t01 * b;
    field[z.port + 1] = z.t10 * a + z.t11 * b;
  }
  for (std::size_t i = 0; i < screen.size(); ++i) field[i] *= screen[i];
}

void CompiledMesh::apply(std::span<cplx> field, std::span<cplx> mzi_inputs) const {
  std::size_t k = 0;
  for (const CompiledMzi& z : mzis) {
    const cplx a = field[z.port], b = field[z.port + 1];
    mzi_inputs[k++] = a;
    mzi_inputs[k++] = b;
    field[z.port] = z.t00 * a + z.t01 * b;
    field[z.port + 1] = z.t10 * a + z.t11 * b;
  }
  for (std::size_t i = 0; i < screen.size(); ++i) field[i] *= screen[i];
}

CompiledLayer::CompiledLayer(const PhotonicLayer& layer)
    : v(layer.v_mesh), u(layer.u_mesh), beta(layer.beta) {
  for (double s : layer.sigma_thetas) {
    amp.push_back(attenuator_amplitude(s));
    slope.push_back(attenuator_slope(s));
  }
}

Engine::Engine(const Network& net) : width_(net.width()), class_count_(net.class_count()) {
  for (const PhotonicLayer& l : net.layers()) layers_.emplace_back(l);
}

CVector Engine::forward(std::span<const cplx> x, std::vector<LayerCache>* caches) const {
  if (x.size() != width_) {
    fail(ErrorKind::Shape, "input length " + std::to_string(x.size()) + " != network width " +
                               std::to_string(width_));
  }
  CVector field(x.begin(), x.end());
  if (caches) caches->assign(layers_.size(), {});
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const CompiledLayer& layer = layers_[l];
    const bool last = l + 1 == layers_.size();
    if (caches) {
      LayerCache& c = (*caches)[l];
      c.input = field;
      c.v_inputs.resize(2 * layer.v.mzis.size());
      layer.v.apply(field, c.v_inputs);
      c.v_out = field;
      for (std::size_t i = 0; i < width_; ++i) field[i] *= layer.amp[i];
      c.u_inputs.resize(2 * layer.u.mzis.size());
      layer.u.apply(field, c.u_inputs);
      c.u_out = field;
      for (cplx& z : field) z *= layer.beta;
      c.pre = field;
      if (!last) {
        for (cplx& z : field) z = activate(z);
        c.post = field;
      }
      if (!all_finite(field)) {
        fail(ErrorKind::Numerical, "non-finite field at the output of layer " + std::to_string(l));
      }
    } else {
      layer.v.apply(field);
      for (std::size_t i = 0; i < width_; ++i) field[i] *= layer.amp[i];
      layer.u.apply(field);
      for (cplx& z : field) z *= layer.beta;
      if (!last)
        for (cplx& z : field) z = activate(z);
    }
  }
  return field;
}

std::vector<double> Engine::log_probs(std::span<const cplx> x) const {
  return readout(forward(x), class_count_);
}

std::size_t Engine::predict(std::span<const cplx> x) const {
  const CVector y = forward(x);
  std::size_t best = 0;
  double best_val = std::norm(y[0]);
  for (std::size_t i = 1; i < class_count_; ++i) {
    const double v = std::norm(y[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  return best;
}

}  // namespace scipnn
