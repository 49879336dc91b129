// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "scipnn/engine.hpp"
#include "scipnn/error.hpp"
#include "scipnn/mesh.hpp"
#include "scipnn/parallel.hpp"
#include "scipnn/rng.hpp"

namespace scipnn {

namespace {

constexpr std::uint64_t kShuffleStream = 0x5348554646;  // "SHUFF"
constexpr double kMinBeta = 1e-6;

struct MomentState {
  std::vector<std::vector<double>> m, v;
  std::vector<double> mb, vb;
};

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    fail(ErrorKind::Config, "learning_rate must be a finite non-negative number");
  if (batch_size == 0) fail(ErrorKind::Config, "batch_size must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    fail(ErrorKind::Config, "adam moment decay rates must lie in [0, 1)");
  if (!(epsilon > 0.0)) fail(ErrorKind::Config, "epsilon must be positive");
}

TrainReport train(Network& net, const MaskSet& masks, const SplitDataset& data,
                  const TrainConfig& cfg) {
  cfg.validate();
  masks.check(net);
  TrainReport report;
  if (cfg.epochs == 0) return report;
  if (data.train.empty()) fail(ErrorKind::Validation, "training set is empty");
  if (cfg.batch_size > data.train.size())
    fail(ErrorKind::Config, "batch_size " + std::to_string(cfg.batch_size) +
                                " exceeds training set size " + std::to_string(data.train.size()));

  apply_masks(net, masks);
  const std::size_t depth = net.depth();
  MomentState st;
  auto phases = net.phases();
  auto betas = net.betas();
  if (cfg.optimizer == Optimizer::Adam) {
    for (const auto& p : phases) {
      st.m.emplace_back(p.size(), 0.0);
      st.v.emplace_back(p.size(), 0.0);
    }
    st.mb.assign(depth, 0.0);
    st.vb.assign(depth, 0.0);
  }

  std::vector<std::size_t> order(data.train.size());
  std::vector<Sample> batch;
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(cfg.seed, kShuffleStream, epoch));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (std::size_t start = 0, step = 0; start < order.size(); start += cfg.batch_size, ++step) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(data.train[order[i]]);

      BackwardResult r;
      try {
        r = backward(net, masks, batch);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Numerical) throw;
        fail(ErrorKind::Divergence, "training diverged at epoch " + std::to_string(epoch) +
                                        " step " + std::to_string(step) + ": " + e.what());
      }
      if (!std::isfinite(r.loss))
        fail(ErrorKind::Divergence, "training diverged at epoch " + std::to_string(epoch) +
                                        " step " + std::to_string(step) + ": loss is not finite");
      loss_sum += r.loss * static_cast<double>(batch.size());
      loss_count += batch.size();

      ++t;
      const double lr = cfg.learning_rate;
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
      auto next_phases = phases;
      auto next_betas = betas;
      for (std::size_t l = 0; l < depth; ++l) {
        auto& p = next_phases[l];
        const auto& g = r.grad.phases[l];
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (!masks.active(l, i)) {
            p[i] = 0.0;
            continue;
          }
          double delta = g[i];
          if (cfg.optimizer == Optimizer::Adam) {
            st.m[l][i] = cfg.beta1 * st.m[l][i] + (1 - cfg.beta1) * g[i];
            st.v[l][i] = cfg.beta2 * st.v[l][i] + (1 - cfg.beta2) * g[i] * g[i];
            delta = (st.m[l][i] / bc1) / (std::sqrt(st.v[l][i] / bc2) + cfg.epsilon);
          }
          if (!std::isfinite(delta))
            fail(ErrorKind::Divergence, "training diverged at epoch " + std::to_string(epoch) +
                                            " step " + std::to_string(step) + ": non-finite gradient");
          p[i] = canonical_phase(p[i] - lr * delta);
        }
        if (cfg.train_beta) {
          const double gb = r.grad.beta[l];
          double delta = gb;
          if (cfg.optimizer == Optimizer::Adam) {
            st.mb[l] = cfg.beta1 * st.mb[l] + (1 - cfg.beta1) * gb;
            st.vb[l] = cfg.beta2 * st.vb[l] + (1 - cfg.beta2) * gb * gb;
            delta = (st.mb[l] / bc1) / (std::sqrt(st.vb[l] / bc2) + cfg.epsilon);
          }
          const double b = next_betas[l] - lr * delta;
          if (!std::isfinite(b))
            fail(ErrorKind::Divergence, "training diverged at epoch " + std::to_string(epoch) +
                                            " step " + std::to_string(step) + ": non-finite beta");
          next_betas[l] = std::max(kMinBeta, b);
        }
      }
      phases = std::move(next_phases);
      betas = std::move(next_betas);
      net.set_phases(phases);
      net.set_betas(betas);
      ++report.steps;
    }
    report.loss_curve.push_back(loss_sum / static_cast<double>(loss_count));
    report.accuracy_curve.push_back(evaluate(net, data.test));
  }
  return report;
}

double evaluate(const Network& net, std::span<const Sample> data) {
  if (data.empty()) return 0.0;
  const Engine engine(net);
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (data.size() + kBlock - 1) / kBlock;
  std::vector<std::size_t> correct(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t stop = std::min(data.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < stop; ++i)
      if (engine.predict(data[i].features) == data[i].label) ++correct[b];
  });
  const std::size_t total = std::accumulate(correct.begin(), correct.end(), std::size_t{0});
  return static_cast<double>(total) / static_cast<double>(data.size());
}

}  // namespace scipnn
