// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scipnn/error.hpp"
#include "scipnn/log.hpp"
#include "scipnn/mesh.hpp"
#include "scipnn/rng.hpp"

namespace scipnn {

namespace {

constexpr std::uint64_t kRetrainStream = 0x5245545241;  // "RETRA"

TrainConfig round_config(const TrainConfig& base, std::size_t round) {
  TrainConfig c = base;
  c.seed = derive_seed(base.seed, kRetrainStream, round);
  return c;
}

double accuracy_loss(const std::vector<HistoryRow>& h, const HistoryRow& row) {
  return h.front().accuracy - row.accuracy;
}

// Picks the highest-sparsity row within the accuracy budget; row 0 always
// qualifies.
std::size_t best_row(const std::vector<HistoryRow>& h, double max_loss) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (std::isnan(h[i].accuracy) || !(accuracy_loss(h, h[i]) < max_loss)) continue;
    if (h[i].sparsity > h[best].sparsity ||
        (h[i].sparsity == h[best].sparsity && h[i].accuracy > h[best].accuracy))
      best = i;
  }
  return best;
}

}  // namespace

PruneState PruneState::snapshot(const Network& net) {
  PruneState s;
  s.initial_phases = net.phases();
  s.initial_betas = net.betas();
  s.masks = MaskSet::all_active(net);
  return s;
}

void PruneState::check(const Network& net) const {
  masks.check(net);
  if (initial_phases.size() != net.depth() || initial_betas.size() != net.depth())
    fail(ErrorKind::Shape, "prune state does not match the network depth");
  for (std::size_t l = 0; l < net.depth(); ++l)
    if (initial_phases[l].size() != net.layer(l).phase_count())
      fail(ErrorKind::Shape, "initial phase snapshot does not match layer " + std::to_string(l));
}

void PruneConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail(ErrorKind::Config, "alpha must be non-negative");
  const bool lth = method == PruneMethod::LthLayerwise || method == PruneMethod::LthGlobal;
  if (lth && k_schedule.empty()) fail(ErrorKind::Config, "k_schedule must not be empty");
  for (double k : k_schedule)
    if (!(k > 0.0 && k <= 100.0)) fail(ErrorKind::Config, "k values must lie in (0, 100]");
  if (!(min_sparsity >= 0.0 && min_sparsity <= 1.0)) fail(ErrorKind::Config, "min_sparsity must lie in [0, 1]");
  if (!(max_accuracy_loss >= 0.0)) fail(ErrorKind::Config, "max_accuracy_loss must be non-negative");
  if (method == PruneMethod::BaselineIterative && iterative_steps == 0)
    fail(ErrorKind::Config, "iterative_steps must be positive");
  retrain.validate();
  power.validate();
}

std::optional<double> layer_threshold(std::span<const double> phases, double alpha) {
  std::vector<double> nz;
  for (double p : phases) {
    const double w = wrapped_phase(p);
    if (w != 0.0) nz.push_back(w);
  }
  if (nz.size() < 2) {
    warn("layer has fewer than two non-zero phases; threshold skipped");
    return std::nullopt;
  }
  // Deviations from the first value keep equal inputs at exactly zero spread.
  const double shift = nz.front();
  double mean = 0.0;
  for (double w : nz) mean += w - shift;
  mean /= static_cast<double>(nz.size());
  double ss = 0.0;
  for (double w : nz) ss += (w - shift - mean) * (w - shift - mean);
  return alpha * std::sqrt(ss / static_cast<double>(nz.size()));
}

std::size_t prune_below(Network& net, MaskSet& masks, std::span<const double> thresholds) {
  masks.check(net);
  if (thresholds.size() != net.depth()) fail(ErrorKind::Shape, "one threshold per layer is required");
  std::size_t count = 0;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    if (!(thresholds[l] >= 0.0)) fail(ErrorKind::Validation, "thresholds must be non-negative");
    auto p = net.layer(l).phase_vector();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (masks.active(l, i) && circular_magnitude(p[i]) < thresholds[l]) {
        masks.bits[l][i] = 0;
        ++count;
      }
      if (!masks.active(l, i)) p[i] = 0.0;
    }
    net.layer(l).set_phase_vector(p);
  }
  return count;
}

MaskSet select_bottom_k(const Network& net, const MaskSet& masks, double k, PruneScope scope) {
  masks.check(net);
  if (!(k > 0.0 && k <= 100.0)) fail(ErrorKind::Validation, "k must lie in (0, 100]");
  MaskSet chosen = masks;
  for (auto& b : chosen.bits) std::fill(b.begin(), b.end(), 0);

  std::vector<std::vector<double>> mags(net.depth());
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const auto p = net.layer(l).phase_vector();
    mags[l].resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) mags[l][i] = circular_magnitude(p[i]);
  }
  // Nearest-rank cut over a group of active magnitudes.
  auto cut_value = [k](std::vector<double> group) -> std::optional<double> {
    const auto rank = static_cast<std::size_t>(std::ceil(k / 100.0 * static_cast<double>(group.size()) - 1e-9));
    if (rank == 0) return std::nullopt;
    std::nth_element(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(rank - 1), group.end());
    return group[rank - 1];
  };
  auto mark = [&](std::size_t l, double cut) {
    for (std::size_t i = 0; i < mags[l].size(); ++i)
      if (masks.active(l, i) && mags[l][i] <= cut) chosen.bits[l][i] = 1;
  };
  if (scope == PruneScope::Layerwise) {
    for (std::size_t l = 0; l < net.depth(); ++l) {
      std::vector<double> group;
      for (std::size_t i = 0; i < mags[l].size(); ++i)
        if (masks.active(l, i)) group.push_back(mags[l][i]);
      if (const auto cut = cut_value(std::move(group))) mark(l, *cut);
    }
  } else {
    std::vector<double> group;
    for (std::size_t l = 0; l < net.depth(); ++l)
      for (std::size_t i = 0; i < mags[l].size(); ++i)
        if (masks.active(l, i)) group.push_back(mags[l][i]);
    if (const auto cut = cut_value(std::move(group)))
      for (std::size_t l = 0; l < net.depth(); ++l) mark(l, *cut);
  }
  // Keep the largest active phase of any layer that would be emptied.
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const std::size_t active = masks.active_count(l);
    if (active == 0) continue;
    std::size_t selected = 0;
    for (auto b : chosen.bits[l]) selected += b;
    if (selected < active) continue;
    std::size_t keep = 0;
    double largest = -1.0;
    for (std::size_t i = 0; i < mags[l].size(); ++i)
      if (masks.active(l, i) && mags[l][i] > largest) {
        largest = mags[l][i];
        keep = i;
      }
    chosen.bits[l][keep] = 0;
    warn("pruning would remove every phase of layer " + std::to_string(l) + "; keeping one");
  }
  return chosen;
}

HistoryRow measure(const Network& net, const MaskSet& masks, std::size_t round, double accuracy,
                   const PowerModel& pm) {
  return {round, ps_sparsity(net, masks), accuracy, mean_phase(net, masks), static_power(net, masks, pm)};
}

void lth_prune_round(Network& net, PruneState& state, double k, PruneScope scope, bool reset_beta,
                     const PowerModel& pm) {
  state.check(net);
  const MaskSet chosen = select_bottom_k(net, state.masks, k, scope);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    auto p = state.initial_phases[l];
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (chosen.bits[l][i]) state.masks.bits[l][i] = 0;
      if (!state.masks.active(l, i)) p[i] = 0.0;
    }
    net.layer(l).set_phase_vector(p);
  }
  if (reset_beta) net.set_betas(state.initial_betas);
  ++state.round;
  state.history.push_back(measure(net, state.masks, state.round, std::numeric_limits<double>::quiet_NaN(), pm));
}

PruneOutcome baseline_prune(const Network& input, const PruneState& state, const SplitDataset& data,
                            const PruneConfig& cfg) {
  cfg.validate();
  state.check(input);
  PruneOutcome out{state, input, input, state.masks, 0, 0.0, false};
  PruneState& st = out.state;
  Network& net = out.final_network;
  apply_masks(net, st.masks);
  st.history.clear();
  st.history.push_back(measure(net, st.masks, st.round, evaluate(net, data.test), cfg.power));

  const bool iterative = cfg.method == PruneMethod::BaselineIterative;
  const std::size_t steps = iterative ? cfg.iterative_steps : 1;
  for (std::size_t s = 1; s <= steps; ++s) {
    std::vector<double> thresholds(net.depth(), 0.0);
    for (std::size_t l = 0; l < net.depth(); ++l) {
      const auto p = net.layer(l).phase_vector();
      std::vector<double> active;
      for (std::size_t i = 0; i < p.size(); ++i)
        if (st.masks.active(l, i)) active.push_back(p[i]);
      const auto t = layer_threshold(active, cfg.alpha);
      if (t) thresholds[l] = iterative ? static_cast<double>(s) * *t / static_cast<double>(steps) : *t;
    }
    prune_below(net, st.masks, thresholds);
    ++st.round;
    try {
      train(net, st.masks, data, round_config(cfg.retrain, st.round));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Divergence) throw;
      warn(std::string("fine-tuning diverged: ") + e.what());
      st.history.push_back(measure(net, st.masks, st.round, std::numeric_limits<double>::quiet_NaN(), cfg.power));
      out.failed = true;
      break;
    }
    st.history.push_back(measure(net, st.masks, st.round, evaluate(net, data.test), cfg.power));
    if (best_row(st.history, cfg.max_accuracy_loss) == st.history.size() - 1) {
      out.best_network = net;
      out.best_masks = st.masks;
    }
  }
  out.best_row = best_row(st.history, cfg.max_accuracy_loss);
  return out;
}

PruneOutcome lth_run(const Network& input, const PruneState& state, const SplitDataset& data,
                     const PruneConfig& cfg) {
  cfg.validate();
  state.check(input);
  const PruneScope scope = cfg.method == PruneMethod::LthGlobal ? PruneScope::Global : PruneScope::Layerwise;
  PruneOutcome out{state, input, input, state.masks, 0, 0.0, false};
  PruneState& st = out.state;
  Network& net = out.final_network;
  apply_masks(net, st.masks);
  {
    Network untrained = net;
    untrained.set_phases(st.initial_phases);
    untrained.set_betas(st.initial_betas);
    apply_masks(untrained, st.masks);
    out.untrained_accuracy = evaluate(untrained, data.test);
  }
  st.history.clear();
  st.history.push_back(measure(net, st.masks, st.round, evaluate(net, data.test), cfg.power));

  for (std::size_t r = 0; r < cfg.r_max; ++r) {
    if (st.history.back().sparsity >= cfg.min_sparsity) break;
    const double k = cfg.k_schedule[std::min(r, cfg.k_schedule.size() - 1)];
    const std::size_t before = st.masks.active_count();
    lth_prune_round(net, st, k, scope, cfg.reset_beta, cfg.power);
    try {
      train(net, st.masks, data, round_config(cfg.retrain, st.round));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Divergence) throw;
      warn("round " + std::to_string(st.round) + " failed: " + e.what());
      out.failed = true;
      break;
    }
    st.history.back() = measure(net, st.masks, st.round, evaluate(net, data.test), cfg.power);
    if (best_row(st.history, cfg.max_accuracy_loss) == st.history.size() - 1) {
      out.best_network = net;
      out.best_masks = st.masks;
    }
    if (st.masks.active_count() == before) break;  // nothing left to prune
  }
  out.best_row = best_row(st.history, cfg.max_accuracy_loss);
  return out;
}

PruneOutcome run_pruning(const Network& net, const PruneState& state, const SplitDataset& data,
                         const PruneConfig& cfg) {
  switch (cfg.method) {
    case PruneMethod::BaselineOneShot:
    case PruneMethod::BaselineIterative:
      return baseline_prune(net, state, data, cfg);
    case PruneMethod::LthLayerwise:
    case PruneMethod::LthGlobal:
      return lth_run(net, state, data, cfg);
  }
  fail(ErrorKind::Config, "unknown pruning method");
}

std::vector<double> layer_pruned_fractions(const MaskSet& masks) {
  std::vector<double> f;
  for (const auto& b : masks.bits) {
    std::size_t pruned = 0;
    for (auto bit : b) pruned += bit == 0;
    f.push_back(b.empty() ? 0.0 : static_cast<double>(pruned) / static_cast<double>(b.size()));
  }
  return f;
}

}  // namespace scipnn
