// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "scipnn/analysis.hpp"
#include "scipnn/checkpoint.hpp"
#include "scipnn/config.hpp"
#include "scipnn/error.hpp"
#include "scipnn/pruning.hpp"
#include "scipnn/training.hpp"

namespace scipnn {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Csv {
  explicit Csv(const fs::path& path) : path_(path), out_(path) {
    if (!out_) fail(ErrorKind::Io, "cannot write " + path.string());
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  ~Csv() = default;

 private:
  fs::path path_;
  std::ofstream out_;
};

struct Context {
  ExperimentConfig cfg;
  fs::path out;
};

Context prepare(const CommandOptions& opt) {
  if (opt.config_path.empty()) fail(ErrorKind::Config, "--config is required");
  Context c{load_config(opt.config_path), {}};
  if (opt.seed_override) c.cfg.override_seed(*opt.seed_override);
  c.out = opt.out_dir.empty() ? fs::path(c.cfg.output_dir) : fs::path(opt.out_dir);
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + c.out.string() + ": " + ec.message());
  return c;
}

Checkpoint first_checkpoint(const CommandOptions& opt) {
  if (opt.checkpoints.empty()) fail(ErrorKind::Config, "--checkpoint is required");
  return load_checkpoint(opt.checkpoints.front());
}

void check_topology(const Checkpoint& ck, const ExperimentConfig& cfg) {
  if (ck.network.width() != cfg.network.width || ck.network.class_count() != cfg.network.classes)
    fail(ErrorKind::Config, "checkpoint topology does not match the config network");
}

std::string method_name(PruneMethod m) {
  switch (m) {
    case PruneMethod::BaselineOneShot: return "baseline-oneshot";
    case PruneMethod::BaselineIterative: return "baseline-iterative";
    case PruneMethod::LthLayerwise: return "lth-layerwise";
    case PruneMethod::LthGlobal: return "lth-global";
  }
  return "unknown";
}

double reduction(double before, double after) { return before > 0.0 ? 1.0 - after / before : 0.0; }

}  // namespace

void CommandSummary::add(const std::string& key, double value) { add(key, num(value)); }

std::string CommandSummary::line() const {
  std::string s;
  for (const auto& [k, v] : fields) s += (s.empty() ? "" : " ") + k + "=" + v;
  return s;
}

CommandSummary cmd_train(const CommandOptions& opt) {
  const Context ctx = prepare(opt);
  const ExperimentConfig& cfg = ctx.cfg;
  const SplitDataset data = load_dataset(cfg.dataset, cfg.network.width, cfg.network.classes);
  Network net = Network::random(cfg.network.width, cfg.network.depth, cfg.network.classes, cfg.network.seed,
                                cfg.network.beta_init);
  Checkpoint ck;
  ck.state = PruneState::snapshot(net);
  const TrainReport report = train(net, ck.state.masks, data, cfg.train);
  ck.network = net;
  ck.nominal_accuracy = evaluate(net, data.test);
  ck.seeds = {{"dataset", cfg.dataset.seed}, {"network", cfg.network.seed}, {"train", cfg.train.seed}};
  ck.state.history.push_back(measure(net, ck.state.masks, 0, ck.nominal_accuracy, cfg.power));

  const fs::path ckpath = ctx.out / "checkpoint.scpn";
  save_checkpoint(ckpath, ck);
  Csv csv(ctx.out / "train_curves.csv");
  csv.row({"epoch", "train_loss", "test_accuracy"});
  for (std::size_t e = 0; e < report.loss_curve.size(); ++e)
    csv.row({std::to_string(e + 1), num(report.loss_curve[e]), num(report.accuracy_curve[e])});

  CommandSummary s;
  s.add("command", std::string("train"));
  s.add("accuracy", ck.nominal_accuracy);
  s.add("epochs", cfg.train.epochs);
  s.add("steps", report.steps);
  s.add("phases", net.phase_count());
  s.add("checkpoint", ckpath.string());
  return s;
}

CommandSummary cmd_prune(const CommandOptions& opt) {
  const Context ctx = prepare(opt);
  const ExperimentConfig& cfg = ctx.cfg;
  const Checkpoint ck = first_checkpoint(opt);
  check_topology(ck, cfg);
  const bool lth = cfg.prune.method == PruneMethod::LthLayerwise || cfg.prune.method == PruneMethod::LthGlobal;
  if (lth && !ck.has_snapshot)
    fail(ErrorKind::Validation, "lottery-ticket pruning needs the pre-training phase snapshot, which this checkpoint lacks");
  const SplitDataset data = load_dataset(cfg.dataset, cfg.network.width, cfg.network.classes);
  const PruneOutcome out = run_pruning(ck.network, ck.state, data, cfg.prune);
  const auto& hist = out.state.history;

  Csv csv(ctx.out / "history.csv");
  csv.row({"round", "sparsity", "accuracy", "mean_phase_rad", "static_power_mw"});
  for (const HistoryRow& r : hist)
    csv.row({std::to_string(r.round), num(r.sparsity), num(r.accuracy), num(r.mean_phase), num(r.static_power)});

  const HistoryRow& best = hist[out.best_row];
  Checkpoint best_ck = ck;
  best_ck.network = out.best_network;
  best_ck.state = out.state;
  best_ck.state.masks = out.best_masks;
  best_ck.state.round = best.round;
  best_ck.nominal_accuracy = best.accuracy;
  best_ck.seeds["prune"] = cfg.prune.retrain.seed;
  save_checkpoint(ctx.out / "best.scpn", best_ck);
  Checkpoint final_ck = best_ck;
  final_ck.network = out.final_network;
  final_ck.state = out.state;
  final_ck.nominal_accuracy = hist.back().accuracy;
  save_checkpoint(ctx.out / "final.scpn", final_ck);

  const auto h = phase_histogram(out.best_network, out.best_masks, 50);
  Csv hcsv(ctx.out / "phase_histogram.csv");
  hcsv.row({"bin_start_rad", "bin_end_rad", "count"});
  for (std::size_t b = 0; b < h.size(); ++b)
    hcsv.row({num(std::numbers::pi * b / 50.0), num(std::numbers::pi * (b + 1) / 50.0), std::to_string(h[b])});

  CommandSummary s;
  s.add("command", std::string("prune"));
  s.add("method", method_name(cfg.prune.method));
  s.add("rounds", hist.size() - 1);
  s.add("failed", std::string(out.failed ? "1" : "0"));
  s.add("reference_accuracy", hist.front().accuracy);
  s.add("best_round", best.round);
  s.add("best_sparsity", best.sparsity);
  s.add("best_accuracy", best.accuracy);
  s.add("mean_phase_reduction", reduction(hist.front().mean_phase, best.mean_phase));
  s.add("static_power_reduction", reduction(hist.front().static_power, best.static_power));
  if (lth) s.add("untrained_accuracy", out.untrained_accuracy);
  return s;
}

CommandSummary cmd_noise(const CommandOptions& opt) {
  const Context ctx = prepare(opt);
  const ExperimentConfig& cfg = ctx.cfg;
  if (opt.checkpoints.empty()) fail(ErrorKind::Config, "--checkpoint is required");
  std::vector<Checkpoint> models;
  for (const auto& p : opt.checkpoints) {
    models.push_back(load_checkpoint(p));
    check_topology(models.back(), cfg);
  }
  SplitDataset data = load_dataset(cfg.dataset, cfg.network.width, cfg.network.classes);
  if (cfg.noise.eval_limit > 0 && data.test.size() > cfg.noise.eval_limit) data.test.resize(cfg.noise.eval_limit);

  Csv csv(ctx.out / "noise.csv");
  const bool multi = models.size() > 1;
  std::vector<std::string> header = {"sigma_ps"};
  for (std::size_t m = 0; m < models.size(); ++m) {
    const std::string sfx = multi ? "_" + std::to_string(m) : "";
    header.push_back("mean_acc" + sfx);
    header.push_back("std_acc" + sfx);
    if (m > 0) header.push_back("delta_acc" + sfx);
  }
  csv.row(header);
  double peak_delta = 0.0;
  for (double sigma : cfg.noise.sigma_ps) {
    std::vector<std::string> row = {num(sigma)};
    double ref = 0.0;
    for (std::size_t m = 0; m < models.size(); ++m) {
      const NoiseConfig nc{sigma, cfg.noise.iterations, cfg.noise.seed, cfg.noise.perturb_pruned};
      const NoiseResult r = noise_monte_carlo(models[m].network, models[m].state.masks, data.test, nc);
      row.push_back(num(r.mean));
      row.push_back(num(r.std));
      if (m == 0) ref = r.mean;
      else {
        row.push_back(num(ref - r.mean));
        peak_delta = std::max(peak_delta, ref - r.mean);
      }
    }
    csv.row(row);
  }
  CommandSummary s;
  s.add("command", std::string("noise"));
  s.add("models", models.size());
  s.add("sigmas", cfg.noise.sigma_ps.size());
  s.add("iterations", cfg.noise.iterations);
  if (multi) s.add("peak_delta", peak_delta);
  return s;
}

CommandSummary cmd_study(const CommandOptions& opt) {
  const Context ctx = prepare(opt);
  const StudyConfig& sc = ctx.cfg.study;
  const auto pts = unitary_sparsity_study(sc.samples, sc.n, sc.eps, sc.seed, sc.identity_first);
  Csv csv(ctx.out / "study.csv");
  csv.row({"sample", "rotations", "matrix_sparsity", "ps_sparsity"});
  double lo = 1.0, hi = 0.0;
  std::size_t sparse = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    csv.row({std::to_string(i), std::to_string(pts[i].rotations), num(pts[i].matrix_sparsity), num(pts[i].ps_sparsity)});
    if (pts[i].matrix_sparsity > 0.9) {
      ++sparse;
      lo = std::min(lo, pts[i].ps_sparsity);
      hi = std::max(hi, pts[i].ps_sparsity);
    }
  }
  CommandSummary s;
  s.add("command", std::string("study"));
  s.add("samples", pts.size());
  s.add("sparse_samples", sparse);
  s.add("sparse_ps_span", sparse ? hi - lo : 0.0);
  return s;
}

CommandSummary cmd_report(const CommandOptions& opt) {
  const Context ctx = prepare(opt);
  const Checkpoint ck = first_checkpoint(opt);
  const auto b = sparsity_breakdown(ck.network, ck.state.masks);
  Csv csv(ctx.out / "report.csv");
  csv.row({"layer", "kind", "total", "zero", "sparsity"});
  auto emit = [&](std::size_t l, const char* kind, const KindCount& k) {
    csv.row({std::to_string(l), kind, std::to_string(k.total), std::to_string(k.zero),
             num(k.total ? static_cast<double>(k.zero) / static_cast<double>(k.total) : 0.0)});
  };
  for (std::size_t l = 0; l < b.size(); ++l) {
    emit(l, "theta", b[l].theta);
    emit(l, "phi", b[l].phi);
    emit(l, "sigma", b[l].sigma);
    emit(l, "screen", b[l].screen);
  }
  const PowerModel& pm = ctx.cfg.power;
  double max_phase = 0.0;
  for (const auto& p : ck.network.phases())
    for (double v : p) max_phase = std::max(max_phase, circular_magnitude(v));
  CommandSummary s;
  s.add("command", std::string("report"));
  s.add("phases", ck.network.phase_count());
  s.add("sparsity", ps_sparsity(ck.network, ck.state.masks));
  s.add("mean_phase_rad", mean_phase(ck.network, ck.state.masks));
  s.add("static_power_mw", static_power(ck.network, ck.state.masks, pm));
  s.add("max_delta_t_k", delta_T(max_phase, pm));
  s.add("accuracy", ck.nominal_accuracy);
  return s;
}

CommandSummary run_command(const std::string& name, const CommandOptions& opt) {
  if (name == "train") return cmd_train(opt);
  if (name == "prune") return cmd_prune(opt);
  if (name == "noise") return cmd_noise(opt);
  if (name == "study") return cmd_study(opt);
  if (name == "report") return cmd_report(opt);
  fail(ErrorKind::Config, "unknown command '" + name + "'");
}

}  // namespace scipnn
