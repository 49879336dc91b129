// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_CHECKPOINT_HPP
#define SCIPNN_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "scipnn/model.hpp"
#include "scipnn/pruning.hpp"

namespace scipnn {

constexpr std::uint16_t kCheckpointVersion = 1;

struct Checkpoint {
  Network network;
  PruneState state;  // masks, pre-training snapshot, round, history
  bool has_snapshot = true;
  double nominal_accuracy = 0.0;
  std::map<std::string, std::uint64_t> seeds;

  bool operator==(const Checkpoint&) const;
};

// Layout: "SCPN", u16 version, u32 header length, JSON header, then the
// little-endian f64 arrays listed in the header, in order.
std::string serialize_checkpoint(const Checkpoint& c);
Checkpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace scipnn

#endif  // SCIPNN_CHECKPOINT_HPP
