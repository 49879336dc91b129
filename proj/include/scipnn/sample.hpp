// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_SAMPLE_HPP
#define SCIPNN_SAMPLE_HPP

#include <cstddef>
#include <vector>

#include "scipnn/linalg.hpp"

namespace scipnn {

/// One input field (unit total power) and its class label.
struct Sample {
  CVector features;
  std::size_t label = 0;
  bool operator==(const Sample&) const = default;
};

using Dataset = std::vector<Sample>;

struct SplitDataset {
  Dataset train;
  Dataset test;
};

}  // namespace scipnn

#endif  // SCIPNN_SAMPLE_HPP
