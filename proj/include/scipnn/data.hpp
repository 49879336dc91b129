// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_DATA_HPP
#define SCIPNN_DATA_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scipnn/linalg.hpp"
#include "scipnn/sample.hpp"

namespace scipnn {

constexpr std::size_t kImageSide = 28;
constexpr std::size_t kImagePixels = kImageSide * kImageSide;

struct Image {
  std::vector<double> pixels;  // row-major, scaled to [0, 1]
  std::size_t label = 0;
};

// Reads an IDX image file and its label file. Either may be gzip-compressed.
std::vector<Image> load_mnist(const std::filesystem::path& images,
                              const std::filesystem::path& labels);

// Centered 2-D DFT of a 28x28 image: entry (r, c) holds frequency
// (r - 14, c - 14) modulo 28. Row-major, 784 entries.
CVector shifted_spectrum(std::span<const double> image);

// Central sqrt(dim) x sqrt(dim) block of the shifted spectrum, flattened
// row-major and scaled to unit power. `offset` moves the block diagonally.
// An all-zero image yields the zero vector.
CVector fft_features(std::span<const double> image, std::size_t dim = 16, int offset = 0);

struct FeatureOptions {
  std::size_t dim = 16;
  int offset = 0;
  std::size_t train_limit = 0;  // 0 = all
  std::size_t test_limit = 0;
};

// Loads the four standard MNIST files from `dir` (plain or .gz) and converts
// them to feature samples.
SplitDataset load_mnist_features(const std::filesystem::path& dir, const FeatureOptions& opt);

// Complex Gaussian clusters around class-dependent unit vectors. With
// classes <= width the means are distinct basis vectors, so the classes are
// separable at small noise. Features are power-normalized.
Dataset synthetic_blobs(std::size_t n_per_class, std::size_t classes, std::size_t width,
                        std::uint64_t seed, double noise = 0.1);

SplitDataset split(const Dataset& data, double test_fraction);

void save_features(const std::filesystem::path& path, std::span<const Sample> data);
Dataset load_features(const std::filesystem::path& path);

}  // namespace scipnn

#endif  // SCIPNN_DATA_HPP
