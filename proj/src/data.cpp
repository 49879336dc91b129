// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#include "scipnn/data.hpp"

#include <zlib.h>

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

#include "scipnn/error.hpp"
#include "scipnn/parallel.hpp"
#include "scipnn/rng.hpp"

namespace scipnn {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;
constexpr std::uint16_t kCacheVersion = 1;
constexpr std::uint64_t kBlobStream = 0x424C4F42;  // "BLOB"

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorKind::Io, "file not found: " + path.string());
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (!f) fail(ErrorKind::Io, "cannot open " + path.string());
  std::vector<unsigned char> out;
  unsigned char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof buf)) > 0) out.insert(out.end(), buf, buf + n);
  int err = 0;
  const char* msg = gzerror(f, &err);
  const std::string detail = msg ? msg : "";
  gzclose(f);
  if (n < 0 || (err != Z_OK && err != Z_STREAM_END))
    fail(ErrorKind::Format, "read error in " + path.string() + ": " + detail);
  return out;
}

std::uint32_t be32(const std::vector<unsigned char>& b, std::size_t at, const std::string& name) {
  if (b.size() < at + 4)
    fail(ErrorKind::Format, name + ": truncated header at byte " + std::to_string(at) +
                                " (file has " + std::to_string(b.size()) + " bytes)");
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

void check_length(const std::vector<unsigned char>& b, std::size_t expected, const std::string& name) {
  if (b.size() != expected)
    fail(ErrorKind::Format, name + ": expected " + std::to_string(expected) + " bytes, found " +
                                std::to_string(b.size()) + " (payload ends at byte " +
                                std::to_string(std::min(b.size(), expected)) + ")");
}

std::filesystem::path locate(const std::filesystem::path& dir, const std::string& stem) {
  const auto plain = dir / stem;
  if (std::filesystem::exists(plain)) return plain;
  const auto gz = dir / (stem + ".gz");
  if (std::filesystem::exists(gz)) return gz;
  fail(ErrorKind::Io, "dataset file not found: " + plain.string() + "[.gz]");
}

struct Twiddles {
  std::array<cplx, kImageSide> w;
  Twiddles() {
    for (std::size_t k = 0; k < kImageSide; ++k)
      w[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / kImageSide);
  }
};

const Twiddles& twiddles() {
  static const Twiddles t;
  return t;
}

// Unshifted frequency index for a shifted position.
std::size_t unshift(std::size_t pos) { return (pos + kImageSide / 2) % kImageSide; }

// Spectrum entries for the given shifted rows and columns.
std::vector<cplx> partial_spectrum(std::span<const double> image, std::span<const std::size_t> rows,
                                   std::span<const std::size_t> cols) {
  if (image.size() != kImagePixels)
    fail(ErrorKind::Shape, "image must have " + std::to_string(kImagePixels) + " pixels");
  const auto& w = twiddles().w;
  // Row transforms at the selected column frequencies.
  std::vector<cplx> rowt(kImageSide * cols.size());
  for (std::size_t y = 0; y < kImageSide; ++y) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const std::size_t fx = unshift(cols[j]);
      cplx acc = 0.0;
      for (std::size_t x = 0; x < kImageSide; ++x) acc += image[y * kImageSide + x] * w[(fx * x) % kImageSide];
      rowt[y * cols.size() + j] = acc;
    }
  }
  std::vector<cplx> out(rows.size() * cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t fy = unshift(rows[i]);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cplx acc = 0.0;
      for (std::size_t y = 0; y < kImageSide; ++y) acc += rowt[y * cols.size() + j] * w[(fy * y) % kImageSide];
      out[i * cols.size() + j] = acc;
    }
  }
  return out;
}

void put_u16(std::ostream& o, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  o.write(reinterpret_cast<const char*>(b), 2);
}

void put_u32(std::ostream& o, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::ostream& o, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  for (int i = 0; i < 8; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const std::vector<unsigned char>& b, std::size_t& at, int bytes) {
  if (b.size() < at + bytes)
    fail(ErrorKind::Format, "feature cache truncated at byte " + std::to_string(at));
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{b[at + i]} << (8 * i);
  at += bytes;
  return v;
}

}  // namespace

std::vector<Image> load_mnist(const std::filesystem::path& images_path,
                              const std::filesystem::path& labels_path) {
  const auto img = read_all(images_path);
  const auto lab = read_all(labels_path);
  const std::string iname = images_path.string(), lname = labels_path.string();
  const std::uint32_t im = be32(img, 0, iname);
  if (im != kImageMagic)
    fail(ErrorKind::Format, iname + ": bad magic at byte 0 (expected 0x00000803)");
  const std::uint32_t lm = be32(lab, 0, lname);
  if (lm != kLabelMagic)
    fail(ErrorKind::Format, lname + ": bad magic at byte 0 (expected 0x00000801)");
  const std::size_t count = be32(img, 4, iname);
  const std::size_t rows = be32(img, 8, iname), cols = be32(img, 12, iname);
  if (rows != kImageSide || cols != kImageSide)
    fail(ErrorKind::Format, iname + ": images must be 28x28 (header at byte 8)");
  const std::size_t lcount = be32(lab, 4, lname);
  if (lcount != count)
    fail(ErrorKind::Format, lname + ": label count " + std::to_string(lcount) +
                                " != image count " + std::to_string(count) + " (byte 4)");
  check_length(img, 16 + count * kImagePixels, iname);
  check_length(lab, 8 + count, lname);

  std::vector<Image> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].pixels.resize(kImagePixels);
    const unsigned char* p = img.data() + 16 + i * kImagePixels;
    for (std::size_t k = 0; k < kImagePixels; ++k) out[i].pixels[k] = p[k] / 255.0;
    out[i].label = lab[8 + i];
  }
  return out;
}

CVector shifted_spectrum(std::span<const double> image) {
  std::vector<std::size_t> all(kImageSide);
  for (std::size_t i = 0; i < kImageSide; ++i) all[i] = i;
  return partial_spectrum(image, all, all);
}

CVector fft_features(std::span<const double> image, std::size_t dim, int offset) {
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(dim))));
  if (side == 0 || side * side != dim) fail(ErrorKind::Validation, "feature dim must be a perfect square");
  const long start = static_cast<long>(kImageSide / 2) - static_cast<long>(side / 2) + offset;
  if (start < 0 || start + static_cast<long>(side) > static_cast<long>(kImageSide))
    fail(ErrorKind::Validation, "feature block offset out of range");
  std::vector<std::size_t> idx(side);
  for (std::size_t i = 0; i < side; ++i) idx[i] = static_cast<std::size_t>(start) + i;
  CVector f = partial_spectrum(image, idx, idx);
  double power = 0.0;
  for (const cplx& z : f) power += std::norm(z);
  if (power > 0.0) {
    const double s = 1.0 / std::sqrt(power);
    for (cplx& z : f) z *= s;
  }
  return f;
}

SplitDataset load_mnist_features(const std::filesystem::path& dir, const FeatureOptions& opt) {
  const auto train_img = locate(dir, "train-images-idx3-ubyte");
  const auto train_lab = locate(dir, "train-labels-idx1-ubyte");
  const auto test_img = locate(dir, "t10k-images-idx3-ubyte");
  const auto test_lab = locate(dir, "t10k-labels-idx1-ubyte");
  auto convert = [&](const std::vector<Image>& images, std::size_t limit) {
    const std::size_t n = limit == 0 ? images.size() : std::min(limit, images.size());
    Dataset d(n);
    parallel_for(n, [&](std::size_t i) {
      d[i].features = fft_features(images[i].pixels, opt.dim, opt.offset);
      d[i].label = images[i].label;
    });
    return d;
  };
  SplitDataset out;
  out.train = convert(load_mnist(train_img, train_lab), opt.train_limit);
  out.test = convert(load_mnist(test_img, test_lab), opt.test_limit);
  return out;
}

Dataset synthetic_blobs(std::size_t n_per_class, std::size_t classes, std::size_t width,
                        std::uint64_t seed, double noise) {
  if (classes == 0 || width == 0) fail(ErrorKind::Validation, "classes and width must be positive");
  if (!(noise >= 0.0)) fail(ErrorKind::Validation, "noise must be non-negative");
  std::vector<CVector> means(classes, CVector(width, 0.0));
  Rng mean_rng(derive_seed(seed, kBlobStream, 0));
  for (std::size_t c = 0; c < classes; ++c) {
    if (classes <= width) {
      means[c][c] = 1.0;
    } else {
      double norm = 0.0;
      for (cplx& z : means[c]) {
        z = cplx(mean_rng.normal(), mean_rng.normal());
        norm += std::norm(z);
      }
      for (cplx& z : means[c]) z /= std::sqrt(norm);
    }
  }
  Dataset d;
  d.reserve(n_per_class * classes);
  Rng rng(derive_seed(seed, kBlobStream, 1));
  for (std::size_t i = 0; i < n_per_class; ++i) {
    for (std::size_t c = 0; c < classes; ++c) {
      CVector f = means[c];
      double power = 0.0;
      for (cplx& z : f) {
        z += noise * cplx(rng.normal(), rng.normal()) / std::numbers::sqrt2;
        power += std::norm(z);
      }
      if (power > 0.0)
        for (cplx& z : f) z /= std::sqrt(power);
      d.push_back({std::move(f), c});
    }
  }
  return d;
}

SplitDataset split(const Dataset& data, double test_fraction) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    fail(ErrorKind::Validation, "test fraction must lie in [0, 1)");
  const auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(data.size())));
  SplitDataset s;
  s.train.assign(data.begin(), data.end() - static_cast<std::ptrdiff_t>(n_test));
  s.test.assign(data.end() - static_cast<std::ptrdiff_t>(n_test), data.end());
  return s;
}

void save_features(const std::filesystem::path& path, std::span<const Sample> data) {
  const std::size_t dim = data.empty() ? 0 : data.front().features.size();
  if (data.size() > UINT32_MAX || dim > UINT16_MAX) fail(ErrorKind::Validation, "dataset too large for cache");
  std::ofstream o(path, std::ios::binary);
  if (!o) fail(ErrorKind::Io, "cannot write " + path.string());
  o.write("SPFV", 4);
  put_u16(o, kCacheVersion);
  put_u32(o, static_cast<std::uint32_t>(data.size()));
  put_u16(o, static_cast<std::uint16_t>(dim));
  for (const Sample& s : data) {
    if (s.features.size() != dim) fail(ErrorKind::Shape, "samples have inconsistent dimensions");
    for (const cplx& z : s.features) {
      put_f64(o, z.real());
      put_f64(o, z.imag());
    }
  }
  for (const Sample& s : data) {
    if (s.label > 255) fail(ErrorKind::Validation, "label does not fit in a byte");
    o.put(static_cast<char>(s.label));
  }
  if (!o) fail(ErrorKind::Io, "write failed for " + path.string());
}

Dataset load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "file not found: " + path.string());
  const std::vector<unsigned char> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (b.size() < 4 || std::memcmp(b.data(), "SPFV", 4) != 0)
    fail(ErrorKind::Format, path.string() + ": bad magic at byte 0");
  std::size_t at = 4;
  const auto version = get_le(b, at, 2);
  if (version != kCacheVersion)
    fail(ErrorKind::Format, path.string() + ": unsupported cache version " + std::to_string(version));
  const auto count = static_cast<std::size_t>(get_le(b, at, 4));
  const auto dim = static_cast<std::size_t>(get_le(b, at, 2));
  const std::size_t expected = at + count * dim * 16 + count;
  if (b.size() != expected)
    fail(ErrorKind::Format, path.string() + ": expected " + std::to_string(expected) + " bytes, found " +
                                std::to_string(b.size()));
  Dataset d(count);
  for (Sample& s : d) {
    s.features.resize(dim);
    for (cplx& z : s.features) {
      const std::uint64_t re = get_le(b, at, 8), im = get_le(b, at, 8);
      double r, i;
      std::memcpy(&r, &re, 8);
      std::memcpy(&i, &im, 8);
      z = cplx(r, i);
    }
  }
  for (Sample& s : d) s.label = b[at++];
  return d;
}

}  // namespace scipnn
