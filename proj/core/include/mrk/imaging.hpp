#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mrk/hier_measure.hpp"
#include "mrk/hierarchy.hpp"
#include "mrk/measures.hpp"

namespace mrk {

// 3 bits per channel.
inline constexpr std::uint32_t kColorSpaceSize = 512;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend constexpr bool operator==(Rgb, Rgb) = default;
};

struct RawImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<Rgb> pixels;  // row-major

  Rgb at(std::uint32_t x, std::uint32_t y) const { return pixels[std::size_t{y} * width + x]; }
  friend bool operator==(const RawImage&, const RawImage&) = default;
};

/// Binary PPM (P6, maxval 255). Comments are accepted anywhere in the header.
/// Throws MalformedHeader, UnsupportedMaxval, TruncatedPixelData.
RawImage load_ppm(std::span<const std::uint8_t> bytes);
RawImage load_ppm_file(const std::filesystem::path& path);  // + IoFailure
std::vector<std::uint8_t> encode_ppm(const RawImage& image);

/// Top three bits of each channel: (r>>5)*64 + (g>>5)*8 + (b>>5).
constexpr ComponentIndex quantize(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return ComponentIndex{static_cast<std::uint32_t>((r >> 5) * 64 + (g >> 5) * 8 + (b >> 5))};
}
constexpr ComponentIndex quantize(Rgb c) noexcept { return quantize(c.r, c.g, c.b); }

/// Leaf ordinal (position in tree.leaves()) of grid cell (row, col) on an
/// s^depth x s^depth grid, for a breadth-first uniform tree with branching
/// s*s whose children are ordered row-major at every level.
std::size_t grid_cell_leaf(std::uint32_t row, std::uint32_t col, std::uint32_t splitsPerLevel,
                           std::uint32_t depth);

/// Color histogram per grid cell. Pixel (x, y) falls in column
/// floor(x * s^D / width) and row floor(y * s^D / height) and carries mass
/// 1/(width*height). Throws TreeShapeMismatch when `tree` is not the uniform
/// tree with branching s*s; InvalidArgument on an empty image.
NestedMeasure image_to_nested(const RawImage& image, const IndexTree& tree,
                              std::uint32_t splitsPerLevel);

struct DatasetRecord {
  std::uint32_t label = 0;
  NestedMeasure nested;
};

struct LabeledImage {
  std::uint32_t label = 0;
  RawImage image;
};

/// Two-class stand-in for a spatial-layout image task. Image pair i shares a
/// foreground and a background color drawn from a fixed palette; class 0
/// puts the foreground in the top-left quadrant, class 1 moves the same
/// pixels to the bottom-right. Global histograms of a pair coincide before
/// noise. Each pixel is then replaced, with probability noiseRate, by a
/// palette color. Fully determined by the seed.
struct SynthOptions {
  std::uint32_t perClass = 10;
  std::uint32_t splitsPerLevel = 2;
  std::uint32_t depth = 1;
  std::uint64_t seed = 0;
  double noiseRate = 0.05;
  std::uint32_t width = 64;
  std::uint32_t height = 64;
};

// Class-major order: all label-0 images, then all label-1 images.
std::vector<LabeledImage> synth_images(const SynthOptions& options);
std::vector<DatasetRecord> synth_dataset(const SynthOptions& options);

}  // namespace mrk
