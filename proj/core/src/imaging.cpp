#include "mrk/imaging.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "mrk/error.hpp"
#include "mrk/random_measures.hpp"

namespace mrk {
namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number(const char* what) {
    skip_space_and_comments();
    std::uint64_t v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (++digits > 9) throw Error(ErrorCode::MalformedHeader, std::string("PPM ") + what + " too large");
    }
    if (digits == 0) throw Error(ErrorCode::MalformedHeader, std::string("PPM header: missing ") + what);
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t size() const { return bytes_.size(); }
  std::uint8_t at(std::size_t i) const { return bytes_[i]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t ipow(std::uint32_t base, std::uint32_t exp) {
  std::uint32_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

void require_uniform_grid_tree(const IndexTree& tree, std::uint32_t s) {
  if (s == 0) throw Error(ErrorCode::InvalidArgument, "splits per level must be >= 1");
  const std::uint32_t branching = s * s;
  for (const auto& n : tree.nodes()) {
    if (!n.children.empty() && n.children.size() != branching) {
      throw Error(ErrorCode::TreeShapeMismatch,
                  "tree branching " + std::to_string(n.children.size()) + " != splits^2 = " +
                      std::to_string(branching));
    }
  }
  if (tree.depth() > 0 && branching < 2) {
    throw Error(ErrorCode::TreeShapeMismatch, "splits per level must be >= 2 for depth >= 1");
  }
  // Breadth-first numbering of a complete tree puts level d at a contiguous
  // id range; check the first child of every node to pin that layout.
  std::size_t next = 1;
  for (const auto& n : tree.nodes()) {
    if (n.children.empty()) continue;
    if (n.children.front() != next) {
      throw Error(ErrorCode::TreeShapeMismatch, "tree is not numbered breadth-first");
    }
    next += n.children.size();
  }
}

// All eight palette colors fall in distinct quantized bins.
constexpr std::array<Rgb, 4> kForeground{{{230, 40, 40}, {40, 200, 60}, {250, 210, 30}, {200, 60, 220}}};
constexpr std::array<Rgb, 4> kBackground{{{30, 60, 200}, {120, 120, 120}, {20, 150, 150}, {100, 70, 20}}};

}  // namespace

RawImage load_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(ErrorCode::MalformedHeader, "not a binary PPM (expected magic P6)");
  }
  HeaderScanner scan(bytes);
  scan.advance(2);
  if (scan.pos() < scan.size() && !std::isspace(scan.at(scan.pos())) && scan.at(scan.pos()) != '#') {
    throw Error(ErrorCode::MalformedHeader, "PPM magic must be followed by whitespace");
  }
  const auto width = scan.number("width");
  const auto height = scan.number("height");
  const auto maxval = scan.number("maxval");
  if (width == 0 || height == 0) throw Error(ErrorCode::MalformedHeader, "PPM with zero dimension");
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedMaxval, "PPM maxval " + std::to_string(maxval) + " (only 255 supported)");
  }
  if (scan.pos() >= scan.size() || !std::isspace(scan.at(scan.pos()))) {
    throw Error(ErrorCode::TruncatedPixelData, "PPM header not followed by pixel data");
  }
  scan.advance(1);  // single whitespace before the raster

  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (scan.size() - scan.pos() < count * 3) {
    throw Error(ErrorCode::TruncatedPixelData, "PPM declares " + std::to_string(count) + " pixels, data holds " +
                                                   std::to_string((scan.size() - scan.pos()) / 3));
  }
  RawImage img{static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height), {}};
  img.pixels.resize(count);
  const std::uint8_t* p = bytes.data() + scan.pos();
  for (auto& px : img.pixels) {
    px = {p[0], p[1], p[2]};
    p += 3;
  }
  return img;
}

RawImage load_ppm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_ppm(bytes);
}

std::vector<std::uint8_t> encode_ppm(const RawImage& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const auto& px : image.pixels) {
    out.push_back(px.r);
    out.push_back(px.g);
    out.push_back(px.b);
  }
  return out;
}

std::size_t grid_cell_leaf(std::uint32_t row, std::uint32_t col, std::uint32_t s, std::uint32_t depth) {
  std::size_t ordinal = 0;
  for (std::uint32_t level = 1; level <= depth; ++level) {
    const std::uint32_t scale = ipow(s, depth - level);
    const std::uint32_t r = (row / scale) % s;
    const std::uint32_t c = (col / scale) % s;
    ordinal = ordinal * s * s + r * s + c;
  }
  return ordinal;
}

NestedMeasure image_to_nested(const RawImage& image, const IndexTree& tree, std::uint32_t s) {
  require_uniform_grid_tree(tree, s);
  if (image.width == 0 || image.height == 0 || image.pixels.size() != std::size_t{image.width} * image.height) {
    throw Error(ErrorCode::InvalidArgument, "image has no pixels or inconsistent dimensions");
  }
  const std::uint32_t depth = tree.depth();
  const std::uint64_t cells = ipow(s, depth);
  const std::size_t nLeaves = tree.leaf_count();

  std::vector<std::uint64_t> counts(nLeaves * kColorSpaceSize, 0);
  for (std::uint32_t y = 0; y < image.height; ++y) {
    const auto row = static_cast<std::uint32_t>(std::uint64_t{y} * cells / image.height);
    for (std::uint32_t x = 0; x < image.width; ++x) {
      const auto col = static_cast<std::uint32_t>(std::uint64_t{x} * cells / image.width);
      const std::size_t leaf = grid_cell_leaf(row, col, s, depth);
      ++counts[leaf * kColorSpaceSize + quantize(image.at(x, y)).value];
    }
  }

  const double total = static_cast<double>(image.pixels.size());
  std::vector<SubMeasure> leaves;
  leaves.reserve(nLeaves);
  std::vector<MassEntry> entries;
  for (std::size_t leaf = 0; leaf < nLeaves; ++leaf) {
    entries.clear();
    for (std::uint32_t color = 0; color < kColorSpaceSize; ++color) {
      const auto n = counts[leaf * kColorSpaceSize + color];
      if (n > 0) entries.push_back({ComponentIndex{color}, static_cast<double>(n) / total});
    }
    leaves.push_back(SubMeasure::from_entries(kColorSpaceSize, entries));
  }
  return NestedMeasure::from_leaves(tree, std::move(leaves));
}

std::vector<LabeledImage> synth_images(const SynthOptions& o) {
  if (o.perClass == 0) throw Error(ErrorCode::InvalidArgument, "perClass must be >= 1");
  if (o.width < 2 || o.height < 2) throw Error(ErrorCode::InvalidArgument, "synthetic images need >= 2x2 pixels");
  if (!(o.noiseRate >= 0.0 && o.noiseRate <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise rate must lie in [0, 1]");
  }
  std::mt19937_64 rng(o.seed);
  const std::uint32_t halfW = o.width / 2;
  const std::uint32_t halfH = o.height / 2;

  std::vector<LabeledImage> classA, classB;
  for (std::uint32_t i = 0; i < o.perClass; ++i) {
    const Rgb fg = kForeground[uniform_below(rng, kForeground.size())];
    const Rgb bg = kBackground[uniform_below(rng, kBackground.size())];
    RawImage a{o.width, o.height, std::vector<Rgb>(std::size_t{o.width} * o.height, bg)};
    RawImage b = a;
    // Class 1 is class 0 rotated by half a turn: the foreground block moves
    // from the top-left to the bottom-right corner, pixel counts unchanged.
    for (std::uint32_t y = 0; y < halfH; ++y) {
      for (std::uint32_t x = 0; x < halfW; ++x) {
        a.pixels[std::size_t{y} * o.width + x] = fg;
        b.pixels[std::size_t{o.height - 1 - y} * o.width + (o.width - 1 - x)] = fg;
      }
    }
    for (RawImage* img : {&a, &b}) {
      for (auto& px : img->pixels) {
        if (uniform01(rng) < o.noiseRate) {
          const auto k = uniform_below(rng, kForeground.size() + kBackground.size());
          px = k < kForeground.size() ? kForeground[k] : kBackground[k - kForeground.size()];
        }
      }
    }
    classA.push_back({0, std::move(a)});
    classB.push_back({1, std::move(b)});
  }
  for (auto& img : classB) classA.push_back(std::move(img));
  return classA;
}

std::vector<DatasetRecord> synth_dataset(const SynthOptions& o) {
  const IndexTree tree = build_uniform_tree(o.splitsPerLevel * o.splitsPerLevel, o.depth, 0.0);
  std::vector<DatasetRecord> records;
  for (const auto& li : synth_images(o)) {
    records.push_back({li.label, image_to_nested(li.image, tree, o.splitsPerLevel)});
  }
  return records;
}

}  // namespace mrk
