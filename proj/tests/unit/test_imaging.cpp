#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <string>

#include "mrk/error.hpp"
#include "mrk/imaging.hpp"

namespace mrk {
namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

ErrorCode ppm_error(const std::string& s) {
  try {
    load_ppm(bytes_of(s));
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

RawImage random_image(std::uint32_t w, std::uint32_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RawImage img{w, h, std::vector<Rgb>(std::size_t{w} * h)};
  for (auto& px : img.pixels) {
    const auto v = rng();
    px = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v >> 16)};
  }
  return img;
}

// Walks the tree from the root following row-major child digits.
NodeId leaf_by_descent(const IndexTree& tree, std::uint32_t row, std::uint32_t col, std::uint32_t s) {
  NodeId cur = 0;
  std::uint32_t cells = 1;
  for (std::uint32_t d = 0; d < tree.depth(); ++d) cells *= s;
  for (std::uint32_t span = cells / s; !tree.is_leaf(cur); span /= s) {
    const std::uint32_t digit = ((row / span) % s) * s + (col / span) % s;
    cur = tree.node(cur).children[digit];
  }
  return cur;
}

TEST(LoadPpm, SinglePixel) {
  const auto img = load_ppm(bytes_of(std::string("P6\n1 1\n255\n") + '\xff' + '\0' + '\0'));
  EXPECT_EQ(img.width, 1u);
  EXPECT_EQ(img.height, 1u);
  ASSERT_EQ(img.pixels.size(), 1u);
  EXPECT_EQ(img.pixels[0], (Rgb{255, 0, 0}));
}

TEST(LoadPpm, CommentsInHeader) {
  const auto img = load_ppm(bytes_of(std::string("P6 # made by hand\n# another\n2 # w\n1\n255\nabcdef")));
  EXPECT_EQ(img.width, 2u);
  EXPECT_EQ(img.pixels[1], (Rgb{'d', 'e', 'f'}));
}

TEST(LoadPpm, Errors) {
  EXPECT_EQ(ppm_error("P3\n1 1\n255\n255 0 0\n"), ErrorCode::MalformedHeader);
  EXPECT_EQ(ppm_error(""), ErrorCode::MalformedHeader);
  EXPECT_EQ(ppm_error("P6\n1\n"), ErrorCode::MalformedHeader);
  EXPECT_EQ(ppm_error("P6\n0 1\n255\n"), ErrorCode::MalformedHeader);
  EXPECT_EQ(ppm_error("P6\n2 2\n255\n123456789"), ErrorCode::TruncatedPixelData);
  EXPECT_EQ(ppm_error("P6\n1 1\n65535\n123456"), ErrorCode::UnsupportedMaxval);
  EXPECT_EQ(ppm_error("P6\n1 1\n255"), ErrorCode::TruncatedPixelData);
}

TEST(LoadPpm, EncodeRoundTrip) {
  const auto img = random_image(7, 5, 3);
  EXPECT_EQ(load_ppm(encode_ppm(img)), img);
}

TEST(Quantize, Examples) {
  EXPECT_EQ(quantize(0, 0, 0).value, 0u);
  EXPECT_EQ(quantize(255, 255, 255).value, 511u);
  EXPECT_EQ(quantize(255, 0, 0).value, 448u);
}

TEST(Quantize, SurjectiveAndConstantOnSubcubes) {
  std::vector<int> hits(kColorSpaceSize, 0);
  for (int r = 0; r < 256; ++r) {
    for (int g = 0; g < 256; ++g) {
      for (int b = 0; b < 256; ++b) {
        const auto q = quantize(r, g, b).value;
        ASSERT_LT(q, kColorSpaceSize);
        ASSERT_EQ(q, quantize((r / 32) * 32, (g / 32) * 32, (b / 32) * 32).value);
        ++hits[q];
      }
    }
  }
  for (int h : hits) EXPECT_EQ(h, 32 * 32 * 32);
}

TEST(ImageToNested, SinglePixel) {
  const RawImage img{1, 1, {{40, 200, 60}}};
  const auto tree = build_uniform_tree(4, 2, 0.25);
  const auto nm = image_to_nested(img, tree, 2);
  EXPECT_EQ(nm.global(), SubMeasure::from_entries(kColorSpaceSize, {{quantize(40, 200, 60), 1.0}}));
  std::size_t nonEmpty = 0;
  for (const auto& leaf : nm.leaf_measures()) nonEmpty += !leaf.empty();
  EXPECT_EQ(nonEmpty, 1u);
}

TEST(ImageToNested, TwoByTwoOnePixelPerLeaf) {
  const RawImage img{2, 2, {{0, 0, 0}, {255, 0, 0}, {0, 255, 0}, {0, 0, 255}}};
  const auto tree = build_uniform_tree(4, 1, 0.25);
  const auto nm = image_to_nested(img, tree, 2);
  for (std::uint32_t k = 0; k < 4; ++k) {
    const auto& leaf = nm.leaf_measures()[k];
    ASSERT_EQ(leaf.support_size(), 1u);
    EXPECT_EQ(leaf.entries()[0].index, quantize(img.pixels[k]));
    EXPECT_EQ(leaf.entries()[0].mass, 0.25);
  }
}

void check_against_cell_counting(const RawImage& img, std::uint32_t s, std::uint32_t depth) {
  const auto tree = build_uniform_tree(s * s, depth, 0.5);
  const auto nm = image_to_nested(img, tree, s);
  std::uint32_t cells = 1;
  for (std::uint32_t d = 0; d < depth; ++d) cells *= s;

  std::uint64_t covered = 0;
  double total = 0.0;
  for (std::uint32_t r = 0; r < cells; ++r) {
    for (std::uint32_t c = 0; c < cells; ++c) {
      // Pixels whose scaled coordinate lands in [c, c+1) x [r, r+1).
      std::vector<std::uint64_t> count(kColorSpaceSize, 0);
      for (std::uint32_t y = 0; y < img.height; ++y) {
        if (std::uint64_t{y} * cells < std::uint64_t{r} * img.height ||
            std::uint64_t{y} * cells >= std::uint64_t{r + 1} * img.height) {
          continue;
        }
        for (std::uint32_t x = 0; x < img.width; ++x) {
          if (std::uint64_t{x} * cells < std::uint64_t{c} * img.width ||
              std::uint64_t{x} * cells >= std::uint64_t{c + 1} * img.width) {
            continue;
          }
          ++count[quantize(img.at(x, y)).value];
          ++covered;
        }
      }
      const SubMeasure& leaf = nm.node_measure(leaf_by_descent(tree, r, c, s));
      for (std::uint32_t color = 0; color < kColorSpaceSize; ++color) {
        const double expected = static_cast<double>(count[color]) / static_cast<double>(img.pixels.size());
        ASSERT_EQ(leaf.at({color}), expected) << "cell " << r << "," << c << " color " << color;
      }
      total += leaf.mass();
    }
  }
  EXPECT_EQ(covered, img.pixels.size());
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_NEAR(nm.global().mass(), 1.0, 1e-9);
}

TEST(ImageToNested, PaperSizedImageMatchesCellCounting) {
  check_against_cell_counting(random_image(256, 384, 17), 2, 2);
}

TEST(ImageToNested, NonDivisibleGridMatchesCellCounting) {
  check_against_cell_counting(random_image(384, 256, 18), 3, 2);
  check_against_cell_counting(random_image(31, 17, 19), 2, 3);
}

TEST(ImageToNested, LeafCountForNineByNineGrid) {
  const auto tree = build_uniform_tree(9, 2, 1.0 / 9);
  EXPECT_EQ(image_to_nested(random_image(384, 256, 2), tree, 3).leaf_measures().size(), 81u);
}

TEST(ImageToNested, TreeShapeMismatch) {
  const auto img = random_image(8, 8, 1);
  try {
    image_to_nested(img, build_uniform_tree(4, 2, 0.5), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TreeShapeMismatch);
  }
  // Same branching, but children not numbered breadth-first.
  const IndexTree dfs({{0, 0, {1, 4}, 0.5},
                       {1, 1, {2, 3}, 0.5},
                       {2, 2, {}, 0.0},
                       {3, 2, {}, 0.0},
                       {4, 1, {5, 6}, 0.5},
                       {5, 2, {}, 0.0},
                       {6, 2, {}, 0.0}});
  EXPECT_THROW(image_to_nested(img, dfs, 1), Error);
}

TEST(GridCellLeaf, AgreesWithTreeDescent) {
  for (auto [s, d] : {std::pair{2u, 1u}, {2u, 3u}, {3u, 2u}}) {
    const auto tree = build_uniform_tree(s * s, d, 0.5);
    std::uint32_t cells = 1;
    for (std::uint32_t k = 0; k < d; ++k) cells *= s;
    for (std::uint32_t r = 0; r < cells; ++r) {
      for (std::uint32_t c = 0; c < cells; ++c) {
        EXPECT_EQ(tree.leaves()[grid_cell_leaf(r, c, s, d)], leaf_by_descent(tree, r, c, s));
      }
    }
  }
}

TEST(Synth, Deterministic) {
  SynthOptions o;
  o.perClass = 1;
  o.splitsPerLevel = 2;
  o.seed = 7;
  const auto a = synth_dataset(o);
  const auto b = synth_dataset(o);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].label, b[i].label);
    EXPECT_EQ(a[i].nested, b[i].nested);
  }
  o.seed = 8;
  EXPECT_FALSE(synth_dataset(o)[0].nested == a[0].nested);
}

TEST(Synth, NoiselessPairsShareGlobalHistogramButNotLayout) {
  for (auto [s, d] : {std::pair{2u, 1u}, {2u, 2u}, {3u, 1u}}) {
    SynthOptions o;
    o.perClass = 5;
    o.splitsPerLevel = s;
    o.depth = d;
    o.noiseRate = 0.0;
    o.seed = 3;
    const auto recs = synth_dataset(o);
    ASSERT_EQ(recs.size(), 10u);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& a = recs[i];
      const auto& b = recs[i + 5];
      EXPECT_EQ(a.label, 0u);
      EXPECT_EQ(b.label, 1u);
      EXPECT_EQ(a.nested.global(), b.nested.global());
      std::size_t differing = 0;
      const auto leavesA = a.nested.leaf_measures();
      for (std::size_t k = 0; k < leavesA.size(); ++k) differing += !(leavesA[k] == b.nested.leaf_measures()[k]);
      EXPECT_GE(2 * differing, leavesA.size());
      EXPECT_NEAR(a.nested.global().mass(), 1.0, 1e-9);
    }
  }
}

TEST(Synth, NoiseRateIsRoughlyHonored) {
  SynthOptions o;
  o.perClass = 4;
  o.noiseRate = 0.05;
  o.seed = 1;
  std::size_t odd = 0, total = 0;
  for (const auto& li : synth_images(o)) {
    // Foreground quadrant and background are each dominated by one color.
    std::map<std::uint32_t, std::size_t> inFg, inBg;
    const std::uint32_t hw = li.image.width / 2, hh = li.image.height / 2;
    for (std::uint32_t y = 0; y < li.image.height; ++y) {
      for (std::uint32_t x = 0; x < li.image.width; ++x) {
        const bool fgQuadrant = li.label == 0 ? (x < hw && y < hh) : (x >= hw && y >= hh);
        ++(fgQuadrant ? inFg : inBg)[quantize(li.image.at(x, y)).value];
      }
    }
    const auto top = [](const auto& m) {
      return std::max_element(m.begin(), m.end(), [](auto& a, auto& b) { return a.second < b.second; })->second;
    };
    const std::size_t n = li.image.pixels.size();
    odd += n - top(inFg) - top(inBg);
    total += n;
  }
  // A replaced pixel keeps its color with probability 1/8.
  const double rate = static_cast<double>(odd) / static_cast<double>(total);
  EXPECT_GT(rate, 0.03);
  EXPECT_LT(rate, 0.06);
  EXPECT_THROW(synth_images(SynthOptions{.perClass = 0}), Error);
}

}  // namespace
}  // namespace mrk
