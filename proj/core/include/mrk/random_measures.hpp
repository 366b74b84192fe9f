#pragma once

#include <cstdint>
#include <random>

#include "mrk/hier_measure.hpp"
#include "mrk/hierarchy.hpp"
#include "mrk/measures.hpp"

namespace mrk {

// Portable draws straight from the engine output; std distributions are
// implementation-defined and would break cross-platform reproducibility.
double uniform01(std::mt19937_64& rng);
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

struct RandomMeasureOptions {
  std::uint32_t spaceSize = 16;
  std::uint32_t maxSupport = 4;   // per leaf
  double emptyLeafProbability = 0.15;
  double minTotalMass = 0.5;      // total drawn uniformly from [min, 1]
};

/// Sparse sub-measure with 1..maxSupport distinct indices and the given mass.
SubMeasure random_submeasure(std::mt19937_64& rng, std::uint32_t spaceSize,
                             std::uint32_t maxSupport, double totalMass);

NestedMeasure random_nested_measure(const IndexTree& tree, std::mt19937_64& rng,
                                    const RandomMeasureOptions& options = {});

/// Same shape with an independent uniform epsilon on every internal node.
IndexTree with_random_epsilons(const IndexTree& tree, std::mt19937_64& rng);

}  // namespace mrk
