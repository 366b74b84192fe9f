#include "mrk/random_measures.hpp"

#include <algorithm>
#include <vector>

namespace mrk {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

SubMeasure random_submeasure(std::mt19937_64& rng, std::uint32_t spaceSize,
                             std::uint32_t maxSupport, double totalMass) {
  const auto support = static_cast<std::uint32_t>(
      1 + uniform_below(rng, std::min(maxSupport, spaceSize)));
  std::vector<std::uint32_t> indices(spaceSize);
  for (std::uint32_t i = 0; i < spaceSize; ++i) indices[i] = i;
  // Partial Fisher-Yates for `support` distinct indices.
  for (std::uint32_t k = 0; k < support; ++k) {
    const auto pick = k + uniform_below(rng, spaceSize - k);
    std::swap(indices[k], indices[pick]);
  }
  std::vector<double> weights(support);
  double wsum = 0.0;
  for (auto& w : weights) wsum += (w = 0.05 + uniform01(rng));
  std::vector<MassEntry> entries;
  for (std::uint32_t k = 0; k < support; ++k) {
    entries.push_back({ComponentIndex{indices[k]}, totalMass * weights[k] / wsum});
  }
  return SubMeasure::from_entries(spaceSize, entries);
}

NestedMeasure random_nested_measure(const IndexTree& tree, std::mt19937_64& rng,
                                    const RandomMeasureOptions& options) {
  const std::size_t nLeaves = tree.leaf_count();
  std::vector<double> weights(nLeaves, 0.0);
  double wsum = 0.0;
  for (auto& w : weights) {
    if (uniform01(rng) >= options.emptyLeafProbability) wsum += (w = 0.05 + uniform01(rng));
  }
  if (wsum == 0.0) wsum += (weights[uniform_below(rng, nLeaves)] = 1.0);

  const double total = options.minTotalMass + (1.0 - options.minTotalMass) * uniform01(rng);
  std::vector<SubMeasure> leaves;
  leaves.reserve(nLeaves);
  for (double w : weights) {
    if (w == 0.0) {
      leaves.emplace_back(options.spaceSize);
    } else {
      leaves.push_back(random_submeasure(rng, options.spaceSize, options.maxSupport, total * w / wsum));
    }
  }
  return NestedMeasure::from_leaves(tree, std::move(leaves));
}

IndexTree with_random_epsilons(const IndexTree& tree, std::mt19937_64& rng) {
  std::vector<TreeNode> nodes(tree.nodes().begin(), tree.nodes().end());
  for (auto& n : nodes) n.epsilon = n.children.empty() ? 0.0 : uniform01(rng);
  return IndexTree(std::move(nodes));
}

}  // namespace mrk
