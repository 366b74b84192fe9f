#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrk/hierarchy.hpp"
#include "mrk/measures.hpp"

namespace mrk {

/// An object decomposed over the leaves of an IndexTree: one sub-measure per
/// leaf, with the aggregate measure of every node precomputed bottom-up.
class NestedMeasure {
 public:
  NestedMeasure() = default;

  /// `leaves` follow tree.leaves() order.
  /// Throws LeafCountMismatch, SpaceMismatch, MassExceedsOne.
  static NestedMeasure from_leaves(const IndexTree& tree, std::vector<SubMeasure> leaves);

  std::uint32_t space_size() const noexcept { return spaceSize_; }
  std::span<const SubMeasure> leaf_measures() const noexcept { return leaves_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Aggregate over the leaves below `id`. Throws UnknownNode.
  const SubMeasure& node_measure(NodeId id) const;
  const SubMeasure& global() const { return node_measure(0); }

  std::uint64_t tree_fingerprint() const noexcept { return fingerprint_; }
  bool built_on(const IndexTree& tree) const noexcept {
    return fingerprint_ == tree.shape_fingerprint() && nodes_.size() == tree.size();
  }

  friend bool operator==(const NestedMeasure& a, const NestedMeasure& b) {
    return a.fingerprint_ == b.fingerprint_ && a.leaves_ == b.leaves_;
  }

 private:
  std::uint32_t spaceSize_ = 0;
  std::uint64_t fingerprint_ = 0;
  std::vector<SubMeasure> leaves_;
  std::vector<SubMeasure> nodes_;
};

inline NestedMeasure from_leaves(const IndexTree& tree, std::vector<SubMeasure> leaves) {
  return NestedMeasure::from_leaves(tree, std::move(leaves));
}

// Throws TreeMismatch unless `m` was built on a tree shaped like `tree`.
void require_tree(const IndexTree& tree, const NestedMeasure& m);

}  // namespace mrk
