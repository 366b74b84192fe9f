#include "mrk/hier_measure.hpp"

#include <string>

#include "mrk/error.hpp"

namespace mrk {

NestedMeasure NestedMeasure::from_leaves(const IndexTree& tree, std::vector<SubMeasure> leaves) {
  if (leaves.size() != tree.leaf_count()) {
    throw Error(ErrorCode::LeafCountMismatch, "got " + std::to_string(leaves.size()) +
                                                  " leaf measures for " +
                                                  std::to_string(tree.leaf_count()) + " leaves");
  }
  const std::uint32_t space = leaves.front().space_size();
  for (const auto& leaf : leaves) {
    if (leaf.space_size() != space) {
      throw Error(ErrorCode::SpaceMismatch, "leaf measures disagree on space size");
    }
  }

  NestedMeasure m;
  m.spaceSize_ = space;
  m.fingerprint_ = tree.shape_fingerprint();
  m.nodes_.assign(tree.size(), SubMeasure(space));
  const auto leafIds = tree.leaves();
  for (std::size_t k = 0; k < leafIds.size(); ++k) m.nodes_[leafIds[k]] = leaves[k];
  // Reverse id order visits children before parents; add() enforces the
  // unit-mass bound on every aggregate, the root included.
  for (std::size_t i = tree.size(); i-- > 0;) {
    const auto& children = tree.nodes()[i].children;
    if (children.empty()) continue;
    SubMeasure acc = m.nodes_[children.front()];
    for (std::size_t c = 1; c < children.size(); ++c) acc = add(acc, m.nodes_[children[c]]);
    m.nodes_[i] = std::move(acc);
  }
  m.leaves_ = std::move(leaves);
  return m;
}

const SubMeasure& NestedMeasure::node_measure(NodeId id) const {
  if (id >= nodes_.size()) {
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(id) + " not in measure");
  }
  return nodes_[id];
}

void require_tree(const IndexTree& tree, const NestedMeasure& m) {
  if (!m.built_on(tree)) {
    throw Error(ErrorCode::TreeMismatch, "measure was built on a differently shaped tree");
  }
}

}  // namespace mrk
