#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mrk {

using NodeId = std::uint32_t;

struct TreeNode {
  NodeId id = 0;
  std::uint32_t depth = 0;
  std::vector<NodeId> children;  // empty iff leaf
  double epsilon = 0.0;          // branching probability; 0 on leaves
};

/// Checks every structural invariant of a hierarchy given as a node array and
/// throws the matching Error on the first violation:
///   MalformedTree            ids not contiguous, bad parents, inconsistent depths
///   NonTopologicalOrder      a child id not greater than its parent id
///   StrictRefinementViolated an internal node with a single child
///   InvalidEpsilon           epsilon outside [0, 1]
///   LeafEpsilonNonzero       a leaf with epsilon != 0
///   UnevenLeafDepth          leaves at different depths
void validate(std::span<const TreeNode> nodes);

/// Rooted tree encoding a hierarchy of nested partitions of the index set.
///
/// Node 0 is the root (the whole index set); the leaves are the singletons of
/// the finest partition. Children of a node are its siblings set s(T): the
/// pieces it splits into at the next level. Node ids are topologically
/// ordered, so a reverse sweep over ids visits children before parents.
class IndexTree {
 public:
  /// Validates (see `validate`) and takes ownership of the nodes.
  explicit IndexTree(std::vector<TreeNode> nodes);

  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  const TreeNode& node(NodeId id) const;  // throws UnknownNode
  std::size_t size() const noexcept { return nodes_.size(); }
  NodeId root() const noexcept { return 0; }
  std::uint32_t depth() const noexcept { return depth_; }

  bool is_leaf(NodeId id) const { return node(id).children.empty(); }
  double epsilon(NodeId id) const { return node(id).epsilon; }
  // Root has no parent; returns root() for it.
  NodeId parent(NodeId id) const;

  /// Leaf node ids in increasing id order; NestedMeasure leaves follow it.
  std::span<const NodeId> leaves() const noexcept { return leaves_; }
  std::size_t leaf_count() const noexcept { return leaves_.size(); }

  /// Hash of the children structure only (epsilons excluded). Measures built
  /// on one tree are usable with any tree of the same shape.
  std::uint64_t shape_fingerprint() const noexcept { return fingerprint_; }

  /// Same shape, every internal node set to `epsilon`.
  IndexTree with_epsilon(double epsilon) const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<NodeId> parents_;
  std::vector<NodeId> leaves_;
  std::uint32_t depth_ = 0;
  std::uint64_t fingerprint_ = 0;
};

/// Complete `branching`-ary tree of the given depth with nodes numbered in
/// breadth-first order. Internal nodes carry `epsilon`, leaves 0.
/// Throws InvalidEpsilon, BranchingTooSmall (branching < 2 with depth >= 1).
IndexTree build_uniform_tree(std::uint32_t branching, std::uint32_t depth, double epsilon);

struct Partition {
  std::vector<NodeId> nodeIds;  // sorted

  friend bool operator==(const Partition&, const Partition&) = default;
};

struct WeightedPartition {
  Partition partition;
  double weight = 0.0;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Number of partitions buildable from the tree's nodes, as a double (it
/// overflows any integer type quickly).
double count_partitions(const IndexTree& tree);

/// Every partition assembled from tree nodes, exactly once, with its
/// branching-process prior weight. Zero-weight partitions are included.
/// Throws EnumerationTooLarge when count_partitions exceeds `cap`.
std::vector<WeightedPartition> enumerate_partitions(
    const IndexTree& tree, std::size_t cap = kDefaultEnumerationCap);

/// Prior probability of `p` under the branching process: product of
/// (1 - eps) over the chosen sets and eps over their strict ancestors.
/// Throws NotAPartition.
double prior_weight(const IndexTree& tree, const Partition& p);

/// Throws NotAPartition unless `p` is a sorted, disjoint cover of the leaves.
void check_partition(const IndexTree& tree, const Partition& p);

// Text form `branching=<a> depth=<d> epsilon=<real|1/alpha>`.
struct TreeConfig {
  std::uint32_t branching = 2;
  std::uint32_t depth = 0;
  bool epsilonInverseBranching = false;  // `epsilon=1/alpha`
  double epsilon = 0.0;

  double resolved_epsilon() const;
};

TreeConfig parse_tree_config(std::string_view text);
// Echoes the resolved epsilon as a number.
std::string format_tree_config(const TreeConfig& config);
IndexTree build_tree(const TreeConfig& config);

}  // namespace mrk
