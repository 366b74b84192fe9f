#include "mrk/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "mrk/error.hpp"
#include "mrk/text.hpp"

namespace mrk {
namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

std::string node_str(std::size_t id) { return "node " + std::to_string(id); }

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffU;
    h *= kFnvPrime;
  }
}

// Canonical factor order (ascending node id) shared by the enumerator and
// prior_weight so that both produce bit-identical weights.
double weight_from_marks(const IndexTree& tree, const std::vector<char>& chosen,
                         const std::vector<char>& ancestor) {
  double w = 1.0;
  for (NodeId id = 0; id < tree.size(); ++id) {
    const double eps = tree.epsilon(id);
    if (chosen[id]) {
      w *= (1.0 - eps);
    } else if (ancestor[id]) {
      w *= eps;
    }
  }
  return w;
}

}  // namespace

void validate(std::span<const TreeNode> nodes) {
  if (nodes.empty()) fail(ErrorCode::MalformedTree, "tree has no nodes");

  std::vector<std::optional<NodeId>> parent(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.id != i) fail(ErrorCode::MalformedTree, node_str(i) + " carries id " + std::to_string(n.id));
    if (n.children.size() == 1) {
      fail(ErrorCode::StrictRefinementViolated, node_str(i) + " has a single child");
    }
    if (!std::isfinite(n.epsilon) || n.epsilon < 0.0 || n.epsilon > 1.0) {
      fail(ErrorCode::InvalidEpsilon, node_str(i) + " epsilon " + format_real(n.epsilon));
    }
    if (n.children.empty() && n.epsilon != 0.0) {
      fail(ErrorCode::LeafEpsilonNonzero, node_str(i) + " is a leaf with nonzero epsilon");
    }
    for (NodeId c : n.children) {
      if (c >= nodes.size()) fail(ErrorCode::MalformedTree, node_str(i) + " has unknown child " + std::to_string(c));
      if (c <= i) fail(ErrorCode::NonTopologicalOrder, node_str(i) + " has child id " + std::to_string(c));
      if (parent[c]) fail(ErrorCode::MalformedTree, node_str(c) + " has two parents");
      parent[c] = static_cast<NodeId>(i);
    }
  }

  if (nodes[0].depth != 0) fail(ErrorCode::MalformedTree, "root depth must be 0");
  std::optional<std::uint32_t> leafDepth;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) {
      // Every parent id is smaller, so this also proves reachability from 0.
      if (!parent[i]) fail(ErrorCode::MalformedTree, node_str(i) + " is unreachable from the root");
      if (nodes[i].depth != nodes[*parent[i]].depth + 1) {
        fail(ErrorCode::MalformedTree, node_str(i) + " depth inconsistent with its parent");
      }
    }
    if (nodes[i].children.empty()) {
      if (leafDepth && *leafDepth != nodes[i].depth) {
        fail(ErrorCode::UnevenLeafDepth, node_str(i) + " is a leaf at depth " +
                                             std::to_string(nodes[i].depth) + ", expected " +
                                             std::to_string(*leafDepth));
      }
      leafDepth = nodes[i].depth;
    }
  }
}

IndexTree::IndexTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  validate(nodes_);
  parents_.assign(nodes_.size(), 0);
  fingerprint_ = kFnvOffset;
  fnv_mix(fingerprint_, nodes_.size());
  for (const auto& n : nodes_) {
    fnv_mix(fingerprint_, n.children.size());
    for (NodeId c : n.children) {
      parents_[c] = n.id;
      fnv_mix(fingerprint_, c);
    }
    if (n.children.empty()) {
      leaves_.push_back(n.id);
      depth_ = n.depth;
    }
  }
}

const TreeNode& IndexTree::node(NodeId id) const {
  if (id >= nodes_.size()) throw Error(ErrorCode::UnknownNode, node_str(id) + " not in tree");
  return nodes_[id];
}

NodeId IndexTree::parent(NodeId id) const {
  if (id >= nodes_.size()) throw Error(ErrorCode::UnknownNode, node_str(id) + " not in tree");
  return parents_[id];
}

IndexTree IndexTree::with_epsilon(double epsilon) const {
  std::vector<TreeNode> copy = nodes_;
  for (auto& n : copy) n.epsilon = n.children.empty() ? 0.0 : epsilon;
  return IndexTree(std::move(copy));
}

IndexTree build_uniform_tree(std::uint32_t branching, std::uint32_t depth, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0 || epsilon > 1.0) {
    throw Error(ErrorCode::InvalidEpsilon, "epsilon " + format_real(epsilon) + " outside [0, 1]");
  }
  if (depth >= 1 && branching < 2) {
    throw Error(ErrorCode::BranchingTooSmall, "branching must be >= 2 when depth >= 1");
  }
  std::vector<TreeNode> nodes;
  nodes.push_back({0, 0, {}, 0.0});
  std::size_t levelBegin = 0;
  for (std::uint32_t d = 0; d < depth; ++d) {
    const std::size_t levelEnd = nodes.size();
    for (std::size_t p = levelBegin; p < levelEnd; ++p) {
      nodes[p].epsilon = epsilon;
      for (std::uint32_t k = 0; k < branching; ++k) {
        const auto id = static_cast<NodeId>(nodes.size());
        nodes[p].children.push_back(id);
        nodes.push_back({id, d + 1, {}, 0.0});
      }
    }
    levelBegin = levelEnd;
  }
  return IndexTree(std::move(nodes));
}

double count_partitions(const IndexTree& tree) {
  std::vector<double> count(tree.size(), 1.0);
  for (std::size_t i = tree.size(); i-- > 0;) {
    const auto& n = tree.nodes()[i];
    if (n.children.empty()) continue;
    double product = 1.0;
    for (NodeId c : n.children) product *= count[c];
    count[i] = 1.0 + product;
  }
  return count[0];
}

std::vector<WeightedPartition> enumerate_partitions(const IndexTree& tree, std::size_t cap) {
  const double total = count_partitions(tree);
  if (total > static_cast<double>(cap)) {
    throw Error(ErrorCode::EnumerationTooLarge,
                format_real(total) + " partitions exceed the cap of " + std::to_string(cap));
  }

  // Partitions of the subtree under a node: the node kept whole, or the
  // cartesian product of its children's partitions.
  using Options = std::vector<std::vector<NodeId>>;
  std::function<Options(NodeId)> options = [&](NodeId id) -> Options {
    Options out{{id}};
    const auto& children = tree.node(id).children;
    if (children.empty()) return out;
    Options acc{{}};
    for (NodeId c : children) {
      const Options sub = options(c);
      Options next;
      next.reserve(acc.size() * sub.size());
      for (const auto& prefix : acc) {
        for (const auto& tail : sub) {
          auto merged = prefix;
          merged.insert(merged.end(), tail.begin(), tail.end());
          next.push_back(std::move(merged));
        }
      }
      acc = std::move(next);
    }
    for (auto& a : acc) out.push_back(std::move(a));
    return out;
  };

  std::vector<WeightedPartition> result;
  for (auto& ids : options(tree.root())) {
    std::sort(ids.begin(), ids.end());
    Partition p{std::move(ids)};
    const double w = prior_weight(tree, p);
    result.push_back({std::move(p), w});
  }
  return result;
}

void check_partition(const IndexTree& tree, const Partition& p) {
  if (p.nodeIds.empty()) throw Error(ErrorCode::NotAPartition, "empty partition");
  std::vector<char> chosen(tree.size(), 0);
  for (std::size_t k = 0; k < p.nodeIds.size(); ++k) {
    const NodeId id = p.nodeIds[k];
    if (id >= tree.size()) throw Error(ErrorCode::NotAPartition, node_str(id) + " not in tree");
    if (k > 0 && p.nodeIds[k - 1] >= id) {
      throw Error(ErrorCode::NotAPartition, "node ids must be strictly increasing");
    }
    chosen[id] = 1;
  }
  // Each leaf must have exactly one chosen node on its path to the root.
  for (NodeId leaf : tree.leaves()) {
    int hits = 0;
    NodeId cur = leaf;
    while (true) {
      hits += chosen[cur];
      if (cur == tree.root()) break;
      cur = tree.parent(cur);
    }
    if (hits != 1) {
      throw Error(ErrorCode::NotAPartition,
                  "leaf " + std::to_string(leaf) + (hits == 0 ? " is not covered" : " is covered twice"));
    }
  }
}

double prior_weight(const IndexTree& tree, const Partition& p) {
  check_partition(tree, p);
  std::vector<char> chosen(tree.size(), 0);
  std::vector<char> ancestor(tree.size(), 0);
  for (NodeId id : p.nodeIds) chosen[id] = 1;
  for (NodeId id : p.nodeIds) {
    NodeId cur = id;
    while (cur != tree.root()) {
      cur = tree.parent(cur);
      if (ancestor[cur]) break;
      ancestor[cur] = 1;
    }
  }
  return weight_from_marks(tree, chosen, ancestor);
}

double TreeConfig::resolved_epsilon() const {
  if (depth == 0) return 0.0;
  return epsilonInverseBranching ? 1.0 / static_cast<double>(branching) : epsilon;
}

TreeConfig parse_tree_config(std::string_view text) {
  TreeConfig cfg;
  bool haveBranching = false, haveDepth = false;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "tree config token without '=': " + token);
    }
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "branching") {
      cfg.branching = static_cast<std::uint32_t>(parse_unsigned(value));
      haveBranching = true;
    } else if (key == "depth") {
      cfg.depth = static_cast<std::uint32_t>(parse_unsigned(value));
      haveDepth = true;
    } else if (key == "epsilon") {
      if (value == "1/alpha") {
        cfg.epsilonInverseBranching = true;
      } else {
        cfg.epsilonInverseBranching = false;
        cfg.epsilon = parse_real(value);
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown tree config key: " + key);
    }
  }
  if (!haveBranching || !haveDepth) {
    throw Error(ErrorCode::InvalidArgument, "tree config needs branching= and depth=");
  }
  return cfg;
}

std::string format_tree_config(const TreeConfig& config) {
  return "branching=" + std::to_string(config.branching) + " depth=" + std::to_string(config.depth) +
         " epsilon=" + format_real(config.resolved_epsilon());
}

IndexTree build_tree(const TreeConfig& config) {
  return build_uniform_tree(config.branching, config.depth, config.resolved_epsilon());
}

}  // namespace mrk
