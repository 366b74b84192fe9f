#include "mrk/multires.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mrk/error.hpp"

namespace mrk {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

void require_pair(const MultiresSpec& spec, const NestedMeasure& mu, const NestedMeasure& nu) {
  require_tree(spec.tree, mu);
  require_tree(spec.tree, nu);
}

}  // namespace

double k_partition(const MultiresSpec& spec, const Partition& p, const NestedMeasure& mu,
                   const NestedMeasure& nu) {
  require_pair(spec, mu, nu);
  check_partition(spec.tree, p);
  double product = 1.0;
  for (NodeId id : p.nodeIds) product *= eval(spec.base, mu.node_measure(id), nu.node_measure(id));
  return product;
}

double k_multires_bruteforce(const MultiresSpec& spec, const NestedMeasure& mu,
                             const NestedMeasure& nu, std::size_t cap) {
  require_pair(spec, mu, nu);
  double sum = 0.0;
  for (const auto& wp : enumerate_partitions(spec.tree, cap)) {
    sum += wp.weight * k_partition(spec, wp.partition, mu, nu);
  }
  return sum;
}

double log_k_multires_factorized(const MultiresSpec& spec, const NestedMeasure& mu,
                                 const NestedMeasure& nu) {
  require_pair(spec, mu, nu);
  const auto nodes = spec.tree.nodes();
  std::vector<double> logK(nodes.size(), 0.0);
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const TreeNode& node = nodes[i];
    const double eps = node.epsilon;
    const double logBase = log_eval(spec.base, mu.node_measure(node.id), nu.node_measure(node.id));
    double logChildren = 0.0;
    for (NodeId c : node.children) logChildren += logK[c];
    const double keep = eps < 1.0 ? std::log1p(-eps) + logBase : kNegInf;
    const double split = eps > 0.0 ? std::log(eps) + logChildren : kNegInf;
    logK[i] = log_add(keep, split);
  }
  return logK[0];
}

double k_multires_factorized(const MultiresSpec& spec, const NestedMeasure& mu,
                             const NestedMeasure& nu) {
  return std::exp(log_k_multires_factorized(spec, mu, nu));
}

}  // namespace mrk
