#pragma once

#include <cstddef>

#include "mrk/base_kernels.hpp"
#include "mrk/hier_measure.hpp"
#include "mrk/hierarchy.hpp"

namespace mrk {

struct MultiresSpec {
  IndexTree tree;
  BaseKernelSpec base;
};

/// Resolution-specific kernel: product over the sets T of `p` of the base
/// kernel on the aggregated measures mu_T, mu'_T.
/// Throws NotAPartition, TreeMismatch.
double k_partition(const MultiresSpec& spec, const Partition& p, const NestedMeasure& mu,
                   const NestedMeasure& nu);

/// Prior-weighted average of k_partition over every enumerated partition.
/// Exponential in tree size; used as the reference for small trees.
/// Throws EnumerationTooLarge, TreeMismatch.
double k_multires_bruteforce(const MultiresSpec& spec, const NestedMeasure& mu,
                             const NestedMeasure& nu,
                             std::size_t cap = kDefaultEnumerationCap);

/// The same average computed bottom-up in one sweep:
///
///   K_T = (1 - eps_T) k(mu_T, nu_T) + eps_T prod_{U child of T} K_U,
///
/// returning K_root. Performs exactly one base-kernel evaluation per node.
/// Carried in the log domain, so deep or wide trees do not underflow.
/// Throws TreeMismatch.
double k_multires_factorized(const MultiresSpec& spec, const NestedMeasure& mu,
                             const NestedMeasure& nu);
double log_k_multires_factorized(const MultiresSpec& spec, const NestedMeasure& mu,
                                 const NestedMeasure& nu);

}  // namespace mrk
