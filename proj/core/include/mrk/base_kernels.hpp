#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "mrk/measures.hpp"

namespace mrk {

// k(t, t') = exp(-rho * sum_i |t_i^a - t'_i^a|^b)
struct RbfKernel {
  double a = 1.0;    // (0, 1]
  double b = 1.0;    // (0, 2]
  double rho = 0.01; // > 0

  friend bool operator==(const RbfKernel&, const RbfKernel&) = default;
};

// k(t, t') = exp(-h((t + t')/2) + (h(t) + h(t'))/2), h the Shannon entropy.
struct JensenDivergenceKernel {
  friend bool operator==(const JensenDivergenceKernel&, const JensenDivergenceKernel&) = default;
};

/// Closed set of base kernels on sub-probability measures. Cheap to copy.
class BaseKernelSpec {
 public:
  using Variant = std::variant<RbfKernel, JensenDivergenceKernel>;

  BaseKernelSpec() = default;  // JD
  /// Throws InvalidArgument when a parameter is outside its range.
  static BaseKernelSpec rbf(double a, double b, double rho);
  static BaseKernelSpec jensen_divergence() { return BaseKernelSpec(JensenDivergenceKernel{}); }

  const Variant& variant() const noexcept { return variant_; }
  bool is_rbf() const noexcept { return std::holds_alternative<RbfKernel>(variant_); }

  friend bool operator==(const BaseKernelSpec&, const BaseKernelSpec&) = default;

 private:
  explicit BaseKernelSpec(Variant v) : variant_(v) {}
  Variant variant_{JensenDivergenceKernel{}};
};

/// Kernel value in (0, 1]; symmetric bit-for-bit in its arguments.
/// Empty measures are valid inputs. Throws SpaceMismatch.
double eval(const BaseKernelSpec& spec, const SubMeasure& x, const SubMeasure& y);

/// ln of eval(), computed without exponentiating (no underflow). Counts as
/// one evaluation.
double log_eval(const BaseKernelSpec& spec, const SubMeasure& x, const SubMeasure& y);

// Process-wide count of eval/log_eval calls. Atomic, so totals taken once
// worker threads have joined are exact.
void eval_count_reset() noexcept;
std::uint64_t eval_count() noexcept;

/// `rbf:a=<f>,b=<f>,rho=<f>` or `jd`. Missing rbf keys keep their defaults
/// (a=1, b=1, rho=0.01).
BaseKernelSpec parse_kernel_spec(std::string_view text);
std::string format_kernel_spec(const BaseKernelSpec& spec);

}  // namespace mrk
