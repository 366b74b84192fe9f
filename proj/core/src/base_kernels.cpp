#include "mrk/base_kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "mrk/error.hpp"
#include "mrk/text.hpp"

namespace mrk {
namespace {

std::atomic<std::uint64_t> g_evalCount{0};

// x^p for x >= 0; exact passthrough at p == 1.
double power(double x, double p) {
  if (x <= 0.0) return 0.0;
  if (p == 1.0) return x;
  return std::exp(p * std::log(x));
}

double rbf_exponent(const RbfKernel& k, const SubMeasure& x, const SubMeasure& y) {
  const auto ex = x.entries();
  const auto ey = y.entries();
  auto term = [&](double u, double v) { return power(std::fabs(power(u, k.a) - power(v, k.a)), k.b); };

  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ex.size() || j < ey.size()) {
    if (j == ey.size() || (i < ex.size() && ex[i].index < ey[j].index)) {
      sum += term(ex[i++].mass, 0.0);
    } else if (i == ex.size() || ey[j].index < ex[i].index) {
      sum += term(0.0, ey[j++].mass);
    } else {
      sum += term(ex[i++].mass, ey[j++].mass);
    }
  }
  return -k.rho * sum;
}

double jd_exponent(const SubMeasure& x, const SubMeasure& y) {
  const auto ex = x.entries();
  const auto ey = y.entries();
  auto xlogx = [](double m) { return m > 0.0 ? m * std::log(m) : 0.0; };

  double midEntropy = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ex.size() || j < ey.size()) {
    double u = 0.0, v = 0.0;
    if (j == ey.size() || (i < ex.size() && ex[i].index < ey[j].index)) {
      u = ex[i++].mass;
    } else if (i == ex.size() || ey[j].index < ex[i].index) {
      v = ey[j++].mass;
    } else {
      u = ex[i++].mass;
      v = ey[j++].mass;
    }
    midEntropy -= xlogx((u + v) * 0.5);
  }
  const double exponent = -midEntropy + 0.5 * (entropy(x) + entropy(y));
  // Concavity makes this <= 0; rounding may leave a few ulps above.
  return std::min(exponent, 0.0);
}

void check_space(const SubMeasure& x, const SubMeasure& y) {
  if (x.space_size() != y.space_size()) {
    throw Error(ErrorCode::SpaceMismatch, "base kernel on measures over different spaces");
  }
}

}  // namespace

BaseKernelSpec BaseKernelSpec::rbf(double a, double b, double rho) {
  if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rbf a must lie in (0, 1]");
  if (!(b > 0.0 && b <= 2.0)) throw Error(ErrorCode::InvalidArgument, "rbf b must lie in (0, 2]");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorCode::InvalidArgument, "rbf rho must be > 0");
  return BaseKernelSpec(RbfKernel{a, b, rho});
}

double log_eval(const BaseKernelSpec& spec, const SubMeasure& x, const SubMeasure& y) {
  check_space(x, y);
  g_evalCount.fetch_add(1, std::memory_order_relaxed);
  if (const auto* rbf = std::get_if<RbfKernel>(&spec.variant())) return rbf_exponent(*rbf, x, y);
  return jd_exponent(x, y);
}

double eval(const BaseKernelSpec& spec, const SubMeasure& x, const SubMeasure& y) {
  return std::exp(log_eval(spec, x, y));
}

void eval_count_reset() noexcept { g_evalCount.store(0, std::memory_order_relaxed); }
std::uint64_t eval_count() noexcept { return g_evalCount.load(std::memory_order_relaxed); }

BaseKernelSpec parse_kernel_spec(std::string_view text) {
  if (text == "jd") return BaseKernelSpec::jensen_divergence();
  constexpr std::string_view prefix = "rbf";
  if (text.substr(0, prefix.size()) != prefix) {
    throw Error(ErrorCode::InvalidArgument, "unknown kernel spec '" + std::string(text) + "'");
  }
  RbfKernel k;
  std::string_view rest = text.substr(prefix.size());
  if (!rest.empty()) {
    if (rest.front() != ':') throw Error(ErrorCode::InvalidArgument, "expected 'rbf:' in kernel spec");
    rest.remove_prefix(1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::InvalidArgument, "kernel parameter without '=': " + std::string(item));
      }
      const auto key = item.substr(0, eq);
      const double value = parse_real(item.substr(eq + 1));
      if (key == "a") k.a = value;
      else if (key == "b") k.b = value;
      else if (key == "rho") k.rho = value;
      else throw Error(ErrorCode::InvalidArgument, "unknown rbf parameter: " + std::string(key));
    }
  }
  return BaseKernelSpec::rbf(k.a, k.b, k.rho);
}

std::string format_kernel_spec(const BaseKernelSpec& spec) {
  if (const auto* rbf = std::get_if<RbfKernel>(&spec.variant())) {
    return "rbf:a=" + format_real(rbf->a) + ",b=" + format_real(rbf->b) + ",rho=" + format_real(rbf->rho);
  }
  return "jd";
}

}  // namespace mrk
