#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "mrk/base_kernels.hpp"
#include "mrk/error.hpp"
#include "mrk/random_measures.hpp"

namespace mrk {
namespace {

SubMeasure m(std::initializer_list<MassEntry> e) { return SubMeasure::from_entries(8, e); }

std::vector<BaseKernelSpec> all_specs() {
  return {BaseKernelSpec::rbf(0.25, 1, 0.01), BaseKernelSpec::rbf(0.5, 1, 0.01), BaseKernelSpec::rbf(1, 1, 0.01),
          BaseKernelSpec::rbf(0.5, 2, 3.0), BaseKernelSpec::jensen_divergence()};
}

// Separately coded L1 distance over the dense vectors.
double l1_distance(const SubMeasure& x, const SubMeasure& y) {
  double d = 0.0;
  for (std::uint32_t i = 0; i < x.space_size(); ++i) d += std::fabs(x.at({i}) - y.at({i}));
  return d;
}

TEST(BaseKernel, RbfDisjointPointMasses) {
  EXPECT_NEAR(eval(BaseKernelSpec::rbf(1, 1, 0.01), m({{{0}, 1.0}}), m({{{1}, 1.0}})),
              0.980198673306755302, 1e-15);
}

TEST(BaseKernel, RbfQuarterPower) {
  // |0.5^.25 - 1| + 0.5^.25 = 1, so the value is exp(-rho).
  EXPECT_NEAR(eval(BaseKernelSpec::rbf(0.25, 1, 0.01), m({{{0}, 0.5}, {{1}, 0.5}}), m({{{0}, 1.0}})),
              0.990049833749168054, 1e-15);
}

TEST(BaseKernel, JensenDivergenceDisjointPointMasses) {
  EXPECT_NEAR(eval(BaseKernelSpec::jensen_divergence(), m({{{0}, 1.0}}), m({{{1}, 1.0}})), 0.5, 1e-15);
}

TEST(BaseKernel, IdenticalAndEmptyInputsGiveOne) {
  const auto x = m({{{2}, 0.3}, {{5}, 0.6}});
  for (const auto& spec : all_specs()) {
    EXPECT_EQ(eval(spec, x, x), 1.0) << format_kernel_spec(spec);
    EXPECT_EQ(eval(spec, SubMeasure(8), SubMeasure(8)), 1.0);
  }
}

TEST(BaseKernel, SpaceMismatch) {
  try {
    eval(BaseKernelSpec::jensen_divergence(), SubMeasure(8), SubMeasure(9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpaceMismatch);
  }
}

TEST(BaseKernel, SymmetricAndInRangeOnRandomInputs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = random_submeasure(rng, 12, 6, uniform01(rng));
    const auto y = random_submeasure(rng, 12, 6, uniform01(rng));
    for (const auto& spec : all_specs()) {
      const double kxy = eval(spec, x, y);
      EXPECT_EQ(kxy, eval(spec, y, x));
      EXPECT_GT(kxy, 0.0);
      EXPECT_LE(kxy, 1.0);
      EXPECT_NEAR(log_eval(spec, x, y), std::log(kxy), 1e-14);
    }
  }
}

TEST(BaseKernel, RbfLinearCaseIsL1) {
  std::mt19937_64 rng(4);
  const auto spec = BaseKernelSpec::rbf(1, 1, 0.7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_submeasure(rng, 10, 5, uniform01(rng));
    const auto y = random_submeasure(rng, 10, 5, uniform01(rng));
    EXPECT_NEAR(eval(spec, x, y), std::exp(-0.7 * l1_distance(x, y)), 1e-14);
  }
}

TEST(BaseKernel, JensenDivergenceMatchesDenseFormula) {
  std::mt19937_64 rng(8);
  auto h = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s -= t > 0 ? t * std::log(t) : 0.0;
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_submeasure(rng, 10, 5, uniform01(rng));
    const auto y = random_submeasure(rng, 10, 5, uniform01(rng));
    std::vector<double> dx(10), dy(10), mid(10);
    for (std::uint32_t i = 0; i < 10; ++i) {
      dx[i] = x.at({i});
      dy[i] = y.at({i});
      mid[i] = 0.5 * (dx[i] + dy[i]);
    }
    const double expected = std::exp(-h(mid) + 0.5 * (h(dx) + h(dy)));
    EXPECT_NEAR(eval(BaseKernelSpec::jensen_divergence(), x, y), expected, 1e-14);
  }
}

TEST(BaseKernel, EmpiricallyPositiveDefinite) {
  std::mt19937_64 rng(77);
  std::vector<SubMeasure> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(random_submeasure(rng, 16, 8, 0.2 + 0.8 * uniform01(rng)));
  for (const auto& spec : {BaseKernelSpec::rbf(0.25, 1, 0.01), BaseKernelSpec::rbf(0.5, 1, 0.01),
                           BaseKernelSpec::rbf(1, 1, 0.01), BaseKernelSpec::jensen_divergence()}) {
    Eigen::MatrixXd g(20, 20);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) g(i, j) = eval(spec, pts[i], pts[j]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8) << format_kernel_spec(spec);
  }
}

TEST(BaseKernel, EvalCounter) {
  eval_count_reset();
  EXPECT_EQ(eval_count(), 0u);
  const auto x = m({{{1}, 0.5}});
  for (int i = 0; i < 7; ++i) eval(BaseKernelSpec::jensen_divergence(), x, x);
  log_eval(BaseKernelSpec::rbf(1, 1, 1), x, x);
  EXPECT_EQ(eval_count(), 8u);
  eval_count_reset();
  EXPECT_EQ(eval_count(), 0u);
}

TEST(KernelSpec, ParseAndFormat) {
  EXPECT_EQ(parse_kernel_spec("jd"), BaseKernelSpec::jensen_divergence());
  EXPECT_EQ(parse_kernel_spec("rbf:a=0.25,b=1,rho=0.01"), BaseKernelSpec::rbf(0.25, 1, 0.01));
  EXPECT_EQ(parse_kernel_spec("rbf:a=0.5"), BaseKernelSpec::rbf(0.5, 1, 0.01));
  EXPECT_EQ(parse_kernel_spec("rbf"), BaseKernelSpec::rbf(1, 1, 0.01));
  EXPECT_EQ(format_kernel_spec(BaseKernelSpec::rbf(0.25, 1, 0.01)), "rbf:a=0.25,b=1,rho=0.01");
  EXPECT_EQ(format_kernel_spec(BaseKernelSpec::jensen_divergence()), "jd");
  for (const auto& s : all_specs()) EXPECT_EQ(parse_kernel_spec(format_kernel_spec(s)), s);

  for (const char* bad : {"gauss", "rbf:a=0", "rbf:a=1.5", "rbf:b=2.5", "rbf:rho=-1", "rbf:q=1", "rbf:a", "rbf;a=1"}) {
    EXPECT_THROW(parse_kernel_spec(bad), Error) << bad;
  }
}

}  // namespace
}  // namespace mrk
