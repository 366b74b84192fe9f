#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mrk/error.hpp"
#include "mrk/measures.hpp"
#include "mrk/random_measures.hpp"

namespace mrk {
namespace {

SubMeasure make(std::uint32_t space, std::initializer_list<MassEntry> e) {
  return SubMeasure::from_entries(space, e);
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an mrk::Error";
  return ErrorCode::InvalidArgument;
}

TEST(SubMeasure, MergesDuplicateIndices) {
  const auto m = make(4, {{{2}, 0.5}, {{2}, 0.25}});
  ASSERT_EQ(m.support_size(), 1u);
  EXPECT_EQ(m.entries()[0].index.value, 2u);
  EXPECT_EQ(m.entries()[0].mass, 0.75);
}

TEST(SubMeasure, EmptyHasZeroMass) {
  const auto m = make(4, {});
  EXPECT_TRUE(m.empty());
  EXPECT_EQ(m.mass(), 0.0);
}

TEST(SubMeasure, SortsAndDropsZeros) {
  const auto m = make(8, {{{5}, 0.1}, {{1}, 0.0}, {{3}, 0.2}});
  ASSERT_EQ(m.support_size(), 2u);
  EXPECT_EQ(m.entries()[0].index.value, 3u);
  EXPECT_EQ(m.entries()[1].index.value, 5u);
}

TEST(SubMeasure, RejectsInvalidInput) {
  EXPECT_EQ(code_of([] { make(4, {{{0}, 0.6}, {{1}, 0.6}}); }), ErrorCode::MassExceedsOne);
  EXPECT_EQ(code_of([] { make(4, {{{4}, 0.1}}); }), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(code_of([] { make(4, {{{0}, -0.1}}); }), ErrorCode::NegativeMass);
  EXPECT_EQ(code_of([] { make(4, {{{0}, NAN}}); }), ErrorCode::InvalidArgument);
}

TEST(SubMeasure, MassToleranceAbsorbsRounding) {
  EXPECT_NO_THROW(make(2, {{{0}, 0.5 + 5e-10}, {{1}, 0.5}}));
  EXPECT_THROW(make(2, {{{0}, 0.5 + 5e-9}, {{1}, 0.5}}), Error);
}

TEST(SubMeasure, MassIsDirectSum) {
  EXPECT_EQ(make(4, {{{0}, 1.0}}).mass(), 1.0);
  EXPECT_EQ(make(4, {{{0}, 0.25}, {{3}, 0.5}}).mass(), 0.75);
}

TEST(SubMeasure, AtLooksUpMass) {
  const auto m = make(8, {{{2}, 0.25}, {{6}, 0.5}});
  EXPECT_EQ(m.at(ComponentIndex{6}), 0.5);
  EXPECT_EQ(m.at(ComponentIndex{3}), 0.0);
}

TEST(Add, Examples) {
  EXPECT_EQ(add(make(4, {{{0}, 0.3}}), make(4, {{{0}, 0.2}})), make(4, {{{0}, 0.5}}));
  const auto m = make(4, {{{1}, 0.4}, {{3}, 0.1}});
  EXPECT_EQ(add(m, SubMeasure(4)), m);
  EXPECT_EQ(add(make(4, {{{0}, 0.3}}), make(4, {{{1}, 0.4}})), make(4, {{{0}, 0.3}, {{1}, 0.4}}));
}

TEST(Add, Errors) {
  EXPECT_EQ(code_of([] { add(SubMeasure(4), SubMeasure(5)); }), ErrorCode::SpaceMismatch);
  EXPECT_EQ(code_of([] { add(make(4, {{{0}, 0.7}}), make(4, {{{1}, 0.7}})); }), ErrorCode::MassExceedsOne);
}

TEST(Add, CommutativeAndAssociativeOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_submeasure(rng, 12, 6, 0.3 * uniform01(rng));
    const auto b = random_submeasure(rng, 12, 6, 0.3 * uniform01(rng));
    const auto c = random_submeasure(rng, 12, 6, 0.3 * uniform01(rng));
    EXPECT_EQ(add(a, b), add(b, a));
    const auto left = add(add(a, b), c);
    const auto right = add(a, add(b, c));
    ASSERT_EQ(left.support_size(), right.support_size());
    for (std::size_t k = 0; k < left.support_size(); ++k) {
      EXPECT_EQ(left.entries()[k].index, right.entries()[k].index);
      EXPECT_NEAR(left.entries()[k].mass, right.entries()[k].mass, 1e-12);
    }
    EXPECT_NEAR(add(a, b).mass(), a.mass() + b.mass(), 1e-12);
  }
}

TEST(SubMeasure, CanonicalFormIsIdempotent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MassEntry> raw;
    const int n = 1 + static_cast<int>(uniform_below(rng, 10));
    for (int k = 0; k < n; ++k) {
      raw.push_back({ComponentIndex{static_cast<std::uint32_t>(uniform_below(rng, 6))},
                     uniform01(rng) < 0.2 ? 0.0 : 0.09 * uniform01(rng)});
    }
    const auto once = SubMeasure::from_entries(6, raw);
    const auto twice = SubMeasure::from_entries(6, once.entries());
    EXPECT_EQ(once, twice);
    EXPECT_EQ(once.mass(), twice.mass());
  }
}

TEST(Entropy, ClosedForms) {
  EXPECT_EQ(entropy(make(4, {{{0}, 1.0}})), 0.0);
  EXPECT_NEAR(entropy(make(4, {{{0}, 0.5}, {{1}, 0.5}})), 0.693147180559945309, 1e-15);
  EXPECT_NEAR(entropy(make(4, {{{0}, 0.5}})), 0.346573590279972655, 1e-15);
  EXPECT_EQ(entropy(SubMeasure(4)), 0.0);
}

TEST(Entropy, NonnegativeAndMidpointConcave) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_submeasure(rng, 10, 8, uniform01(rng));
    const auto b = random_submeasure(rng, 10, 8, uniform01(rng));
    EXPECT_GE(entropy(a), 0.0);
    std::vector<MassEntry> mid;
    for (const auto& e : a.entries()) mid.push_back({e.index, 0.5 * e.mass});
    for (const auto& e : b.entries()) mid.push_back({e.index, 0.5 * e.mass});
    const auto m = SubMeasure::from_entries(10, mid);
    EXPECT_GE(entropy(m), 0.5 * (entropy(a) + entropy(b)) - 1e-12);
  }
}

}  // namespace
}  // namespace mrk
