#include <gtest/gtest.h>

#include <random>

#include "fngon/error.hpp"
#include "fngon/polyseries.hpp"
#include "oracles.hpp"

using namespace fngon;

namespace {

std::vector<CycNum> ints(std::uint32_t m, std::initializer_list<int> v) {
  std::vector<CycNum> out;
  for (int x : v) out.push_back(CycNum::from_int(m, x));
  return out;
}

std::vector<oracle::C> roots_of(std::initializer_list<oracle::C> c) {
  return roots_certified(std::vector<Complex>(c)).roots;
}

}  // namespace

TEST(GPoly, ConstantTermMustBeOne) {
  try {
    GPoly(ints(4, {2, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
}

TEST(GPoly, DegreeDropsTrailingZeros) {
  EXPECT_EQ(GPoly(ints(4, {1, 1, 0, 0})).degree(), 1u);
  EXPECT_EQ(GPoly(ints(4, {1, 0, 0})).degree(), 0u);
}

TEST(GPoly, Family) {
  const CoeffSet g = omega_set(2);
  EXPECT_TRUE(GPoly(ints(4, {1, -1, 1})).in_family(g));
  EXPECT_FALSE(GPoly(ints(4, {1, 2})).in_family(g));
  const std::vector<std::size_t> idx{0, 2};
  const GPoly p = GPoly::from_indices(g, idx);
  EXPECT_EQ(p.indices(g), std::optional<std::vector<std::size_t>>(idx));
}

TEST(Val, Examples) {
  const GPoly f(ints(4, {1, 1, 1})), g(ints(4, {1, 1, -1}));
  EXPECT_EQ(val(f, f), kInfiniteVal);
  EXPECT_EQ(val(f, g), 2u);
  const auto prod = multiply_binomial(f.coeffs(), CycNum::from_int(4, -1), 3);
  EXPECT_GE(val(f, truncate(prod, 3)), 3u);
}

TEST(Truncate, Examples) {
  const auto five = ints(4, {1, 2, 3, 4, 5});
  EXPECT_EQ(truncate(five, 3), GPoly(ints(4, {1, 2, 3})));
  EXPECT_EQ(truncate(ints(4, {1, 7}), 2), GPoly(ints(4, {1, 7})));
  const auto prod = multiply_binomial(ints(4, {1, -2}), CycNum::from_int(4, 1), 5);
  EXPECT_EQ(truncate(prod, 4), GPoly(ints(4, {1, -2, 0, 0})));
}

TEST(MultiplyBinomial, MatchesConvolution) {
  const auto p = ints(6, {1, 3, -2});
  const auto q = multiply_binomial(p, CycNum::from_int(6, 5), 2);
  EXPECT_EQ(q, ints(6, {1, 3, 3, 15, -10}));
}

TEST(GeometricTarget, RootsOnCircle) {
  EXPECT_LE(std::abs(roots_certified(geometric_target(4, 2)).roots[0] + 1.0), 1e-12);
  const auto r3 = roots_certified(geometric_target(4, 3)).roots;
  EXPECT_LE(oracle::multiset_distance(r3, oracle::quadratic(1, 1, 1)), 1e-12);
  const auto r8 = roots_certified(geometric_target(4, 8)).roots;
  ASSERT_EQ(r8.size(), 7u);
  for (auto z : r8) {
    EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
    EXPECT_LE(std::abs(std::pow(z, 8) - 1.0), 1e-10);
  }
}

TEST(TailBound, Values) {
  EXPECT_NEAR(tail_bound(2, 0.75, 0), 16.0, 1e-12);
  EXPECT_NEAR(tail_bound(2, 0.75, 10), 16 * std::pow(0.75, 10), 1e-12);
  double prev = INFINITY;
  for (std::size_t n = 0; n < 60; n += 5) {
    EXPECT_LT(tail_bound(2, 0.75, n), prev);
    prev = tail_bound(2, 0.75, n);
  }
  try {
    tail_bound(2, 1.0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
}

TEST(TailBound, BoundsSampledDifference) {
  const CoeffSet g = omega_set(3);
  ZeroSetEnumerator en(g, 12);
  const std::size_t n = 6;
  for (std::uint64_t i : {5ull, 777ull, 123456ull, 9999999ull}) {
    const GPoly f = en.polynomial(i % en.count());
    const GPoly h = truncate(f.coeffs(), n);
    for (double rho : {0.3, 0.6, 0.9}) {
      double worst = 0;
      for (int k = 0; k < 64; ++k) {
        const Complex z = std::polar(rho, 2 * std::numbers::pi * k / 64);
        worst = std::max(worst, std::abs(evaluate(f.approx(), z) - evaluate(h.approx(), z)));
      }
      EXPECT_LE(worst, tail_bound(g.growth_bound(), rho, n) + 1e-9);
    }
  }
}

TEST(Roots, Examples) {
  const auto a = roots_of({1, -2});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_NEAR(std::abs(a[0] - 0.5), 0, 1e-15);
  EXPECT_LE(oracle::multiset_distance(roots_of({1, 0, 1}), {{0, 1}, {0, -1}}), 1e-12);
  const auto c = roots_of({1, -1, -1});
  EXPECT_LE(oracle::multiset_distance(c, oracle::quadratic(1, -1, -1)), 1e-12);
  const double inv_phi = 2 / (1 + std::sqrt(5.0));
  EXPECT_TRUE(std::any_of(c.begin(), c.end(), [&](Complex z) { return std::abs(z - inv_phi) < 1e-12; }));
}

TEST(Roots, RandomQuadraticsAgainstFormula) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const Complex c1(u(rng), u(rng)), c2(u(rng), u(rng));
    const auto r = roots_certified(std::vector<Complex>{1, c1, c2});
    EXPECT_LE(oracle::multiset_distance(r.roots, oracle::quadratic(1, c1, c2)), 1e-9);
  }
}

TEST(Roots, ResidualsAndMultiplicity) {
  // (1 - z)^2 (1 + 2z) = 1 - 3 z^2 + 2 z^3
  const auto r = roots_certified(std::vector<Complex>{1, 0, -3, 2});
  ASSERT_EQ(r.size(), 3u);
  for (double res : r.residuals) EXPECT_LE(res, 1e-9);
  std::size_t doubles = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (std::abs(r.roots[i] - 1.0) < 1e-6) doubles += r.multiplicity[i] == 2;
  EXPECT_EQ(doubles, 2u);
}

TEST(Roots, SortedByRealThenImaginary) {
  const auto r = roots_certified(geometric_target(4, 7)).roots;
  for (std::size_t i = 1; i < r.size(); ++i)
    EXPECT_TRUE(r[i - 1].real() < r[i].real() ||
                (r[i - 1].real() == r[i].real() && r[i - 1].imag() <= r[i].imag()));
}

TEST(Roots, ConstantRejected) {
  try {
    roots_certified(std::vector<Complex>{1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
}

TEST(ZeroSet, OmegaTwoLengthTwo) {
  const auto entries = enumerate_zero_set(omega_set(2), 2);
  ASSERT_EQ(entries.size(), 3u);
  const CoeffSet g = omega_set(2);
  for (const auto& e : entries) {
    const Complex a = g.approx()[e.coeff_indices[0]];
    if (a == Complex(0)) {
      EXPECT_EQ(e.roots.size(), 0u);
    } else {
      ASSERT_EQ(e.roots.size(), 1u);
      EXPECT_LE(std::abs(e.roots.roots[0] + 1.0 / a), 1e-15);
    }
  }
}

TEST(ZeroSet, RootCountEqualsDegree) {
  std::size_t total = 0, degrees = 0;
  for (const auto& e : enumerate_zero_set(omega_set(2), 3)) {
    total += e.roots.size();
    degrees += e.degree;
  }
  EXPECT_EQ(total, 14u);
  EXPECT_EQ(degrees, 14u);
}

TEST(ZeroSet, OmegaThreeUnits) {
  const auto entries = enumerate_zero_set(omega_set(3), 2);
  ASSERT_EQ(entries.size(), 7u);
  std::size_t count = 0;
  for (const auto& e : entries)
    for (auto z : e.roots.roots) {
      EXPECT_NEAR(std::abs(z), 1.0, 1e-12);
      ++count;
    }
  EXPECT_EQ(count, 6u);
}

TEST(ZeroSet, OdometerOrder) {
  const CoeffSet g = omega_set(2);
  ZeroSetEnumerator en(g, 4);
  EXPECT_EQ(en.count(), 27u);
  EXPECT_EQ(en.digits(1), (std::vector<std::size_t>{1, 0, 0}));
  EXPECT_EQ(en.digits(3), (std::vector<std::size_t>{0, 1, 0}));
  EXPECT_EQ(en.digits(26), (std::vector<std::size_t>{2, 2, 2}));
}

TEST(ZeroSet, BudgetRefusal) {
  ZeroSetOptions opts;
  opts.budget = 100;
  try {
    enumerate_zero_set(omega_set(3), 4, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBudgetExceeded);
    EXPECT_NE(std::string(e.what()).find("343"), std::string::npos);
  }
}

TEST(ZeroSet, WorkerCountIndependent) {
  const auto a = enumerate_zero_set(omega_set(3), 4, {}, 1);
  const auto b = enumerate_zero_set(omega_set(3), 4, {}, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].roots.roots, b[i].roots.roots);
}
