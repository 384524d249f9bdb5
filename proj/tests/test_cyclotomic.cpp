#include <gtest/gtest.h>

#include <random>

#include "fngon/cyclotomic.hpp"
#include "fngon/error.hpp"
#include "oracles.hpp"

using namespace fngon;

namespace {

std::vector<long long> as_ll(const std::vector<Integer>& v) {
  std::vector<long long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

std::vector<long long> coeffs_of(const CycNum& x) {
  std::vector<long long> out;
  for (const auto& c : x.coeffs()) out.push_back(c.get_si());
  return out;
}

CycNum random_element(std::uint32_t m, std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  std::vector<Integer> poly(m);
  for (auto& c : poly) c = dist(rng);
  return CycNum::from_poly(m, poly);
}

}  // namespace

TEST(CyclotomicPoly, SmallCases) {
  EXPECT_EQ(as_ll(cyclotomic_poly(1)), (std::vector<long long>{-1, 1}));
  EXPECT_EQ(as_ll(cyclotomic_poly(4)), (std::vector<long long>{1, 0, 1}));
  EXPECT_EQ(as_ll(cyclotomic_poly(6)), (std::vector<long long>{1, -1, 1}));
}

TEST(CyclotomicPoly, MatchesPrimitiveRootProduct) {
  for (int m = 1; m <= 64; ++m) {
    EXPECT_EQ(as_ll(cyclotomic_poly(m)), oracle::cyclotomic(m)) << "m = " << m;
  }
}

TEST(CyclotomicPoly, DegreeIsEulerPhi) {
  for (int m = 1; m <= 128; ++m) {
    int phi = 0;
    for (int k = 1; k <= m; ++k) phi += std::gcd(k, m) == 1;
    EXPECT_EQ(cyc_context(m).degree, static_cast<std::size_t>(phi));
  }
}

TEST(RootOfUnity, PowerBasis) {
  EXPECT_EQ(coeffs_of(cyc_root_of_unity(4, 1)), (std::vector<long long>{0, 1}));
  EXPECT_EQ(coeffs_of(cyc_root_of_unity(4, 2)), (std::vector<long long>{-1, 0}));
  EXPECT_EQ(coeffs_of(cyc_root_of_unity(6, 2)), (std::vector<long long>{-1, 1}));
  EXPECT_EQ(cyc_root_of_unity(5, -1), cyc_root_of_unity(5, 4));
}

TEST(RootOfUnity, FullTurnIsOne) {
  for (std::uint32_t m = 1; m <= 128; ++m) {
    EXPECT_TRUE(cyc_root_of_unity(m, m).is_one()) << m;
    CycNum x = CycNum::from_int(m, 1);
    const CycNum xi = cyc_root_of_unity(m, 1);
    for (std::uint32_t k = 0; k < m; ++k) x *= xi;
    EXPECT_TRUE(x.is_one()) << m;
  }
}

TEST(RootOfUnity, ZeroConductorRejected) {
  try {
    cyc_root_of_unity(0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidConductor);
  }
}

TEST(Arithmetic, KnownCases) {
  const CycNum i = cyc_root_of_unity(4, 1);
  EXPECT_EQ(i * i, CycNum::from_int(4, -1));
  EXPECT_EQ(cyc_root_of_unity(3, 1) + cyc_root_of_unity(3, 2), CycNum::from_int(3, -1));
  EXPECT_EQ(cyc_root_of_unity(6, 2), cyc_root_of_unity(6, 1) - CycNum::from_int(6, 1));
}

TEST(Arithmetic, ConductorMismatch) {
  try {
    (void)(cyc_root_of_unity(4, 1) + cyc_root_of_unity(3, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConductorMismatch);
  }
}

TEST(Arithmetic, RingAxiomsExact) {
  std::mt19937_64 rng(11);
  for (std::uint32_t m : {1u, 2u, 3u, 5u, 8u, 12u, 15u, 30u, 49u, 64u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const CycNum x = random_element(m, rng, 50), y = random_element(m, rng, 50),
                   z = random_element(m, rng, 50);
      EXPECT_EQ((x * y) * z, x * (y * z));
      EXPECT_EQ(x * (y + z), x * y + x * z);
      EXPECT_EQ(x * y, y * x);
      EXPECT_EQ(x - x, CycNum::zero(m));
      EXPECT_EQ(-(-x), x);
    }
  }
}

TEST(Arithmetic, EmbeddingIsHomomorphism) {
  std::mt19937_64 rng(5);
  for (std::uint32_t m : {3u, 4u, 7u, 10u, 16u, 21u, 36u, 60u, 64u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const CycNum x = random_element(m, rng, 100), y = random_element(m, rng, 100);
      const Complex lhs = (x * y).to_complex();
      const Complex rhs = x.to_complex() * y.to_complex();
      EXPECT_LE(std::abs(lhs - rhs), 1e-11 * std::max(1.0, std::abs(rhs)));
      EXPECT_LE(std::abs((x + y).to_complex() - (x.to_complex() + y.to_complex())), 1e-9);
    }
  }
}

TEST(Embed, KnownCases) {
  EXPECT_EQ(cyc_embed(cyc_root_of_unity(3, 1), 6), cyc_root_of_unity(6, 2));
  EXPECT_TRUE(cyc_embed(CycNum::from_int(2, 1), 8).is_one());
  const CycNum x = cyc_embed(cyc_root_of_unity(4, 1) + CycNum::from_int(4, 1), 8);
  EXPECT_EQ(x, cyc_root_of_unity(8, 2) + CycNum::from_int(8, 1));
  EXPECT_LE(std::abs(x.to_complex() - Complex(1, 1)), 1e-12);
}

TEST(Embed, PreservesValue) {
  std::mt19937_64 rng(3);
  for (std::uint32_t m : {2u, 3u, 4u, 5u, 6u, 10u}) {
    for (std::uint32_t k : {2u, 3u, 4u}) {
      const CycNum x = random_element(m, rng, 20);
      EXPECT_LE(std::abs(cyc_embed(x, m * k).to_complex() - x.to_complex()), 1e-12);
    }
  }
}

TEST(Embed, NonDivisibleTarget) {
  try {
    cyc_embed(cyc_root_of_unity(3, 1), 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmbeddingUndefined);
  }
}

TEST(ToComplex, Values) {
  EXPECT_LE(std::abs(cyc_root_of_unity(4, 1).to_complex() - Complex(0, 1)), 1e-15);
  const CycNum s = cyc_root_of_unity(8, 1) + cyc_root_of_unity(8, 7);
  EXPECT_NEAR(s.to_complex().real(), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(s.to_complex().imag(), 0.0, 1e-12);
  EXPECT_EQ(CycNum::zero(7).to_complex(), Complex(0, 0));
}

TEST(Conj, MatchesComplexConjugate) {
  std::mt19937_64 rng(9);
  for (std::uint32_t m : {3u, 5u, 8u, 12u}) {
    const CycNum x = random_element(m, rng, 30);
    EXPECT_LE(std::abs(x.conj().to_complex() - std::conj(x.to_complex())), 1e-10);
    EXPECT_EQ(x.conj().conj(), x);
  }
}

TEST(Content, DivExact) {
  const CycNum x = Integer(6) * (cyc_root_of_unity(5, 1) + CycNum::from_int(5, 2));
  EXPECT_EQ(x.content(), 6);
  EXPECT_EQ(x.divexact(6), cyc_root_of_unity(5, 1) + CycNum::from_int(5, 2));
  EXPECT_EQ(CycNum::zero(5).content(), 0);
}

TEST(Ordering, CanonicalAndHashConsistent) {
  const CycNum a = CycNum::from_int(4, -1), b = CycNum::zero(4), c = cyc_root_of_unity(4, 1);
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_EQ(CycNumHash{}(cyc_root_of_unity(6, 2)), CycNumHash{}(cyc_root_of_unity(6, 1) - CycNum::from_int(6, 1)));
}

TEST(Str, DebugForm) {
  EXPECT_EQ(cyc_root_of_unity(6, 2).str(), "[-1, 1]@6");
}
