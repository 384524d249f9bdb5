#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fngon/error.hpp"
#include "fngon/locus.hpp"
#include "fngon/polyseries.hpp"

using namespace fngon;

TEST(Annulus, Certificate) {
  EXPECT_TRUE(annulus_certificate(0.8, 2));
  EXPECT_FALSE(annulus_certificate(0.5, 2));
  EXPECT_TRUE(annulus_certificate(0.58, 3));
  EXPECT_FALSE(annulus_certificate(1.0, 3));
  EXPECT_TRUE(annulus_certificate(std::polar(0.9, 2.0), 4));
}

TEST(Membership, KnownCases) {
  const CoeffSet g = omega_set(2);
  const auto out = membership(0.3, g);
  EXPECT_EQ(out.verdict, Verdict::kOut);
  EXPECT_EQ(out.depth, 0);
  const auto ann = membership(0.75, g);
  EXPECT_EQ(ann.verdict, Verdict::kIn);
  EXPECT_EQ(ann.reason, VerdictReason::kAnnulusRule);
  const auto cyc = membership(0.5, g);
  EXPECT_EQ(cyc.verdict, Verdict::kIn);
  EXPECT_EQ(cyc.reason, VerdictReason::kExactCycle);
}

TEST(Membership, GaussianPolynomialRoot) {
  // (1 - i)/2 is the root of 1 - (1 + i) z, and -(1 + i) lies in Omega_4. The
  // set is rebuilt without its order so the annulus rule cannot answer first.
  const auto omega = omega_set(4);
  const CoeffSet g = CoeffSet::from_elements({omega.elements().begin(), omega.elements().end()});
  const auto v = membership(Complex(0.5, -0.5), g);
  EXPECT_EQ(v.verdict, Verdict::kIn);
  EXPECT_EQ(v.reason, VerdictReason::kPolynomialRoot);
}

TEST(Membership, DomainErrors) {
  const CoeffSet g = omega_set(2);
  for (Complex z : {Complex(0), Complex(1), Complex(0.8, 0.8)}) {
    try {
      membership(z, g);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kDomain);
    }
  }
}

TEST(Membership, SmallModulusOutAtDepthZero) {
  for (int n : {2, 3, 4, 5}) {
    const CoeffSet g = omega_set(n);
    const double amax = g.max_modulus();
    const double limit = 1 / (amax + 1);  // amax r / (1 - r) < 1
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 100; ++t) {
      const Complex z = std::polar(limit * 0.999 * u(rng), 6.283185307179586 * u(rng));
      if (z == Complex(0)) continue;
      const auto v = membership(z, g);
      EXPECT_EQ(v.verdict, Verdict::kOut);
      EXPECT_EQ(v.depth, 0);
    }
  }
}

TEST(Membership, PolynomialRootsNeverOut) {
  for (int n : {2, 3}) {
    const CoeffSet g = omega_set(n);
    for (const auto& e : enumerate_zero_set(g, 6)) {
      for (auto z : e.roots.roots) {
        const double m = std::abs(z);
        if (!(m > 0 && m < 1)) continue;
        EXPECT_NE(membership(z, g).verdict, Verdict::kOut) << z;
      }
    }
  }
}

TEST(Membership, ConjugationSymmetry) {
  const CoeffSet g = omega_set(3);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int t = 0; t < 200; ++t) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) >= 1 || z == Complex(0)) continue;
    EXPECT_EQ(membership(z, g).verdict, membership(std::conj(z), g).verdict) << z;
  }
}

TEST(Membership, ExactCycleSeriesCheck) {
  // 1 - sum_{i >= 1} 2^-i = 0
  double s = 1;
  for (int i = 1; i < 60; ++i) s -= std::ldexp(1.0, -i);
  EXPECT_NEAR(s, 0.0, 1e-15);
}

TEST(Render, SinglePixels) {
  const auto a = render_locus(2, {0.7, 0.8, -0.05, 0.05}, 1, 1);
  EXPECT_EQ(a.codes[0], 2);
  const auto b = render_locus(4, {0.25, 0.35, -0.05, 0.05}, 1, 1);
  EXPECT_EQ(b.codes[0], 0);
}

TEST(Render, SmallDiskIsOut) {
  const auto r = render_locus(2, {-0.34, 0.34, -0.34, 0.34}, 24, 24);
  for (auto c : r.codes) EXPECT_EQ(c, 0);
}

TEST(Render, AnnulusIsIn) {
  const auto r = render_locus(3, {}, 48, 48);
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x) {
      const double m = std::abs(r.center(x, y));
      if (m > 1 / std::sqrt(3.0) + 1e-9 && m < 1 - 1e-9) EXPECT_EQ(r.at(x, y), 2);
    }
}

TEST(Render, DeterministicAcrossWorkers) {
  const auto a = render_locus(2, {}, 40, 30, {}, 1);
  const auto b = render_locus(2, {}, 40, 30, {}, 4);
  EXPECT_EQ(a.codes, b.codes);
}

TEST(Render, PpmOutput) {
  const auto r = render_locus(2, {}, 8, 4);
  const auto path = std::filesystem::temp_directory_path() / "fngon_test.ppm";
  write_ppm(r, path);
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  int w, h, maxv;
  in >> magic >> w >> h >> maxv;
  EXPECT_EQ(magic, "P6");
  EXPECT_EQ(w, 8);
  EXPECT_EQ(h, 4);
  EXPECT_EQ(maxv, 255);
  EXPECT_EQ(std::filesystem::file_size(path), 11u + 8 * 4 * 3);
  std::filesystem::remove(path);
}

TEST(Render, PngOutputWhenAvailable) {
  const auto r = render_locus(2, {}, 8, 8);
  const auto path = std::filesystem::temp_directory_path() / "fngon_test.png";
  EXPECT_EQ(write_png(r, path), png_available());
  if (png_available()) {
    std::ifstream in(path, std::ios::binary);
    char sig[8];
    in.read(sig, 8);
    EXPECT_EQ(std::string(sig + 1, 3), "PNG");
    std::filesystem::remove(path);
  }
}

TEST(Render, Preconditions) {
  try {
    render_locus(2, {}, 0, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
}

TEST(Attractor, TinyLambdaClustersAtFixedPoints) {
  const auto cloud = attractor_points(2, 0.01, 500, 1);
  ASSERT_EQ(cloud.points.size(), 500u);
  const double fixed = 1 / (1 - 0.01);
  for (auto z : cloud.points)
    EXPECT_LE(std::min(std::abs(z - fixed), std::abs(z + fixed)), 0.03);
}

TEST(Attractor, InvariantBall) {
  const auto cloud = attractor_points(4, 0.2, 2000, 9);
  for (auto z : cloud.points) EXPECT_LE(std::abs(z), 1.25 + 1e-12);
}

TEST(Attractor, Deterministic) {
  const auto a = attractor_points(5, Complex(0.3, 0.4), 300, 77);
  const auto b = attractor_points(5, Complex(0.3, 0.4), 300, 77);
  std::ostringstream sa, sb;
  write_csv(a, sa);
  write_csv(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
  const auto c = attractor_points(5, Complex(0.3, 0.4), 300, 78);
  EXPECT_NE(a.points, c.points);
}

TEST(Attractor, DomainError) {
  try {
    attractor_points(3, 1.2, 10, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDomain);
  }
}
