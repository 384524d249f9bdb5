#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fngon/coeffsets.hpp"

namespace fngon {

enum class Verdict : std::uint8_t { kOut = 0, kUnknown = 1, kIn = 2 };

enum class VerdictReason {
  kAnnulusRule,
  kExactCycle,
  kPolynomialRoot,
  kDepthExhaustion,  // Out: every path left |t| <= r* by the recorded depth
  kExactExhaustion,  // Out: the finite exact state graph has no infinite path
  kDepthReached,     // Unknown: a path survived to the search depth
  kBudgetExhausted,  // Unknown
};

struct MembershipVerdict {
  Verdict verdict = Verdict::kUnknown;
  VerdictReason reason = VerdictReason::kDepthReached;
  int depth = 0;
  std::uint64_t expansions = 0;

  std::uint8_t code() const noexcept { return static_cast<std::uint8_t>(verdict); }
};

std::string to_string(Verdict v);
std::string to_string(VerdictReason r);

struct MembershipOptions {
  int depth = 48;
  std::uint64_t budget = 1'000'000;
};

/// True iff 1/sqrt(n) < |lambda| < 1.
bool annulus_certificate(Complex lambda, int n);

/// Decides whether lambda is a zero of some 1 + sum a_i z^i with a_i in g by
/// searching t_0 = 1, t_(k+1) = t_k / lambda + a with |t_k| <= r*.
///
/// Out verdicts come from a floating-point search whose pruning test carries a
/// running rounding-error bound, or from exhausting the exact state graph. In
/// verdicts come from the annulus rule (Omega_n only) or from an exact zero or
/// cycle, searched only when 1/lambda is a Gaussian integer: otherwise 1/lambda
/// is not an algebraic integer and no finite or eventually periodic
/// coefficient sequence can vanish at lambda.
MembershipVerdict membership(Complex lambda, const CoeffSet& g, const MembershipOptions& opts = {});

struct Region {
  double re_min = -1, re_max = 1, im_min = -1, im_max = 1;
};

struct Raster {
  int n = 0;
  Region region;
  int width = 0;
  int height = 0;
  MembershipOptions options;
  std::vector<std::uint8_t> codes;  // row-major, row 0 at im_max

  std::uint8_t at(int x, int y) const { return codes[static_cast<std::size_t>(y) * width + x]; }
  Complex center(int x, int y) const;
};

/// Per-pixel verdicts for M_n at pixel centers. Centers outside 0 < |z| < 1
/// are coded Out.
Raster render_locus(int n, const Region& region, int width, int height,
                    const MembershipOptions& opts = {}, std::size_t workers = 1);

void write_ppm(const Raster& r, const std::filesystem::path& path);
/// False when the library was built without libpng.
bool write_png(const Raster& r, const std::filesystem::path& path);
bool png_available() noexcept;
nlohmann::json to_json(const Raster& r);

struct AttractorCloud {
  int n = 0;
  Complex lambda;
  std::vector<Complex> points;
  std::uint64_t iterations = 0;
  std::uint64_t seed = 0;
};

/// Chaos-game sample of the fractal n-gon attractor with maps lambda z + xi_n^i.
AttractorCloud attractor_points(int n, Complex lambda, std::size_t count, std::uint64_t seed);

void write_csv(const AttractorCloud& cloud, std::ostream& out);

}  // namespace fngon
