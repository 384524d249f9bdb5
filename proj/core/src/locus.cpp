#include "fngon/locus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_map>

#include <gmpxx.h>

#ifdef FNGON_HAVE_PNG
#include <png.h>
#endif

#include "fngon/error.hpp"
#include "fngon/parallel.hpp"

namespace fngon {
namespace {

constexpr double kUnit = 1.2e-16;  // slightly above 2^-53

struct Child {
  Complex t;
  double err;
  double mod;
};

// Floating search without merging. Returns true when every path is pruned.
struct FloatSearch {
  Complex mu;
  double mu_err;
  double r_star;
  std::span<const Complex> coeffs;
  int depth;
  std::uint64_t budget;
  std::uint64_t expansions = 0;
  int deepest = 0;
  bool budget_hit = false;

  void expand(Complex t, double err, std::vector<Child>& out) {
    out.clear();
    const double abs_mu = std::abs(mu);
    const double abs_t = std::abs(t);
    for (const Complex& a : coeffs) {
      const Complex next = t * mu + a;
      const double abs_a = std::abs(a);
      const double e = 1.01 * ((abs_mu + mu_err) * err + (abs_t + err) * mu_err + 2 * kUnit * abs_a +
                               6 * kUnit * (abs_t * abs_mu + abs_a + std::abs(next)));
      const double m = std::abs(next);
      if (m - e > r_star) continue;
      out.push_back({next, e, m});
    }
    std::sort(out.begin(), out.end(), [](const Child& x, const Child& y) { return x.mod < y.mod; });
  }

  // True when all paths die before `depth`.
  bool exhausted() {
    std::vector<std::vector<Child>> levels(static_cast<std::size_t>(depth) + 1);
    std::vector<std::size_t> cursor(levels.size(), 0);
    expand(Complex(1, 0), 0, levels[0]);
    ++expansions;
    int level = 0;
    while (level >= 0) {
      auto& kids = levels[level];
      if (cursor[level] >= kids.size()) {
        cursor[level] = 0;
        --level;
        if (level >= 0) ++cursor[level];
        continue;
      }
      deepest = std::max(deepest, level + 1);
      if (level + 1 >= depth) return false;
      if (++expansions > budget) {
        budget_hit = true;
        return false;
      }
      const Child& c = kids[cursor[level]];
      expand(c.t, c.err, levels[level + 1]);
      ++level;
      cursor[level] = 0;
    }
    return true;
  }
};

std::optional<std::pair<mpz_class, mpz_class>> gaussian_inverse(Complex lambda) {
  const mpq_class x(lambda.real()), y(lambda.imag());
  const mpq_class norm = x * x + y * y;
  const mpq_class re = x / norm, im = -y / norm;
  if (re.get_den() != 1 || im.get_den() != 1) return std::nullopt;
  return std::make_pair(mpz_class(re.get_num()), mpz_class(im.get_num()));
}

enum class Color : std::uint8_t { kGray, kBlack };

// Exact search over states in Z[xi_M] when 1/lambda is a Gaussian integer.
std::optional<MembershipVerdict> exact_search(const CoeffSet& g, const mpz_class& mu_re,
                                              const mpz_class& mu_im, double r_star,
                                              std::uint64_t budget) {
  const std::uint32_t m =
      mu_im == 0 ? g.conductor() : std::lcm(g.conductor(), std::uint32_t{4});
  CycNum mu = CycNum::from_int(m, mu_re);
  if (mu_im != 0) mu += mu_im * CycNum::root_of_unity(m, m / 4);
  std::vector<CycNum> coeffs;
  coeffs.reserve(g.size());
  for (const auto& a : g.elements()) coeffs.push_back(a.embed(m));

  const double limit = r_star * (1 + 1e-9) + 1e-12;
  std::unordered_map<CycNum, Color, CycNumHash> color;
  struct Frame {
    CycNum t;
    std::vector<CycNum> kids;
    std::size_t next = 0;
  };
  auto children = [&](const CycNum& t) {
    std::vector<std::pair<double, CycNum>> kids;
    const CycNum base = t * mu;
    for (const auto& a : coeffs) {
      CycNum c = base + a;
      const double mod = std::abs(c.to_complex());
      if (mod <= limit) kids.emplace_back(mod, std::move(c));
    }
    std::stable_sort(kids.begin(), kids.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<CycNum> out;
    out.reserve(kids.size());
    for (auto& k : kids) out.push_back(std::move(k.second));
    return out;
  };

  MembershipVerdict v;
  std::vector<Frame> stack;
  const CycNum one = CycNum::from_int(m, 1);
  stack.push_back({one, children(one)});
  color.emplace(one, Color::kGray);
  std::uint64_t states = 1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next >= f.kids.size()) {
      color[f.t] = Color::kBlack;
      stack.pop_back();
      continue;
    }
    CycNum c = f.kids[f.next++];
    if (c.is_zero()) {
      v.verdict = Verdict::kIn;
      v.reason = VerdictReason::kPolynomialRoot;
      v.depth = static_cast<int>(stack.size());
      v.expansions = states;
      return v;
    }
    auto it = color.find(c);
    if (it != color.end()) {
      if (it->second == Color::kGray) {
        v.verdict = Verdict::kIn;
        v.reason = VerdictReason::kExactCycle;
        v.depth = static_cast<int>(stack.size());
        v.expansions = states;
        return v;
      }
      continue;
    }
    if (++states > budget) return std::nullopt;
    color.emplace(c, Color::kGray);
    auto kids = children(c);
    stack.push_back({std::move(c), std::move(kids)});
  }
  v.verdict = Verdict::kOut;
  v.reason = VerdictReason::kExactExhaustion;
  v.expansions = states;
  return v;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kOut: return "out";
    case Verdict::kUnknown: return "unknown";
    case Verdict::kIn: return "in";
  }
  return "?";
}

std::string to_string(VerdictReason r) {
  switch (r) {
    case VerdictReason::kAnnulusRule: return "annulus-rule";
    case VerdictReason::kExactCycle: return "exact-cycle";
    case VerdictReason::kPolynomialRoot: return "polynomial-root";
    case VerdictReason::kDepthExhaustion: return "depth-exhaustion";
    case VerdictReason::kExactExhaustion: return "exact-exhaustion";
    case VerdictReason::kDepthReached: return "depth-reached";
    case VerdictReason::kBudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

bool annulus_certificate(Complex lambda, int n) {
  const double r2 = std::norm(lambda);
  return n >= 1 && static_cast<double>(n) * r2 > 1.0 && r2 < 1.0;
}

MembershipVerdict membership(Complex lambda, const CoeffSet& g, const MembershipOptions& opts) {
  const double mod = std::abs(lambda);
  if (!(mod > 0) || !(mod < 1)) fail(ErrorKind::kDomain, "membership needs 0 < |lambda| < 1");
  if (opts.depth < 1) fail(ErrorKind::kPrecondition, "search depth must be positive");

  MembershipVerdict v;
  if (g.order() && annulus_certificate(lambda, *g.order())) {
    v.verdict = Verdict::kIn;
    v.reason = VerdictReason::kAnnulusRule;
    return v;
  }
  const double r_star = g.max_modulus() * mod / (1 - mod) * (1 + 1e-12);
  if (1.0 > r_star) {
    v.verdict = Verdict::kOut;
    v.reason = VerdictReason::kDepthExhaustion;
    return v;
  }

  const Complex mu = 1.0 / lambda;
  FloatSearch search{mu, 4 * kUnit * std::abs(mu), r_star, g.approx(), opts.depth, opts.budget};
  if (search.exhausted()) {
    v.verdict = Verdict::kOut;
    v.reason = VerdictReason::kDepthExhaustion;
    v.depth = search.deepest + 1;
    v.expansions = search.expansions;
    return v;
  }
  v.verdict = Verdict::kUnknown;
  v.reason = search.budget_hit ? VerdictReason::kBudgetExhausted : VerdictReason::kDepthReached;
  v.depth = search.deepest;
  v.expansions = search.expansions;

  if (auto inv = gaussian_inverse(lambda)) {
    if (auto exact = exact_search(g, inv->first, inv->second, r_star, opts.budget)) {
      exact->expansions += v.expansions;
      if (exact->verdict == Verdict::kOut) exact->depth = v.depth;
      return *exact;
    }
  }
  return v;
}

Complex Raster::center(int x, int y) const {
  const double re = region.re_min + (x + 0.5) * (region.re_max - region.re_min) / width;
  const double im = region.im_max - (y + 0.5) * (region.im_max - region.im_min) / height;
  return {re, im};
}

Raster render_locus(int n, const Region& region, int width, int height,
                    const MembershipOptions& opts, std::size_t workers) {
  if (width < 1 || height < 1) fail(ErrorKind::kPrecondition, "raster needs width, height >= 1");
  if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min)) {
    fail(ErrorKind::kPrecondition, "empty render region");
  }
  const CoeffSet g = omega_set(n);
  Raster r{n, region, width, height, opts, {}};
  r.codes.assign(static_cast<std::size_t>(width) * height, 0);
  parallel_for(r.codes.size(), workers, [&](std::size_t i) {
    const int x = static_cast<int>(i % width), y = static_cast<int>(i / width);
    const Complex z = r.center(x, y);
    const double mod = std::abs(z);
    if (!(mod > 0) || !(mod < 1)) return;
    r.codes[i] = membership(z, g, opts).code();
  });
  return r;
}

void write_ppm(const Raster& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kPrecondition, "cannot open " + path.string());
  out << "P6\n" << r.width << ' ' << r.height << "\n255\n";
  static constexpr std::array<unsigned char, 3> kShade{255, 128, 0};
  for (std::uint8_t c : r.codes) {
    const char v = static_cast<char>(kShade[c]);
    out.put(v).put(v).put(v);
  }
}

bool png_available() noexcept {
#ifdef FNGON_HAVE_PNG
  return true;
#else
  return false;
#endif
}

bool write_png(const Raster& r, const std::filesystem::path& path) {
#ifdef FNGON_HAVE_PNG
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(r.width);
  image.height = static_cast<png_uint_32>(r.height);
  image.format = PNG_FORMAT_GRAY;
  static constexpr std::array<png_byte, 3> kShade{255, 128, 0};
  std::vector<png_byte> pixels(r.codes.size());
  std::transform(r.codes.begin(), r.codes.end(), pixels.begin(),
                 [](std::uint8_t c) { return kShade[c]; });
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr)) {
    fail(ErrorKind::kPrecondition, "cannot write " + path.string() + ": " + image.message);
  }
  return true;
#else
  (void)r;
  (void)path;
  return false;
#endif
}

nlohmann::json to_json(const Raster& r) {
  return {{"n", r.n},
          {"region", {r.region.re_min, r.region.re_max, r.region.im_min, r.region.im_max}},
          {"width", r.width},
          {"height", r.height},
          {"depth", r.options.depth},
          {"budget", r.options.budget},
          {"codes", r.codes}};
}

AttractorCloud attractor_points(int n, Complex lambda, std::size_t count, std::uint64_t seed) {
  const double mod = std::abs(lambda);
  if (!(mod > 0) || !(mod < 1)) fail(ErrorKind::kDomain, "attractor needs 0 < |lambda| < 1");
  if (n < 2) fail(ErrorKind::kInvalidOrder, "attractor needs n >= 2");
  if (count < 1) fail(ErrorKind::kPrecondition, "attractor needs at least one point");
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[i] = cyc_to_complex(cyc_root_of_unity(n, i));

  AttractorCloud cloud{n, lambda, {}, 0, seed};
  cloud.points.reserve(count);
  std::mt19937_64 rng(seed);
  Complex z = 0;
  constexpr std::uint64_t kBurnIn = 64;
  for (std::uint64_t k = 0; k < kBurnIn + count; ++k) {
    z = lambda * z + roots[rng() % static_cast<std::uint64_t>(n)];
    if (k >= kBurnIn) cloud.points.push_back(z);
  }
  cloud.iterations = kBurnIn + count;
  return cloud;
}

void write_csv(const AttractorCloud& cloud, std::ostream& out) {
  out.precision(17);
  out << "re,im\n";
  for (const auto& z : cloud.points) out << z.real() << ',' << z.imag() << '\n';
}

}  // namespace fngon
