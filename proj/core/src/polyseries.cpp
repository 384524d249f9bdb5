#include "fngon/polyseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fngon/error.hpp"
#include "fngon/parallel.hpp"

namespace fngon {
namespace {

using LComplex = std::complex<long double>;

struct Eval {
  LComplex value;
  LComplex deriv;
};

Eval horner_with_derivative(std::span<const Complex> c, LComplex z) {
  LComplex p = 0, dp = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + LComplex(c[i]);
  }
  return {p, dp};
}

std::string describe(std::span<const Complex> c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ", ";
    s += "(" + std::to_string(c[i].real()) + "," + std::to_string(c[i].imag()) + ")";
  }
  return s + "]";
}

}  // namespace

GPoly::GPoly(std::vector<CycNum> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || !coeffs_.front().is_one()) {
    fail(ErrorKind::kPrecondition, "series must start with the constant term 1");
  }
  const auto m = coeffs_.front().conductor();
  approx_.reserve(coeffs_.size());
  for (const auto& c : coeffs_) {
    if (c.conductor() != m) fail(ErrorKind::kConductorMismatch, "series mixes conductors");
    approx_.push_back(c.to_complex());
  }
}

GPoly GPoly::from_indices(const CoeffSet& g, std::span<const std::size_t> indices) {
  std::vector<CycNum> coeffs;
  coeffs.reserve(indices.size() + 1);
  coeffs.push_back(CycNum::from_int(g.conductor(), 1));
  for (std::size_t idx : indices) {
    if (idx >= g.size()) {
      fail(ErrorKind::kNotAMember, "coefficient index " + std::to_string(idx) +
                                       " outside a set of size " + std::to_string(g.size()));
    }
    coeffs.push_back(g[idx]);
  }
  return GPoly(std::move(coeffs));
}

std::size_t GPoly::degree() const noexcept {
  std::size_t d = coeffs_.size() - 1;
  while (d > 0 && coeffs_[d].is_zero()) --d;
  return d;
}

bool GPoly::in_family(const CoeffSet& g) const { return indices(g).has_value(); }

std::optional<std::vector<std::size_t>> GPoly::indices(const CoeffSet& g) const {
  std::vector<std::size_t> out;
  out.reserve(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    const auto idx = g.index_of(coeffs_[i]);
    if (!idx) return std::nullopt;
    out.push_back(*idx);
  }
  return out;
}

std::size_t val(std::span<const CycNum> f, std::span<const CycNum> g) {
  const std::size_t len = std::max(f.size(), g.size());
  for (std::size_t i = 1; i < len; ++i) {
    const bool f_zero = i >= f.size() || f[i].is_zero();
    const bool g_zero = i >= g.size() || g[i].is_zero();
    if (f_zero && g_zero) continue;
    if (f_zero != g_zero || f[i] != g[i]) return i;
  }
  return kInfiniteVal;
}

GPoly truncate(std::span<const CycNum> f, std::size_t n_terms) {
  if (f.empty()) fail(ErrorKind::kPrecondition, "cannot truncate an empty sequence");
  std::vector<CycNum> out(f.begin(), f.begin() + std::min(f.size(), n_terms));
  while (out.size() < n_terms) out.push_back(CycNum::zero(f.front().conductor()));
  return GPoly(std::move(out));
}

std::vector<CycNum> multiply_binomial(std::span<const CycNum> p, const CycNum& delta,
                                      std::size_t exponent) {
  std::vector<CycNum> out(p.begin(), p.end());
  out.resize(p.size() + exponent, CycNum::zero(delta.conductor()));
  if (delta.is_zero()) return out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i].is_zero()) out[i + exponent] += delta * p[i];
  }
  return out;
}

GPoly geometric_target(std::uint32_t conductor, std::size_t n_terms) {
  if (n_terms < 2) fail(ErrorKind::kPrecondition, "geometric target needs N >= 2");
  return GPoly(std::vector<CycNum>(n_terms, CycNum::from_int(conductor, 1)));
}

double tail_bound(double growth, double rho, std::size_t n_terms) {
  if (!(rho > 0.0) || rho >= 1.0) {
    fail(ErrorKind::kPrecondition, "tail bound needs 0 < rho < 1");
  }
  return 2.0 * growth * std::pow(rho, static_cast<double>(n_terms)) / (1.0 - rho);
}

Complex evaluate(std::span<const Complex> coeffs, Complex z) {
  return Complex(horner_with_derivative(coeffs, LComplex(z)).value);
}

double root_residual(std::span<const Complex> coeffs, Complex z) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == Complex(0)) --deg;
  if (deg == 0) return 0.0;
  if (std::abs(z) <= 1.0) return std::abs(evaluate(coeffs.first(deg), z));
  // p(z) / z^d = sum c_(d-k) w^k with w = 1/z
  const LComplex w = LComplex(1) / LComplex(z);
  LComplex acc = 0;
  for (std::size_t i = 0; i < deg; ++i) acc = acc * w + LComplex(coeffs[i]);
  return static_cast<double>(std::abs(acc));
}

RootSet roots_certified(std::span<const Complex> coeffs, const RootOptions& opts) {
  std::size_t len = coeffs.size();
  while (len > 0 && coeffs[len - 1] == Complex(0)) --len;
  if (len < 2) fail(ErrorKind::kPrecondition, "root finding needs degree >= 1");
  std::span<const Complex> c = coeffs.first(len);

  std::size_t zeros = 0;
  while (c[zeros] == Complex(0)) ++zeros;
  std::span<const Complex> core = c.subspan(zeros);
  const std::size_t d = core.size() - 1;

  std::vector<LComplex> z(d);
  if (d == 1) {
    z[0] = -LComplex(core[0]) / LComplex(core[1]);
  } else if (d > 1) {
    const double radius = std::pow(std::abs(core[0] / core[d]), 1.0 / static_cast<double>(d));
    std::vector<Complex> w(d);
    std::vector<bool> done(d, false);
    for (std::size_t k = 0; k < d; ++k) {
      w[k] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(d) + 0.7);
    }
    std::size_t remaining = d;
    for (std::size_t iter = 0; iter < opts.max_iterations && remaining > 0; ++iter) {
      for (std::size_t k = 0; k < d; ++k) {
        if (done[k]) continue;
        Complex p = core[d], dp = 0;
        for (std::size_t i = d; i-- > 0;) {
          dp = dp * w[k] + p;
          p = p * w[k] + core[i];
        }
        if (p == Complex(0)) {
          done[k] = true;
          --remaining;
          continue;
        }
        const Complex ratio = p / dp;
        Complex sum = 0;
        for (std::size_t j = 0; j < d; ++j)
          if (j != k) sum += 1.0 / (w[k] - w[j]);
        const Complex step = ratio / (1.0 - ratio * sum);
        if (!std::isfinite(std::abs(step))) continue;
        w[k] -= step;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(w[k]))) {
          done[k] = true;
          --remaining;
        }
      }
    }
    for (std::size_t k = 0; k < d; ++k) z[k] = LComplex(w[k]);
    // Newton polish, kept only while it reduces |p|.
    for (auto& root : z) {
      for (int it = 0; it < 2; ++it) {
        const auto [p, dp] = horner_with_derivative(core, root);
        if (dp == LComplex(0)) break;
        const LComplex cand = root - p / dp;
        if (std::abs(horner_with_derivative(core, cand).value) > std::abs(p)) break;
        root = cand;
      }
    }
  }

  std::vector<Complex> roots(zeros, Complex(0));
  for (const auto& r : z) roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  RootSet out;
  out.roots = std::move(roots);
  out.residuals.reserve(out.roots.size());
  for (const auto& r : out.roots) {
    const double res = root_residual(c, r);
    if (!(res <= opts.tol)) {
      fail(ErrorKind::kNumericFailure, "root finder did not certify a root of " + describe(c) +
                                           " (residual " + std::to_string(res) + ")");
    }
    out.residuals.push_back(res);
  }

  // Cluster roots closer than the multiplicity threshold (union-find).
  std::vector<std::size_t> parent(out.roots.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < out.roots.size(); ++i)
    for (std::size_t j = i + 1; j < out.roots.size(); ++j)
      if (std::abs(out.roots[i] - out.roots[j]) < opts.cluster_radius) parent[find(i)] = find(j);
  std::vector<std::size_t> cluster_size(out.roots.size(), 0);
  for (std::size_t i = 0; i < out.roots.size(); ++i) ++cluster_size[find(i)];
  out.multiplicity.resize(out.roots.size());
  for (std::size_t i = 0; i < out.roots.size(); ++i) out.multiplicity[i] = cluster_size[find(i)];
  return out;
}

ZeroSetEnumerator::ZeroSetEnumerator(const CoeffSet& g, std::size_t n_terms, ZeroSetOptions opts)
    : set_(&g), n_terms_(n_terms), opts_(opts), count_(1),
      zero_(g.index_of(CycNum::zero(g.conductor()))) {
  if (n_terms < 2) fail(ErrorKind::kPrecondition, "zero-set enumeration needs N >= 2");
  if (g.size() == 0) fail(ErrorKind::kPrecondition, "empty coefficient set");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 1; i < n_terms; ++i) {
    if (count_ > kMax / g.size()) {
      count_ = kMax;
      break;
    }
    count_ *= g.size();
  }
}

std::vector<std::size_t> ZeroSetEnumerator::digits(std::uint64_t index) const {
  std::vector<std::size_t> out(n_terms_ - 1);
  for (auto& d : out) {
    d = static_cast<std::size_t>(index % set_->size());
    index /= set_->size();
  }
  return out;
}

GPoly ZeroSetEnumerator::polynomial(std::uint64_t index) const {
  const auto idx = digits(index);
  return GPoly::from_indices(*set_, idx);
}

ZeroSetEntry ZeroSetEnumerator::entry(std::uint64_t index) const {
  ZeroSetEntry e;
  e.index = index;
  e.coeff_indices = digits(index);
  std::vector<Complex> approx;
  approx.reserve(n_terms_);
  approx.emplace_back(1.0, 0.0);
  for (std::size_t idx : e.coeff_indices) approx.push_back(set_->approx()[idx]);
  e.degree = e.coeff_indices.size();
  while (e.degree > 0 && zero_ && e.coeff_indices[e.degree - 1] == *zero_) --e.degree;
  if (e.degree > 0) e.roots = roots_certified(std::span<const Complex>(approx).first(e.degree + 1), opts_.roots);
  return e;
}

void ZeroSetEnumerator::for_each(std::uint64_t begin, std::uint64_t end,
                                 const std::function<void(const ZeroSetEntry&)>& fn) const {
  end = std::min(end, count_);
  for (std::uint64_t i = begin; i < end; ++i) fn(entry(i));
}

std::vector<ZeroSetEntry> ZeroSetEnumerator::collect(std::size_t workers) const {
  if (count_ > opts_.budget) {
    fail(ErrorKind::kBudgetExceeded,
         "zero-set enumeration refused: " +
             (count_ == std::numeric_limits<std::uint64_t>::max() ? std::string("more than 2^64")
                                                                   : std::to_string(count_)) +
             " polynomials exceed the budget of " + std::to_string(opts_.budget));
  }
  std::vector<ZeroSetEntry> out(static_cast<std::size_t>(count_));
  parallel_for(out.size(), workers, [&](std::size_t i) { out[i] = entry(i); });
  return out;
}

std::vector<ZeroSetEntry> enumerate_zero_set(const CoeffSet& g, std::size_t n_terms,
                                             const ZeroSetOptions& opts, std::size_t workers) {
  return ZeroSetEnumerator(g, n_terms, opts).collect(workers);
}

}  // namespace fngon
