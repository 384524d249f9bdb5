#include "fngon/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "fngon/error.hpp"

namespace fngon {
namespace {

using Poly = std::vector<Integer>;

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Exact division by a monic divisor; the remainder must vanish.
Poly divide_monic(Poly num, const Poly& den) {
  const std::size_t dn = den.size() - 1;
  if (num.size() < den.size()) return Poly{0};
  Poly quot(num.size() - dn, 0);
  for (std::size_t k = num.size(); k-- > dn;) {
    const Integer c = num[k];
    if (c == 0) continue;
    quot[k - dn] = c;
    for (std::size_t i = 0; i <= dn; ++i) num[k - dn + i] -= c * den[i];
  }
  for (std::size_t i = 0; i < dn; ++i) {
    if (num[i] != 0) fail(ErrorKind::kInternal, "inexact cyclotomic division");
  }
  trim(quot);
  return quot;
}

std::mutex& poly_mutex() {
  static std::mutex m;
  return m;
}
std::map<std::uint32_t, Poly>& poly_cache() {
  static std::map<std::uint32_t, Poly> cache;
  return cache;
}

std::mutex& ctx_mutex() {
  static std::mutex m;
  return m;
}
std::unordered_map<std::uint32_t, std::unique_ptr<CycContext>>& ctx_cache() {
  static std::unordered_map<std::uint32_t, std::unique_ptr<CycContext>> cache;
  return cache;
}

// Reduces p in place modulo the monic modulus and resizes to its degree.
void reduce(Poly& p, const Poly& modulus) {
  const std::size_t d = modulus.size() - 1;
  for (std::size_t k = p.size(); k-- > d;) {
    if (p[k] == 0) continue;
    const Integer c = p[k];
    for (std::size_t i = 0; i < d; ++i) p[k - d + i] -= c * modulus[i];
    p[k] = 0;
  }
  p.resize(d, 0);
}

std::unique_ptr<CycContext> build_context(std::uint32_t m) {
  auto ctx = std::make_unique<CycContext>();
  ctx->conductor = m;
  ctx->modulus = cyclotomic_poly(m);
  ctx->degree = ctx->modulus.size() - 1;
  ctx->powers.reserve(m);
  Poly cur(ctx->degree, 0);
  cur[0] = 1;
  for (std::uint32_t k = 0; k < m; ++k) {
    ctx->powers.push_back(cur);
    // cur <- x * cur mod Phi_m
    Poly next(ctx->degree + 1, 0);
    for (std::size_t i = 0; i < ctx->degree; ++i) next[i + 1] = cur[i];
    reduce(next, ctx->modulus);
    cur = std::move(next);
  }
  ctx->roots.resize(m);
  for (std::uint32_t k = 0; k < m; ++k) {
    // Quarter turns are exact so that e.g. xi_4 maps to exactly i.
    if ((4ull * k) % m == 0) {
      static constexpr Complex kQuarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      ctx->roots[k] = kQuarter[(4ull * k / m) % 4];
    } else {
      const double angle = 2.0 * std::numbers::pi * k / m;
      ctx->roots[k] = {std::cos(angle), std::sin(angle)};
    }
  }
  return ctx;
}

const CycContext& context_or_throw(std::uint32_t m) {
  if (m == 0) fail(ErrorKind::kInvalidConductor, "conductor must be >= 1");
  return cyc_context(m);
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

std::vector<Integer> cyclotomic_poly(std::uint32_t m) {
  if (m == 0) fail(ErrorKind::kInvalidConductor, "conductor must be >= 1");
  {
    std::lock_guard lock(poly_mutex());
    auto it = poly_cache().find(m);
    if (it != poly_cache().end()) return it->second;
  }
  // x^m - 1 = prod over d | m of Phi_d
  Poly num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (std::uint32_t d = 1; d < m; ++d) {
    if (m % d == 0) num = divide_monic(std::move(num), cyclotomic_poly(d));
  }
  std::lock_guard lock(poly_mutex());
  return poly_cache().emplace(m, std::move(num)).first->second;
}

const CycContext& cyc_context(std::uint32_t m) {
  if (m == 0) fail(ErrorKind::kInvalidConductor, "conductor must be >= 1");
  thread_local const CycContext* last = nullptr;
  if (last != nullptr && last->conductor == m) return *last;
  {
    std::lock_guard lock(ctx_mutex());
    auto it = ctx_cache().find(m);
    if (it != ctx_cache().end()) return *(last = it->second.get());
  }
  auto built = build_context(m);
  std::lock_guard lock(ctx_mutex());
  auto [it, inserted] = ctx_cache().emplace(m, std::move(built));
  return *(last = it->second.get());
}

CycNum::CycNum() : CycNum(&cyc_context(1), Poly{0}) {}

CycNum CycNum::zero(std::uint32_t m) {
  const auto& ctx = context_or_throw(m);
  return CycNum(&ctx, Poly(ctx.degree, 0));
}

CycNum CycNum::from_int(std::uint32_t m, const Integer& value) {
  CycNum out = zero(m);
  out.coeffs_[0] = value;
  return out;
}

CycNum CycNum::root_of_unity(std::uint32_t m, std::int64_t j) {
  const auto& ctx = context_or_throw(m);
  std::int64_t k = j % static_cast<std::int64_t>(m);
  if (k < 0) k += m;
  return CycNum(&ctx, ctx.powers[static_cast<std::size_t>(k)]);
}

CycNum CycNum::from_poly(std::uint32_t m, std::span<const Integer> poly) {
  const auto& ctx = context_or_throw(m);
  Poly p(poly.begin(), poly.end());
  if (p.size() < ctx.degree) p.resize(ctx.degree, 0);
  reduce(p, ctx.modulus);
  return CycNum(&ctx, std::move(p));
}

CycNum CycNum::from_power_sum(
    std::uint32_t m,
    std::span<const std::pair<std::int64_t, std::int64_t>> terms) {
  const auto& ctx = context_or_throw(m);
  std::vector<std::int64_t> bucket(m, 0);
  for (const auto& [exp, coeff] : terms) {
    std::int64_t k = exp % static_cast<std::int64_t>(m);
    if (k < 0) k += m;
    bucket[static_cast<std::size_t>(k)] += coeff;
  }
  Poly out(ctx.degree, 0);
  for (std::uint32_t k = 0; k < m; ++k) {
    if (bucket[k] == 0) continue;
    const Integer c(static_cast<long>(bucket[k]));
    const auto& row = ctx.powers[k];
    for (std::size_t i = 0; i < ctx.degree; ++i) {
      if (row[i] != 0) out[i] += c * row[i];
    }
  }
  return CycNum(&ctx, std::move(out));
}

bool CycNum::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Integer& c) { return c == 0; });
}

bool CycNum::is_one() const noexcept {
  if (coeffs_[0] != 1) return false;
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(),
                     [](const Integer& c) { return c == 0; });
}

void CycNum::require_same(const CycNum& other) const {
  if (ctx_ != other.ctx_) {
    fail(ErrorKind::kConductorMismatch,
         "conductor mismatch: " + std::to_string(conductor()) + " vs " +
             std::to_string(other.conductor()) + " (lift with embed first)");
  }
}

CycNum& CycNum::operator+=(const CycNum& rhs) {
  require_same(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& rhs) {
  require_same(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

CycNum& CycNum::operator*=(const CycNum& rhs) {
  *this = *this * rhs;
  return *this;
}

CycNum operator*(const CycNum& lhs, const CycNum& rhs) {
  lhs.require_same(rhs);
  const std::size_t d = lhs.ctx_->degree;
  Poly prod(2 * d - 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (lhs.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (rhs.coeffs_[j] != 0) prod[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    }
  }
  reduce(prod, lhs.ctx_->modulus);
  return CycNum(lhs.ctx_, std::move(prod));
}

CycNum operator*(const Integer& k, CycNum x) {
  for (auto& c : x.coeffs_) c *= k;
  return x;
}

CycNum CycNum::operator-() const {
  CycNum out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

bool operator==(const CycNum& a, const CycNum& b) {
  return a.ctx_ == b.ctx_ && a.coeffs_ == b.coeffs_;
}

std::strong_ordering operator<=>(const CycNum& a, const CycNum& b) {
  if (a.conductor() != b.conductor()) return a.conductor() <=> b.conductor();
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    const int c = cmp(a.coeffs_[i], b.coeffs_[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less
                             : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

CycNum CycNum::conj() const {
  const std::uint32_t m = conductor();
  Poly out(ctx_->degree, 0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    const auto& row = ctx_->powers[(m - k % m) % m];
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (row[i] != 0) out[i] += coeffs_[k] * row[i];
    }
  }
  return CycNum(ctx_, std::move(out));
}

CycNum CycNum::embed(std::uint32_t target) const {
  const std::uint32_t m = conductor();
  if (target == 0 || target % m != 0) {
    fail(ErrorKind::kEmbeddingUndefined,
         "cannot embed conductor " + std::to_string(m) + " into " +
             std::to_string(target));
  }
  const auto& tctx = cyc_context(target);
  const std::uint32_t stride = target / m;
  Poly out(tctx.degree, 0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    const auto& row = tctx.powers[(k * stride) % target];
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (row[i] != 0) out[i] += coeffs_[k] * row[i];
    }
  }
  return CycNum(&tctx, std::move(out));
}

Integer CycNum::content() const {
  Integer g = 0;
  for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

CycNum CycNum::divexact(const Integer& d) const {
  CycNum out = *this;
  for (auto& c : out.coeffs_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
  return out;
}

Complex CycNum::to_complex() const {
  // Neumaier summation, separately on each component.
  double re = 0, re_comp = 0, im = 0, im_comp = 0;
  auto accumulate = [](double& sum, double& comp, double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  };
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    const double c = coeffs_[k].get_d();
    const Complex w = ctx_->roots[k];
    accumulate(re, re_comp, c * w.real());
    accumulate(im, im_comp, c * w.imag());
  }
  return {re + re_comp, im + im_comp};
}

std::size_t CycNum::hash() const noexcept {
  std::size_t h = conductor();
  for (const auto& c : coeffs_) {
    const mpz_srcptr z = c.get_mpz_t();
    std::size_t v = static_cast<std::size_t>(z->_mp_size);
    const int limbs = std::abs(z->_mp_size);
    for (int i = 0; i < limbs; ++i) v = mix(v, static_cast<std::size_t>(z->_mp_d[i]));
    h = mix(h, v);
  }
  return h;
}

std::string CycNum::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) os << ", ";
    os << coeffs_[i];
  }
  os << "]@" << conductor();
  return os.str();
}

}  // namespace fngon
