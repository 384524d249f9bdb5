#pragma once

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fngon {

using Integer = mpz_class;
using Complex = std::complex<double>;

/// Per-conductor tables shared by every element of Z[xi_m].
///
/// Built once per conductor and never freed, so raw pointers to a context stay
/// valid for the lifetime of the process.
struct CycContext {
  std::uint32_t conductor = 1;
  std::size_t degree = 1;              // Euler phi(m)
  std::vector<Integer> modulus;        // Phi_m, ascending, monic
  std::vector<std::vector<Integer>> powers;  // x^k mod Phi_m for k in [0, m)
  std::vector<Complex> roots;          // exp(2 pi i k / m) for k in [0, m)
};

/// Returns the cached context for conductor m. Thread-safe.
const CycContext& cyc_context(std::uint32_t m);

/// Coefficients of the m-th cyclotomic polynomial, ascending and monic.
std::vector<Integer> cyclotomic_poly(std::uint32_t m);

/// Exact element of the cyclotomic integer ring Z[xi_m], stored in the power
/// basis 1, xi, ..., xi^(phi(m)-1) and reduced modulo Phi_m, which makes
/// ring equality the same thing as coefficient equality.
class CycNum {
 public:
  /// The zero of Z[xi_1] = Z.
  CycNum();

  static CycNum zero(std::uint32_t m);
  static CycNum from_int(std::uint32_t m, const Integer& value);
  /// xi_m^(j mod m).
  static CycNum root_of_unity(std::uint32_t m, std::int64_t j);
  /// Reduces an arbitrary-length polynomial in xi_m modulo Phi_m.
  static CycNum from_poly(std::uint32_t m, std::span<const Integer> poly);
  /// sum of coeff * xi_m^exponent, exponents taken mod m.
  static CycNum from_power_sum(
      std::uint32_t m,
      std::span<const std::pair<std::int64_t, std::int64_t>> terms);

  std::uint32_t conductor() const noexcept { return ctx_->conductor; }
  std::span<const Integer> coeffs() const noexcept { return coeffs_; }
  const CycContext& context() const noexcept { return *ctx_; }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  CycNum& operator+=(const CycNum& rhs);
  CycNum& operator-=(const CycNum& rhs);
  CycNum& operator*=(const CycNum& rhs);

  friend CycNum operator+(CycNum lhs, const CycNum& rhs) { return lhs += rhs; }
  friend CycNum operator-(CycNum lhs, const CycNum& rhs) { return lhs -= rhs; }
  friend CycNum operator*(const CycNum& lhs, const CycNum& rhs);
  friend CycNum operator*(const Integer& k, CycNum x);
  CycNum operator-() const;

  friend bool operator==(const CycNum& a, const CycNum& b);
  /// Canonical order: conductor first, then lexicographic on coefficients.
  friend std::strong_ordering operator<=>(const CycNum& a, const CycNum& b);

  /// Complex conjugate, i.e. the automorphism xi -> xi^-1.
  CycNum conj() const;
  /// Image under xi_m -> xi_target^(target/m); target must be a multiple of m.
  CycNum embed(std::uint32_t target) const;
  /// gcd of the coefficients (zero for the zero element).
  Integer content() const;
  /// Divides every coefficient by d, which must divide all of them.
  CycNum divexact(const Integer& d) const;

  Complex to_complex() const;
  std::size_t hash() const noexcept;
  /// Debug form `[c0, c1, ...]@m`.
  std::string str() const;

 private:
  CycNum(const CycContext* ctx, std::vector<Integer> coeffs)
      : ctx_(ctx), coeffs_(std::move(coeffs)) {}

  void require_same(const CycNum& other) const;

  const CycContext* ctx_;
  std::vector<Integer> coeffs_;
};

inline CycNum cyc_root_of_unity(std::uint32_t m, std::int64_t j) {
  return CycNum::root_of_unity(m, j);
}
inline CycNum cyc_embed(const CycNum& x, std::uint32_t target) {
  return x.embed(target);
}
inline Complex cyc_to_complex(const CycNum& x) { return x.to_complex(); }

struct CycNumHash {
  std::size_t operator()(const CycNum& x) const noexcept { return x.hash(); }
};

}  // namespace fngon
