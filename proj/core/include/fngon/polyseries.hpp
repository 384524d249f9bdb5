#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fngon/coeffsets.hpp"

namespace fngon {

/// Val(f, g) of two equal sequences.
inline constexpr std::size_t kInfiniteVal = std::numeric_limits<std::size_t>::max();

/// A truncated series 1 + a_1 z + ... + a_(N-1) z^(N-1) with exact cyclotomic
/// coefficients and their complex mirrors. Index 0 holds the constant 1.
class GPoly {
 public:
  /// Full coefficient list including the constant term, which must be 1.
  explicit GPoly(std::vector<CycNum> coeffs);

  /// a_1 .. a_(N-1) given as indices into the canonical order of g.
  static GPoly from_indices(const CoeffSet& g, std::span<const std::size_t> indices);

  std::size_t length() const noexcept { return coeffs_.size(); }
  std::uint32_t conductor() const noexcept { return coeffs_.front().conductor(); }
  const CycNum& operator[](std::size_t i) const { return coeffs_[i]; }
  std::span<const CycNum> coeffs() const noexcept { return coeffs_; }
  std::span<const Complex> approx() const noexcept { return approx_; }

  /// Actual degree after dropping trailing zero coefficients.
  std::size_t degree() const noexcept;

  /// True when every a_i (i >= 1) is an exact member of g.
  bool in_family(const CoeffSet& g) const;
  /// Indices of a_1 .. a_(N-1) in g, or nullopt if some a_i is not in g.
  std::optional<std::vector<std::size_t>> indices(const CoeffSet& g) const;

  friend bool operator==(const GPoly& a, const GPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::vector<CycNum> coeffs_;
  std::vector<Complex> approx_;
};

/// Least i >= 1 with f_i != g_i (shorter inputs are zero padded), or
/// kInfiniteVal when the sequences agree.
std::size_t val(std::span<const CycNum> f, std::span<const CycNum> g);
inline std::size_t val(const GPoly& f, const GPoly& g) { return val(f.coeffs(), g.coeffs()); }

/// C_N: the first N coefficients (zero padded when f is shorter).
GPoly truncate(std::span<const CycNum> f, std::size_t n_terms);

/// (1 + delta z^e) * p, coefficient-exact.
std::vector<CycNum> multiply_binomial(std::span<const CycNum> p, const CycNum& delta,
                                      std::size_t exponent);

/// 1 + z + ... + z^(N-1) over conductor m.
GPoly geometric_target(std::uint32_t conductor, std::size_t n_terms);

/// 2 L rho^N / (1 - rho): bound on |f - g| over |z| <= rho when Val(f, g) >= N
/// and both series have coefficients bounded by L.
double tail_bound(double growth, double rho, std::size_t n_terms);

// ---------------------------------------------------------------------------
// Certified roots.

struct RootSet {
  std::vector<Complex> roots;
  /// |p(z)| for |z| <= 1, |p(z)| / |z|^deg for |z| > 1 (the residual of the
  /// reversed polynomial at 1/z).
  std::vector<double> residuals;
  /// Size of the cluster (roots closer than 1e-7) each root belongs to.
  std::vector<std::size_t> multiplicity;

  std::size_t size() const noexcept { return roots.size(); }
};

struct RootOptions {
  double tol = 1e-9;
  std::size_t max_iterations = 1000;
  double cluster_radius = 1e-7;
};

/// All complex roots of sum c_i z^i (ascending) by Aberth-Ehrlich iteration
/// from a perturbed circle, Newton-polished and residual-certified. Throws a
/// numeric-failure error when a root cannot be certified.
RootSet roots_certified(std::span<const Complex> coeffs, const RootOptions& opts = {});
inline RootSet roots_certified(const GPoly& p, const RootOptions& opts = {}) {
  return roots_certified(p.approx(), opts);
}

/// Horner evaluation in extended precision.
Complex evaluate(std::span<const Complex> coeffs, Complex z);
/// Residual in the sense of RootSet::residuals.
double root_residual(std::span<const Complex> coeffs, Complex z);

// ---------------------------------------------------------------------------
// Enumeration of Y^G_N.

struct ZeroSetOptions {
  RootOptions roots;
  std::uint64_t budget = 10'000'000;
};

struct ZeroSetEntry {
  std::uint64_t index = 0;
  std::vector<std::size_t> coeff_indices;  // a_1 .. a_(N-1)
  std::size_t degree = 0;
  RootSet roots;
};

/// Mixed-radix odometer over Q^G_N: polynomial index i has digit
/// (i / |G|^(k-1)) mod |G| as the coefficient index of a_k, so a_1 turns
/// fastest. Random access makes index ranges independently processable.
class ZeroSetEnumerator {
 public:
  ZeroSetEnumerator(const CoeffSet& g, std::size_t n_terms, ZeroSetOptions opts = {});

  /// |G|^(N-1), saturated at uint64 max.
  std::uint64_t count() const noexcept { return count_; }
  std::size_t n_terms() const noexcept { return n_terms_; }

  std::vector<std::size_t> digits(std::uint64_t index) const;
  GPoly polynomial(std::uint64_t index) const;
  ZeroSetEntry entry(std::uint64_t index) const;

  void for_each(std::uint64_t begin, std::uint64_t end,
                const std::function<void(const ZeroSetEntry&)>& fn) const;

  /// Every entry in odometer order; refuses when count() exceeds the budget.
  std::vector<ZeroSetEntry> collect(std::size_t workers = 1) const;

 private:
  const CoeffSet* set_;
  std::size_t n_terms_;
  ZeroSetOptions opts_;
  std::uint64_t count_;
  std::optional<std::size_t> zero_;
};

std::vector<ZeroSetEntry> enumerate_zero_set(const CoeffSet& g, std::size_t n_terms,
                                             const ZeroSetOptions& opts = {},
                                             std::size_t workers = 1);

}  // namespace fngon
