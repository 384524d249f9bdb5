#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "fngon/cyclotomic.hpp"

namespace fngon {

struct ClosureFlags {
  bool negation = false;
  bool conjugation = false;
  bool contains_one = false;

  friend bool operator==(const ClosureFlags&, const ClosureFlags&) = default;
};

/// A finite coefficient set G of exact cyclotomic integers.
///
/// Elements are deduplicated by exact equality and kept in canonical
/// (lexicographic) order; every index-based API in the library refers to
/// that order.
class CoeffSet {
 public:
  /// Builds a set from arbitrary elements sharing one conductor. `order` is
  /// the polygon order n when the set is Omega_n; it enables the annulus rule
  /// in the locus module.
  static CoeffSet from_elements(std::vector<CycNum> elements,
                                std::optional<int> order = std::nullopt);

  std::optional<int> order() const noexcept { return order_; }
  std::uint32_t conductor() const noexcept { return conductor_; }
  std::size_t size() const noexcept { return elements_.size(); }

  std::span<const CycNum> elements() const noexcept { return elements_; }
  std::span<const Complex> approx() const noexcept { return approx_; }
  const CycNum& operator[](std::size_t i) const { return elements_[i]; }

  ClosureFlags flags() const noexcept { return flags_; }
  /// sup{|a|, |ab|, |(a-b)c|} plus a 1e-9 safety margin.
  double growth_bound() const noexcept { return growth_bound_; }
  /// max |a| over the set.
  double max_modulus() const noexcept { return max_modulus_; }

  std::optional<std::size_t> index_of(const CycNum& x) const;
  bool contains(const CycNum& x) const { return index_of(x).has_value(); }

 private:
  std::optional<int> order_;
  std::uint32_t conductor_ = 1;
  std::vector<CycNum> elements_;
  std::vector<Complex> approx_;
  std::unordered_map<CycNum, std::size_t, CycNumHash> index_;
  ClosureFlags flags_;
  double growth_bound_ = 0;
  double max_modulus_ = 0;
};

/// Omega_n = {(xi^j - xi^k)/(1 - xi) : 0 <= j, k < n}, realised exactly in
/// Z[xi_2n].
CoeffSet omega_set(int n);

/// Omega_n rebuilt from its polar description: phases xi_2n^l times the sine
/// ratios sin(r pi/n)/sin(pi/n), with the r-ranges depending on n mod 4.
CoeffSet omega_polar(int n);

/// sin(r pi/n)/sin(pi/n) as an element of Z[xi_2n]; r may be negative.
CycNum sin_ratio(int n, int r);

/// xi_2n^phase * sin_ratio(n, r).
struct PolarForm {
  int phase = 0;
  int r = 0;

  friend bool operator==(const PolarForm&, const PolarForm&) = default;
};

CycNum polar_value(int n, PolarForm form);

/// Decomposes a nonzero element of Omega_n as phase * sine ratio with
/// 1 <= r <= n/2 and the phase parity prescribed by the polar families.
/// Returns nullopt when a is zero or not in Omega_n.
std::optional<PolarForm> polar_decompose(int n, const CycNum& a);

double growth_bound(const CoeffSet& g);
ClosureFlags closure_checks(const CoeffSet& g);

/// `{n, conductor, elements, approx, L, flags}`.
nlohmann::json to_json(const CoeffSet& g);
nlohmann::json integer_json(const Integer& v);
nlohmann::json to_json(const CycNum& x);

}  // namespace fngon
