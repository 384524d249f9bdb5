#include "fngon/coeffsets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "fngon/error.hpp"

namespace fngon {
namespace {

void require_order(int n) {
  if (n < 2) fail(ErrorKind::kInvalidOrder, "polygon order must be >= 2, got " + std::to_string(n));
}

std::uint32_t omega_conductor(int n) { return static_cast<std::uint32_t>(2 * n); }

// xi^start * (1 + xi + ... + xi^(len-1)) with xi = xi_n = xi_2n^2.
CycNum geometric_block(int n, int start, int len) {
  std::vector<std::pair<std::int64_t, std::int64_t>> terms;
  terms.reserve(static_cast<std::size_t>(len));
  for (int t = 0; t < len; ++t) terms.emplace_back(2 * (start + t), 1);
  return CycNum::from_power_sum(omega_conductor(n), terms);
}

// Enumerates the polar families, calling visit(form) for every pair.
template <class Visit>
void for_each_polar(int n, Visit&& visit) {
  visit(PolarForm{0, 0});
  if (n % 2 == 1) {
    const int p = (n - 1) / 2;
    for (int r = 1; r <= p; ++r)
      for (int l = 0; l < 2 * n; ++l) visit(PolarForm{l, r});
    return;
  }
  // n = 4p uses odd r up to 2p - 1; n = 4p + 2 (including n = 2 with p = 0)
  // uses odd r up to 2p + 1. Even r always runs up to 2p.
  const int p = n / 4;
  const int odd_max = (n % 4 == 0) ? 2 * p - 1 : 2 * p + 1;
  for (int r = 2; r <= 2 * p; r += 2)
    for (int l = 0; l < n; ++l) visit(PolarForm{2 * l + 1, r});
  for (int r = 1; r <= odd_max; r += 2)
    for (int l = 0; l < n; ++l) visit(PolarForm{2 * l, r});
}

struct PolarIndex {
  std::unordered_map<CycNum, PolarForm, CycNumHash> forms;
};

const PolarIndex& polar_index(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PolarIndex>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;
  }
  auto idx = std::make_unique<PolarIndex>();
  for_each_polar(n, [&](PolarForm f) {
    if (f.r != 0) idx->forms.emplace(polar_value(n, f), f);
  });
  std::lock_guard lock(mutex);
  return *cache.emplace(n, std::move(idx)).first->second;
}

}  // namespace

CoeffSet CoeffSet::from_elements(std::vector<CycNum> elements,
                                 std::optional<int> order) {
  CoeffSet g;
  g.order_ = order;
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!elements.empty()) {
    g.conductor_ = elements.front().conductor();
    for (const auto& e : elements) {
      if (e.conductor() != g.conductor_) {
        fail(ErrorKind::kConductorMismatch, "coefficient set mixes conductors");
      }
    }
  }
  g.elements_ = std::move(elements);
  g.approx_.reserve(g.elements_.size());
  for (std::size_t i = 0; i < g.elements_.size(); ++i) {
    g.approx_.push_back(g.elements_[i].to_complex());
    g.index_.emplace(g.elements_[i], i);
  }
  for (const auto& a : g.approx_) g.max_modulus_ = std::max(g.max_modulus_, std::abs(a));
  g.flags_ = closure_checks(g);
  g.growth_bound_ = fngon::growth_bound(g);
  return g;
}

std::optional<std::size_t> CoeffSet::index_of(const CycNum& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CoeffSet omega_set(int n) {
  require_order(n);
  std::vector<CycNum> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) {
        out.push_back(CycNum::zero(omega_conductor(n)));
      } else if (j < k) {
        // (xi^j - xi^k)/(1 - xi) = xi^j (1 + ... + xi^(k-j-1))
        out.push_back(geometric_block(n, j, k - j));
      } else {
        out.push_back(-geometric_block(n, k, j - k));
      }
    }
  }
  return CoeffSet::from_elements(std::move(out), n);
}

CycNum sin_ratio(int n, int r) {
  require_order(n);
  if (r == 0) return CycNum::zero(omega_conductor(n));
  if (r < 0) return -sin_ratio(n, -r);
  // zeta^-(r-1) (1 + zeta^2 + ... + zeta^(2(r-1))) with zeta = xi_2n
  std::vector<std::pair<std::int64_t, std::int64_t>> terms;
  for (int t = 0; t < r; ++t) terms.emplace_back(2 * t - (r - 1), 1);
  return CycNum::from_power_sum(omega_conductor(n), terms);
}

CycNum polar_value(int n, PolarForm form) {
  return CycNum::root_of_unity(omega_conductor(n), form.phase) * sin_ratio(n, form.r);
}

CoeffSet omega_polar(int n) {
  require_order(n);
  std::vector<CycNum> out;
  for_each_polar(n, [&](PolarForm f) { out.push_back(polar_value(n, f)); });
  return CoeffSet::from_elements(std::move(out), n);
}

std::optional<PolarForm> polar_decompose(int n, const CycNum& a) {
  require_order(n);
  if (a.conductor() != omega_conductor(n) || a.is_zero()) return std::nullopt;
  const auto& idx = polar_index(n);
  auto it = idx.forms.find(a);
  if (it == idx.forms.end()) return std::nullopt;
  return it->second;
}

double growth_bound(const CoeffSet& g) {
  if (g.size() == 0) fail(ErrorKind::kPrecondition, "growth bound of an empty set");
  // sup|ab| = A^2 and sup|(a-b)c| = D * A, where A is the largest modulus
  // and D the diameter; only the diameter needs a pairwise pass.
  const auto approx = g.approx();
  double a_max = 0, diam = 0;
  for (const auto& a : approx) a_max = std::max(a_max, std::abs(a));
  for (std::size_t i = 0; i < approx.size(); ++i)
    for (std::size_t j = i + 1; j < approx.size(); ++j)
      diam = std::max(diam, std::abs(approx[i] - approx[j]));
  return std::max({a_max, a_max * a_max, diam * a_max}) + 1e-9;
}

ClosureFlags closure_checks(const CoeffSet& g) {
  ClosureFlags f;
  f.negation = true;
  f.conjugation = true;
  for (const auto& e : g.elements()) {
    if (f.negation && !g.contains(-e)) f.negation = false;
    if (f.conjugation && !g.contains(e.conj())) f.conjugation = false;
    if (e.is_one()) f.contains_one = true;
  }
  return f;
}

nlohmann::json integer_json(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

nlohmann::json to_json(const CycNum& x) {
  auto arr = nlohmann::json::array();
  for (const auto& c : x.coeffs()) arr.push_back(integer_json(c));
  return arr;
}

nlohmann::json to_json(const CoeffSet& g) {
  nlohmann::json j;
  j["n"] = g.order() ? nlohmann::json(*g.order()) : nlohmann::json(nullptr);
  j["conductor"] = g.conductor();
  auto elements = nlohmann::json::array();
  auto approx = nlohmann::json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    elements.push_back(to_json(g[i]));
    approx.push_back({g.approx()[i].real(), g.approx()[i].imag()});
  }
  j["elements"] = std::move(elements);
  j["approx"] = std::move(approx);
  j["L"] = g.growth_bound();
  const auto f = g.flags();
  j["flags"] = {{"negation_closed", f.negation},
                {"conjugation_closed", f.conjugation},
                {"contains_one", f.contains_one}};
  return j;
}

}  // namespace fngon
