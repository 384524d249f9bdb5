#include "fngon/join.hpp"

#include <string>
#include <unordered_map>

#include "fngon/error.hpp"

namespace fngon {
namespace {

class Walker {
 public:
  Walker(const StarCertificate& cert, const std::function<bool(const JoinHop&)>& visitor)
      : cert_(cert), g_(cert.set()), visitor_(visitor) {}

  JoinStats run(std::vector<std::size_t> cur, const std::vector<std::size_t>& target) {
    stats_.completed = join(cur, target, 0);
    return stats_;
  }

 private:
  struct StepTable {
    const WitnessMap* map = nullptr;
    std::vector<std::size_t> result;  // index of delta*c + d(delta, c)
  };

  const StepTable& table(std::size_t from, std::size_t to) {
    const auto key = from * g_.size() + to;
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    const CycNum delta = g_[to] - g_[from];
    StepTable t;
    t.map = cert_.step(delta);
    if (t.map == nullptr) fail(ErrorKind::kInternal, "chain step is not admissible: " + delta.str());
    t.result.resize(g_.size());
    for (std::size_t c = 0; c < g_.size(); ++c) {
      const auto idx = g_.index_of(delta * g_[c] + g_[t.map->witness[c]]);
      if (!idx) fail(ErrorKind::kInternal, "witness does not land in the set");
      t.result[c] = *idx;
    }
    return tables_.emplace(key, std::move(t)).first->second;
  }

  static std::size_t first_difference(const std::vector<std::size_t>& x,
                                      const std::vector<std::size_t>& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != y[i]) return i + 1;
    return kInfiniteVal;
  }

  // Joins cur to target; cur ends equal to target on success.
  bool join(std::vector<std::size_t>& cur, const std::vector<std::size_t>& target,
            std::size_t depth) {
    stats_.max_depth = std::max(stats_.max_depth, depth);
    const std::size_t j = first_difference(cur, target);
    if (j == kInfiniteVal) return true;
    const std::size_t last = cur.size();  // N - 1
    const auto chain = cert_.chain(cur[j - 1], target[j - 1]);
    if (!chain) fail(ErrorKind::kInternal, "certificate has no chain between set elements");

    for (std::size_t t = 0; t + 1 < chain->size(); ++t) {
      const StepTable& step = table((*chain)[t], (*chain)[t + 1]);
      std::vector<std::size_t> inter = cur;
      for (std::size_t p = j + 1; p <= last; ++p) inter[p - 1] = step.map->witness[inter[p - j - 1]];
      if (first_difference(cur, inter) <= j) fail(ErrorKind::kInternal, "Val did not increase");
      if (!join(cur, inter, depth + 1)) return false;

      std::vector<std::size_t> next = cur;
      next[j - 1] = (*chain)[t + 1];
      for (std::size_t p = j + 1; p <= last; ++p) next[p - 1] = step.result[cur[p - j - 1]];
      const JoinHop hop{stats_.hops, cur, step.map->step, j, next, depth};
      ++stats_.hops;
      if (!visitor_(hop)) return false;
      cur = std::move(next);
    }
    if (first_difference(cur, target) <= j) fail(ErrorKind::kInternal, "Val did not increase");
    return join(cur, target, depth + 1);
  }

  const StarCertificate& cert_;
  const CoeffSet& g_;
  const std::function<bool(const JoinHop&)>& visitor_;
  std::unordered_map<std::size_t, StepTable> tables_;
  JoinStats stats_;
};

std::vector<std::size_t> member_indices(const GPoly& p, const CoeffSet& g, const char* which) {
  auto idx = p.indices(g);
  if (!idx) fail(ErrorKind::kMembership, std::string(which) + " is not in Q^G_N of the certified set");
  return *idx;
}

}  // namespace

JoinStats walk_join(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                    const StarCertificate& cert,
                    const std::function<bool(const JoinHop&)>& visitor) {
  if (!cert.satisfied()) fail(ErrorKind::kCannotJoin, "coefficient set does not satisfy condition (*)");
  if (a.size() != b.size()) fail(ErrorKind::kPrecondition, "join endpoints differ in length");
  for (std::size_t v : a)
    if (v >= cert.set().size()) fail(ErrorKind::kMembership, "coefficient index out of range");
  for (std::size_t v : b)
    if (v >= cert.set().size()) fail(ErrorKind::kMembership, "coefficient index out of range");
  return Walker(cert, visitor).run(a, b);
}

JoinSequence join_sequence(const GPoly& a, const GPoly& b, const StarCertificate& cert) {
  if (!cert.satisfied()) fail(ErrorKind::kCannotJoin, "coefficient set does not satisfy condition (*)");
  if (a.length() != b.length()) fail(ErrorKind::kPrecondition, "join endpoints differ in length");
  const CoeffSet& g = cert.set();
  const auto ia = member_indices(a, g, "A");
  const auto ib = member_indices(b, g, "B");

  JoinSequence seq{a.length(), a, b, {a}, {}};
  walk_join(ia, ib, cert, [&](const JoinHop& hop) {
    const GPoly& from = seq.polys.back();
    seq.steps.push_back({hop.delta, hop.exponent,
                         multiply_binomial(from.coeffs(), hop.delta, hop.exponent)});
    seq.polys.push_back(GPoly::from_indices(g, hop.to));
    return true;
  });
  return seq;
}

JoinReport verify_join(const JoinSequence& seq, const CoeffSet& g, std::size_t n_terms) {
  JoinReport r;
  const bool shape = !seq.polys.empty() && seq.polys.size() == seq.steps.size() + 1;

  r.members = !seq.polys.empty();
  for (const auto& p : seq.polys) {
    if (p.length() != n_terms || !p[0].is_one()) r.members = false;
    for (std::size_t i = 1; i < p.length() && r.members; ++i)
      if (!g.contains(p[i])) r.members = false;
  }

  const double limit = g.growth_bound() * (1 + 1e-12);
  r.in_ball = true;
  for (const auto& s : seq.steps) {
    if (s.product.empty() || !s.product[0].is_one()) r.in_ball = false;
    for (std::size_t i = 1; i < s.product.size(); ++i)
      if (std::abs(s.product[i].to_complex()) > limit) r.in_ball = false;
  }

  r.products = shape;
  for (std::size_t i = 0; r.products && i < seq.steps.size(); ++i) {
    const auto& s = seq.steps[i];
    const auto& p = seq.polys[i];
    if (s.exponent == 0) {
      r.products = false;
      break;
    }
    const std::uint32_t m = p.conductor();
    std::vector<CycNum> expect(p.length() + s.exponent, CycNum::zero(m));
    for (std::size_t k = 0; k < p.length(); ++k) {
      expect[k] = expect[k] + p[k];
      expect[k + s.exponent] = expect[k + s.exponent] + s.delta * p[k];
    }
    // Trailing zeros are immaterial.
    std::size_t la = expect.size(), lb = s.product.size();
    while (la > 0 && expect[la - 1].is_zero()) --la;
    while (lb > 0 && s.product[lb - 1].is_zero()) --lb;
    if (la != lb) r.products = false;
    for (std::size_t k = 0; r.products && k < la; ++k)
      if (!(expect[k] == s.product[k])) r.products = false;
  }

  r.truncations = shape;
  for (std::size_t i = 0; r.truncations && i < seq.steps.size(); ++i) {
    const auto& q = seq.steps[i].product;
    const auto& next = seq.polys[i + 1];
    for (std::size_t k = 0; k < next.length() && k < n_terms; ++k) {
      const bool same = k < q.size() ? q[k] == next[k] : next[k].is_zero();
      if (!same) r.truncations = false;
    }
  }

  r.endpoints = !seq.polys.empty() && seq.polys.front() == seq.a && seq.polys.back() == seq.b;
  return r;
}

nlohmann::json to_json(const JoinSequence& seq, const CoeffSet& g) {
  auto poly_json = [&](const GPoly& p) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : p.coeffs()) coeffs.push_back(to_json(c));
    nlohmann::json out{{"coefficients", coeffs}};
    if (auto idx = p.indices(g)) out["indices"] = *idx;
    return out;
  };
  nlohmann::json polys = nlohmann::json::array();
  for (const auto& p : seq.polys) polys.push_back(poly_json(p));
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : seq.steps) {
    nlohmann::json product = nlohmann::json::array();
    for (const auto& c : s.product) product.push_back(to_json(c));
    steps.push_back({{"delta", to_json(s.delta)}, {"exponent", s.exponent}, {"product", product}});
  }
  return {{"N", seq.n_terms}, {"m", seq.steps.size()}, {"polys", polys}, {"multipliers", steps}};
}

}  // namespace fngon
